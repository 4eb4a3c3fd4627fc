import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "litkg.backends._ckernels",
        sources=["src/litkg/backends/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

# Without Cython the package still installs; litkg.backends falls back to the
# numpy implementation at import time.
setup(ext_modules=cythonize(extensions) if cythonize is not None else [])
