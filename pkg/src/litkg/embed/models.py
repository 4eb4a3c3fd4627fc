"""Scoring-function dispatch over the kernel backends.

Three model families: translation (negative L1 or L2 distance of h+r-t),
diagonal bilinear (sum of h*r*t), and complex bilinear (real part of
h*r*conj(t)), all scored so that higher means more plausible.
"""

from __future__ import annotations

import numpy as np

from ..backends import get_backend
from .store import MODELS, EmbeddingStore

MODEL_CODES = {"transe-l1": 0, "transe-l2": 1, "distmult": 2, "complex": 3}


def model_code(model: str) -> int:
    try:
        return MODEL_CODES[model]
    except KeyError:
        raise ValueError(f"unknown model {model!r}, expected one of {MODELS}") from None


def _as_index(values) -> np.ndarray:
    return np.ascontiguousarray(np.atleast_1d(values), dtype=np.int64)


def score(store: EmbeddingStore, h: int, r: int, t: int, backend=None) -> float:
    """Plausibility of one (h, r, t) index triple; higher is better."""
    be = backend or get_backend()
    values = be.score_batch(
        store.entity_vecs,
        store.relation_vecs,
        _as_index(h),
        _as_index(r),
        _as_index(t),
        model_code(store.model),
    )
    return float(values[0])


def score_batch(store: EmbeddingStore, h, r, t, backend=None) -> np.ndarray:
    """Vectorized plausibility over aligned index arrays."""
    be = backend or get_backend()
    return be.score_batch(
        store.entity_vecs,
        store.relation_vecs,
        _as_index(h),
        _as_index(r),
        _as_index(t),
        model_code(store.model),
    )


def score_all_tails(store: EmbeddingStore, h: int, r: int, backend=None) -> np.ndarray:
    """Scores of (h, r, e) for every entity e in the store."""
    be = backend or get_backend()
    return be.score_tails(
        store.entity_vecs, store.relation_vecs, int(h), int(r), model_code(store.model)
    )


def score_all_heads(store: EmbeddingStore, r: int, t: int, backend=None) -> np.ndarray:
    """Scores of (e, r, t) for every entity e in the store."""
    be = backend or get_backend()
    return be.score_heads(
        store.entity_vecs, store.relation_vecs, int(r), int(t), model_code(store.model)
    )


def loss_and_grad(store: EmbeddingStore, h, r, t, y, backend=None):
    """Summed logistic loss over labeled examples plus exact gradient rows.

    ``y`` holds +1/-1 labels.  The loss of one example is
    log(1 + exp(-y * f(h, r, t))), computed in softplus form so large
    magnitudes neither overflow nor lose the linear asymptote.  Returns
    (loss, gh, gr, gt): per-example gradient rows with respect to the head,
    relation, and tail vectors used by each example.
    """
    be = backend or get_backend()
    return be.loss_and_grad(
        store.entity_vecs,
        store.relation_vecs,
        _as_index(h),
        _as_index(r),
        _as_index(t),
        np.ascontiguousarray(np.atleast_1d(y), dtype=np.float64),
        model_code(store.model),
    )
