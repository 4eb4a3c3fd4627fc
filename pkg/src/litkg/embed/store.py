"""Dense embedding storage and the TSV checkpoint format.

Complex-valued embeddings of logical dimension d are stored as 2d reals
per row: real halves first, imaginary halves second.  Checkpoints are TSV:
two header comment lines (format version; model, dim and vocabulary sizes),
then one row per vector: ``E<TAB>cui<TAB>v0<TAB>...`` for entities followed
by ``R<TAB>predicate<TAB>...`` for relations, in index order.  Floats are
serialized with repr so a save/load/save cycle is byte-identical.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from ..errors import TrainingError

MODELS = ("transe-l1", "transe-l2", "distmult", "complex")

_FORMAT_LINE = "# litkg-embeddings v1"


def vector_width(model: str, dim: int) -> int:
    return 2 * dim if model == "complex" else dim


@dataclass
class EmbeddingStore:
    """Entity and relation vectors for one trained (or initialized) model."""

    model: str
    dim: int
    entity_keys: list[str]
    relation_keys: list[str]
    entity_vecs: np.ndarray
    relation_vecs: np.ndarray

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise TrainingError(f"unknown model {self.model!r}, expected one of {MODELS}")
        width = vector_width(self.model, self.dim)
        if self.entity_vecs.shape != (len(self.entity_keys), width):
            raise TrainingError(
                f"entity matrix shape {self.entity_vecs.shape} does not match "
                f"{len(self.entity_keys)} keys at width {width}"
            )
        if self.relation_vecs.shape != (len(self.relation_keys), width):
            raise TrainingError(
                f"relation matrix shape {self.relation_vecs.shape} does not match "
                f"{len(self.relation_keys)} keys at width {width}"
            )

    @property
    def n_entities(self) -> int:
        return len(self.entity_keys)

    @property
    def n_relations(self) -> int:
        return len(self.relation_keys)

    @classmethod
    def initialize(
        cls,
        model: str,
        dim: int,
        entity_keys: list[str],
        relation_keys: list[str],
        rng: np.random.Generator,
        init_scale: float | None = None,
    ) -> "EmbeddingStore":
        """Uniform init in [-init_scale, +init_scale]; default scale 6/sqrt(d)."""
        if init_scale is None:
            init_scale = 6.0 / np.sqrt(dim)
        width = vector_width(model, dim)
        ent = rng.uniform(-init_scale, init_scale, size=(len(entity_keys), width))
        rel = rng.uniform(-init_scale, init_scale, size=(len(relation_keys), width))
        return cls(
            model=model,
            dim=dim,
            entity_keys=list(entity_keys),
            relation_keys=list(relation_keys),
            entity_vecs=np.ascontiguousarray(ent),
            relation_vecs=np.ascontiguousarray(rel),
        )

    def assert_finite(self) -> None:
        if not np.isfinite(self.entity_vecs).all() or not np.isfinite(self.relation_vecs).all():
            raise TrainingError("embedding store contains non-finite values")

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_FORMAT_LINE + "\n")
            fh.write(
                f"# model={self.model} dim={self.dim} "
                f"entities={self.n_entities} relations={self.n_relations}\n"
            )
            for key, row in zip(self.entity_keys, self.entity_vecs):
                fh.write("E\t" + key + "\t" + "\t".join(repr(v) for v in row.tolist()) + "\n")
            for key, row in zip(self.relation_keys, self.relation_vecs):
                fh.write("R\t" + key + "\t" + "\t".join(repr(v) for v in row.tolist()) + "\n")

    @classmethod
    def load(cls, path) -> "EmbeddingStore":
        with open(path, "r", encoding="utf-8") as fh:
            if fh.readline().rstrip("\r\n") != _FORMAT_LINE:
                raise TrainingError(f"{path}: not a litkg embedding checkpoint")
            meta = dict(
                item.split("=", 1)
                for item in fh.readline().rstrip("\r\n").lstrip("# ").split()
            )
            model, dim = meta["model"], int(meta["dim"])
            n_ent, n_rel = int(meta["entities"]), int(meta["relations"])
            width = vector_width(model, dim)
            entity_keys: list[str] = []
            relation_keys: list[str] = []
            ent = np.empty((n_ent, width), dtype=np.float64)
            rel = np.empty((n_rel, width), dtype=np.float64)
            for lineno, raw in enumerate(fh, start=3):
                parts = raw.rstrip("\r\n").split("\t")
                if len(parts) != width + 2:
                    raise TrainingError(f"{path}: line {lineno}: bad vector width")
                kind, key, values = parts[0], parts[1], parts[2:]
                if kind == "E":
                    ent[len(entity_keys)] = [float(v) for v in values]
                    entity_keys.append(key)
                elif kind == "R":
                    rel[len(relation_keys)] = [float(v) for v in values]
                    relation_keys.append(key)
                else:
                    raise TrainingError(f"{path}: line {lineno}: unknown row kind {kind!r}")
        if len(entity_keys) != n_ent or len(relation_keys) != n_rel:
            raise TrainingError(f"{path}: row counts do not match the header")
        return cls(model, dim, entity_keys, relation_keys, ent, rel)


def checkpoint_digest(path) -> str:
    """sha256 of a checkpoint file, recorded in prediction output headers."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
