"""Mini-batch SGD training over positive triples and sampled corruptions.

Each epoch shuffles the positives into mini-batches; every positive is
paired with a fixed number of corruptions and the batch takes one plain
SGD step with the stated rate on the summed logistic loss.  Translation
models renormalize every touched entity vector to unit L2 norm after each
update, preventing the loss from collapsing by inflating magnitudes.

Determinism: with threads=1 a run is a pure function of (config, triples)
including the seed, bit-for-bit.  With threads>1 batches are processed
concurrently with unsynchronized updates; negative draws stay identical
(per-batch seed streams) but update interleaving is scheduler-dependent,
so only statistical agreement with the deterministic mode is guaranteed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..backends import get_backend
from ..errors import TrainingError
from ..graph import KnowledgeGraph, Triple
from .models import model_code
from .sampling import corrupt_batch
from .store import MODELS, EmbeddingStore

ProgressSink = Callable[[int, float], None]


@dataclass
class TrainConfig:
    model: str = "transe-l2"
    dim: int = 250
    lr: float = 0.01
    epochs: int = 50
    negatives_per_positive: int = 16
    batch_size: int = 256
    seed: int = 0
    init_scale: float | None = None
    threads: int = 1
    filter_negatives: bool = False

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise TrainingError(f"unknown model {self.model!r}, expected one of {MODELS}")
        if self.dim <= 0:
            raise TrainingError(f"dim must be positive, got {self.dim}")
        if self.lr <= 0:
            raise TrainingError(f"lr must be positive, got {self.lr}")
        if self.epochs < 0:
            raise TrainingError(f"epochs must be >= 0, got {self.epochs}")
        if self.negatives_per_positive <= 0:
            raise TrainingError(
                f"negatives_per_positive must be positive, got {self.negatives_per_positive}"
            )
        if self.batch_size <= 0:
            raise TrainingError(f"batch_size must be positive, got {self.batch_size}")
        if self.init_scale is not None and self.init_scale <= 0:
            raise TrainingError(f"init_scale must be positive, got {self.init_scale}")
        if self.threads <= 0:
            raise TrainingError(f"threads must be positive, got {self.threads}")


def train(
    graph: KnowledgeGraph,
    cfg: TrainConfig,
    train_triples: Sequence[Triple] | None = None,
    progress: ProgressSink | None = None,
    backend=None,
) -> EmbeddingStore:
    """Train embeddings for every entity/relation of ``graph``.

    ``train_triples`` restricts the positives (e.g. to a time slice); the
    store still covers the full vocabulary so held-out entities keep their
    seeded vectors.  Per-epoch mean loss goes to ``progress``; a non-finite
    loss aborts with the epoch, batch, and learning rate in the message.
    """
    be = backend or get_backend()
    triples = graph.triples if train_triples is None else list(train_triples)
    root = np.random.SeedSequence(cfg.seed)
    init_ss, shuffle_ss, batch_ss = root.spawn(3)
    store = EmbeddingStore.initialize(
        cfg.model,
        cfg.dim,
        graph.entity_keys(),
        graph.relation_keys(),
        np.random.default_rng(init_ss),
        cfg.init_scale,
    )
    if cfg.epochs == 0:
        return store
    if not triples:
        raise TrainingError("cannot train on an empty triple set")

    pos = np.array([(t.head, t.relation, t.tail) for t in triples], dtype=np.int64)
    n = pos.shape[0]
    code = model_code(cfg.model)
    is_translation = cfg.model in ("transe-l1", "transe-l2")
    true_set = graph.triple_keys if cfg.filter_negatives else None
    shuffle_rng = np.random.default_rng(shuffle_ss)
    n_batches = math.ceil(n / cfg.batch_size)
    epoch_seeds = batch_ss.spawn(cfg.epochs)

    ent, rel = store.entity_vecs, store.relation_vecs

    def run_batch(rows: np.ndarray, seed: np.random.SeedSequence) -> tuple[float, int]:
        rng = np.random.default_rng(seed)
        h, r, t = pos[rows, 0], pos[rows, 1], pos[rows, 2]
        ch, cr, ct = corrupt_batch(
            rng, h, r, t, store.n_entities, cfg.negatives_per_positive, true_set
        )
        bh = np.ascontiguousarray(np.concatenate([h, ch]))
        br = np.ascontiguousarray(np.concatenate([r, cr]))
        bt = np.ascontiguousarray(np.concatenate([t, ct]))
        y = np.empty(bh.shape[0], dtype=np.float64)
        y[: h.shape[0]] = 1.0
        y[h.shape[0] :] = -1.0
        loss = be.sgd_step(ent, rel, bh, br, bt, y, cfg.lr, code)
        if is_translation:
            touched = np.unique(np.concatenate([bh, bt]))
            be.renorm_rows(ent, touched)
            if __debug__:
                assert np.isfinite(ent[touched]).all(), "non-finite entity rows after step"
        return loss, bh.shape[0]

    for epoch in range(cfg.epochs):
        perm = shuffle_rng.permutation(n)
        batches = [perm[i : i + cfg.batch_size] for i in range(0, n, cfg.batch_size)]
        seeds = epoch_seeds[epoch].spawn(len(batches))
        if cfg.threads == 1:
            results = [run_batch(rows, seed) for rows, seed in zip(batches, seeds)]
        else:
            with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
                results = list(pool.map(run_batch, batches, seeds))
        total = sum(loss for loss, _ in results)
        count = sum(c for _, c in results)
        mean_loss = total / count
        if not math.isfinite(mean_loss):
            bad = next((i for i, (loss, _) in enumerate(results) if not math.isfinite(loss)), -1)
            raise TrainingError(
                f"non-finite loss at epoch {epoch}, batch {bad}, lr {cfg.lr}"
            )
        if progress is not None:
            progress(epoch, mean_loss)
    store.assert_finite()
    return store
