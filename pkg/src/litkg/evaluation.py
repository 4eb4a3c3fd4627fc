"""Time-sliced splitting and link-prediction ranking metrics.

The split is by publication date with half-open intervals: triples dated
before the train cutoff train the model, triples in [train_cutoff,
test_cutoff) validate it, and triples on or after the test cutoff test it.
Every test triple generates two queries (head replaced, tail replaced) and
the report averages over both.  Ranks use the average-tie rule: one plus
the number of strictly better candidates plus half the number of equal
scorers, so reports are stable under score ties.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .backends import get_backend
from .embed.models import model_code
from .embed.store import EmbeddingStore
from .errors import EvalError
from .graph import KnowledgeGraph, Triple


@dataclass
class TimeSplit:
    """Disjoint train/valid/test triple sets split by date cutoffs."""

    train_cutoff: dt.date
    test_cutoff: dt.date
    train: list[Triple]
    valid: list[Triple]
    test: list[Triple]
    n_cold_start: int

    @property
    def known_keys(self) -> frozenset[tuple[int, int, int]]:
        if not hasattr(self, "_known"):
            self._known = frozenset(
                t.key() for part in (self.train, self.valid, self.test) for t in part
            )
        return self._known


def time_split(
    graph: KnowledgeGraph, train_cutoff: dt.date, test_cutoff: dt.date
) -> TimeSplit:
    """Partition the graph's triples by earliest date.

    Cold-start entities (present only in valid/test) are counted but their
    triples stay in place; they rank with their seeded embeddings.
    """
    if train_cutoff >= test_cutoff:
        raise EvalError(
            f"train cutoff {train_cutoff} must precede test cutoff {test_cutoff}"
        )
    train: list[Triple] = []
    valid: list[Triple] = []
    test: list[Triple] = []
    for t in graph.triples:
        if t.earliest_date < train_cutoff:
            train.append(t)
        elif t.earliest_date < test_cutoff:
            valid.append(t)
        else:
            test.append(t)
    if not train:
        raise EvalError(f"no triples dated before {train_cutoff}: empty training set")
    seen = set()
    for t in train:
        seen.add(t.head)
        seen.add(t.tail)
    cold = set()
    for t in valid + test:
        for e in (t.head, t.tail):
            if e not in seen:
                cold.add(e)
    return TimeSplit(train_cutoff, test_cutoff, train, valid, test, len(cold))


def rank_query(
    store: EmbeddingStore,
    triple: tuple[int, int, int],
    replace: str,
    mode: str = "raw",
    known: frozenset | set | None = None,
    candidates: Sequence[int] | None = None,
    backend=None,
) -> float:
    """Rank of the true entity among all candidate replacements.

    ``replace`` is "head" or "tail".  Filtered mode drops candidates that
    form a known true triple other than the query's own answer; ``known``
    must then hold the (h, r, t) key set to filter against.  The true
    entity always stays in the pool.
    """
    be = backend or get_backend()
    h, r, t = triple
    code = model_code(store.model)
    if replace == "tail":
        scores = be.score_tails(store.entity_vecs, store.relation_vecs, h, r, code)
        true_idx = t
    elif replace == "head":
        scores = be.score_heads(store.entity_vecs, store.relation_vecs, r, t, code)
        true_idx = h
    else:
        raise EvalError(f"replace must be 'head' or 'tail', got {replace!r}")

    if candidates is None:
        pool = np.arange(store.n_entities)
    else:
        pool = np.asarray(candidates, dtype=np.int64)
    if mode == "filtered":
        if known is None:
            raise EvalError("filtered mode needs the known-true triple keys")
        if replace == "tail":
            drop = {e for e in pool.tolist() if e != true_idx and (h, r, e) in known}
        else:
            drop = {e for e in pool.tolist() if e != true_idx and (e, r, t) in known}
        if drop:
            pool = np.array([e for e in pool.tolist() if e not in drop], dtype=np.int64)
    elif mode != "raw":
        raise EvalError(f"mode must be 'raw' or 'filtered', got {mode!r}")

    pool_scores = scores[pool]
    true_score = scores[true_idx]
    higher = int((pool_scores > true_score).sum())
    ties = int((pool_scores == true_score).sum()) - 1
    return 1.0 + higher + 0.5 * ties


@dataclass
class RankingReport:
    """Aggregate link-prediction quality over a set of ranked queries."""

    model: str
    mode: str
    mr: float
    mrr: float
    hits1: float
    hits3: float
    hits10: float
    n_queries: int
    n_cold_start: int

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "mode": self.mode,
            "mr": self.mr,
            "mrr": self.mrr,
            "hits1": self.hits1,
            "hits3": self.hits3,
            "hits10": self.hits10,
            "n_queries": self.n_queries,
            "n_cold_start": self.n_cold_start,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def table(self) -> str:
        header = f"{'model':<12} {'mode':<8} {'MR':>9} {'MRR':>7} {'H@1':>6} {'H@3':>6} {'H@10':>6}"
        row = (
            f"{self.model:<12} {self.mode:<8} {self.mr:>9.2f} {self.mrr:>7.4f} "
            f"{self.hits1:>6.3f} {self.hits3:>6.3f} {self.hits10:>6.3f}"
        )
        return header + "\n" + row


def metrics(
    ranks: Iterable[float],
    model: str = "",
    mode: str = "raw",
    n_cold_start: int = 0,
) -> RankingReport:
    """MR, MRR, and Hits@{1,3,10} over a rank list."""
    values = np.asarray(list(ranks), dtype=np.float64)
    if values.size == 0:
        raise EvalError("cannot compute metrics over an empty rank list")
    if (values < 1.0).any():
        raise EvalError("ranks must be >= 1")
    return RankingReport(
        model=model,
        mode=mode,
        mr=float(values.mean()),
        mrr=float((1.0 / values).mean()),
        hits1=float((values <= 1).mean()),
        hits3=float((values <= 3).mean()),
        hits10=float((values <= 10).mean()),
        n_queries=int(values.size),
        n_cold_start=n_cold_start,
    )


def evaluate(
    store: EmbeddingStore,
    split: TimeSplit,
    mode: str = "raw",
    backend=None,
) -> RankingReport:
    """Rank both replacement queries for every test triple and aggregate."""
    if not split.test:
        raise EvalError("empty test set: nothing to evaluate")
    known = split.known_keys if mode == "filtered" else None
    ranks: list[float] = []
    for t in split.test:
        key = t.key()
        for replace in ("head", "tail"):
            ranks.append(
                rank_query(store, key, replace, mode=mode, known=known, backend=backend)
            )
    return metrics(ranks, model=store.model, mode=mode, n_cold_start=split.n_cold_start)
