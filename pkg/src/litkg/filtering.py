"""Preprocessing stage: semantic-type exclusion, association scoring, cutoffs.

Triples are scored on three signals: in-degree of the tail, out-degree of
the head (both over the deduplicated graph), and the log-likelihood-ratio
association between head and tail counted over raw predication instances.
Pair co-occurrence deliberately counts instances rather than deduplicated
edges: association strength is a corpus-frequency notion and deduplication
would erase the evidence signal.  Each raw score vector is min-max
normalized to [0, 1] over all triples and the three are summed into a fused
score in [0, 3].  Every stage here is deterministic: identical inputs give
bit-identical retained sets.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .errors import FilterError
from .graph import KnowledgeGraph, Predication, Triple, degree_centrality
from .ingest import ScoreTable, SemTypeRuleSet, Whitelist


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 observed counts for a subject-object pair against the rest.

    o11 counts co-occurrences of the pair, o12/o21 the margins (subject with
    other objects, object with other subjects), o22 the remainder.  Cells
    are exact integers; expected cells are derived from the marginal
    products, never stored.
    """

    o11: int
    o12: int
    o21: int
    o22: int

    @property
    def n(self) -> int:
        return self.o11 + self.o12 + self.o21 + self.o22


def g2(table: ContingencyTable) -> float:
    """Log-likelihood ratio 2 * sum O * ln(O / E) over the 2x2 table.

    Expected cells are row-marginal * column-marginal / n.  Zero observed
    cells contribute zero.  Each term is O * log1p((O*n - row*col) /
    (row*col)) with the numerator formed in exact integer arithmetic, so
    exact independence returns exactly 0.0 and near-independence keeps full
    precision instead of cancelling two large logarithms.
    """
    cells = (table.o11, table.o12, table.o21, table.o22)
    if any(c < 0 for c in cells):
        raise FilterError(f"negative contingency cell in {cells}")
    n = table.n
    if n == 0:
        raise FilterError("all-zero contingency table: statistic undefined")
    row1 = table.o11 + table.o12
    row2 = table.o21 + table.o22
    col1 = table.o11 + table.o21
    col2 = table.o12 + table.o22
    margins = ((row1, col1), (row1, col2), (row2, col1), (row2, col2))
    total = 0.0
    for o, (row, col) in zip(cells, margins):
        if o == 0:
            continue
        rc = row * col
        total += o * math.log1p((o * n - rc) / rc)
    return 2.0 * total


@dataclass
class PairCounts:
    """Subject/object co-occurrence counts over raw predication instances."""

    n: int
    subject_counts: Counter
    object_counts: Counter
    pair_counts: Counter

    @classmethod
    def from_predications(cls, predications: Iterable[Predication]) -> "PairCounts":
        subject_counts: Counter = Counter()
        object_counts: Counter = Counter()
        pair_counts: Counter = Counter()
        n = 0
        for p in predications:
            n += 1
            subject_counts[p.subject.cui] += 1
            object_counts[p.object.cui] += 1
            pair_counts[(p.subject.cui, p.object.cui)] += 1
        return cls(n, subject_counts, object_counts, pair_counts)

    def table(self, subject_cui: str, object_cui: str) -> ContingencyTable:
        o11 = self.pair_counts.get((subject_cui, object_cui), 0)
        o12 = self.subject_counts.get(subject_cui, 0) - o11
        o21 = self.object_counts.get(object_cui, 0) - o11
        o22 = self.n - o11 - o12 - o21
        return ContingencyTable(o11, o12, o21, o22)


@dataclass(frozen=True)
class TripleScore:
    """Normalized degree/association scores for one triple."""

    a_in_norm: float
    a_out_norm: float
    g2_norm: float

    @property
    def fused(self) -> float:
        return self.a_in_norm + self.a_out_norm + self.g2_norm


def exclude_semtypes(
    predications: Iterable[Predication], rules: SemTypeRuleSet
) -> list[Predication]:
    """Keep predications where neither endpoint has an excluded semantic type."""
    excluded = rules.excluded_types
    return [
        p
        for p in predications
        if p.subject.semtype not in excluded and p.object.semtype not in excluded
    ]


def score_triples(g: KnowledgeGraph, pairs: PairCounts) -> list[TripleScore]:
    """Score every triple of ``g``; the result is aligned with ``g.triples``.

    Raw scores are the tail in-degree, the head out-degree, and the
    pair-association statistic of (head, tail) from ``pairs``.  Each vector
    is min-max normalized over all triples; a constant vector (including the
    single-triple case) normalizes to all zeros since it carries no
    discriminative signal.
    """
    if not g.triples:
        return []
    a_in, a_out = degree_centrality(g)
    raw_in = np.array([a_in[t.tail] for t in g.triples], dtype=np.float64)
    raw_out = np.array([a_out[t.head] for t in g.triples], dtype=np.float64)

    pair_g2: dict[tuple[str, str], float] = {}
    raw_g2 = np.empty(len(g.triples), dtype=np.float64)
    for i, t in enumerate(g.triples):
        key = (g.entities[t.head].cui, g.entities[t.tail].cui)
        value = pair_g2.get(key)
        if value is None:
            value = g2(pairs.table(*key))
            pair_g2[key] = value
        raw_g2[i] = value

    norm_in = _minmax(raw_in)
    norm_out = _minmax(raw_out)
    norm_g2 = _minmax(raw_g2)
    return [
        TripleScore(float(norm_in[i]), float(norm_out[i]), float(norm_g2[i]))
        for i in range(len(g.triples))
    ]


def _minmax(values: np.ndarray) -> np.ndarray:
    lo = values.min()
    span = values.max() - lo
    if span == 0.0:
        return np.zeros_like(values)
    return (values - lo) / span


def apply_cutoff(
    g: KnowledgeGraph,
    scores: list[TripleScore],
    whitelist: Whitelist,
    k: int,
) -> list[Triple]:
    """Retain min(k, total) triples: all whitelist-touching ones, then best fused.

    A triple touches the whitelist when its head or tail CUI is protected;
    those never compete on score.  The remaining slots go to the highest
    fused scores with ties broken by (fused desc, head idx, relation idx,
    tail idx).  Retained triples are returned in their original graph order.
    """
    if len(scores) != len(g.triples):
        raise FilterError("scores are not aligned with the graph's triples")
    protected_cuis = whitelist.protected_cuis
    protected: list[int] = []
    rest: list[int] = []
    for i, t in enumerate(g.triples):
        if (
            g.entities[t.head].cui in protected_cuis
            or g.entities[t.tail].cui in protected_cuis
        ):
            protected.append(i)
        else:
            rest.append(i)

    if k < len(protected):
        raise FilterError(
            f"cutoff k={k} is below the whitelist-protected triple count {len(protected)}"
        )
    budget = min(k, len(g.triples)) - len(protected)
    rest.sort(
        key=lambda i: (
            -scores[i].fused,
            g.triples[i].head,
            g.triples[i].relation,
            g.triples[i].tail,
        )
    )
    keep = set(protected)
    keep.update(rest[:budget])
    return [t for i, t in enumerate(g.triples) if i in keep]


def apply_confidence(
    predications: Iterable[Predication],
    table: ScoreTable,
    threshold: float = 0.5,
    strict: bool = False,
) -> list[Predication]:
    """Drop predications whose confidence score falls below ``threshold``.

    Predications without a score entry are kept (fail-open) so the pipeline
    runs with no classifier output at all; strict mode inverts that and
    drops unscored predications too.
    """
    if not 0.0 <= threshold <= 1.0:
        raise FilterError(f"confidence threshold {threshold!r} outside [0, 1]")
    kept = []
    for p in predications:
        score = table.get((p.subject.cui, p.predicate.predicate, p.object.cui, p.pmid))
        if score is None:
            if not strict:
                kept.append(p)
        elif score >= threshold:
            kept.append(p)
    return kept
