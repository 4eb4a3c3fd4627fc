"""Candidate enumeration and ranked-table output for repurposing queries.

Scores every (candidate, relation, target) combination against a frozen
embedding store and reports the best by score.  Known triples (present in
the training graph) are flagged rather than dropped, since both novel and
already-reported pairs are informative in review.
"""

from __future__ import annotations

from dataclasses import dataclass

from .backends import get_backend
from .embed.models import model_code
from .embed.store import EmbeddingStore
from .errors import PredictError
from .graph import EntityId, KnowledgeGraph, RelationId
from .ingest import CandidateSet, Whitelist

RELATION_PRESETS = {
    "drug": ("TREATS", "PREVENTS"),
    "chemical": ("TREATS", "PREVENTS"),
    "supplement": ("AFFECTS",),
}


def relation_presets(category: str) -> list[str]:
    """Default relation list per candidate category."""
    try:
        return list(RELATION_PRESETS[category])
    except KeyError:
        valid = ", ".join(sorted(RELATION_PRESETS))
        raise PredictError(f"unknown category {category!r}; valid categories: {valid}") from None


@dataclass(frozen=True)
class PredictionQuery:
    """One enumeration request: candidate pool x relations x targets."""

    candidates: CandidateSet
    relations: tuple[str, ...]
    targets: frozenset[str]
    top_n: int

    def __post_init__(self) -> None:
        if not self.candidates.cuis:
            raise PredictError("empty candidate set")
        if not self.relations:
            raise PredictError("empty relation list")
        if not self.targets:
            raise PredictError("empty target set")
        if self.top_n <= 0:
            raise PredictError(f"top_n must be positive, got {self.top_n}")

    @classmethod
    def from_parts(
        cls,
        candidates: CandidateSet,
        relations,
        targets: Whitelist | frozenset | set,
        top_n: int,
    ) -> "PredictionQuery":
        target_cuis = (
            targets.protected_cuis if isinstance(targets, Whitelist) else frozenset(targets)
        )
        return cls(
            candidates=candidates,
            relations=tuple(relations),
            targets=target_cuis,
            top_n=top_n,
        )


@dataclass(frozen=True)
class RankedCandidate:
    head: EntityId
    relation: RelationId
    tail: EntityId
    score: float
    novel: bool


@dataclass
class PredictionResult:
    """Ranked candidates plus the CUIs that did not resolve in the graph."""

    ranked: list[RankedCandidate]
    skipped_candidates: list[str]
    skipped_targets: list[str]
    skipped_relations: list[str]


def enumerate_and_rank(
    store: EmbeddingStore,
    graph: KnowledgeGraph,
    query: PredictionQuery,
    novel_only: bool = False,
    backend=None,
) -> PredictionResult:
    """Score every candidate/relation/target triple and keep the top_n.

    Candidates, targets, or relations absent from the graph dictionary are
    skipped and reported.  Output is sorted by score descending with ties
    broken by (head cui, predicate, tail cui) ascending, so the ranking is
    total and reproducible for a frozen store.
    """
    be = backend or get_backend()
    cand_idx = _resolve(graph.entity_index, sorted(query.candidates.cuis))
    target_idx = _resolve(graph.entity_index, sorted(query.targets))
    rel_idx = _resolve(graph.relation_index, query.relations)
    if not cand_idx.resolved:
        raise PredictError(
            f"none of the {len(query.candidates.cuis)} candidate CUIs are in the graph"
        )
    if not target_idx.resolved:
        raise PredictError("none of the target CUIs are in the graph")
    if not rel_idx.resolved:
        raise PredictError(f"none of the relations {query.relations} are in the graph")

    code = model_code(store.model)
    rows: list[tuple[float, str, str, str, int, int, int]] = []
    for r in rel_idx.resolved:
        for t in target_idx.resolved:
            scores = be.score_heads(store.entity_vecs, store.relation_vecs, r, t, code)
            for h in cand_idx.resolved:
                rows.append(
                    (
                        float(scores[h]),
                        graph.entities[h].cui,
                        graph.relations[r].predicate,
                        graph.entities[t].cui,
                        h,
                        r,
                        t,
                    )
                )
    rows.sort(key=lambda row: (-row[0], row[1], row[2], row[3]))

    ranked: list[RankedCandidate] = []
    for score_value, _, _, _, h, r, t in rows:
        novel = not graph.has_triple(h, r, t)
        if novel_only and not novel:
            continue
        ranked.append(
            RankedCandidate(
                head=graph.entities[h],
                relation=graph.relations[r],
                tail=graph.entities[t],
                score=score_value,
                novel=novel,
            )
        )
        if len(ranked) == query.top_n:
            break
    return PredictionResult(
        ranked=ranked,
        skipped_candidates=cand_idx.skipped,
        skipped_targets=target_idx.skipped,
        skipped_relations=rel_idx.skipped,
    )


@dataclass
class _Resolution:
    resolved: list[int]
    skipped: list[str]


def _resolve(index: dict[str, int], keys) -> _Resolution:
    resolved, skipped = [], []
    for key in keys:
        idx = index.get(key)
        if idx is None:
            skipped.append(key)
        else:
            resolved.append(idx)
    return _Resolution(resolved, skipped)


def write_predictions(path, result: PredictionResult, model: str, checkpoint: str) -> None:
    """Ranked-candidate TSV with a metadata comment line, then a header row."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# model={model} checkpoint=sha256:{checkpoint}\n")
        fh.write("rank\thead_cui\thead_name\tpredicate\ttail_cui\ttail_name\tscore\tnovel\n")
        for rank, row in enumerate(result.ranked, start=1):
            fh.write(
                f"{rank}\t{row.head.cui}\t{row.head.name}\t{row.relation.predicate}"
                f"\t{row.tail.cui}\t{row.tail.name}\t{row.score:.6f}"
                f"\t{'true' if row.novel else 'false'}\n"
            )


def read_predictions(path) -> list[dict]:
    """Parse a write_predictions file back into row dicts (round-trip check)."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("# model="):
            raise PredictError(f"{path}: missing metadata line")
        header = fh.readline().rstrip("\r\n").split("\t")
        expected = ["rank", "head_cui", "head_name", "predicate", "tail_cui", "tail_name", "score", "novel"]
        if header != expected:
            raise PredictError(f"{path}: unexpected header {header}")
        for raw in fh:
            parts = raw.rstrip("\r\n").split("\t")
            if len(parts) != len(expected):
                raise PredictError(f"{path}: bad row width")
            rows.append(
                {
                    "rank": int(parts[0]),
                    "head_cui": parts[1],
                    "head_name": parts[2],
                    "predicate": parts[3],
                    "tail_cui": parts[4],
                    "tail_name": parts[5],
                    "score": float(parts[6]),
                    "novel": parts[7] == "true",
                }
            )
    return rows
