"""Core domain types and the deduplicated knowledge graph.

A graph is built from a stream of literature-extracted predications.
Predications sharing the same (subject, predicate, object) collapse into a
single triple that keeps the earliest publication date, so a triple belongs
to the earliest time slice in which it was reported.  Entity and relation
indices are dense integers assigned in first-seen order, which makes graph
construction reproducible for a fixed input order.
"""

from __future__ import annotations

import datetime as dt
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

import numpy as np

from .errors import GraphError


@dataclass(frozen=True)
class EntityId:
    """A UMLS-style concept: unique identifier plus display metadata."""

    cui: str
    name: str = ""
    semtype: str = ""

    def __post_init__(self) -> None:
        if not self.cui:
            raise GraphError("entity cui must be non-empty")


@dataclass(frozen=True)
class RelationId:
    """A predicate such as TREATS, PREVENTS or AFFECTS."""

    predicate: str

    def __post_init__(self) -> None:
        if not self.predicate:
            raise GraphError("relation predicate must be non-empty")


@dataclass(frozen=True)
class Predication:
    """One extracted subject-predicate-object occurrence with provenance."""

    subject: EntityId
    predicate: RelationId
    object: EntityId
    pmid: str
    sentence: str
    pub_date: dt.date
    confidence: float | None = None

    def __post_init__(self) -> None:
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise GraphError(
                f"confidence {self.confidence!r} outside [0, 1] "
                f"for ({self.subject.cui}, {self.predicate.predicate}, {self.object.cui})"
            )

    def key(self) -> tuple[str, str, str]:
        return (self.subject.cui, self.predicate.predicate, self.object.cui)


@dataclass(frozen=True)
class Triple:
    """A deduplicated (head, relation, tail) edge with its earliest date."""

    head: int
    relation: int
    tail: int
    earliest_date: dt.date

    def key(self) -> tuple[int, int, int]:
        return (self.head, self.relation, self.tail)


@dataclass
class KnowledgeGraph:
    """Deduplicated triple set with dictionaries and adjacency indices.

    ``entities[i]`` / ``relations[j]`` hold the objects for dense index i/j;
    ``entity_index`` / ``relation_index`` are the inverse maps keyed by CUI
    and predicate.  ``out_index[h]`` lists ``(relation, tail)`` pairs and
    ``in_index[t]`` lists ``(relation, head)`` pairs; together they are an
    exact double-entry of the triple set.  A finished graph is immutable and
    safe to share across threads.
    """

    entities: list[EntityId] = field(default_factory=list)
    relations: list[RelationId] = field(default_factory=list)
    triples: list[Triple] = field(default_factory=list)
    entity_index: dict[str, int] = field(default_factory=dict)
    relation_index: dict[str, int] = field(default_factory=dict)
    out_index: list[list[tuple[int, int]]] = field(default_factory=list)
    in_index: list[list[tuple[int, int]]] = field(default_factory=list)

    @property
    def n_entities(self) -> int:
        return len(self.entities)

    @property
    def n_relations(self) -> int:
        return len(self.relations)

    @property
    def triple_keys(self) -> frozenset[tuple[int, int, int]]:
        if not hasattr(self, "_triple_keys"):
            self._triple_keys = frozenset(t.key() for t in self.triples)
        return self._triple_keys

    def has_triple(self, head: int, relation: int, tail: int) -> bool:
        return (head, relation, tail) in self.triple_keys

    def triple_array(self) -> np.ndarray:
        """(N, 3) int64 array of (head, relation, tail) rows in triple order."""
        if not self.triples:
            return np.empty((0, 3), dtype=np.int64)
        return np.array([t.key() for t in self.triples], dtype=np.int64)

    def entity_keys(self) -> list[str]:
        return [e.cui for e in self.entities]

    def relation_keys(self) -> list[str]:
        return [r.predicate for r in self.relations]


def build_graph(predications: Iterable[Predication]) -> KnowledgeGraph:
    """Collapse a predication stream into a deduplicated KnowledgeGraph.

    Duplicate (subject, predicate, object) occurrences merge into one triple
    whose earliest_date is the minimum pub_date seen.  An empty stream yields
    a valid empty graph.
    """
    g = KnowledgeGraph()
    first_seen: dict[tuple[int, int, int], int] = {}
    earliest: list[dt.date] = []
    order: list[tuple[int, int, int]] = []

    for pred in predications:
        h = _intern_entity(g, pred.subject)
        t = _intern_entity(g, pred.object)
        r = _intern_relation(g, pred.predicate)
        key = (h, r, t)
        slot = first_seen.get(key)
        if slot is None:
            first_seen[key] = len(order)
            order.append(key)
            earliest.append(pred.pub_date)
        elif pred.pub_date < earliest[slot]:
            earliest[slot] = pred.pub_date

    g.triples = [
        Triple(h, r, t, date) for (h, r, t), date in zip(order, earliest)
    ]
    _build_adjacency(g)
    return g


def _intern_entity(g: KnowledgeGraph, entity: EntityId) -> int:
    idx = g.entity_index.get(entity.cui)
    if idx is None:
        idx = len(g.entities)
        g.entity_index[entity.cui] = idx
        g.entities.append(entity)
    return idx


def _intern_relation(g: KnowledgeGraph, relation: RelationId) -> int:
    idx = g.relation_index.get(relation.predicate)
    if idx is None:
        idx = len(g.relations)
        g.relation_index[relation.predicate] = idx
        g.relations.append(relation)
    return idx


def _build_adjacency(g: KnowledgeGraph) -> None:
    g.out_index = [[] for _ in range(g.n_entities)]
    g.in_index = [[] for _ in range(g.n_entities)]
    for t in g.triples:
        g.out_index[t.head].append((t.relation, t.tail))
        g.in_index[t.tail].append((t.relation, t.head))


def subgraph(g: KnowledgeGraph, keep: Iterable[Triple]) -> KnowledgeGraph:
    """A new graph restricted to ``keep``, preserving dictionaries.

    Entity and relation indices are inherited unchanged so embeddings and
    adjacency lookups built against ``g`` remain valid.
    """
    out = KnowledgeGraph(
        entities=list(g.entities),
        relations=list(g.relations),
        triples=list(keep),
        entity_index=dict(g.entity_index),
        relation_index=dict(g.relation_index),
    )
    _build_adjacency(out)
    return out


def degree_centrality(g: KnowledgeGraph) -> tuple[np.ndarray, np.ndarray]:
    """Per-entity (in-degree, out-degree) over the deduplicated triples.

    Counts rows/columns of the graph's adjacency structure: in-degree of e is
    the number of triples with tail e, out-degree the number with head e.  A
    self-loop contributes one to each.
    """
    a_in = np.zeros(g.n_entities, dtype=np.int64)
    a_out = np.zeros(g.n_entities, dtype=np.int64)
    for t in g.triples:
        a_out[t.head] += 1
        a_in[t.tail] += 1
    return a_in, a_out


def dump_graph(g: KnowledgeGraph, path) -> None:
    """Write one triple per line: head_cui, predicate, tail_cui, date."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for t in g.triples:
            fh.write(
                f"{g.entities[t.head].cui}\t{g.relations[t.relation].predicate}"
                f"\t{g.entities[t.tail].cui}\t{t.earliest_date.isoformat()}\n"
            )


def load_graph(path) -> KnowledgeGraph:
    """Rebuild a graph from a dump_graph file.

    The dump carries CUIs and predicates only, so reloaded entities have
    empty display names and semantic types; dictionaries and the triple set
    round-trip exactly.
    """
    g = KnowledgeGraph()
    first_seen: set[tuple[int, int, int]] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise GraphError(f"{path}: line {lineno}: expected 4 columns, got {len(parts)}")
            head_cui, predicate, tail_cui, date_text = parts
            try:
                date = dt.date.fromisoformat(date_text)
            except ValueError as exc:
                raise GraphError(f"{path}: line {lineno}: bad date {date_text!r}") from exc
            h = _intern_entity(g, EntityId(head_cui))
            t = _intern_entity(g, EntityId(tail_cui))
            r = _intern_relation(g, RelationId(predicate))
            if (h, r, t) in first_seen:
                raise GraphError(f"{path}: line {lineno}: duplicate triple")
            first_seen.add((h, r, t))
            g.triples.append(Triple(h, r, t, date))
    _build_adjacency(g)
    return g


def iter_triple_rows(g: KnowledgeGraph) -> Iterator[tuple[str, str, str, str]]:
    for t in g.triples:
        yield (
            g.entities[t.head].cui,
            g.relations[t.relation].predicate,
            g.entities[t.tail].cui,
            t.earliest_date.isoformat(),
        )
