"""Parsers for predication, whitelist, semantic-type, score, and candidate files.

All inputs are UTF-8 TSV or line-oriented text; LF and CRLF are both
accepted.  Parsers are sequential per file and keep no global state, so
distinct files may be parsed concurrently.
"""

from __future__ import annotations

import datetime as dt
from collections.abc import Iterator
from dataclasses import dataclass, field

from .errors import IngestError
from .graph import EntityId, Predication, RelationId

PREDICATION_COLUMNS = (
    "subject_cui",
    "subject_name",
    "subject_semtype",
    "predicate",
    "object_cui",
    "object_name",
    "object_semtype",
    "pmid",
    "sentence",
    "pub_date",
)

SCORE_COLUMNS = ("subject_cui", "predicate", "object_cui", "pmid", "score")

ScoreKey = tuple[str, str, str, str]


@dataclass(frozen=True)
class SemTypeRuleSet:
    """Semantic-type codes whose concepts are excluded from the graph."""

    excluded_types: frozenset[str]


@dataclass(frozen=True)
class Whitelist:
    """CUIs whose triples are always retained during filtering."""

    protected_cuis: frozenset[str]


@dataclass(frozen=True)
class CandidateSet:
    """Named entity pool to enumerate as prediction heads."""

    label: str
    cuis: frozenset[str]


@dataclass
class ScoreTable:
    """Per-predication confidence scores keyed by (subject, predicate, object, pmid).

    ``overwrites`` counts duplicate keys in the source file: the last value
    wins and each collision is a warning.
    """

    scores: dict[ScoreKey, float] = field(default_factory=dict)
    overwrites: int = 0

    def get(self, key: ScoreKey) -> float | None:
        return self.scores.get(key)

    def __len__(self) -> int:
        return len(self.scores)

    def __contains__(self, key: ScoreKey) -> bool:
        return key in self.scores


def parse_pub_date(text: str) -> dt.date:
    """Parse YYYY-MM-DD, or a bare YYYY canonicalized to January 1."""
    text = text.strip()
    if len(text) == 4 and text.isdigit():
        return dt.date(int(text), 1, 1)
    try:
        return dt.date.fromisoformat(text)
    except ValueError as exc:
        raise IngestError(f"bad pub_date {text!r}") from exc


class PredicationReader:
    """Streaming reader for the predication TSV schema.

    Iterating yields records in file order.  In lenient mode (default) rows
    that fail validation are skipped and recorded in ``diagnostics``; strict
    mode aborts on the first bad row.  A missing header column is always a
    hard error.  The reader is single-pass: ``skipped`` and ``diagnostics``
    are complete only after iteration finishes.
    """

    def __init__(self, path, strict: bool = False):
        self.path = path
        self.strict = strict
        self.skipped = 0
        self.read = 0
        self.diagnostics: list[str] = []

    def __iter__(self) -> Iterator[Predication]:
        with open(self.path, "r", encoding="utf-8") as fh:
            header = fh.readline()
            if not header:
                raise IngestError(f"{self.path}: empty file, expected header")
            columns = header.rstrip("\r\n").split("\t")
            positions = _header_positions(self.path, columns, PREDICATION_COLUMNS)
            for lineno, raw in enumerate(fh, start=2):
                line = raw.rstrip("\r\n")
                if not line:
                    continue
                parts = line.split("\t")
                try:
                    record = self._parse_row(parts, positions, len(columns))
                except IngestError as exc:
                    message = f"{self.path}: line {lineno}: {exc}"
                    if self.strict:
                        raise IngestError(message) from None
                    self.skipped += 1
                    self.diagnostics.append(message)
                    continue
                self.read += 1
                yield record

    def _parse_row(self, parts: list[str], positions: dict[str, int], width: int) -> Predication:
        if len(parts) != width:
            raise IngestError(f"expected {width} columns, got {len(parts)}")
        get = lambda name: parts[positions[name]]
        subject_cui = get("subject_cui").strip()
        object_cui = get("object_cui").strip()
        predicate = get("predicate").strip()
        if not subject_cui or not object_cui:
            raise IngestError("empty subject_cui or object_cui")
        if not predicate:
            raise IngestError("empty predicate")
        return Predication(
            subject=EntityId(subject_cui, get("subject_name"), get("subject_semtype").strip()),
            predicate=RelationId(predicate),
            object=EntityId(object_cui, get("object_name"), get("object_semtype").strip()),
            pmid=get("pmid").strip(),
            sentence=get("sentence"),
            pub_date=parse_pub_date(get("pub_date")),
        )


def parse_predications(path, strict: bool = False) -> PredicationReader:
    """Reader over the predication file; see PredicationReader."""
    return PredicationReader(path, strict=strict)


def write_predications(path, predications) -> None:
    """Serialize predications in the canonical TSV schema.

    Writing then re-parsing is lossless, and re-serializing a canonical file
    reproduces it byte for byte.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(PREDICATION_COLUMNS) + "\n")
        for p in predications:
            fh.write(
                "\t".join(
                    (
                        p.subject.cui,
                        p.subject.name,
                        p.subject.semtype,
                        p.predicate.predicate,
                        p.object.cui,
                        p.object.name,
                        p.object.semtype,
                        p.pmid,
                        p.sentence,
                        p.pub_date.isoformat(),
                    )
                )
                + "\n"
            )


def parse_whitelist(path, require_nonempty: bool = True) -> Whitelist:
    """One protected CUI per line; ``#`` starts a comment.

    ``require_nonempty`` enforces the disease-whitelist mode where an empty
    protected set would silently disable retention.
    """
    cuis = _parse_term_lines(path)
    if require_nonempty and not cuis:
        raise IngestError(f"{path}: whitelist is empty but protected retention is enabled")
    return Whitelist(protected_cuis=frozenset(cuis))


def parse_semtype_rules(path) -> SemTypeRuleSet:
    """One excluded semantic-type code per line; ``#`` starts a comment."""
    return SemTypeRuleSet(excluded_types=frozenset(_parse_term_lines(path)))


def parse_candidates(path, label: str) -> CandidateSet:
    """One candidate CUI per line; ``#`` starts a comment."""
    cuis = _parse_term_lines(path)
    if not cuis:
        raise IngestError(f"{path}: candidate set {label!r} is empty")
    return CandidateSet(label=label, cuis=frozenset(cuis))


def parse_scores(path) -> ScoreTable:
    """Confidence TSV keyed by (subject_cui, predicate, object_cui, pmid).

    Scores must lie in [0, 1].  Duplicate keys overwrite earlier entries and
    are tallied in ``ScoreTable.overwrites``.
    """
    table = ScoreTable()
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header:
            raise IngestError(f"{path}: empty file, expected header")
        columns = header.rstrip("\r\n").split("\t")
        positions = _header_positions(path, columns, SCORE_COLUMNS)
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != len(columns):
                raise IngestError(
                    f"{path}: line {lineno}: expected {len(columns)} columns, got {len(parts)}"
                )
            try:
                score = float(parts[positions["score"]])
            except ValueError as exc:
                raise IngestError(f"{path}: line {lineno}: bad score") from exc
            if not 0.0 <= score <= 1.0:
                raise IngestError(
                    f"{path}: line {lineno}: score {score!r} outside [0, 1]"
                )
            key = (
                parts[positions["subject_cui"]],
                parts[positions["predicate"]],
                parts[positions["object_cui"]],
                parts[positions["pmid"]],
            )
            if key in table.scores:
                table.overwrites += 1
            table.scores[key] = score
    return table


def write_scores(path, rows: Iterator[tuple[ScoreKey, float]] | list) -> None:
    """Serialize (key, score) rows in the confidence TSV schema."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(SCORE_COLUMNS) + "\n")
        for (subject_cui, predicate, object_cui, pmid), score in rows:
            fh.write(f"{subject_cui}\t{predicate}\t{object_cui}\t{pmid}\t{score:.6f}\n")


def _header_positions(path, columns: list[str], required: tuple[str, ...]) -> dict[str, int]:
    positions = {}
    for name in required:
        try:
            positions[name] = columns.index(name)
        except ValueError:
            raise IngestError(f"{path}: header missing column {name!r}") from None
    return positions


def _parse_term_lines(path) -> list[str]:
    terms: list[str] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            term = raw.split("#", 1)[0].strip()
            if term and term not in seen:
                seen.add(term)
                terms.append(term)
    return terms
