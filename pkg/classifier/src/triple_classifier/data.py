"""Annotated-triple records, their TSV format, and a synthetic generator.

An annotation labels one extracted triple against its source sentence:
1 when the sentence supports the stated relation, 0 when it does not.
The synthetic generator stands in for manually labeled data, producing
sentences whose wording either asserts the relation (positives) or
negates/ignores it (negatives), so a classifier has real signal to learn.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

ANNOTATION_COLUMNS = ("subject", "predicate", "object", "sentence", "label")


class ClassifierError(ValueError):
    pass


@dataclass(frozen=True)
class AnnotatedTriple:
    subject: str
    predicate: str
    object: str
    sentence: str
    label: int

    def __post_init__(self) -> None:
        if self.label not in (0, 1):
            raise ClassifierError(f"label must be 0 or 1, got {self.label!r}")
        if not self.sentence:
            raise ClassifierError("annotation sentence must be non-empty")


def build_text(subject: str, predicate: str, object_: str, sentence: str) -> str:
    """Classifier input: subject [SEP] predicate [SEP] object [SEP] sentence."""
    return f"{subject} [SEP] {predicate} [SEP] {object_} [SEP] {sentence}"


def read_annotations(path) -> list[AnnotatedTriple]:
    rows: list[AnnotatedTriple] = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\r\n").split("\t")
        if tuple(header) != ANNOTATION_COLUMNS:
            raise ClassifierError(f"{path}: expected header {ANNOTATION_COLUMNS}, got {header}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise ClassifierError(f"{path}: line {lineno}: expected 5 columns")
            try:
                label = int(parts[4])
            except ValueError:
                raise ClassifierError(f"{path}: line {lineno}: bad label {parts[4]!r}") from None
            rows.append(AnnotatedTriple(parts[0], parts[1], parts[2], parts[3], label))
    return rows


def write_annotations(path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(ANNOTATION_COLUMNS) + "\n")
        for row in rows:
            fh.write(
                f"{row.subject}\t{row.predicate}\t{row.object}\t{row.sentence}\t{row.label}\n"
            )


_SUBJECTS = [
    "donepezil", "memantine", "tacrolimus", "prednisolone", "propranolol",
    "chlorhexidine", "tetracycline", "amiloride", "green tea", "dietary fiber",
    "honey", "brown rice", "curcumin", "resveratrol", "amoxicillin",
]
_OBJECTS = [
    "alzheimer disease", "late onset alzheimer disease", "familial alzheimer disease",
    "cognitive decline", "memory impairment", "dementia", "neurodegeneration",
]
_ASSERTS = {
    "TREATS": ["reduced symptoms of", "was an effective treatment for", "improved outcomes in"],
    "PREVENTS": ["lowered the risk of", "delayed the onset of", "protected against"],
    "AFFECTS": ["modulated the progression of", "influenced biomarkers of", "altered the course of"],
    "INTERACTS_WITH": ["bound directly to", "showed strong interaction with"],
}
_NEGATIVE_TEMPLATES = [
    "{s} showed no measurable effect on {o} in this cohort",
    "{s} did not change any outcome related to {o}",
    "{s} was administered to patients unrelated to {o}",
    "levels of {s} were recorded while studying {o} history",
    "{s} failed to influence {o} in the trial",
]


def synthetic_annotations(n: int = 200, seed: int = 0) -> list[AnnotatedTriple]:
    """Deterministic labeled stand-in corpus, roughly class-balanced."""
    rng = np.random.default_rng(seed)
    rows: list[AnnotatedTriple] = []
    predicates = sorted(_ASSERTS)
    for i in range(n):
        subject = _SUBJECTS[int(rng.integers(len(_SUBJECTS)))]
        obj = _OBJECTS[int(rng.integers(len(_OBJECTS)))]
        predicate = predicates[int(rng.integers(len(predicates)))]
        positive = bool(rng.random() < 0.5)
        if positive:
            verb = _ASSERTS[predicate][int(rng.integers(len(_ASSERTS[predicate])))]
            sentence = f"In study {i}, {subject} {verb} {obj}."
        else:
            template = _NEGATIVE_TEMPLATES[int(rng.integers(len(_NEGATIVE_TEMPLATES)))]
            sentence = template.format(s=subject, o=obj) + f" (study {i})."
        rows.append(
            AnnotatedTriple(subject, predicate, obj, sentence, 1 if positive else 0)
        )
    return rows


# --- predication TSV (the litkg interchange schema, parsed independently) ---

PREDICATION_COLUMNS = (
    "subject_cui", "subject_name", "subject_semtype", "predicate",
    "object_cui", "object_name", "object_semtype", "pmid", "sentence", "pub_date",
)


@dataclass(frozen=True)
class PredicationRow:
    subject_cui: str
    subject_name: str
    predicate: str
    object_cui: str
    object_name: str
    pmid: str
    sentence: str


def read_predication_rows(path) -> list[PredicationRow]:
    """Parse the pipeline's predication TSV; malformed rows are skipped."""
    rows: list[PredicationRow] = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\r\n").split("\t")
        positions = {}
        for name in PREDICATION_COLUMNS:
            try:
                positions[name] = header.index(name)
            except ValueError:
                raise ClassifierError(f"{path}: header missing column {name!r}") from None
        for raw in fh:
            line = raw.rstrip("\r\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != len(header):
                continue
            try:
                dt.date.fromisoformat(parts[positions["pub_date"]])
            except ValueError:
                if not parts[positions["pub_date"]].isdigit():
                    continue
            if not parts[positions["subject_cui"]] or not parts[positions["object_cui"]]:
                continue
            rows.append(
                PredicationRow(
                    subject_cui=parts[positions["subject_cui"]],
                    subject_name=parts[positions["subject_name"]],
                    predicate=parts[positions["predicate"]],
                    object_cui=parts[positions["object_cui"]],
                    object_name=parts[positions["object_name"]],
                    pmid=parts[positions["pmid"]],
                    sentence=parts[positions["sentence"]],
                )
            )
    return rows
