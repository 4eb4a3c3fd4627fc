"""Score a predication file and emit the pipeline's confidence TSV."""

from __future__ import annotations

from .data import ClassifierError, build_text, read_predication_rows
from .model import predict_scores

SCORE_COLUMNS = ("subject_cui", "predicate", "object_cui", "pmid", "score")


def score_file(model_dir, predications_path, out_path, batch_size: int = 32) -> int:
    """Write one score row per resolvable predication row; returns the count.

    Keys are (subject_cui, predicate, object_cui, pmid).  Should the input
    repeat a key, the last occurrence's score wins and the key is written
    once, so the output always parses downstream without warnings.
    """
    rows = read_predication_rows(predications_path)
    if not rows:
        raise ClassifierError(f"{predications_path}: no resolvable predication rows")
    texts = [
        build_text(r.subject_name or r.subject_cui, r.predicate,
                   r.object_name or r.object_cui, r.sentence)
        for r in rows
    ]
    probs = predict_scores(model_dir, texts, batch_size=batch_size)
    ordered: dict[tuple[str, str, str, str], float] = {}
    for row, p in zip(rows, probs):
        key = (row.subject_cui, row.predicate, row.object_cui, row.pmid)
        ordered[key] = float(p)
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(SCORE_COLUMNS) + "\n")
        for (subject_cui, predicate, object_cui, pmid), p in ordered.items():
            fh.write(f"{subject_cui}\t{predicate}\t{object_cui}\t{pmid}\t{p:.6f}\n")
    return len(ordered)
