"""Synthetic corpora: a block-compositional benchmark graph and a demo corpus.

The benchmark graph embeds a learnable pattern: entities fall into blocks
and each relation maps two source blocks onto two destination blocks, with
one relation composing two others.  Edges are sampled densely enough that
filtered ranking is informative.  The demo corpus is a small
domain-flavored predication file (drugs, supplements, genes, disease
targets) with duplicate occurrences, excluded-type noise, and confidence
scores, used by the end-to-end pipeline smoke run.

Regenerate the shipped demo corpus with ``python -m litkg.synth OUTDIR``.
"""

from __future__ import annotations

import datetime as dt
import json
from pathlib import Path

import numpy as np

from .graph import EntityId, Predication, RelationId

TRAIN_WINDOW = (dt.date(2000, 1, 1), dt.date(2018, 12, 31))
VALID_WINDOW = (dt.date(2019, 1, 1), dt.date(2020, 12, 31))
TEST_WINDOW = (dt.date(2021, 1, 1), dt.date(2022, 12, 31))

TRAIN_CUTOFF = dt.date(2019, 1, 1)
TEST_CUTOFF = dt.date(2021, 1, 1)

# Disease-target CUIs mirrored from the shipped whitelist file.
TARGET_ENTITIES = [
    ("C0002395", "Alzheimer's Disease"),
    ("C0750901", "Alzheimer Disease, Early Onset"),
    ("C0494463", "Alzheimer Disease, Late Onset"),
    ("C0338450", "Focal Alzheimer's disease"),
    ("C0276496", "Familial Alzheimer's disease"),
    ("C1979617", "Alzheimer's disease treatment"),
    ("C0051532", "Alzheimer's disease antigen"),
    ("C1853360", "Alzheimer Disease 11"),
    ("C1970144", "Alzheimer Disease 14"),
    ("C2677888", "Alzheimer Disease 16"),
    ("C1853555", "Alzheimer Disease 7"),
    ("C1846735", "Alzheimer Disease 8"),
    ("C1843013", "Alzheimer disease, familial, type 3"),
    ("C0949574", "Alzheimer Vaccines"),
]


def _date_in(rng: np.random.Generator, window: tuple[dt.date, dt.date]) -> dt.date:
    lo, hi = window[0].toordinal(), window[1].toordinal()
    return dt.date.fromordinal(int(rng.integers(lo, hi + 1)))


def _window(rng: np.random.Generator, train_frac=0.90, valid_frac=0.05):
    u = rng.random()
    if u < train_frac:
        return TRAIN_WINDOW
    if u < train_frac + valid_frac:
        return VALID_WINDOW
    return TEST_WINDOW


def benchmark_predications(
    seed: int = 2024,
    n_blocks: int = 8,
    block_size: int = 25,
    pair_prob: float = 0.6,
) -> list[Predication]:
    """Block-structured corpus: 8 blocks x 25 entities, 4 relations, ~3000 edges.

    Relation block maps (src -> dst): R0 maps blocks 0->1 and 4->5, R1 maps
    1->2 and 5->6, R2 composes them (0->2 and 4->6), R3 maps 2->3 and 6->7.
    Each admissible (head, tail) pair appears independently with
    ``pair_prob``; roughly 90/5/5 percent of edges date into the
    train/valid/test windows.
    """
    rng = np.random.default_rng(seed)
    block_maps = {
        "R0": ((0, 1), (4, 5)),
        "R1": ((1, 2), (5, 6)),
        "R2": ((0, 2), (4, 6)),
        "R3": ((2, 3), (6, 7)),
    }
    entities = [
        EntityId(f"E{i:03d}", f"entity {i}", "synt")
        for i in range(n_blocks * block_size)
    ]
    predications: list[Predication] = []
    pmid = 0
    for predicate, grids in block_maps.items():
        relation = RelationId(predicate)
        for src, dst in grids:
            for i in range(block_size):
                for j in range(block_size):
                    if rng.random() >= pair_prob:
                        continue
                    pmid += 1
                    predications.append(
                        Predication(
                            subject=entities[src * block_size + i],
                            predicate=relation,
                            object=entities[dst * block_size + j],
                            pmid=f"9{pmid:07d}",
                            sentence="",
                            pub_date=_date_in(rng, _window(rng)),
                        )
                    )
    return predications


def demo_predications(
    seed: int = 7,
    n_drugs: int = 30,
    n_supplements: int = 15,
    n_genes: int = 20,
    n_diseases: int = 10,
) -> tuple[list[Predication], list[tuple]]:
    """Domain-flavored corpus plus per-row confidence scores.

    Returns (predications, score_rows) where score_rows are
    ((subject_cui, predicate, object_cui, pmid), score) pairs covering most
    but not all rows, with a deliberate low-confidence fraction.
    """
    rng = np.random.default_rng(seed)
    targets = [EntityId(cui, name, "dsyn") for cui, name in TARGET_ENTITIES]
    drugs = [EntityId(f"C1{i:06d}", f"drug-{i:02d}", "phsu") for i in range(n_drugs)]
    supplements = [
        EntityId(f"C2{i:06d}", f"supplement-{i:02d}", "food") for i in range(n_supplements)
    ]
    genes = [EntityId(f"C3{i:06d}", f"gene-{i:02d}", "gngm") for i in range(n_genes)]
    diseases = [EntityId(f"C4{i:06d}", f"disease-{i:02d}", "dsyn") for i in range(n_diseases)]
    noise_types = ["acty", "inpr", "qlco", "idcn", "spco", "ftcn"]
    noise = [
        EntityId(f"C9{i:06d}", f"generic-{i:02d}", noise_types[i % len(noise_types)])
        for i in range(12)
    ]

    treats = RelationId("TREATS")
    prevents = RelationId("PREVENTS")
    affects = RelationId("AFFECTS")
    assoc = RelationId("ASSOCIATED_WITH")
    interacts = RelationId("INTERACTS_WITH")
    coexists = RelationId("COEXISTS_WITH")

    def pick(pool, count):
        idx = rng.choice(len(pool), size=min(count, len(pool)), replace=False)
        return [pool[int(i)] for i in idx]

    edges: list[tuple[EntityId, RelationId, EntityId]] = []
    for drug in drugs:
        for target in pick(targets, int(rng.integers(1, 4))):
            edges.append((drug, treats, target))
        if rng.random() < 0.6:
            edges.append((drug, prevents, pick(targets, 1)[0]))
        for gene in pick(genes, int(rng.integers(1, 3))):
            edges.append((drug, interacts, gene))
        if rng.random() < 0.5:
            edges.append((drug, treats, pick(diseases, 1)[0]))
    for supplement in supplements:
        for target in pick(targets, int(rng.integers(1, 3))):
            edges.append((supplement, affects, target))
        if rng.random() < 0.5:
            edges.append((supplement, interacts, pick(genes, 1)[0]))
    for gene in genes:
        for target in pick(targets, int(rng.integers(1, 3))):
            edges.append((gene, assoc, target))
    for disease in diseases:
        if rng.random() < 0.8:
            edges.append((disease, coexists, pick(targets, 1)[0]))
    for noisy in noise:
        for other in pick(drugs, 2) + pick(targets, 1):
            edges.append((noisy, assoc, other))

    predications: list[Predication] = []
    score_rows: list[tuple] = []
    pmid = 0
    for subject, relation, obj in edges:
        window = _window(rng)
        for k in range(int(rng.integers(1, 4))):
            pmid += 1
            pmid_text = f"3{pmid:07d}"
            date = _date_in(rng, window)
            predications.append(
                Predication(
                    subject=subject,
                    predicate=relation,
                    object=obj,
                    pmid=pmid_text,
                    sentence=(
                        f"{subject.name} {relation.predicate.lower().replace('_', ' ')} "
                        f"{obj.name} (report {k + 1})."
                    ),
                    pub_date=date,
                )
            )
            if rng.random() < 0.75:
                low = rng.random() < 0.06
                score = float(rng.uniform(0.05, 0.45)) if low else float(rng.uniform(0.55, 1.0))
                score_rows.append(
                    ((subject.cui, relation.predicate, obj.cui, pmid_text), round(score, 6))
                )
    order = rng.permutation(len(predications))
    predications = [predications[int(i)] for i in order]
    return predications, score_rows


def write_demo_corpus(outdir, seed: int = 7) -> dict:
    """Write the demo predication corpus, score file, candidate lists, and config.

    The config leaves whitelist and semantic-type rules unset so the run
    picks up the packaged defaults, keeping the corpus portable.
    """
    from .ingest import write_predications, write_scores

    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    predications, score_rows = demo_predications(seed)
    write_predications(out / "predications.tsv", predications)
    write_scores(out / "scores.tsv", score_rows)

    drugs = sorted({p.subject.cui for p in predications if p.subject.semtype == "phsu"})
    supplements = sorted({p.subject.cui for p in predications if p.subject.semtype == "food"})
    (out / "drug_candidates.txt").write_text(
        "\n".join(drugs) + "\n", encoding="utf-8"
    )
    (out / "supplement_candidates.txt").write_text(
        "\n".join(supplements) + "\n", encoding="utf-8"
    )

    # Size the cutoff against the post-exclusion triple population so the
    # demo actually exercises truncation.
    from .data import default_semtype_rules_path
    from .filtering import exclude_semtypes
    from .ingest import parse_semtype_rules

    rules = parse_semtype_rules(default_semtype_rules_path())
    n_distinct = len({p.key() for p in exclude_semtypes(predications, rules)})
    config = {
        "paths": {
            "predications": "predications.tsv",
            "scores": "scores.tsv",
            "candidates": {
                "drug": "drug_candidates.txt",
                "supplement": "supplement_candidates.txt",
            },
            "output_dir": "out",
        },
        "filter": {"keep": int(n_distinct * 0.85), "score_threshold": 0.5},
        "train": {
            "model": "transe-l2",
            "dim": 32,
            "lr": 0.01,
            "epochs": 60,
            "negatives_per_positive": 8,
            "batch_size": 128,
            "seed": seed,
        },
        "split": {
            "train_cutoff": TRAIN_CUTOFF.isoformat(),
            "test_cutoff": TEST_CUTOFF.isoformat(),
        },
        "evaluate": {"mode": "filtered"},
        "predict": {"top_n": 25, "novel_only": False},
    }
    (out / "demo.json").write_text(
        json.dumps(config, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return config


def main(argv=None) -> int:
    import argparse

    parser = argparse.ArgumentParser(
        prog="python -m litkg.synth", description="Regenerate the demo corpus."
    )
    parser.add_argument("outdir", help="directory to write the corpus into")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)
    write_demo_corpus(args.outdir, seed=args.seed)
    print(f"demo corpus written to {args.outdir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
