"""Subcommand front-end wiring the pipeline stages.

Artifacts are written under the output directory; logs go to stderr only.
Failures exit 1 with a single machine-parseable JSON line on stderr;
usage errors exit 2.  With identical config and seed in deterministic mode
(threads=1), artifact bodies are byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import filtering, ingest
from .config import load_config
from .data import default_semtype_rules_path, default_whitelist_path
from .embed.store import MODELS, EmbeddingStore, checkpoint_digest
from .embed.training import TrainConfig, train
from .errors import ConfigError, LitkgError
from .evaluation import evaluate, time_split
from .graph import build_graph, dump_graph, load_graph
from .predict import (
    PredictionQuery,
    enumerate_and_rank,
    relation_presets,
    write_predictions,
)

log = logging.getLogger("litkg")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except LitkgError as exc:
        print(json.dumps({"error": str(exc), "command": args.command}), file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="litkg",
        description="Literature knowledge-graph pipeline: filter, embed, evaluate, predict.",
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a predication file and canonicalize it")
    p.add_argument("--predications", required=True)
    p.add_argument("--strict", action="store_true", help="abort on the first bad row")
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("filter", help="run preprocessing and write the filtered graph")
    p.add_argument("--predications", required=True)
    p.add_argument("--exclude-semtypes", default=None, metavar="FILE")
    p.add_argument("--whitelist", default=None, metavar="FILE")
    p.add_argument("--keep", type=int, default=None, metavar="K")
    p.add_argument("--scores", default=None, metavar="FILE")
    p.add_argument("--score-threshold", type=float, default=0.5, metavar="X")
    p.add_argument("--strict-scores", action="store_true")
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("train", help="train embeddings on a graph dump")
    p.add_argument("--graph", required=True)
    p.add_argument("--model", choices=MODELS, default="transe-l2")
    p.add_argument("--dim", type=int, default=250)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--negatives", type=int, default=16)
    p.add_argument("--batch-size", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--init-scale", type=float, default=None)
    p.add_argument("--filter-negatives", action="store_true")
    p.add_argument("--train-cutoff", default=None, metavar="DATE",
                   help="train only on triples dated before DATE")
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="time-sliced link-prediction metrics")
    p.add_argument("--graph", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--train-cutoff", required=True, metavar="DATE")
    p.add_argument("--test-cutoff", required=True, metavar="DATE")
    p.add_argument("--filtered", action="store_true",
                   help="drop known-true competitors from candidate pools")
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("predict", help="rank candidate/relation/target triples")
    p.add_argument("--graph", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--candidates", required=True, metavar="FILE")
    p.add_argument("--category", default=None,
                   help="candidate category with preset relations (drug, chemical, supplement)")
    p.add_argument("--relations", default=None,
                   help="comma-separated relation list overriding the preset")
    p.add_argument("--targets", default=None, metavar="FILE",
                   help="target entity list; defaults to the packaged whitelist")
    p.add_argument("--top-n", type=int, default=10)
    p.add_argument("--novel-only", action="store_true")
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("pipeline", help="run every stage from one config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="override paths.output_dir")
    p.add_argument("--seed", type=int, default=None, help="override train.seed")
    p.add_argument("--threads", type=int, default=None, help="override train.threads")
    p.set_defaults(func=_cmd_pipeline)
    return parser


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _parse_date(text: str):
    import datetime as dt

    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise ConfigError(f"bad date {text!r}, expected YYYY-MM-DD") from None


def _cmd_ingest(args) -> int:
    out = _outdir(args)
    reader = ingest.parse_predications(args.predications, strict=args.strict)
    records = list(reader)
    ingest.write_predications(out / "predications_clean.tsv", records)
    _write_json(
        out / "ingest_stats.json",
        {
            "read": reader.read,
            "skipped": reader.skipped,
            "diagnostics": reader.diagnostics[:20],
        },
    )
    log.info("ingest: %d records, %d skipped", reader.read, reader.skipped)
    return 0


def _run_filter_stage(predications, whitelist_path, semtype_path, scores_path,
                      keep, threshold, strict_scores, out: Path):
    """Shared by the filter subcommand and the pipeline."""
    rules = ingest.parse_semtype_rules(semtype_path or default_semtype_rules_path())
    whitelist = ingest.parse_whitelist(whitelist_path or default_whitelist_path())
    stage1 = filtering.exclude_semtypes(predications, rules)
    pairs = filtering.PairCounts.from_predications(stage1)
    graph1 = build_graph(stage1)
    scores = filtering.score_triples(graph1, pairs)
    k = keep if keep is not None else len(graph1.triples)
    kept = filtering.apply_cutoff(graph1, scores, whitelist, k)
    kept_keys = {
        (graph1.entities[t.head].cui, graph1.relations[t.relation].predicate,
         graph1.entities[t.tail].cui)
        for t in kept
    }
    stage2 = [p for p in stage1 if p.key() in kept_keys]
    if scores_path is not None:
        table = ingest.parse_scores(scores_path)
        stage3 = filtering.apply_confidence(stage2, table, threshold, strict_scores)
        overwrites = table.overwrites
    else:
        stage3 = stage2
        overwrites = 0
    final = build_graph(stage3)
    dump_graph(final, out / "graph.tsv")
    stats = {
        "input_predications": len(predications),
        "after_semtype_exclusion": len(stage1),
        "triples_before_cutoff": len(graph1.triples),
        "triples_retained_by_cutoff": len(kept),
        "predications_after_cutoff": len(stage2),
        "predications_after_confidence": len(stage3),
        "final_triples": len(final.triples),
        "final_entities": final.n_entities,
        "final_relations": final.n_relations,
        "score_overwrites": overwrites,
    }
    _write_json(out / "filter_stats.json", stats)
    log.info(
        "filter: %d predications -> %d triples (%d entities)",
        len(predications), len(final.triples), final.n_entities,
    )
    return final


def _cmd_filter(args) -> int:
    out = _outdir(args)
    reader = ingest.parse_predications(args.predications)
    records = list(reader)
    _run_filter_stage(
        records,
        args.whitelist,
        args.exclude_semtypes,
        args.scores,
        args.keep,
        args.score_threshold,
        args.strict_scores,
        out,
    )
    return 0


def _cmd_train(args) -> int:
    out = _outdir(args)
    graph = load_graph(args.graph)
    cfg = TrainConfig(
        model=args.model,
        dim=args.dim,
        lr=args.lr,
        epochs=args.epochs,
        negatives_per_positive=args.negatives,
        batch_size=args.batch_size,
        seed=args.seed,
        init_scale=args.init_scale,
        threads=args.threads,
        filter_negatives=args.filter_negatives,
    )
    train_triples = None
    if args.train_cutoff is not None:
        cutoff = _parse_date(args.train_cutoff)
        train_triples = [t for t in graph.triples if t.earliest_date < cutoff]
    store = train(graph, cfg, train_triples=train_triples, progress=_log_epoch)
    store.save(out / "checkpoint.tsv")
    log.info("train: checkpoint written to %s", out / "checkpoint.tsv")
    return 0


def _log_epoch(epoch: int, mean_loss: float) -> None:
    log.info("epoch %d: mean loss %.6f", epoch, mean_loss)


def _cmd_evaluate(args) -> int:
    out = _outdir(args)
    graph = load_graph(args.graph)
    store = EmbeddingStore.load(args.checkpoint)
    split = time_split(graph, _parse_date(args.train_cutoff), _parse_date(args.test_cutoff))
    report = evaluate(store, split, mode="filtered" if args.filtered else "raw")
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    print(report.table())
    return 0


def _cmd_predict(args) -> int:
    out = _outdir(args)
    graph = load_graph(args.graph)
    store = EmbeddingStore.load(args.checkpoint)
    label = args.category or Path(args.candidates).stem
    candidates = ingest.parse_candidates(args.candidates, label)
    if args.relations:
        relations = [r.strip() for r in args.relations.split(",") if r.strip()]
    else:
        relations = relation_presets(args.category) if args.category else None
    if not relations:
        raise ConfigError("pass --category for preset relations or --relations explicitly")
    targets = ingest.parse_whitelist(args.targets or default_whitelist_path())
    query = PredictionQuery.from_parts(candidates, relations, targets, args.top_n)
    result = enumerate_and_rank(store, graph, query, novel_only=args.novel_only)
    _report_skips(result)
    path = out / f"predictions_{label}.tsv"
    write_predictions(path, result, store.model, checkpoint_digest(args.checkpoint))
    log.info("predict: %d rows written to %s", len(result.ranked), path)
    return 0


def _report_skips(result) -> None:
    for kind, skipped in (
        ("candidate", result.skipped_candidates),
        ("target", result.skipped_targets),
        ("relation", result.skipped_relations),
    ):
        if skipped:
            log.warning("%d %s key(s) not in the graph: %s",
                        len(skipped), kind, ", ".join(skipped[:5]))


def _cmd_pipeline(args) -> int:
    cfg = load_config(args.config)
    if args.out is not None:
        cfg.output_dir = Path(args.out)
    if args.seed is not None:
        cfg.train.seed = args.seed
    if args.threads is not None:
        cfg.train.threads = args.threads
    cfg.validate_paths()
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)

    reader = ingest.parse_predications(cfg.predications, strict=cfg.strict_parse)
    records = list(reader)
    ingest.write_predications(out / "predications_clean.tsv", records)
    _write_json(
        out / "ingest_stats.json",
        {"read": reader.read, "skipped": reader.skipped, "diagnostics": reader.diagnostics[:20]},
    )

    graph = _run_filter_stage(
        records,
        cfg.whitelist,
        cfg.semtype_rules,
        cfg.scores,
        cfg.keep,
        cfg.score_threshold,
        cfg.strict_scores,
        out,
    )

    split = None
    train_triples = None
    if cfg.train_cutoff is not None and cfg.test_cutoff is not None:
        split = time_split(graph, cfg.train_cutoff, cfg.test_cutoff)
        train_triples = split.train
    store = train(graph, cfg.train, train_triples=train_triples, progress=_log_epoch)
    store.save(out / "checkpoint.tsv")

    if split is not None and split.test:
        report = evaluate(store, split, mode=cfg.eval_mode)
        (out / "report.json").write_text(report.to_json(), encoding="utf-8")
        print(report.table())
    elif split is not None:
        log.warning("pipeline: empty test slice, skipping evaluation")

    digest = checkpoint_digest(out / "checkpoint.tsv")
    relations_override = cfg.relations
    for label, path in sorted(cfg.candidates.items()):
        candidates = ingest.parse_candidates(path, label)
        relations = relations_override or relation_presets(label)
        whitelist = ingest.parse_whitelist(cfg.whitelist)
        query = PredictionQuery.from_parts(candidates, relations, whitelist, cfg.top_n)
        result = enumerate_and_rank(store, graph, query, novel_only=cfg.novel_only)
        _report_skips(result)
        write_predictions(out / f"predictions_{label}.tsv", result, store.model, digest)
    log.info("pipeline: artifacts in %s", out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
