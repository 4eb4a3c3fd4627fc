"""Command-line front-end: synthesize annotations, fine-tune, score."""

from __future__ import annotations

import argparse
import sys

from .data import ClassifierError, read_annotations, synthetic_annotations, write_annotations
from .model import Hyperparams, build_tiny_base, finetune
from .scoring import score_file


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="triple-classifier",
        description="Fine-tune a transformer on labeled triples and emit confidence scores.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic annotation file")
    p.add_argument("out")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("tiny-base", help="build a small offline base model from annotations")
    p.add_argument("--annotations", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("finetune", help="fine-tune a base model on annotations")
    p.add_argument("--annotations", required=True)
    p.add_argument("--base-model", required=True,
                   help="pretrained checkpoint directory or hub id")
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=4)
    p.add_argument("--lr", type=float, default=2e-5)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--val-fraction", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("score", help="score a predication TSV into a confidence TSV")
    p.add_argument("--model", required=True)
    p.add_argument("--predications", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--batch-size", type=int, default=32)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (ClassifierError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.command == "synth":
        write_annotations(args.out, synthetic_annotations(args.count, args.seed))
        print(f"wrote {args.count} annotations to {args.out}")
        return 0
    if args.command == "tiny-base":
        build_tiny_base(read_annotations(args.annotations), args.out)
        print(f"tiny base model written to {args.out}")
        return 0
    if args.command == "finetune":
        report = finetune(
            read_annotations(args.annotations),
            args.base_model,
            args.out,
            Hyperparams(
                epochs=args.epochs,
                lr=args.lr,
                batch_size=args.batch_size,
                val_fraction=args.val_fraction,
                seed=args.seed,
            ),
        )
        print(
            f"validation precision={report.precision:.3f} recall={report.recall:.3f} "
            f"f1={report.f1:.3f} accuracy={report.accuracy:.3f}"
        )
        return 0
    if args.command == "score":
        count = score_file(args.model, args.predications, args.out, args.batch_size)
        print(f"wrote {count} scores to {args.out}")
        return 0
    raise ClassifierError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    raise SystemExit(main())
