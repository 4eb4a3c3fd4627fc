#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the three hot paths on the synthetic block graph: fused SGD steps,
full training epochs, and whole-vocabulary scoring sweeps.

    python benchmarks/bench_backends.py [--dim 50] [--epochs 20]
"""

import argparse
import time

import numpy as np

from litkg.backends import available_backends, get_backend
from litkg.embed.models import model_code
from litkg.embed.sampling import corrupt_batch
from litkg.embed.store import EmbeddingStore
from litkg.embed.training import TrainConfig, train
from litkg.evaluation import time_split
from litkg.graph import build_graph
from litkg.synth import TEST_CUTOFF, TRAIN_CUTOFF, benchmark_predications


def bench_steps(be, graph, dim, model, n_steps=200, batch_size=256, negatives=16):
    rng = np.random.default_rng(1)
    store = EmbeddingStore.initialize(
        model, dim, graph.entity_keys(), graph.relation_keys(), rng
    )
    code = model_code(model)
    pos = graph.triple_array()
    start = time.perf_counter()
    for _ in range(n_steps):
        rows = rng.integers(0, pos.shape[0], batch_size)
        h, r, t = pos[rows, 0], pos[rows, 1], pos[rows, 2]
        ch, cr, ct = corrupt_batch(rng, h, r, t, graph.n_entities, negatives)
        bh = np.ascontiguousarray(np.concatenate([h, ch]))
        br = np.ascontiguousarray(np.concatenate([r, cr]))
        bt = np.ascontiguousarray(np.concatenate([t, ct]))
        y = np.ascontiguousarray(
            np.concatenate([np.ones(len(h)), -np.ones(len(ch))])
        )
        be.sgd_step(store.entity_vecs, store.relation_vecs, bh, br, bt, y, 0.01, code)
    return (time.perf_counter() - start) / n_steps


def bench_train(be, graph, split, dim, epochs):
    cfg = TrainConfig(model="transe-l2", dim=dim, epochs=epochs, seed=5)
    start = time.perf_counter()
    train(graph, cfg, train_triples=split.train, backend=be)
    return time.perf_counter() - start


def bench_sweeps(be, graph, dim, model, n_sweeps=2000):
    rng = np.random.default_rng(2)
    store = EmbeddingStore.initialize(
        model, dim, graph.entity_keys(), graph.relation_keys(), rng
    )
    code = model_code(model)
    start = time.perf_counter()
    for _ in range(n_sweeps):
        h = int(rng.integers(graph.n_entities))
        r = int(rng.integers(graph.n_relations))
        be.score_tails(store.entity_vecs, store.relation_vecs, h, r, code)
    return (time.perf_counter() - start) / n_sweeps


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dim", type=int, default=50)
    parser.add_argument("--epochs", type=int, default=20)
    parser.add_argument("--steps", type=int, default=200)
    args = parser.parse_args()

    names = available_backends()
    if "c" not in names:
        print("compiled backend not built; run pip install -e . first")
    graph = build_graph(benchmark_predications(seed=2024))
    split = time_split(graph, TRAIN_CUTOFF, TEST_CUTOFF)
    print(
        f"graph: {graph.n_entities} entities, {len(graph.triples)} triples, "
        f"dim={args.dim}\n"
    )

    rows = []
    for model in ("transe-l2", "distmult", "complex"):
        timing = {}
        for name in names:
            be = get_backend(name)
            timing[name] = bench_steps(be, graph, args.dim, model, n_steps=args.steps)
        rows.append((f"sgd_step[{model}]", timing))
    for model in ("transe-l2", "complex"):
        timing = {}
        for name in names:
            be = get_backend(name)
            timing[name] = bench_sweeps(be, graph, args.dim, model)
        rows.append((f"score_tails[{model}]", timing))
    timing = {}
    for name in names:
        be = get_backend(name)
        timing[name] = bench_train(be, graph, split, args.dim, args.epochs)
    rows.append((f"train[{args.epochs} epochs]", timing))

    width = max(len(label) for label, _ in rows)
    header = f"{'kernel':<{width}} " + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, timing in rows:
        line = f"{label:<{width}} " + "".join(f"{timing[n] * 1e3:>10.2f}ms" for n in names)
        if len(names) == 2:
            line += f"{timing['numpy'] / timing['c']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
