"""Negative sampling by head/tail corruption.

Each corruption replaces the head with probability one half, otherwise the
tail, drawing the replacement uniformly over all entities and redrawing
while the result reproduces the original triple.  Corruptions that happen
to be true triples elsewhere in the graph are kept by default; pass the
known-true set only when filtered sampling is requested.
"""

from __future__ import annotations

import numpy as np

from ..errors import TrainingError

_MAX_REDRAWS = 100


def sample_negative(
    rng: np.random.Generator,
    triple: tuple[int, int, int],
    entity_count: int,
    true_set: frozenset | set | None = None,
) -> tuple[int, int, int]:
    """One corrupted triple, guaranteed different from the input."""
    if entity_count < 2:
        raise TrainingError("negative sampling needs at least 2 entities")
    h, r, t = triple
    corrupt_head = rng.random() < 0.5
    original = h if corrupt_head else t
    for _ in range(_MAX_REDRAWS):
        e = int(rng.integers(entity_count))
        if e == original:
            continue
        candidate = (e, r, t) if corrupt_head else (h, r, e)
        if true_set is not None and candidate in true_set:
            continue
        return candidate
    # Uniform redraws exhausted; probe deterministically from the last draw.
    for offset in range(1, entity_count):
        e = (original + offset) % entity_count
        candidate = (e, r, t) if corrupt_head else (h, r, e)
        if true_set is None or candidate not in true_set:
            return candidate
    raise TrainingError(f"no admissible corruption exists for {triple}")


def corrupt_batch(
    rng: np.random.Generator,
    h: np.ndarray,
    r: np.ndarray,
    t: np.ndarray,
    entity_count: int,
    per_positive: int,
    true_set: frozenset | set | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized corruption: ``per_positive`` negatives for each positive.

    Output arrays have length len(h) * per_positive, grouped by positive.
    Sampling semantics match sample_negative.
    """
    if entity_count < 2:
        raise TrainingError("negative sampling needs at least 2 entities")
    hh = np.repeat(h, per_positive)
    rr = np.repeat(r, per_positive)
    tt = np.repeat(t, per_positive)
    n = hh.shape[0]
    corrupt_head = rng.random(n) < 0.5
    original = np.where(corrupt_head, hh, tt)
    repl = rng.integers(entity_count, size=n)
    collide = repl == original
    for _ in range(_MAX_REDRAWS):
        if not collide.any():
            break
        repl[collide] = rng.integers(entity_count, size=int(collide.sum()))
        collide = repl == original
    if collide.any():
        repl[collide] = (repl[collide] + 1) % entity_count

    ch = np.where(corrupt_head, repl, hh)
    ct = np.where(corrupt_head, tt, repl)
    if true_set is not None:
        # Filtered mode redraws per element; slow path, off by default.
        for i in range(n):
            if (ch[i], rr[i], ct[i]) in true_set:
                ch[i], _, ct[i] = sample_negative(
                    rng, (hh[i], rr[i], tt[i]), entity_count, true_set
                )
    return ch, rr, ct
