import numpy as np
import pytest

from litkg.embed.sampling import corrupt_batch, sample_negative
from litkg.errors import TrainingError


class TestSampleNegative:
    def test_two_entities_forced_choice(self):
        # With two entities, corrupting (0, r, 1) can only yield (1, r, 1)
        # for a head draw or (0, r, 0) for a tail draw.
        rng = np.random.default_rng(0)
        seen = set()
        for _ in range(200):
            out = sample_negative(rng, (0, 5, 1), entity_count=2)
            assert out != (0, 5, 1)
            seen.add(out)
        assert seen == {(1, 5, 1), (0, 5, 0)}

    def test_never_returns_the_original(self):
        rng = np.random.default_rng(1)
        for _ in range(2000):
            triple = tuple(rng.integers(0, 6, 2)) + (0,)
            triple = (triple[0], 0, triple[1])
            assert sample_negative(rng, triple, entity_count=6) != triple

    def test_filtered_mode_avoids_known_triples(self):
        rng = np.random.default_rng(2)
        true_set = {(0, 0, 1), (2, 0, 1), (0, 0, 3)}
        for _ in range(500):
            out = sample_negative(rng, (0, 0, 1), entity_count=6, true_set=true_set)
            assert out not in true_set

    def test_single_entity_rejected(self):
        rng = np.random.default_rng(3)
        with pytest.raises(TrainingError):
            sample_negative(rng, (0, 0, 0), entity_count=1)

    def test_exhausted_corruptions_raise(self):
        # Every possible corruption of (0, 0, 1) is a known true triple.
        rng = np.random.default_rng(4)
        true_set = {(h, 0, t) for h in range(3) for t in range(3)}
        with pytest.raises(TrainingError, match="no admissible corruption"):
            sample_negative(rng, (0, 0, 1), entity_count=3, true_set=true_set)


class TestCorruptBatch:
    def test_shapes_and_grouping(self):
        rng = np.random.default_rng(5)
        h = np.array([0, 1, 2], dtype=np.int64)
        r = np.array([0, 1, 0], dtype=np.int64)
        t = np.array([3, 4, 5], dtype=np.int64)
        ch, cr, ct = corrupt_batch(rng, h, r, t, entity_count=6, per_positive=4)
        assert ch.shape == (12,)
        np.testing.assert_array_equal(cr, np.repeat(r, 4))

    def test_every_corruption_differs_from_its_source(self):
        rng = np.random.default_rng(6)
        h = np.arange(10, dtype=np.int64)
        r = np.zeros(10, dtype=np.int64)
        t = np.arange(10, dtype=np.int64)[::-1].copy()
        ch, cr, ct = corrupt_batch(rng, h, r, t, entity_count=10, per_positive=8)
        src_h = np.repeat(h, 8)
        src_t = np.repeat(t, 8)
        changed = (ch != src_h) | (ct != src_t)
        assert changed.all()
        # Exactly one side changes per draw.
        assert ((ch != src_h) & (ct != src_t)).sum() == 0

    def test_filtered_batch_avoids_true_set(self):
        rng = np.random.default_rng(7)
        true_set = {(h, 0, t) for h in range(8) for t in range(8) if (h + t) % 3 == 0}
        h = np.array([0, 3, 6], dtype=np.int64)
        r = np.zeros(3, dtype=np.int64)
        t = np.array([3, 0, 6], dtype=np.int64)
        ch, cr, ct = corrupt_batch(
            rng, h, r, t, entity_count=8, per_positive=16, true_set=true_set
        )
        for trip in zip(ch.tolist(), cr.tolist(), ct.tolist()):
            assert trip not in true_set

    def test_head_tail_balance(self):
        rng = np.random.default_rng(8)
        h = np.zeros(10000, dtype=np.int64)
        r = np.zeros(10000, dtype=np.int64)
        t = np.ones(10000, dtype=np.int64)
        ch, _, ct = corrupt_batch(rng, h, r, t, entity_count=50, per_positive=1)
        head_frac = (ch != 0).mean()
        assert 0.48 <= head_frac <= 0.52
