import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from litkg.errors import FilterError
from litkg.filtering import (
    ContingencyTable,
    PairCounts,
    apply_confidence,
    apply_cutoff,
    exclude_semtypes,
    g2,
    score_triples,
)
from litkg.graph import build_graph
from litkg.ingest import ScoreTable, SemTypeRuleSet, Whitelist

from .conftest import make_pred


class TestG2:
    def test_reference_table(self):
        # Oracle: expectation table [[12,18],[28,42]] from marginal products,
        # summed in 50-digit arithmetic.
        value = g2(ContingencyTable(10, 20, 30, 40))
        assert value == pytest.approx(0.80434864609648637, rel=1e-12)

    def test_exact_independence_is_exactly_zero(self):
        assert g2(ContingencyTable(10, 10, 10, 10)) == 0.0
        assert g2(ContingencyTable(10, 20, 30, 60)) == 0.0

    def test_zero_cell_contributes_zero(self):
        value = g2(ContingencyTable(0, 10, 10, 10))
        assert math.isfinite(value)
        assert value == pytest.approx(10.464962875290957, rel=1e-12)

    def test_all_zero_table_rejected(self):
        with pytest.raises(FilterError, match="all-zero"):
            g2(ContingencyTable(0, 0, 0, 0))

    def test_negative_cell_rejected(self):
        with pytest.raises(FilterError, match="negative"):
            g2(ContingencyTable(-1, 2, 3, 4))

    @given(
        st.integers(0, 500), st.integers(0, 500), st.integers(0, 500), st.integers(0, 500)
    )
    @settings(max_examples=200, deadline=None)
    def test_non_negative_and_transpose_symmetric(self, a, b, c, d):
        if a + b + c + d == 0:
            return
        value = g2(ContingencyTable(a, b, c, d))
        assert value >= 0.0
        # Transposing the table swaps the off-diagonal cells.
        assert g2(ContingencyTable(a, c, b, d)) == pytest.approx(value, rel=1e-12, abs=1e-12)

    @given(st.integers(1, 50), st.integers(1, 50), st.integers(1, 20))
    @settings(max_examples=100, deadline=None)
    def test_proportional_rows_give_zero(self, a, b, m):
        # Row 2 = m * row 1 means observed equals expected cellwise.
        assert g2(ContingencyTable(a, b, m * a, m * b)) == 0.0


class TestPairCounts:
    def test_margins(self):
        preds = [
            make_pred("A", "R1", "B", pmid="1"),
            make_pred("A", "R2", "B", pmid="2"),
            make_pred("A", "R1", "C", pmid="3"),
            make_pred("D", "R1", "B", pmid="4"),
        ]
        counts = PairCounts.from_predications(preds)
        table = counts.table("A", "B")
        assert (table.o11, table.o12, table.o21, table.o22) == (2, 1, 1, 0)
        assert counts.table("D", "C").o11 == 0

    def test_duplicate_instances_counted_not_deduplicated(self):
        preds = [make_pred("A", "R1", "B", pmid=str(i)) for i in range(5)]
        counts = PairCounts.from_predications(preds)
        assert counts.table("A", "B").o11 == 5


class TestExcludeSemtypes:
    def test_excluded_subject_type_dropped(self):
        rules = SemTypeRuleSet(frozenset({"acty"}))
        keep = make_pred("C01", "TREATS", "C02")
        drop = make_pred("C03", "TREATS", "C02", subject_type="acty")
        assert exclude_semtypes([keep, drop], rules) == [keep]

    def test_excluded_object_type_dropped(self):
        rules = SemTypeRuleSet(frozenset({"inpr"}))
        drop = make_pred("C01", "TREATS", "C04", object_type="inpr")
        assert exclude_semtypes([drop], rules) == []

    def test_empty_rule_set_is_identity(self):
        preds = [make_pred("C01", "TREATS", "C02", subject_type="acty")]
        assert exclude_semtypes(preds, SemTypeRuleSet(frozenset())) == preds


class TestScoreTriples:
    def test_dominant_triple_fuses_to_three(self):
        # C00->C01 co-occurs 20 times and also has the highest tail
        # in-degree and head out-degree, so all three raw scores are maximal
        # and the fused score hits the 3.0 endpoint.
        preds = [make_pred("C00", "R", "C01", pmid=str(i)) for i in range(20)]
        preds += [make_pred("C00", "R", f"C1{i}", pmid=f"a{i}") for i in range(3)]
        preds += [make_pred(f"C2{i}", "R", "C01", pmid=f"b{i}") for i in range(3)]
        preds += [make_pred(f"D{i}", "R", f"E{i}", pmid=f"c{i}") for i in range(10)]
        g = build_graph(preds)
        counts = PairCounts.from_predications(preds)
        scores = score_triples(g, counts)
        by_key = {t.key(): s for t, s in zip(g.triples, scores)}
        top = by_key[(g.entity_index["C00"], 0, g.entity_index["C01"])]
        assert top.fused == pytest.approx(3.0)
        assert all(s.fused <= 3.0 + 1e-12 for s in scores)

    def test_identical_raw_scores_normalize_to_zero(self):
        # A 3-cycle: every entity has in/out degree 1 and every pair table is
        # identical, so min-max normalization is degenerate everywhere.
        preds = [
            make_pred("A", "R", "B", pmid="1"),
            make_pred("B", "R", "C", pmid="2"),
            make_pred("C", "R", "A", pmid="3"),
        ]
        g = build_graph(preds)
        scores = score_triples(g, PairCounts.from_predications(preds))
        assert all(s.fused == 0.0 for s in scores)

    def test_single_triple_corpus_degenerates_to_zero(self):
        preds = [make_pred("A", "R", "B")]
        g = build_graph(preds)
        scores = score_triples(g, PairCounts.from_predications(preds))
        assert len(scores) == 1
        assert scores[0].fused == 0.0

    def test_five_triple_ranking_matches_exhaustive_oracle(self):
        preds = [
            make_pred("A", "R", "B", pmid="1"),
            make_pred("A", "R", "B", pmid="2"),
            make_pred("A", "R", "C", pmid="3"),
            make_pred("B", "R", "C", pmid="4"),
            make_pred("D", "S", "B", pmid="5"),
            make_pred("C", "S", "D", pmid="6"),
        ]
        g = build_graph(preds)
        counts = PairCounts.from_predications(preds)
        scores = score_triples(g, counts)

        # Independent oracle: recount raw scores per triple by exhaustive
        # enumeration over the predication list, then min-max by hand.
        keys = [
            (g.entities[t.head].cui, g.relations[t.relation].predicate, g.entities[t.tail].cui)
            for t in g.triples
        ]
        distinct = {(p.subject.cui, p.predicate.predicate, p.object.cui) for p in preds}
        raw_in = [sum(1 for (s, r, o) in distinct if o == key[2]) for key in keys]
        raw_out = [sum(1 for (s, r, o) in distinct if s == key[0]) for key in keys]

        def oracle_g2(subj, obj):
            n = len(preds)
            o11 = sum(1 for p in preds if p.subject.cui == subj and p.object.cui == obj)
            o12 = sum(1 for p in preds if p.subject.cui == subj and p.object.cui != obj)
            o21 = sum(1 for p in preds if p.subject.cui != subj and p.object.cui == obj)
            o22 = n - o11 - o12 - o21
            total = 0.0
            for o, e in [
                (o11, (o11 + o12) * (o11 + o21) / n),
                (o12, (o11 + o12) * (o12 + o22) / n),
                (o21, (o21 + o22) * (o11 + o21) / n),
                (o22, (o21 + o22) * (o12 + o22) / n),
            ]:
                if o:
                    total += o * math.log(o / e)
            return 2.0 * total

        raw_g2 = [oracle_g2(key[0], key[2]) for key in keys]

        def minmax(vals):
            lo, hi = min(vals), max(vals)
            if hi == lo:
                return [0.0] * len(vals)
            return [(v - lo) / (hi - lo) for v in vals]

        fused_oracle = [
            a + b + c
            for a, b, c in zip(minmax(raw_in), minmax(raw_out), minmax(raw_g2))
        ]
        fused_actual = [s.fused for s in scores]
        assert fused_actual == pytest.approx(fused_oracle, rel=1e-9)
        assert np.argsort(fused_actual).tolist() == np.argsort(fused_oracle).tolist()

    def test_fused_order_invariant_under_positive_affine_rescaling(self):
        values = np.array([3.0, 1.0, 4.0, 1.5, 9.0])
        from litkg.filtering import _minmax

        base = _minmax(values)
        rescaled = _minmax(5.0 * values + 11.0)
        assert np.allclose(base, rescaled)


def _scored_graph():
    preds = [
        make_pred("C0002395", "R", "X1", pmid="1"),
        make_pred("X2", "R", "X3", pmid="2"),
        make_pred("X2", "R", "X4", pmid="3"),
        make_pred("X3", "R", "X4", pmid="4"),
        make_pred("X4", "R", "X5", pmid="5"),
    ]
    g = build_graph(preds)
    scores = score_triples(g, PairCounts.from_predications(preds))
    return g, scores


class TestApplyCutoff:
    def test_whitelisted_triples_never_compete(self):
        g, scores = _scored_graph()
        wl = Whitelist(frozenset({"C0002395"}))
        kept = apply_cutoff(g, scores, wl, k=1)
        assert len(kept) == 1
        assert g.entities[kept[0].head].cui == "C0002395"

    def test_k_at_or_above_total_is_identity(self):
        g, scores = _scored_graph()
        wl = Whitelist(frozenset({"C0002395"}))
        assert apply_cutoff(g, scores, wl, k=len(g.triples)) == g.triples
        assert apply_cutoff(g, scores, wl, k=10 * len(g.triples)) == g.triples

    def test_k_below_protected_count_is_hard_error(self):
        g, scores = _scored_graph()
        wl = Whitelist(frozenset({"C0002395", "X2"}))
        protected = sum(
            1
            for t in g.triples
            if g.entities[t.head].cui in wl.protected_cuis
            or g.entities[t.tail].cui in wl.protected_cuis
        )
        with pytest.raises(FilterError) as err:
            apply_cutoff(g, scores, wl, k=protected - 1)
        assert str(protected) in str(err.value)
        assert str(protected - 1) in str(err.value)

    def test_output_always_contains_every_whitelisted_triple(self):
        g, scores = _scored_graph()
        wl = Whitelist(frozenset({"C0002395"}))
        for k in range(1, len(g.triples) + 1):
            kept = apply_cutoff(g, scores, wl, k)
            assert len(kept) == k
            assert any(g.entities[t.head].cui == "C0002395" for t in kept)

    def test_deterministic_boundary_tie_break(self):
        preds = [make_pred(f"A{i}", "R", f"B{i}", pmid=str(i)) for i in range(4)]
        g = build_graph(preds)
        scores = score_triples(g, PairCounts.from_predications(preds))
        wl = Whitelist(frozenset({"ZZZ"}))
        # All fused scores tie at zero; the (head, relation, tail) index order
        # decides, so the first two triples by index survive.
        kept = apply_cutoff(g, scores, wl, k=2)
        assert [t.key() for t in kept] == [g.triples[0].key(), g.triples[1].key()]


class TestApplyConfidence:
    def _table(self):
        return ScoreTable(
            scores={
                ("C01", "TREATS", "C02", "11"): 0.3,
                ("C03", "TREATS", "C02", "12"): 0.8,
            }
        )

    def test_below_threshold_dropped(self):
        low = make_pred("C01", "TREATS", "C02", pmid="11")
        high = make_pred("C03", "TREATS", "C02", pmid="12")
        kept = apply_confidence([low, high], self._table(), threshold=0.5)
        assert kept == [high]

    def test_missing_score_fails_open(self):
        unscored = make_pred("C09", "TREATS", "C02", pmid="77")
        assert apply_confidence([unscored], self._table(), threshold=0.5) == [unscored]

    def test_strict_mode_drops_unscored(self):
        unscored = make_pred("C09", "TREATS", "C02", pmid="77")
        assert apply_confidence([unscored], self._table(), threshold=0.5, strict=True) == []

    def test_zero_threshold_is_identity(self):
        preds = [
            make_pred("C01", "TREATS", "C02", pmid="11"),
            make_pred("C09", "TREATS", "C02", pmid="77"),
        ]
        assert apply_confidence(preds, self._table(), threshold=0.0) == preds

    def test_threshold_out_of_range_rejected(self):
        with pytest.raises(FilterError):
            apply_confidence([], self._table(), threshold=1.5)
