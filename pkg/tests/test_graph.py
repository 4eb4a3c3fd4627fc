import datetime as dt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from litkg.errors import GraphError
from litkg.graph import (
    EntityId,
    build_graph,
    degree_centrality,
    dump_graph,
    load_graph,
)

from .conftest import make_pred


class TestBuildGraph:
    def test_duplicates_collapse_keeping_earliest_date(self):
        preds = [
            make_pred("C01", "TREATS", "C02", date="2018-03-01", pmid="2"),
            make_pred("C01", "TREATS", "C02", date="2015-07-09", pmid="1"),
        ]
        g = build_graph(preds)
        assert len(g.triples) == 1
        assert g.triples[0].earliest_date == dt.date(2015, 7, 9)

    def test_empty_stream_yields_empty_graph(self):
        g = build_graph([])
        assert g.n_entities == 0
        assert g.n_relations == 0
        assert g.triples == []

    def test_indices_assigned_first_seen_order(self):
        preds = [
            make_pred("C02", "TREATS", "C01"),
            make_pred("C01", "PREVENTS", "C03"),
        ]
        g = build_graph(preds)
        assert g.entity_index == {"C02": 0, "C01": 1, "C03": 2}
        assert g.relation_index == {"TREATS": 0, "PREVENTS": 1}

    def test_adjacency_is_double_entry_of_triples(self):
        preds = [
            make_pred("A", "R1", "B"),
            make_pred("A", "R1", "C"),
            make_pred("B", "R2", "C"),
            make_pred("C", "R1", "C"),
        ]
        g = build_graph(preds)
        out_entries = [
            (h, r, t) for h, pairs in enumerate(g.out_index) for r, t in pairs
        ]
        in_entries = [
            (h, r, t) for t, pairs in enumerate(g.in_index) for r, h in pairs
        ]
        assert sorted(out_entries) == sorted(t.key() for t in g.triples)
        assert sorted(in_entries) == sorted(t.key() for t in g.triples)

    def test_entity_metadata_kept_from_first_occurrence(self):
        first = make_pred("C01", "TREATS", "C02")
        second = make_pred("C01", "TREATS", "C03")
        g = build_graph([first, second])
        assert g.entities[g.entity_index["C01"]].name == "c01"


class TestDegreeCentrality:
    def test_small_graph_counts(self):
        g = build_graph(
            [make_pred("A", "r", "B"), make_pred("A", "r", "C"), make_pred("B", "r", "C")]
        )
        a_in, a_out = degree_centrality(g)
        ix = g.entity_index
        assert a_out[ix["A"]] == 2
        assert a_in[ix["A"]] == 0
        assert a_in[ix["C"]] == 2

    def test_empty_graph_all_zero(self):
        a_in, a_out = degree_centrality(build_graph([]))
        assert a_in.size == 0 and a_out.size == 0

    def test_self_loop_counts_once_per_direction(self):
        g = build_graph([make_pred("A", "r", "A")])
        a_in, a_out = degree_centrality(g)
        assert a_in[0] == 1
        assert a_out[0] == 1


@st.composite
def predication_lists(draw):
    n = draw(st.integers(min_value=0, max_value=40))
    preds = []
    for i in range(n):
        s = draw(st.sampled_from("ABCDEFG"))
        o = draw(st.sampled_from("ABCDEFG"))
        p = draw(st.sampled_from(["R1", "R2", "R3"]))
        day = draw(st.integers(min_value=0, max_value=3650))
        preds.append(
            make_pred(
                s,
                p,
                o,
                date=(dt.date(2010, 1, 1) + dt.timedelta(days=day)).isoformat(),
                pmid=str(i),
            )
        )
    return preds


class TestGraphProperties:
    @given(predication_lists())
    @settings(max_examples=60, deadline=None)
    def test_degree_sums_equal_triple_count(self, preds):
        g = build_graph(preds)
        a_in, a_out = degree_centrality(g)
        assert int(a_in.sum()) == len(g.triples)
        assert int(a_out.sum()) == len(g.triples)

    @given(preds=predication_lists())
    @settings(max_examples=40, deadline=None)
    def test_dump_load_round_trip(self, preds, tmp_path_factory):
        g = build_graph(preds)
        path = tmp_path_factory.mktemp("dump") / "graph.tsv"
        dump_graph(g, path)
        g2 = load_graph(path)
        assert g2.entity_index == g.entity_index
        assert g2.relation_index == g.relation_index
        assert [t.key() for t in g2.triples] == [t.key() for t in g.triples]
        assert [t.earliest_date for t in g2.triples] == [
            t.earliest_date for t in g.triples
        ]

    def test_rebuild_from_own_dump_is_idempotent(self, tmp_path):
        g = build_graph(
            [
                make_pred("C01", "TREATS", "C02", date="2014-01-02"),
                make_pred("C03", "AFFECTS", "C01", date="2016-11-30"),
                make_pred("C01", "TREATS", "C02", date="2019-05-05"),
            ]
        )
        first = tmp_path / "one.tsv"
        second = tmp_path / "two.tsv"
        dump_graph(g, first)
        dump_graph(load_graph(first), second)
        assert first.read_bytes() == second.read_bytes()


class TestDumpValidation:
    def test_bad_column_count_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("C01\tTREATS\tC02\n", encoding="utf-8")
        with pytest.raises(GraphError, match="4 columns"):
            load_graph(path)

    def test_bad_date_rejected_with_line_number(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("C01\tTREATS\tC02\t2019-13-01\n", encoding="utf-8")
        with pytest.raises(GraphError, match="line 1"):
            load_graph(path)

    def test_duplicate_triple_rejected(self, tmp_path):
        path = tmp_path / "dup.tsv"
        path.write_text(
            "C01\tTREATS\tC02\t2019-01-01\nC01\tTREATS\tC02\t2020-01-01\n",
            encoding="utf-8",
        )
        with pytest.raises(GraphError, match="duplicate"):
            load_graph(path)


class TestEntityValidation:
    def test_empty_cui_rejected(self):
        with pytest.raises(GraphError):
            EntityId("")
