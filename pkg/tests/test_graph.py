import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homodiff import (
    EdgeListError,
    NodeIdMap,
    export_edge_list,
    graph_from_pairs,
    load_edge_list,
)
from helpers import random_graph


def adjacency_oracle(pairs, n):
    """Neighbor sets built pair by pair, ignoring loops."""
    nbrs = [set() for _ in range(n)]
    for u, v in pairs:
        if u == v:
            continue
        nbrs[u].add(v)
        nbrs[v].add(u)
    return nbrs


class TestLoadEdgeList:
    def test_basic_csv(self):
        g, idmap, stats = load_edge_list(["# header", "a,b", "", "b,c", "a,c"])
        assert g.node_count == 3
        assert g.edge_count == 3
        assert stats.data_lines == 3
        assert stats.comment_lines == 1
        assert idmap.externals == ["a", "b", "c"]

    def test_first_appearance_indexing(self):
        _, idmap, _ = load_edge_list(["x,y", "z,x"])
        assert idmap.index_of("x") == 0
        assert idmap.index_of("y") == 1
        assert idmap.index_of("z") == 2
        assert idmap.get("missing") is None
        with pytest.raises(KeyError):
            idmap.index_of("missing")

    def test_self_loop_skipped_but_endpoint_indexed(self):
        g, idmap, stats = load_edge_list(["a,a", "a,b"])
        assert stats.self_loops_skipped == 1
        assert g.edge_count == 1
        # the loop line still introduced 'a' first
        assert idmap.index_of("a") == 0
        assert g.node_count == 2

    def test_duplicates_collapse(self):
        g, _, stats = load_edge_list(["a,b", "b,a", "a,b"])
        assert g.edge_count == 1
        assert stats.duplicates_collapsed == 2

    def test_duplicate_error_policy(self):
        with pytest.raises(EdgeListError):
            load_edge_list(["a,b", "c,d", "b,a"], duplicate_policy="error")

    def test_unknown_duplicate_policy(self):
        with pytest.raises(ValueError):
            load_edge_list(["a,b"], duplicate_policy="whatever")

    def test_third_column_ignored(self):
        g, _, _ = load_edge_list(["a,b,17", "b,c,0.25"])
        assert g.edge_count == 2

    def test_malformed_line_reported_with_number(self):
        with pytest.raises(EdgeListError) as exc:
            load_edge_list(["a,b", "lonely"])
        assert "line 2" in str(exc.value)

    def test_too_many_fields_rejected(self):
        with pytest.raises(EdgeListError):
            load_edge_list(["a,b,1,extra"])

    def test_empty_input_rejected(self):
        with pytest.raises(EdgeListError):
            load_edge_list(["# only comments", ""])

    def test_whitespace_delimiter_merges_runs(self):
        g, _, _ = load_edge_list(["a b", "b   c"], delimiter=" ")
        assert g.edge_count == 2

    def test_tab_delimiter(self):
        g, _, _ = load_edge_list(["a\tb"], delimiter="\t")
        assert g.edge_count == 1

    def test_reads_from_path(self, tmp_path):
        p = tmp_path / "edges.csv"
        p.write_text("u,v\nv,w\n")
        g, _, _ = load_edge_list(p)
        assert g.node_count == 3
        assert g.edge_count == 2


class TestGraphStructure:
    def test_neighbors_sorted_and_degrees(self):
        g, _, _ = load_edge_list(["a,c", "a,b", "b,c", "c,d"])
        # indices by first appearance: a=0, c=1, b=2, d=3
        assert g.neighbors(0).tolist() == [1, 2]
        assert g.neighbors(1).tolist() == [0, 2, 3]
        assert g.degrees.tolist() == [2, 3, 2, 1]
        assert g.degrees.sum() == 2 * g.edge_count

    def test_neighbors_bounds_checked(self):
        g, _ = graph_from_pairs(np.array([0]), np.array([1]), 2)
        with pytest.raises(IndexError):
            g.neighbors(2)
        with pytest.raises(IndexError):
            g.neighbors(-1)

    def test_neighbors_read_only(self):
        g, _ = graph_from_pairs(np.array([0]), np.array([1]), 2)
        with pytest.raises(ValueError):
            g.neighbors(0)[0] = 9

    def test_adjacency_symmetric_binary(self):
        rng = np.random.default_rng(5)
        g = random_graph(rng, 40, 0.15)
        a = g.adjacency
        assert (a != a.T).nnz == 0
        assert np.array_equal(np.asarray(a.sum(axis=1)).ravel(), g.degrees)
        if a.nnz:
            assert a.data.max() == 1.0 and a.data.min() == 1.0

    def test_equality_ignores_input_orientation(self):
        g1, _ = graph_from_pairs(np.array([0, 1]), np.array([1, 2]), 3)
        g2, _ = graph_from_pairs(np.array([1, 2]), np.array([0, 1]), 3)
        assert g1 == g2

    def test_canonicalization_and_dedup_count(self):
        g, dups = graph_from_pairs(np.array([5, 0, 5]), np.array([0, 5, 0]), 6)
        assert dups == 2
        assert g.edge_count == 1
        assert g.neighbors(5).tolist() == [0]

    def test_self_loops_rejected_at_this_layer(self):
        with pytest.raises(ValueError):
            graph_from_pairs(np.array([3]), np.array([3]), 4)

    def test_isolated_nodes_have_empty_neighborhoods(self):
        g, _ = graph_from_pairs(np.array([0]), np.array([1]), 5)
        assert g.neighbors(4).size == 0
        assert g.degrees.tolist() == [1, 1, 0, 0, 0]


class TestExport:
    def test_external_edge_set_survives_round_trip(self, tmp_path):
        lines = ["n4,n2", "n3,n1", "n2,n3", "n1,n2"]
        g, idmap, _ = load_edge_list(lines)
        out = tmp_path / "out.csv"
        export_edge_list(g, idmap, out)
        g2, idmap2, stats2 = load_edge_list(out)
        assert stats2.data_lines == g.edge_count
        assert _external_edges(g, idmap) == _external_edges(g2, idmap2)

    def test_round_trip_preserves_indexing_when_already_ordered(self, tmp_path):
        # path graph fed in index order keeps the same internal ids on reload
        g, idmap, _ = load_edge_list(["a,b", "b,c", "c,d"])
        out = tmp_path / "path.csv"
        export_edge_list(g, idmap, out)
        g2, _, _ = load_edge_list(out)
        assert g == g2

    def test_export_is_sorted_and_newline_terminated(self, tmp_path):
        g, idmap, _ = load_edge_list(["b,c", "a,b"])
        out = tmp_path / "sorted.csv"
        export_edge_list(g, idmap, out)
        text = out.read_text()
        assert text.endswith("\n")
        rows = text.strip().splitlines()
        assert rows == ["b,c", "b,a"] or rows == ["b,a", "b,c"]


def _external_edges(g, idmap):
    out = set()
    for x in range(g.node_count):
        for y in g.neighbors(x):
            if x < int(y):
                out.add(frozenset((idmap.external_of(x), idmap.external_of(int(y)))))
    return out


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_random_pairs_match_brute_force(data):
    n = data.draw(st.integers(2, 24))
    pairs = data.draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
                lambda t: t[0] != t[1]
            ),
            max_size=60,
        )
    )
    u = np.array([p[0] for p in pairs], dtype=np.int64)
    v = np.array([p[1] for p in pairs], dtype=np.int64)
    g, dups = graph_from_pairs(u, v, n)
    oracle = adjacency_oracle(pairs, n)
    assert g.edge_count == len({frozenset(p) for p in pairs})
    assert dups == len(pairs) - g.edge_count
    for x in range(n):
        assert g.neighbors(x).tolist() == sorted(oracle[x])
    assert g.degrees.sum() == 2 * g.edge_count
