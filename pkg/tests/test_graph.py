import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densekit import (
    DensityValue,
    DuplicateEdgeWarning,
    EmptyGraphError,
    EmptySubsetError,
    Graph,
    GraphError,
    GraphParseError,
    OracleSizeError,
    brute_force_densest,
    density,
    parse_edge_list,
    to_edge_list,
)
from densekit.generators import (
    complete_bipartite,
    complete_graph,
    disjoint_union,
    erdos_renyi,
    path_graph,
)

SAMPLE = "# c\n1 2\n2 1\n3 3\n2 3"


class TestParsing:
    def test_documented_sample(self):
        g = parse_edge_list(SAMPLE)
        assert g.n == 3
        assert g.m == 2
        pairs = {(g.labels[u], g.labels[v]) for u, v, _ in g.edges}
        assert pairs == {(1, 2), (2, 3)}

    def test_weighted_line(self):
        g = parse_edge_list("1 2 3.5", weighted=True)
        assert g.m == 1
        assert g.edges[0][2] == 3.5
        assert g.weighted and not g.signed

    def test_empty_input(self):
        with pytest.raises(EmptyGraphError):
            parse_edge_list("")

    def test_only_self_loops(self):
        with pytest.raises(EmptyGraphError):
            parse_edge_list("5 5\n7 7")

    def test_malformed_line_reports_number(self):
        with pytest.raises(GraphParseError) as exc:
            parse_edge_list("1 2\n1 2 3\n")
        assert exc.value.line_number == 2

    def test_bad_weight(self):
        with pytest.raises(GraphParseError):
            parse_edge_list("1 2 abc", weighted=True)

    def test_duplicate_weighted_edge_warns_and_keeps_first(self):
        with pytest.warns(DuplicateEdgeWarning):
            g = parse_edge_list("1 2 5\n2 1 9", weighted=True)
        assert g.m == 1
        assert g.edges[0][2] == 5.0

    def test_string_labels(self):
        g = parse_edge_list("alice bob\nbob carol")
        assert g.n == 3
        assert g.labels == ["alice", "bob", "carol"]

    def test_negative_weight_sets_signed(self):
        g = parse_edge_list("1 2 -1.5\n2 3 2", weighted=True)
        assert g.signed

    def test_roundtrip_identity(self):
        g = parse_edge_list(SAMPLE)
        again = parse_edge_list(to_edge_list(g))
        assert again == g

    @settings(max_examples=100, deadline=None)
    @given(st.lists(
        st.tuples(st.integers(0, 15), st.integers(0, 15)),
        min_size=1, max_size=40,
    ))
    def test_roundtrip_random(self, pairs):
        text = "\n".join(f"{u} {v}" for u, v in pairs)
        try:
            g = parse_edge_list(text)
        except EmptyGraphError:
            return
        assert parse_edge_list(to_edge_list(g)) == g


class TestGraphInvariants:
    def test_rejects_self_loop(self):
        with pytest.raises(GraphError):
            Graph(2, [(0, 0)])

    def test_rejects_duplicate(self):
        with pytest.raises(GraphError):
            Graph(2, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(GraphError):
            Graph(2, [(0, 2)])

    def test_unweighted_weights_are_one(self):
        with pytest.raises(GraphError):
            Graph(2, [(0, 1, 2)])

    def test_adjacency_consistency(self):
        g = erdos_renyi(10, 0.5, seed=3)
        assert sum(len(a) for a in g.adjacency) == 2 * g.m
        for v, adj in enumerate(g.adjacency):
            for nbr, eid in adj:
                u, w, _ = g.edges[eid]
                assert {u, w} == {v, nbr}


class TestDensity:
    def test_k4_full(self):
        assert density(complete_graph(4), range(4)) == Fraction(6, 4)

    def test_k4_triangle(self):
        assert density(complete_graph(4), [0, 1, 2]) == 1

    def test_weighted_single_edge(self):
        g = Graph(2, [(0, 1, 4)], weighted=True)
        assert density(g, [0, 1]).value == 2.0

    def test_empty_subset(self):
        with pytest.raises(EmptySubsetError):
            density(complete_graph(3), [])

    def test_out_of_range_subset(self):
        with pytest.raises(GraphError):
            density(complete_graph(3), [0, 5])

    def test_whole_graph_is_m_over_n(self):
        g = erdos_renyi(9, 0.4, seed=11)
        dv = density(g, range(g.n))
        assert dv.numerator == g.m and dv.denominator == g.n

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 10), st.integers(0, 10_000))
    def test_density_upper_bound_simple_graphs(self, n, seed):
        g = erdos_renyi(n, 0.6, seed=seed)
        if g.m == 0:
            return
        dv = density(g, range(n))
        # e[S] <= |S| (|S| - 1) / 2 for simple graphs
        assert dv.as_fraction() <= Fraction(n - 1, 2)


class TestDensityValue:
    def test_exact_comparison_no_float_ties(self):
        a = DensityValue(10**17 + 1, 10**17)
        b = DensityValue(1, 1)
        assert a > b  # float division would call them equal

    def test_cross_type_comparison(self):
        assert DensityValue(3, 2) == Fraction(3, 2)
        assert DensityValue(3, 2) > 1
        assert DensityValue(3, 2) < 2.0

    def test_weighted_tolerance(self):
        a = DensityValue(1.0, 1)
        b = DensityValue(1.0 + 1e-15, 1)
        assert a == b

    def test_requires_positive_denominator(self):
        with pytest.raises(ValueError):
            DensityValue(1, 0)

    def test_as_fraction_refuses_floats(self):
        with pytest.raises(ValueError):
            DensityValue(1.5, 2).as_fraction()


class TestBruteForce:
    def test_triangle(self):
        subset, dv = brute_force_densest(complete_graph(3))
        assert subset == (0, 1, 2) and dv == 1

    def test_path3(self):
        subset, dv = brute_force_densest(path_graph(3))
        assert subset == (0, 1, 2)
        assert dv == Fraction(2, 3)
        # every 2-subset gives at most 1/2
        for pair in [(0, 1), (1, 2), (0, 2)]:
            assert density(path_graph(3), pair).as_fraction() <= Fraction(1, 2)

    def test_bipartite_beats_clique(self):
        g = disjoint_union(complete_bipartite(3, 9), complete_graph(5))
        subset, dv = brute_force_densest(g)
        assert subset == tuple(range(12))
        assert dv == Fraction(27, 12)

    def test_size_guard(self):
        g = erdos_renyi(30, 0.1, seed=0)
        with pytest.raises(OracleSizeError):
            brute_force_densest(g)

    def test_tie_break_smaller_cardinality(self):
        # two disjoint triangles: both have density 1, as does their union;
        # the lexicographically smallest smallest-size witness wins
        g = disjoint_union(complete_graph(3), complete_graph(3))
        subset, dv = brute_force_densest(g)
        assert dv == 1
        assert subset == (0, 1, 2)

    def test_weighted(self):
        g = Graph(3, [(0, 1, 10), (1, 2, 1)], weighted=True)
        subset, dv = brute_force_densest(g)
        assert subset == (0, 1)
        assert dv.value == 5.0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 9), st.integers(0, 10_000), st.data())
    def test_dominates_random_subsets(self, n, seed, data):
        g = erdos_renyi(n, 0.5, seed=seed)
        if g.m == 0:
            return
        _, best = brute_force_densest(g)
        subset = data.draw(
            st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True)
        )
        assert not (best < density(g, subset))
