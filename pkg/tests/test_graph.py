import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cheegerlab import (
    WeightedGraph,
    classify,
    cyclomatic,
    degree_profile,
    generate,
    product,
    validate,
    with_random_signature,
)
from cheegerlab.graph import (
    GraphFormatError,
    dumps_graph,
    format_graph_text,
    from_json_dict,
    loads_graph,
    parse_graph_text,
)


def triangle():
    return WeightedGraph.build(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])


class TestValidate:
    def test_triangle_ok(self):
        assert validate(triangle()) == []

    def test_self_loop(self):
        g = WeightedGraph.build(2, [(0, 0, 1), (0, 1, 1)])
        assert any("self-loop" in p for p in validate(g))

    def test_nonpositive_measure(self):
        g = WeightedGraph.build(2, [(0, 1, 1)], mu=[1.0, 0.0])
        assert any("nonpositive measure" in p for p in validate(g))

    def test_duplicate_edge(self):
        g = WeightedGraph.build(2, [(0, 1, 1), (1, 0, 2)])
        assert any("duplicate" in p for p in validate(g))

    def test_isolated_vertex(self):
        g = WeightedGraph.build(3, [(0, 1, 1)])
        assert any("isolated vertex 2" in p for p in validate(g))

    def test_nonpositive_weight_and_bad_sigma(self):
        g = WeightedGraph.build(2, [(0, 1, -2.0, 3)])
        problems = validate(g)
        assert any("weight" in p for p in problems)
        assert any("sigma" in p for p in problems)


class TestDegreeProfile:
    def test_k3_mu_degree(self):
        prof = degree_profile(triangle())
        assert prof.d == (2.0, 2.0, 2.0)
        assert prof.tau == 1.0 and prof.tau_min == 1.0

    def test_path3_unit_measure(self):
        g = WeightedGraph.build(3, [(0, 1, 1), (1, 2, 1)], mu=[1, 1, 1])
        prof = degree_profile(g)
        assert prof.d == (1.0, 2.0, 1.0)
        assert prof.tau == 2.0 and prof.tau_min == 1.0

    def test_single_edge_weighted(self):
        g = WeightedGraph.build(2, [(0, 1, 3)], mu=[1, 6])
        prof = degree_profile(g)
        assert prof.tau == 3.0 and prof.tau_min == 0.5


class TestStructure:
    def test_cyclomatic_tree_and_cycle(self):
        assert cyclomatic(generate("star", 5)) == 0
        assert cyclomatic(generate("cycle", 5)) == 1

    def test_cyclomatic_gn(self):
        g = generate("gn", 3)
        assert g.n == 8 and g.m == 8
        assert cyclomatic(g) == 1

    def test_cyclomatic_additive_over_components(self):
        # C_3 and C_4 side by side: ell = 1 + 1 with component count 2
        edges = [(0, 1, 1), (1, 2, 1), (0, 2, 1)]
        edges += [(3, 4, 1), (4, 5, 1), (5, 6, 1), (3, 6, 1)]
        g = WeightedGraph.build(7, edges)
        assert classify(g).component_count == 2
        assert cyclomatic(g) == 2

    def test_classify_disconnected(self):
        g = WeightedGraph.build(4, [(0, 1, 1), (2, 3, 1)])
        cls = classify(g)
        assert cls.component_count == 2 and not cls.is_connected
        assert cls.component_labels == (0, 0, 1, 1)

    def test_classify_star(self):
        cls = classify(generate("star", 4))
        assert cls.is_tree and cls.is_bipartite
        assert cls.bipartition_labels == (0, 1, 1, 1)

    def test_classify_odd_cycle_not_bipartite(self):
        assert not classify(triangle()).is_bipartite


class TestProduct:
    def test_p2_times_p2_is_c4(self):
        p2 = WeightedGraph.build(2, [(0, 1, 1)], mu="unit")
        g = product(p2, p2)
        assert g.n == 4
        assert [(e.u, e.v) for e in g.edges] == [(0, 1), (0, 2), (1, 3), (2, 3)]
        assert all(e.w == 1.0 for e in g.edges)
        assert g.mu == (1.0, 1.0, 1.0, 1.0)

    def test_kappa_additivity(self):
        pa = WeightedGraph.build(2, [(0, 1, 1)], mu="unit", kappa=[1, 0])
        pb = WeightedGraph.build(2, [(0, 1, 1)], mu="unit", kappa=[0, 2])
        assert product(pa, pb).kappa == (1.0, 3.0, 0.0, 2.0)

    def test_rejects_non_unit_measure(self):
        with pytest.raises(ValueError, match="unit vertex measure"):
            product(triangle(), triangle())

    def test_rejects_signed(self):
        s = WeightedGraph.build(2, [(0, 1, 1, -1)], mu="unit")
        with pytest.raises(ValueError, match="unsigned"):
            product(s, s)

    @given(st.integers(0, 2**32), st.integers(2, 4), st.integers(2, 4))
    @settings(max_examples=25, deadline=None)
    def test_product_counts(self, seed, n1, n2):
        g1 = generate("random_tree", n1, seed, mu="unit")
        g2 = generate("random_connected", n2, seed + 1, mu="unit")
        g = product(g1, g2)
        assert g.n == n1 * n2
        assert g.m == n1 * g2.m + n2 * g1.m


class TestGenerate:
    def test_gn3_matches_figure(self):
        g = generate("gn", 3, a=1.1)
        weights = {(e.u, e.v): e.w for e in g.edges}
        a = 1.1
        assert weights[(0, 1)] == 1.0
        assert weights[(1, 2)] == a
        assert weights[(2, 3)] == a * a
        assert weights[(3, 4)] == a * a
        assert weights[(4, 5)] == a
        assert weights[(5, 6)] == 1.0
        assert weights[(0, 6)] == 1.0 and weights[(3, 7)] == 1.0

    def test_gn_connected_cyclomatic_one(self):
        for n in range(3, 8):
            g = generate("gn", n)
            assert classify(g).is_connected and cyclomatic(g) == 1

    def test_gn_rejects_small_n(self):
        with pytest.raises(ValueError):
            generate("gn", 2)

    def test_path2(self):
        g = generate("path", 2)
        assert g.edges == (g.edges[0],)
        assert g.edges[0].w == 1.0
        assert g.mu == (1.0, 1.0)
        assert g.kappa == (0.0, 0.0)

    def test_random_tree_deterministic_and_tree(self):
        g1 = generate("random_tree", 7, seed=123)
        g2 = generate("random_tree", 7, seed=123)
        assert g1 == g2
        assert classify(g1).is_tree

    def test_random_connected_connected(self):
        for i in range(20):
            g = generate("random_connected", 4 + i % 7, seed=i, p=0.2)
            assert classify(g).is_connected
            assert validate(g) == []

    def test_random_bipartite_bipartite(self):
        for i in range(10):
            g = generate("random_bipartite", 5 + i % 4, seed=i, p=0.4)
            assert classify(g).is_bipartite
            assert validate(g) == []

    def test_random_weights_in_range(self):
        g = generate("random_tree", 10, seed=5)
        assert all(0.5 <= e.w <= 2.0 for e in g.edges)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            generate("petersen", 10)

    def test_signature_randomization(self):
        g = with_random_signature(generate("cycle", 8), seed=3)
        assert with_random_signature(generate("cycle", 8), seed=3) == g
        assert {e.sigma for e in g.edges} == {-1, 1}


class TestSerialization:
    def test_json_round_trip(self):
        g = with_random_signature(generate("random_connected", 6, seed=9), seed=4)
        assert from_json_dict(json.loads(dumps_graph(g))) == g

    def test_json_defaults(self):
        g = from_json_dict({"n": 2, "edges": [{"u": 0, "v": 1, "w": 2.5}]})
        assert g.edges[0].sigma == 1
        assert g.mu == (2.5, 2.5)  # "degree" default
        assert g.kappa == (0.0, 0.0)

    def test_text_round_trip(self):
        g = generate("random_connected", 5, seed=2)
        assert parse_graph_text(format_graph_text(g)) == g

    def test_text_header(self):
        g = parse_graph_text("n 3 mu 1 1 1\n0 1 2.0\n1 2 0.5 -1\n")
        assert g.mu == (1.0, 1.0, 1.0)
        assert g.edges[1].sigma == -1

    def test_malformed_json(self):
        with pytest.raises(GraphFormatError):
            loads_graph("{not json")

    def test_malformed_header(self):
        with pytest.raises(GraphFormatError):
            parse_graph_text("vertices 3\n0 1 1\n")

    def test_sniffing(self):
        g = generate("path", 3)
        assert loads_graph(dumps_graph(g)) == g
        assert loads_graph(format_graph_text(g)) == g
