from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from signedflow.flows import Z2xZ3, Zk, boundary, default_orientation, is_flow, is_nowhere_zero, support_sign
from signedflow.graph import SignedGraph
from signedflow.oracle import (
    Caps,
    CapError,
    FlowQuery,
    count_restricted_flows,
    count_restricted_flows_direct,
    cut_indicator,
    flow_number,
    frustration_index,
    has_nz_z_flow,
    nz_z_flow_obstruction,
    rigid_zero_edges,
    search_flow,
    search_integer_flow,
    similar,
)
from signedflow.search import run_search

from conftest import k4, signed_graphs, triangle

NEG_LOOP = SignedGraph.from_edges(1, [(0, 0, -1)])
TWO_NEG_LOOPS = SignedGraph.from_edges(1, [(0, 0, -1), (0, 0, -1)])


def brute_force_flows(g, tau, group, nowhere_zero=True):
    vals = group.nonzero() if nowhere_zero else group.elements()
    for combo in product(vals, repeat=g.num_edges):
        phi = dict(zip(g.edge_ids, combo))
        if is_flow(g, tau, phi, group):
            yield phi


class TestSearchFlow:
    def test_two_negative_loops_z2(self):
        g = TWO_NEG_LOOPS
        assert search_flow(g, default_orientation(g), FlowQuery(Zk(2))) == {0: 1, 1: 1}

    @pytest.mark.parametrize("k", [2, 3, 6, 12, 16])
    def test_negative_loop_none(self, k):
        tau = default_orientation(NEG_LOOP)
        assert search_integer_flow(NEG_LOOP, tau, k) is None
        # modulo an even k the loop can carry k/2, since 2 * (k/2) vanishes
        expected = None if k % 2 else {0: k // 2}
        assert search_flow(NEG_LOOP, tau, FlowQuery(Zk(k))) == expected

    def test_positive_triangle_z2(self):
        # the constant 1 is a Z2-flow: each vertex sees 1 + 1 = 0
        g = triangle()
        tau = default_orientation(g)
        assert list(brute_force_flows(g, tau, Zk(2))) == [{0: 1, 1: 1, 2: 1}]
        assert search_flow(g, tau, FlowQuery(Zk(2))) == {0: 1, 1: 1, 2: 1}

    def test_positive_triangle_z3(self):
        g = triangle()
        tau = default_orientation(g)
        flows = list(brute_force_flows(g, tau, Zk(3)))
        assert flows == [{0: 1, 1: 1, 2: 1}, {0: 2, 1: 2, 2: 2}]
        assert search_flow(g, tau, FlowQuery(Zk(3))) in flows

    def test_cap(self):
        g = SignedGraph.from_edges(2, [(0, 1)] * 20)
        with pytest.raises(CapError):
            search_flow(g, default_orientation(g), FlowQuery(Zk(3)))

    def test_query_validation(self):
        with pytest.raises(ValueError):
            FlowQuery(Zk(3), {0: 0})
        with pytest.raises(ValueError):
            FlowQuery(Zk(17))
        with pytest.raises(ValueError):
            FlowQuery(Zk(3), require_balanced=True)

    @given(signed_graphs(max_vertices=4, max_edges=5), st.data())
    def test_agrees_with_brute_force(self, g, data):
        tau = default_orientation(g)
        group = data.draw(st.sampled_from([Zk(2), Zk(3), Z2xZ3]))
        balanced = group.order % 2 == 0 and data.draw(st.booleans())
        flows = [phi for phi in brute_force_flows(g, tau, group)
                 if not balanced or support_sign(g, phi) == 1]
        got = search_flow(g, tau, FlowQuery(group, require_balanced=balanced))
        assert (got is None) == (not flows)
        if got is not None:
            assert got in flows

    @given(signed_graphs(max_vertices=4, max_edges=5), st.data())
    def test_prescribed(self, g, data):
        if not g.edge_ids:
            return
        tau = default_orientation(g)
        e = data.draw(st.sampled_from(g.edge_ids))
        x = data.draw(st.sampled_from(Z2xZ3.nonzero()))
        flows = [phi for phi in brute_force_flows(g, tau, Z2xZ3) if phi[e] == x]
        got = search_flow(g, tau, FlowQuery(Z2xZ3, {e: x}))
        assert (got is None) == (not flows)


class TestIntegerSearch:
    @given(signed_graphs(max_vertices=5, max_edges=7))
    def test_rigid_zero_prefilter_is_exact(self, g):
        # the linear-algebra prefilter never rejects a graph the raw search can solve
        tau = default_orientation(g)
        vals = [a for j in range(1, 6) for a in (j, -j)]
        raw = run_search(g, tau, {e: vals for e in g.edge_ids}, 0)
        if raw is not None:
            assert not rigid_zero_edges(g, tau)
        if rigid_zero_edges(g, tau):
            assert search_integer_flow(g, tau, 12) is None

    @given(signed_graphs(max_vertices=5, max_edges=7))
    def test_result_is_k_flow(self, g):
        tau = default_orientation(g)
        phi = search_integer_flow(g, tau, 6)
        if phi is not None:
            assert is_flow(g, tau, phi) and is_nowhere_zero(g, phi)
            assert all(abs(x) < 6 for x in phi.values())


class TestFlowNumber:
    def test_two_negative_loops(self):
        assert flow_number(TWO_NEG_LOOPS) == 2

    def test_positive_k4(self):
        assert flow_number(k4()) == 4

    def test_negative_loop(self):
        assert flow_number(NEG_LOOP) is None

    def test_positive_triangle(self):
        assert flow_number(triangle()) == 2

    def test_cap(self):
        g = SignedGraph.from_edges(2, [(0, 1)] * 10)
        with pytest.raises(CapError):
            flow_number(g, Caps(search_edges=5))


class TestFrustration:
    def test_one_negative_triangle(self):
        assert frustration_index(triangle((1, -1, 1))) == 1

    def test_two_negative_loops(self):
        assert frustration_index(TWO_NEG_LOOPS) == 2

    def test_balanced(self):
        assert frustration_index(triangle((-1, -1, 1))) == 0

    @given(signed_graphs(max_vertices=5), st.data())
    def test_switching_invariant_and_bounded(self, g, data):
        fi = frustration_index(g)
        flips = data.draw(st.sets(st.sampled_from(g.vertex_ids)))
        h = g.switch(flips)
        assert frustration_index(h) == fi
        assert fi <= sum(1 for e in h.edge_ids if h.sign(e) < 0)


class TestProp13:
    def test_negative_loop(self):
        assert not has_nz_z_flow(NEG_LOOP)
        assert nz_z_flow_obstruction(NEG_LOOP).kind == "frustration-1"

    def test_k2(self):
        g = SignedGraph.from_edges(2, [(0, 1)])
        assert not has_nz_z_flow(g)
        assert nz_z_flow_obstruction(g).kind == "balanced-side"

    def test_two_negative_loops(self):
        assert has_nz_z_flow(TWO_NEG_LOOPS)

    @given(signed_graphs(max_vertices=5, max_edges=7))
    def test_agrees_with_search(self, g):
        assert has_nz_z_flow(g) == (search_integer_flow(g, default_orientation(g), 12) is not None)

    @given(signed_graphs(max_vertices=5, max_edges=7))
    def test_frustration_one_blocks(self, g):
        if g.is_connected() and frustration_index(g) == 1:
            assert not has_nz_z_flow(g)


DIRECTED_TRIANGLE = triangle()


class TestRestrictedCounting:
    @pytest.mark.parametrize("x", [1, 2])
    def test_triangle(self, x):
        g = DIRECTED_TRIANGLE
        assert count_restricted_flows(g, default_orientation(g), {0: x}, Zk(3)) == 1

    def test_cut_edge(self):
        g = SignedGraph.from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 3)])
        tau = default_orientation(g)
        for x in (1, 2):
            assert count_restricted_flows(g, tau, {0: x}, Zk(3)) == 0

    def test_rejects_negative_edges(self):
        g = triangle((1, -1, 1))
        with pytest.raises(ValueError):
            count_restricted_flows(g, default_orientation(g), {}, Zk(3))

    @given(signed_graphs(max_vertices=4, max_edges=6, positive=True), st.data())
    def test_matches_direct(self, g, data):
        tau = default_orientation(g)
        group = data.draw(st.sampled_from([Zk(2), Zk(3), Z2xZ3]))
        T = data.draw(st.sets(st.sampled_from(g.edge_ids), max_size=2)) if g.edge_ids else set()
        gamma = {e: data.draw(st.sampled_from(group.nonzero())) for e in T}
        assert count_restricted_flows(g, tau, gamma, group) == count_restricted_flows_direct(g, tau, gamma, group)

    @given(signed_graphs(max_vertices=4, max_edges=6, positive=True), st.data())
    def test_similar_implies_equal_counts(self, g, data):
        if not g.edge_ids:
            return
        tau = default_orientation(g)
        group = data.draw(st.sampled_from([Zk(3), Zk(4), Z2xZ3]))
        T = sorted(data.draw(st.sets(st.sampled_from(g.edge_ids), min_size=1, max_size=3)))
        for combo1 in product(group.nonzero(), repeat=len(T)):
            g1 = dict(zip(T, combo1))
            combo2 = data.draw(st.tuples(*[st.sampled_from(group.nonzero()) for _ in T]))
            g2 = dict(zip(T, combo2))
            if similar(g, tau, g1, g2, group):
                assert count_restricted_flows(g, tau, g1, group) == count_restricted_flows(g, tau, g2, group)


class TestSimilar:
    def test_reflexive(self):
        g = DIRECTED_TRIANGLE
        assert similar(g, default_orientation(g), {0: 1}, {0: 1}, Zk(3))

    def test_triangle(self):
        g = DIRECTED_TRIANGLE
        assert similar(g, default_orientation(g), {0: 1}, {0: 2}, Zk(3))

    def test_separated_at_vertex(self):
        g = SignedGraph.from_edges(2, [(0, 1), (0, 1), (0, 1)])
        tau = default_orientation(g)
        assert similar(g, tau, {0: 1, 1: 1, 2: 1}, {0: 1, 1: 1, 2: 2}, Zk(3)) is False

    def test_cut_indicator(self):
        g = DIRECTED_TRIANGLE  # 0 -> 1 -> 2 -> 0
        assert cut_indicator(g, default_orientation(g), {0}) == {0: 1, 1: 0, 2: -1}


def test_lemma_4_1_prescribed_boundary(rng):
    """Any nowhere-zero zero-sum prescription on a degree <= 3 vertex extends."""
    groups = [Zk(3), Zk(4), Z2xZ3]
    checked = 0
    for _ in range(120):
        n = rng.randint(2, 5)
        edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(2, 7))]
        edges = [(u, v) for u, v in edges if u != v]
        g = SignedGraph.from_edges(n, edges)
        tau = default_orientation(g)
        for group in groups:
            if search_flow(g, tau, FlowQuery(group)) is None:
                continue
            for u in g.vertex_ids:
                d = sorted(g.delta([u]))
                if not 1 <= len(d) <= 3:
                    continue
                for combo in product(group.nonzero(), repeat=len(d)):
                    gamma = dict(zip(d, combo))
                    if not group.is_zero(boundary(g, tau, gamma, group)[u]):
                        continue
                    assert search_flow(g, tau, FlowQuery(group, gamma)) is not None
                    checked += 1
    assert checked > 50
