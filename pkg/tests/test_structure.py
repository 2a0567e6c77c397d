import random
from itertools import combinations

import pytest

from signedflow.graph import Path, SignedGraph, is_balanced, is_cycle
from signedflow.structure import (
    Halo,
    MWPartition,
    StructureError,
    connectivity_suite,
    degree2_vertices,
    find_halo,
    find_halo_bruteforce,
    find_unbalanced_peripheral_cycle,
    halo_violations,
    is_3_connected,
    is_peripheral,
    mesner_watkins,
    partition_violations,
    path_with_two_interior_v2,
    route_in_cubic,
    route_violations,
    shorten_cross,
    suppress_degree_2,
)

from conftest import K4_EDGES, PETERSEN_EDGES, cycle_graph, k4

K33 = [(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]
PRISM = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]
CUBE = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)]
THREE_CONNECTED_CUBIC = {"K4": K4_EDGES, "K33": K33, "prism": PRISM, "cube": CUBE, "petersen": PETERSEN_EDGES}


def simple(n, edges, neg=()):
    return SignedGraph.from_edges(n, [(u, v, -1 if i in neg else 1) for i, (u, v) in enumerate(edges)])


def cubic_graphs():
    for name, es in THREE_CONNECTED_CUBIC.items():
        yield name, simple(1 + max(max(e) for e in es), es)


class TestConnectivity:
    def test_two_triangles_with_bridge(self):
        g = SignedGraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
        rep = connectivity_suite(g)
        assert rep.cut_edges == (6,)
        assert not rep.three_edge_connected
        assert not rep.cyclically_three_edge_connected
        assert rep.witness is not None

    def test_k4(self):
        rep = connectivity_suite(k4())
        assert rep.three_edge_connected and rep.cyclically_three_edge_connected
        assert rep.cut_edges == () and rep.blocks == ((0, 1, 2, 3, 4, 5),)

    def test_cycle(self):
        rep = connectivity_suite(cycle_graph(5))
        assert rep.cut_edges == ()
        assert not rep.three_edge_connected
        assert rep.cyclically_three_edge_connected

    @pytest.mark.parametrize("name,g", list(cubic_graphs()))
    def test_named_cubic(self, name, g):
        assert is_3_connected(g)
        assert connectivity_suite(g).cyclically_three_edge_connected


class TestSuppression:
    def test_path_between_cubic_vertices(self):
        # theta on 0, 1 with one branch subdivided twice
        g = SignedGraph.from_edges(4, [(0, 1, 1), (0, 1, -1), (0, 2, -1), (2, 3, 1), (3, 1, -1)])
        s = suppress_degree_2(g)
        assert s.base.num_edges == 3 and len(s.base) == 2
        long = [e for e, p in s.expansion.items() if len(p.edges) == 3]
        assert len(long) == 1
        assert s.base.sign(long[0]) == 1

    def test_cubic_identity(self):
        g = k4((0,))
        s = suppress_degree_2(g)
        assert sorted(s.base.edges.values()) == sorted(g.edges.values())
        assert all(len(p.edges) == 1 for p in s.expansion.values())

    def test_subdivided_theta(self):
        edges = [(0, 2), (2, 1), (0, 3), (3, 4), (4, 1), (0, 5), (5, 1)]
        s = suppress_degree_2(SignedGraph.from_edges(6, edges))
        assert s.base.vertex_ids == (0, 1) and s.base.num_edges == 3

    def test_round_trip(self, rng):
        for _ in range(30):
            g = simple(10, PETERSEN_EDGES, {i for i in range(15) if rng.random() < 0.4})
            for e in rng.sample(list(g.edge_ids), 4):
                if e in g.edges:
                    u, v, sgn = g.edges[e]
                    g, w = g.add_vertex()
                    g = g.remove_edges([e])
                    g, _ = g.add_edge(u, w, sgn)
                    g, _ = g.add_edge(w, v, 1)
            s = suppress_degree_2(g)
            covered = []
            for e, p in s.expansion.items():
                covered += p.edges
                assert set(p.interior) <= degree2_vertices(g)
                assert not set(p.ends) & degree2_vertices(g)
                assert s.base.sign(e) == g.sign_of(p.edges)
            assert sorted(covered) == sorted(g.edge_ids)

    def test_bare_cycle_rejected(self):
        with pytest.raises(StructureError):
            suppress_degree_2(cycle_graph(4))


class TestPeripheral:
    def test_k4_one_negative(self):
        g = k4((0,))
        c = find_unbalanced_peripheral_cycle(g)
        assert len(c) == 3 and 0 in c.edges and is_peripheral(g, c)

    def test_k33(self):
        g = simple(6, K33, (0,))
        c = find_unbalanced_peripheral_cycle(g)
        assert len(c) == 4 and g.sign_of(c.edges) == -1
        assert g.remove_vertices(c.vertices).is_connected()

    def test_balanced_rejected(self):
        with pytest.raises(StructureError):
            find_unbalanced_peripheral_cycle(k4())

    def test_random_petersen(self, rng):
        for _ in range(20):
            neg = {i for i in range(15) if rng.random() < 0.3}
            g = simple(10, PETERSEN_EDGES, neg)
            if is_balanced(g):
                continue
            c = find_unbalanced_peripheral_cycle(g)
            assert is_cycle(g, c) and is_peripheral(g, c) and g.sign_of(c.edges) == -1


class TestRouting:
    def test_cycle_subgraph(self):
        g = simple(6, PRISM)
        H = g.edge_subgraph([0, 1, 2])
        p = route_in_cubic(g, H, 0, 2)
        assert not route_violations(H, p)

    def test_k4_triangle(self):
        g = k4()
        H = g.edge_subgraph([0, 1, 3])  # triangle 0, 1, 2
        p = route_in_cubic(g, H, 0, 1)
        assert p.edges == (0,)

    @pytest.mark.parametrize("name,g", list(cubic_graphs()))
    def test_random_subgraphs(self, name, g):
        rng = random.Random(name)
        for _ in range(25):
            es = set(rng.sample(list(g.edge_ids), rng.randint(2, g.num_edges - 1)))
            H = g.edge_subgraph(es)
            comp = max(H.components(), key=len)
            H = H.induced(comp).edge_subgraph([e for e in es if set(g.ends(e)) <= comp])
            if len(H) < 2:
                continue
            x, y = rng.sample(sorted(H.vertex_ids), 2)
            p = route_in_cubic(g, H, x, y)
            assert p.ends in ((x, y), (y, x))
            assert not route_violations(H, p)

    def test_not_subgraph(self):
        with pytest.raises(StructureError):
            route_in_cubic(k4(), cycle_graph(5), 0, 1)


class TestHalo:
    def test_k4_perfect_matching(self):
        g = k4((0, 5))
        brute = find_halo_bruteforce(g)
        assert set(brute.D.edges) == {1, 2, 3, 4}
        assert {brute.P1.edges, brute.P2.edges} == {(0,), (5,)}
        h = find_halo(g)
        assert halo_violations(g, h) == []
        assert shorten_cross(g, h, 0) == h

    def test_disjoint_unbalanced_cycles_rejected(self):
        g = simple(6, PRISM, (0, 3))
        with pytest.raises(StructureError, match="disjoint"):
            find_halo(g)

    def test_hypothesis_names(self):
        with pytest.raises(StructureError, match="unbalanced"):
            find_halo(k4())
        with pytest.raises(StructureError, match="cubic"):
            find_halo(cycle_graph(4, (0,)))

    def test_violations_detected(self):
        g = k4((0, 5))
        h = find_halo(g)
        assert halo_violations(g, Halo(h.D, h.P1, h.P1))
        assert "D unbalanced" in halo_violations(k4((0, 1, 5)), h)

    def test_shorten_long_sides(self):
        edges = [(0, 5), (0, 6), (0, 7), (2, 4), (2, 3), (3, 4), (1, 5), (1, 6), (1, 7), (2, 5), (4, 6), (3, 7)]
        g = simple(8, edges, (5, 10, 11))
        halo = find_halo_bruteforce(g)
        sides = [len(s) for s in halo.sides()]
        assert sides[0] + sides[2] > 2
        short = shorten_cross(g, halo, 0)
        assert halo_violations(g, short) == []
        assert sorted(len(s) for s in short.sides()).count(1) >= 2

    def test_json_dump(self):
        assert '"case"' in find_halo(k4((0, 5))).to_json()


class TestMesnerWatkins:
    def test_k4_cycle(self):
        c = mesner_watkins(k4(), 0, 1, 2)
        assert {0, 1, 2} <= c.vertex_set

    def test_k23_partition(self):
        g = SignedGraph.from_edges(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
        part = mesner_watkins(g, 2, 3, 4)
        assert isinstance(part, MWPartition)
        assert {part.X1, part.X2} == {frozenset({0}), frozenset({1})}
        assert part.Y == (frozenset({2}), frozenset({3}), frozenset({4}))
        assert partition_violations(g, part, (2, 3, 4)) == []

    def test_c6(self):
        c = mesner_watkins(cycle_graph(6), 0, 2, 4)
        assert len(c) == 6

    def test_preconditions(self):
        with pytest.raises(StructureError):
            mesner_watkins(k4(), 0, 0, 1)
        g = SignedGraph.from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 0), (0, 1)])
        with pytest.raises(StructureError):
            mesner_watkins(g, 1, 2, 3)

    @pytest.mark.parametrize("name,g", list(cubic_graphs()))
    def test_all_triples(self, name, g):
        for ys in combinations(g.vertex_ids, 3):
            out = mesner_watkins(g, *ys)
            if isinstance(out, MWPartition):
                assert partition_violations(g, out, ys) == []
            else:
                assert is_cycle(g, out) and set(ys) <= out.vertex_set


class TestTwoInteriorPath:
    def test_c6_antipodal(self):
        p = path_with_two_interior_v2(cycle_graph(6), 0, 3)
        assert len(p.interior) == 2

    def test_c8_adjacent(self):
        p = path_with_two_interior_v2(cycle_graph(8), 0, 1)
        assert len(p.edges) == 7

    def test_balanced_4_cycle_rejected(self):
        with pytest.raises(StructureError):
            path_with_two_interior_v2(cycle_graph(4), 0, 2)

    def test_subdivided_cubic(self, rng):
        checked = 0
        for name, g in cubic_graphs():
            for _ in range(10):
                h = g
                for e in rng.sample(list(g.edge_ids), min(4, g.num_edges)):
                    u, v, s = h.edges[e]
                    h = h.remove_edges([e])
                    prev = u
                    for _ in range(3):
                        h, w = h.add_vertex()
                        h, _ = h.add_edge(prev, w)
                        prev = w
                    h, _ = h.add_edge(prev, v)
                v2 = sorted(degree2_vertices(h))
                a, b = rng.sample(v2, 2)
                try:
                    p = path_with_two_interior_v2(h, a, b)
                except StructureError:
                    continue  # a balanced 4-cycle survived in the base graph
                assert p.ends in ((a, b), (b, a)) and isinstance(p, Path)
                assert len(set(p.interior) & set(v2)) >= 2
                checked += 1
        assert checked >= 20
