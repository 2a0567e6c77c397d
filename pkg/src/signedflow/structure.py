"""Connectivity, suppression and routing on (sub)cubic signed graphs.

Includes the halo construction for 3-connected cubic signed graphs without
two disjoint unbalanced cycles, cross shortening, the three-vertex cycle
versus five-part partition dichotomy for subcubic 2-connected graphs, and
paths through two interior degree-2 vertices in balanced shrubberies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product

import networkx as nx

from .graph import (
    Cycle,
    GraphError,
    Path,
    SignedGraph,
    bridges,
    canonical_switch,
    cycle_from_edges,
    find_unbalanced_cycle,
    has_cycle,
    is_balanced,
    iter_cycles,
    iter_paths,
    shortest_path,
)


class StructureError(GraphError):
    pass


class ConstructionError(RuntimeError):
    """A constructive step met a configuration its argument rules out."""


STATS: dict = {}


def _bump(key: str) -> None:
    STATS[key] = STATS.get(key, 0) + 1


# connectivity

def blocks(g: SignedGraph) -> list[frozenset]:
    """Edge sets of the blocks (loops are blocks of their own); isolated vertices are skipped."""
    disc, low = {}, {}
    out = []
    estack = []
    t = 0
    for root in g.vertex_ids:
        if root in disc:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, None, iter(g.half_edges_at(root)))]
        while stack:
            x, via, it = stack[-1]
            h = next(it, None)
            if h is None:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[x])
                    if low[x] >= disc[p]:
                        comp = set()
                        while True:
                            f = estack.pop()
                            comp.add(f)
                            if f == via:
                                break
                        out.append(frozenset(comp))
                continue
            e = h >> 1
            if e == via:
                continue
            y = g.half_vertex(h ^ 1)
            if y == x:
                if h & 1 == 0:
                    out.append(frozenset([e]))
                continue
            if y in disc:
                if disc[y] < disc[x]:
                    estack.append(e)
                    low[x] = min(low[x], disc[y])
            else:
                estack.append(e)
                disc[y] = low[y] = t
                t += 1
                stack.append((y, e, iter(g.half_edges_at(y))))
    return sorted(out, key=lambda b: min(b))


def is_2_connected(g: SignedGraph) -> bool:
    """Connected, at least two vertices, no cut vertex (loops ignored)."""
    if len(g) < 2 or not g.is_connected():
        return False
    nonloop = [b for b in blocks(g) if not (len(b) == 1 and g.is_loop(next(iter(b))))]
    return len(nonloop) == 1


def edge_connectivity_at_least(g: SignedGraph, k: int) -> bool:
    if not g.is_connected():
        return False
    if k <= 1:
        return True
    # removing any k-2 edges must leave a bridgeless connected graph
    for S in combinations(g.edge_ids, k - 2):
        rest = g.remove_edges(S)
        if not rest.is_connected() or bridges(rest):
            return False
    return True


def separating_cut(g: SignedGraph, max_size: int = 2) -> tuple[frozenset, frozenset] | None:
    """Smallest edge cut of size <= max_size separating cycles, as (X, delta(X))."""
    comps = g.components()
    if len(comps) > 1:
        cyc = [c for c in comps if has_cycle(g.induced(c))]
        if len(cyc) >= 2:
            return cyc[0], frozenset()
    for size in range(1, max_size + 1):
        for S in combinations(g.edge_ids, size):
            if any(g.is_loop(e) for e in S):
                continue
            parts = g.remove_edges(S).components()
            if len(parts) < 2:
                continue
            for r in range(1, len(parts)):
                for sel in combinations(parts, r):
                    X = frozenset().union(*sel)
                    cut = g.delta(X)
                    if not cut or not cut <= set(S):
                        continue
                    if has_cycle(g.induced(X)) and has_cycle(g.induced(g.vertices - X)):
                        return X, cut
    return None


@dataclass(frozen=True)
class ConnectivityReport:
    cut_edges: tuple
    blocks: tuple
    three_edge_connected: bool
    cyclically_three_edge_connected: bool
    witness: tuple | None = None


def connectivity_suite(g: SignedGraph) -> ConnectivityReport:
    cut = separating_cut(g, 2)
    return ConnectivityReport(
        cut_edges=tuple(bridges(g)),
        blocks=tuple(tuple(sorted(b)) for b in blocks(g)),
        three_edge_connected=edge_connectivity_at_least(g, 3),
        cyclically_three_edge_connected=cut is None,
        witness=None if cut is None else (tuple(sorted(cut[0])), tuple(sorted(cut[1]))),
    )


def is_3_connected(g: SignedGraph) -> bool:
    """Vertex 3-connectivity for simple graphs on at least four vertices."""
    if len(g) < 4 or not g.is_connected():
        return False
    seen = set()
    for e in g.edge_ids:
        u, v = g.ends(e)
        if u == v or frozenset((u, v)) in seen:
            return False
        seen.add(frozenset((u, v)))
    for a, b in combinations(g.vertex_ids, 2):
        if not g.remove_vertices([a, b]).is_connected():
            return False
    return True


def is_cubic(g: SignedGraph) -> bool:
    return all(d == 3 for d in g.degrees.values())


def degree2_vertices(g: SignedGraph) -> frozenset:
    return frozenset(v for v, d in g.degrees.items() if d == 2)


def has_unbalanced_theta(g: SignedGraph) -> bool:
    for b in blocks(g):
        if len(b) == 1:
            continue
        h = g.edge_subgraph(b)
        if h.num_edges > len(h) and not is_balanced(h):
            return True
    return False


def has_unbalanced_theta_or_loop(g: SignedGraph) -> bool:
    return bool(g.loops()) or has_unbalanced_theta(g)


def disjoint_unbalanced_pair(g: SignedGraph) -> tuple[Cycle, Cycle] | None:
    for c in iter_cycles(g):
        if g.sign_of(c.edges) > 0:
            continue
        other = find_unbalanced_cycle(g.remove_vertices(c.vertices))
        if other is not None:
            return c, other
    return None


# suppression

@dataclass(frozen=True)
class SuppressedGraph:
    base: SignedGraph
    expansion: dict  # base edge id -> Path in the original graph, oriented like the base edge
    original: SignedGraph

    def expand_path(self, p: Path) -> Path:
        vs, es = [p.vertices[0]], []
        for i, e in enumerate(p.edges):
            q = self.expansion[e]
            if q.vertices[0] != vs[-1]:
                q = q.reversed()
            es.extend(q.edges)
            vs.extend(q.vertices[1:])
        return Path(tuple(vs), tuple(es))

    def expand_edges(self, es) -> set:
        out = set()
        for e in es:
            out.update(self.expansion[e].edges)
        return out

    def expand_cycle(self, c: Cycle) -> Cycle:
        es = self.expand_edges(c.edges)
        return cycle_from_edges(self.original, es)


def suppress_degree_2(g: SignedGraph) -> SuppressedGraph:
    if any(d not in (2, 3) for d in g.degrees.values()):
        raise StructureError("suppression needs every degree in {2, 3}")
    for comp in g.components():
        if all(g.deg(v) == 2 for v in comp):
            raise StructureError("component is a bare cycle of degree-2 vertices")
    cubic = [v for v in g.vertex_ids if g.deg(v) == 3]
    used = set()
    base_edges = {}
    expansion = {}
    for x in cubic:
        for h in g.half_edges_at(x):
            e = h >> 1
            if e in used:
                continue
            vs, es = [x], [e]
            used.add(e)
            prev_h = h
            y = g.half_vertex(h ^ 1)
            while g.deg(y) == 2:
                vs.append(y)
                nxt = next(k for k in g.half_edges_at(y) if k != (prev_h ^ 1))
                f = nxt >> 1
                es.append(f)
                used.add(f)
                prev_h = nxt
                y = g.half_vertex(nxt ^ 1)
            vs.append(y)
            bid = len(base_edges)
            path = Path(tuple(vs), tuple(es))
            base_edges[bid] = (x, y, g.sign_of(es))
            expansion[bid] = path
    base = SignedGraph(cubic, base_edges)
    return SuppressedGraph(base, expansion, g)


# peripheral cycles

def is_peripheral(g: SignedGraph, c: Cycle) -> bool:
    V = c.vertex_set
    E = c.edge_set
    for e in g.inner_edges(V):
        if e not in E:
            return False
    rest = g.remove_vertices(V)
    return len(rest) == 0 or rest.is_connected()


def find_unbalanced_peripheral_cycle(g: SignedGraph) -> Cycle:
    if not is_cubic(g) or not is_3_connected(g):
        raise StructureError("input must be a 3-connected cubic graph")
    if is_balanced(g):
        raise StructureError("input is balanced")
    best = None
    for c in iter_cycles(g):
        if g.sign_of(c.edges) > 0 or not is_peripheral(g, c):
            continue
        key = (len(c), tuple(sorted(c.edges)))
        if best is None or key < best[0]:
            best = (key, c)
    if best is None:
        raise ConstructionError("no unbalanced peripheral cycle")
    return best[1]


# routing

def _components_after(H: SignedGraph, es) -> list[frozenset]:
    return H.remove_edges(es).components()


def _route_potential(H: SignedGraph, low: frozenset, path: Path):
    comps = _components_after(H, path.edges)
    good = sorted((len(c) for c in comps if c & low), reverse=True)
    bad = sorted((len(c) for c in comps if not c & low), reverse=True)
    return tuple(good), tuple(bad)


def route_violations(H: SignedGraph, path: Path) -> list[frozenset]:
    low = frozenset(v for v in H.vertex_ids if H.deg(v) <= 2)
    return [c for c in _components_after(H, path.edges) if not c & low]


def route_in_cubic(G: SignedGraph, H: SignedGraph, x, y) -> Path:
    """x-y path in ``H`` such that every component of ``H - E(P)`` has a vertex of H-degree <= 2."""
    if not H.vertices <= G.vertices or not set(H.edges) <= set(G.edges):
        raise StructureError("H must be a subgraph of G")
    if x not in H.vertices or y not in H.vertices or not H.is_connected():
        raise StructureError("H must be connected and contain x and y")
    low = frozenset(v for v in H.vertex_ids if H.deg(v) <= 2)
    path = shortest_path(H, [x], [y])
    pot = _route_potential(H, low, path)
    while True:
        bad = [c for c in _components_after(H, path.edges) if not c & low]
        if not bad:
            return path
        Hp = min(bad, key=lambda c: (len(c), min(c)))
        pos = [i for i, v in enumerate(path.vertices) if v in Hp]
        i, j = min(pos), max(pos)
        a, b = path.vertices[i], path.vertices[j]
        inner = H.induced(Hp).remove_edges(path.edges)
        best = None
        if a != b:
            for q in iter_paths(inner, a, b):
                cand = Path(path.vertices[:i] + q.vertices + path.vertices[j + 1:],
                            path.edges[:i] + q.edges + path.edges[j:])
                if len(set(cand.vertices)) != len(cand.vertices):
                    continue
                cp = _route_potential(H, low, cand)
                if best is None or cp > best[0]:
                    best = (cp, cand)
        if best is None or best[0] <= pot:
            _bump("route_fallback")
            return _route_exhaustive(H, low, x, y)
        pot, path = best
        _bump("route_reroute")


def _route_exhaustive(H, low, x, y) -> Path:
    best = None
    for p in iter_paths(H, x, y):
        pot = _route_potential(H, low, p)
        if best is None or pot > best[0]:
            best = (pot, p)
    if best is None or route_violations(H, best[1]):
        raise ConstructionError("no admissible route")
    return best[1]


# halos

@dataclass(frozen=True)
class Halo:
    D: Cycle
    P1: Path
    P2: Path
    case: str = ""

    @property
    def cross_ends(self) -> tuple:
        """Cross endpoints in the cyclic order of D."""
        ends = set(self.P1.ends) | set(self.P2.ends)
        return tuple(v for v in self.D.vertices if v in ends)

    def sides(self) -> list[Path]:
        xs = self.cross_ends
        idx = [self.D.vertices.index(v) for v in xs]
        return [self.D.arc(idx[i], idx[(i + 1) % 4]) for i in range(4)]

    def to_json(self) -> str:
        return json.dumps({
            "D": {"vertices": list(self.D.vertices), "edges": list(self.D.edges)},
            "P1": {"vertices": list(self.P1.vertices), "edges": list(self.P1.edges)},
            "P2": {"vertices": list(self.P2.vertices), "edges": list(self.P2.edges)},
            "sides": [list(s.edges) for s in self.sides()],
            "case": self.case,
        }, sort_keys=True)


def halo_violations(g: SignedGraph, halo: Halo) -> list[str]:
    """Names of the failed halo conditions (empty when valid)."""
    bad = []
    D, P1, P2 = halo.D, halo.P1, halo.P2
    DV, DE = D.vertex_set, D.edge_set
    if g.sign_of(D.edges) != 1:
        bad.append("D unbalanced")
    for name, p in (("P1", P1), ("P2", P2)):
        if not p.edges or set(p.edges) & DE or p.ends[0] not in DV or p.ends[1] not in DV \
                or set(p.interior) & DV or len(set(p.vertices)) != len(p.vertices):
            bad.append(f"(i) {name}")
    if set(P1.vertices) & set(P2.vertices):
        bad.append("(i) P1 and P2 meet")
    ends = [P1.ends[0], P1.ends[1], P2.ends[0], P2.ends[1]]
    if len(set(ends)) != 4 or not set(ends) <= DV:
        bad.append("(ii) ends")
    else:
        order = [v for v in D.vertices if v in set(ends)]
        one = {P1.ends[0], P1.ends[1]}
        pattern = [v in one for v in order]
        if pattern not in ([True, False, True, False], [False, True, False, True]):
            bad.append("(ii) not interleaved")
    for name, p in (("P1", P1), ("P2", P2)):
        if is_balanced(g.edge_subgraph(set(DE) | set(p.edges))):
            bad.append(f"(iii) {name}")
    rest = g.remove_edges(DE)
    for comp in rest.components():
        if not (set(P1.vertices) <= comp or set(P2.vertices) <= comp):
            bad.append("(iv)")
            break
    return bad


def _check_halo_hypotheses(g: SignedGraph) -> None:
    if not is_cubic(g):
        raise StructureError("hypothesis failed: cubic")
    if not is_3_connected(g):
        raise StructureError("hypothesis failed: 3-connected")
    if is_balanced(g):
        raise StructureError("hypothesis failed: unbalanced")
    from .oracle import has_nz_z_flow
    if not has_nz_z_flow(g):
        raise StructureError("hypothesis failed: nowhere-zero Z-flow")
    if disjoint_unbalanced_pair(g) is not None:
        raise StructureError("hypothesis failed: no two disjoint unbalanced cycles")


def find_halo(g: SignedGraph, check: bool = True) -> Halo:
    """Halo built from an unbalanced peripheral cycle and a lexicographically best crossing path."""
    if check:
        _check_halo_hypotheses(g)
    C = find_unbalanced_peripheral_cycle(g)
    off = g.remove_edges(C.edges)
    gs, flips = canonical_switch(off)
    sig = dict(g.signature)
    for e in g.edge_ids:
        u, v = g.ends(e)
        if (u in flips) != (v in flips):
            sig[e] = -sig[e]
    if any(sig[e] < 0 for e in off.edge_ids):
        raise ConstructionError("off-cycle edges cannot be made positive")
    G = g.with_signature(sig)
    n = len(C)
    neg = [i for i in range(n) if G.sign(C.edges[i]) < 0]
    if len(neg) < 3 or len(neg) % 2 == 0:
        raise ConstructionError("unexpected number of negative cycle edges")
    # segments: maximal arcs of C without negative edges
    seg = {}
    start = (neg[0] + 1) % n
    label = 0
    for step in range(n):
        i = (start + step) % n
        seg[C.vertices[i]] = label
        if i in neg:
            label += 1
    CV = C.vertex_set
    best = None
    for a, b in combinations(C.vertices, 2):
        if seg[a] == seg[b]:
            continue
        for p in iter_paths(off, a, b, avoid=CV):
            comps = off.remove_edges(p.edges).components()
            prof = tuple(sorted((-len(c), min(c)) for c in comps))
            key = (prof, p.vertices)
            if best is None or key < best[0]:
                best = (key, p)
    if best is None:
        raise ConstructionError("no crossing path")
    P = best[1]
    a, b = P.ends
    A0 = frozenset(v for v in C.vertices if seg[v] == seg[a])
    B0 = frozenset(v for v in C.vertices if seg[v] == seg[b])
    Gp = off.remove_edges(P.edges)
    comps = Gp.components()
    middle = CV - A0 - B0
    rich = [c for c in comps if c & middle]
    if len(rich) != 1:
        raise ConstructionError(f"expected one rich component, found {len(rich)}")
    R = rich[0]
    ia = next(i for i, v in enumerate(P.vertices) if v in R)
    ib = max(i for i, v in enumerate(P.vertices) if v in R)
    a1, b1 = P.vertices[ia], P.vertices[ib]
    A1V = A0 | set(P.vertices[:ia + 1])
    B1V = B0 | set(P.vertices[ib:])
    cpv = CV | set(P.vertices)
    A2E = {e for e in C.edges if set(G.ends(e)) <= A0} | set(P.edges[:ia])
    B2E = {e for e in C.edges if set(G.ends(e)) <= B0} | set(P.edges[ib:])
    A2V, B2V = set(A1V), set(B1V)
    for c in comps:
        if c == R:
            continue
        meet = c & cpv
        if meet <= A1V:
            A2V |= c
            A2E |= set(Gp.inner_edges(c))
        elif meet <= B1V:
            B2V |= c
            B2E |= set(Gp.inner_edges(c))
        else:
            raise ConstructionError("poor component meets both sides")
    A2 = G.edge_subgraph(A2E, A2V)
    B2 = G.edge_subgraph(B2E, B2V)
    # arcs of C from a to b
    pa, pb = C.vertices.index(a), C.vertices.index(b)
    fwd = C.arc(pa, pb)
    bwd = C.reversed().rotated(a)
    bwd = bwd.arc(0, bwd.vertices.index(b))
    arcs = {}
    for arc in (fwd, bwd):
        arcs[sum(1 for e in arc.edges if G.sign(e) < 0) % 2] = arc

    def trim(arc):
        ia_ = max(i for i, v in enumerate(arc.vertices) if v in A0)
        ib_ = min(i for i, v in enumerate(arc.vertices) if v in B0)
        return Path(arc.vertices[ia_:ib_ + 1], arc.edges[ia_:ib_])

    P2pp = trim(arcs[0])
    P3 = trim(arcs[1])
    a2, b2 = P2pp.ends
    A = route_in_cubic(G, A2, a1, a2)
    B = route_in_cubic(G, B2, b1, b2)
    Pp = Path(P.vertices[ia:ib + 1], P.edges[ia:ib])
    DE = set(Pp.edges) | set(A.edges) | set(P2pp.edges) | set(B.edges)
    if len(DE) != len(Pp.edges) + len(A.edges) + len(P2pp.edges) + len(B.edges):
        raise ConstructionError("pieces of D overlap")
    try:
        D = cycle_from_edges(G, DE)
    except GraphError as exc:
        raise ConstructionError(f"D is not a cycle: {exc}") from None
    # u: a vertex of P'' with an odd number of negative edges on both sides
    cnt = 0
    u = None
    for i, e in enumerate(P2pp.edges):
        if G.sign(e) < 0:
            cnt += 1
        if cnt % 2 == 1:
            u = P2pp.vertices[i + 1]
            break
    if u is None:
        raise ConstructionError("P'' has no negative edge")
    DV = D.vertex_set
    rich_graph = Gp.induced(R)
    P1 = shortest_path(rich_graph, [u], set(Pp.vertices) - {u}, avoid=DV)
    if P1 is None:
        raise ConstructionError("no path from u to P'")
    rest_c = [e for e in C.edges if e not in DE]
    piece = _component_path(G, rest_c, P3.edges[0])
    if piece is None or not set(P3.edges) <= set(piece.edges):
        raise ConstructionError("P''' is split by D")
    case = "peripheral" if is_peripheral(G, D) else "single-edge"
    halo = Halo(D, P1, piece, case)
    problems = halo_violations(G, halo)
    if problems:
        raise ConstructionError(f"constructed halo fails {problems}")
    return halo


def _component_path(g: SignedGraph, es, e0) -> Path | None:
    """The path formed by the component of edge set ``es`` that contains ``e0``."""
    es = set(es)
    inc = {}
    for e in es:
        for x in g.ends(e):
            inc.setdefault(x, []).append(e)
    comp = {e0}
    stack = [e0]
    while stack:
        e = stack.pop()
        for x in g.ends(e):
            for f in inc[x]:
                if f not in comp:
                    comp.add(f)
                    stack.append(f)
    ends = [x for x in {x for e in comp for x in g.ends(e)} if sum(1 for f in inc[x] if f in comp) == 1]
    if len(ends) != 2:
        return None
    start = min(ends)
    vs, ps = [start], []
    x, prev = start, None
    while True:
        nxt = [f for f in inc[x] if f in comp and f != prev]
        if not nxt:
            break
        f = nxt[0]
        ps.append(f)
        x = g.other_end(f, x)
        vs.append(x)
        prev = f
    return Path(tuple(vs), tuple(ps))


def _off_paths(g: SignedGraph, D: Cycle) -> list[Path]:
    """Paths in G - E(D) with both ends on D and interior off D."""
    DV, DE = D.vertex_set, D.edge_set
    out = []
    for x in D.vertices:
        for h in g.half_edges_at(x):
            e = h >> 1
            if e in DE:
                continue
            rest = g.remove_edges(DE)
            for y in D.vertices:
                if y <= x:
                    continue
                for p in iter_paths(rest, x, y, avoid=DV):
                    if p.edges[0] == e:
                        out.append(p)
    uniq = {}
    for p in out:
        uniq[(p.edges, p.vertices)] = p
    return [uniq[k] for k in sorted(uniq)]


def find_halo_bruteforce(g: SignedGraph, check: bool = True) -> Halo:
    if check:
        _check_halo_hypotheses(g)
    cycles = [c for c in iter_cycles(g) if g.sign_of(c.edges) > 0 and len(c) >= 4]
    cycles.sort(key=lambda c: (len(c), sum(1 for e in c.edges if g.sign(e) < 0), tuple(sorted(c.edges))))
    for D in cycles:
        paths = _off_paths(g, D)
        for p1, p2 in combinations(paths, 2):
            halo = Halo(D, p1, p2, "search")
            if not halo_violations(g, halo):
                return halo
    raise ConstructionError("no halo found")


def shorten_cross(g: SignedGraph, halo: Halo, pair: int = 0) -> Halo:
    """Reroute the cross until the opposite sides ``pair`` and ``pair + 2`` are single edges."""
    if disjoint_unbalanced_pair(g) is not None:
        raise StructureError("hypothesis failed: no two disjoint unbalanced cycles")
    if halo_violations(g, halo):
        raise StructureError("input halo is invalid")
    sides = halo.sides()
    Q1, Q2 = sides[pair], sides[pair + 2]
    keep1, keep2 = set(Q1.vertices), set(Q2.vertices)
    cur = halo
    while True:
        s = cur.sides()
        # locate the sides contained in the original pair
        q1 = next(q for q in s if set(q.vertices) <= keep1)
        q2 = next(q for q in s if set(q.vertices) <= keep2 and q is not q1)
        if len(q1) == 1 and len(q2) == 1:
            return cur
        q = q1 if len(q1) >= 2 else q2
        v = q.vertices[1]
        used = cur.D.edge_set | set(cur.P1.edges) | set(cur.P2.edges)
        rest = g.remove_edges(used)
        targets = (set(cur.P1.vertices) | set(cur.P2.vertices))
        R = shortest_path(rest, [v], targets, avoid=cur.D.vertex_set)
        if R is None:
            raise ConstructionError("no rerouting path")
        u = R.vertices[-1]
        if u in cur.P1.vertices:
            w = next(x for x in cur.P1.ends if x in q.vertices)
            nxt = Halo(cur.D, _reroute(cur.P1, w, R), cur.P2, cur.case)
        else:
            w = next(x for x in cur.P2.ends if x in q.vertices)
            nxt = Halo(cur.D, cur.P1, _reroute(cur.P2, w, R), cur.case)
        bad = halo_violations(g, nxt)
        if bad:
            raise ConstructionError(f"rerouted cross fails {bad}")
        old_len = len(q1) + len(q2)
        s2 = nxt.sides()
        n1 = next(x for x in s2 if set(x.vertices) <= keep1)
        n2 = next(x for x in s2 if set(x.vertices) <= keep2 and x is not n1)
        assert len(n1) + len(n2) < old_len
        cur = nxt


def _reroute(p: Path, w, R: Path) -> Path:
    """Replace the segment of ``p`` from end ``w`` to ``R``'s last vertex by ``R`` (which starts off the cross)."""
    if p.vertices[0] != w:
        p = p.reversed()
    u = R.vertices[-1]
    k = p.vertices.index(u)
    tail_v, tail_e = p.vertices[k:], p.edges[k:]
    return Path(R.vertices[:-1] + tail_v, R.edges + tail_e)


# three vertices on a cycle

@dataclass(frozen=True)
class MWPartition:
    X1: frozenset
    X2: frozenset
    Y: tuple  # (Y1, Y2, Y3)

    def to_json(self) -> str:
        return json.dumps({"X1": sorted(self.X1), "X2": sorted(self.X2), "Y": [sorted(y) for y in self.Y]})


def partition_violations(g: SignedGraph, part: MWPartition, ys) -> list[str]:
    bad = []
    sets = [part.X1, part.X2, *part.Y]
    if any(not s for s in sets) or sum(len(s) for s in sets) != len(g) or frozenset().union(*sets) != g.vertices:
        bad.append("not a partition")
        return bad
    for y, Y in zip(ys, part.Y):
        if y not in Y:
            bad.append("y not in Y")

    def between(A, B):
        return [e for e in g.edge_ids if (g.ends(e)[0] in A and g.ends(e)[1] in B)
                or (g.ends(e)[0] in B and g.ends(e)[1] in A)]

    if between(part.X1, part.X2):
        bad.append("X1-X2 edge")
    for i, j in combinations(range(3), 2):
        if between(part.Y[i], part.Y[j]):
            bad.append("Y-Y edge")
    for X in (part.X1, part.X2):
        for Y in part.Y:
            if len(between(X, Y)) != 1:
                bad.append("X-Y count")
    return bad


def cycle_through(g: SignedGraph, required) -> Cycle | None:
    """A cycle containing every vertex of ``required`` (first in path enumeration order)."""
    req = list(dict.fromkeys(required))
    if not req:
        return None
    if len(req) == 1:
        for c in iter_cycles(g):
            if req[0] in c.vertex_set:
                return c
        return None
    a, b = req[0], req[1]
    for p in iter_paths(g, a, b):
        rest = g.remove_edges(p.edges).remove_vertices(p.interior)
        need = set(req) - set(p.vertices)
        for q in iter_paths(rest, b, a):
            if not q.edges or len(p.edges) + len(q.edges) < 2:
                continue
            if len(p.edges) == 1 and len(q.edges) == 1 and p.edges[0] == q.edges[0]:
                continue
            if need <= set(q.vertices):
                return Cycle(p.vertices + q.vertices[1:-1], p.edges + q.edges)
    return None


def mesner_watkins(g: SignedGraph, y1, y2, y3):
    """A cycle through y1, y2, y3, or the five-part partition certifying that none exists."""
    ys = (y1, y2, y3)
    if len(set(ys)) != 3 or not set(ys) <= g.vertices:
        raise StructureError("need three distinct vertices")
    if g.max_degree > 3 or not is_2_connected(g):
        raise StructureError("need a 2-connected graph of maximum degree 3")
    c = cycle_through(g, ys)
    if c is not None:
        return c
    # candidate Y sets: connected sets with exactly two boundary edges
    cands = {y: set() for y in ys}
    for e, f in combinations(g.edge_ids, 2):
        rest = g.remove_edges([e, f])
        for comp in rest.components():
            if g.delta(comp) == {e, f}:
                for y in ys:
                    if y in comp and not (set(ys) - {y}) & comp:
                        cands[y].add(comp)
    for y in ys:
        if g.deg(y) == 2:
            cands[y].add(frozenset([y]))
    order = {y: sorted(cands[y], key=lambda s: (len(s), sorted(s))) for y in ys}
    for Y1, Y2, Y3 in product(order[y1], order[y2], order[y3]):
        if Y1 & Y2 or Y1 & Y3 or Y2 & Y3:
            continue
        rest = g.vertices - Y1 - Y2 - Y3
        parts = g.induced(rest).components()
        if len(parts) != 2:
            continue
        X1, X2 = sorted(parts, key=lambda s: min(s))
        part = MWPartition(X1, X2, (Y1, Y2, Y3))
        if not partition_violations(g, part, ys):
            return part
    raise ConstructionError("neither a cycle nor a partition was found")


def two_disjoint_paths(g: SignedGraph, sources, targets) -> tuple[Path, Path] | None:
    """Vertex-disjoint paths linking the two sources to the two targets (either pairing)."""
    s1, s2 = sources
    for t1, t2 in (tuple(targets), tuple(targets)[::-1]):
        for p in iter_paths(g, s1, t1, avoid={s2, t2}):
            rest = g.remove_vertices(p.vertices)
            if s2 not in rest.vertices or t2 not in rest.vertices:
                continue
            q = shortest_path(rest, [s2], [t2])
            if q is not None:
                return p, q
    return None


def path_with_two_interior_v2(g: SignedGraph, v1, v2, _check: bool = True) -> Path:
    """v1-v2 path with at least two interior degree-2 vertices in a balanced 2-connected shrubbery."""
    V2 = degree2_vertices(g)
    if _check:
        if not is_balanced(g) or not is_2_connected(g) or g.max_degree > 3:
            raise StructureError("need a balanced 2-connected subcubic graph")
        if v1 not in V2 or v2 not in V2 or v1 == v2:
            raise StructureError("ends must be distinct degree-2 vertices")
        for c in iter_cycles(g, 4):
            if len(c) == 4 and g.sign_of(c.edges) > 0:
                raise StructureError("balanced 4-cycle present")
    return _two_v2_path(g, v1, v2, V2)


def _two_v2_path(g: SignedGraph, v1, v2, V2) -> Path:
    # minimal Y avoiding v1, v2 with a cycle inside and two boundary edges
    best = None
    for e, f in combinations(g.edge_ids, 2):
        rest = g.remove_edges([e, f])
        for comp in rest.components():
            if v1 in comp or v2 in comp or g.delta(comp) != {e, f}:
                continue
            if not has_cycle(g.induced(comp)):
                continue
            key = (len(comp), sorted(comp))
            if best is None or key < best[0]:
                best = (key, comp, (e, f))
    if best is not None:
        _, Y, (e, f) = best
        ys = []
        for x in (e, f):
            ys.append(next(z for z in g.ends(x) if z in Y))
        y1, y2 = ys
        sub = g.induced(Y)
        Q = _two_v2_path(sub, y1, y2, V2)
        outside = g.remove_vertices(Y - {y1, y2})
        link = two_disjoint_paths(outside, (v1, v2), (y1, y2))
        if link is None:
            raise ConstructionError("no linkage into Y")
        p, q = link
        if p.vertices[-1] != Q.vertices[0]:
            Q = Q.reversed()
        return Path(p.vertices + Q.vertices[1:] + q.reversed().vertices[1:],
                    p.edges + Q.edges + q.reversed().edges)
    others = sorted(V2 - {v1, v2} & g.vertices)
    if len(others) < 2:
        raise ConstructionError("fewer than two spare degree-2 vertices")
    y1, y2 = others[0], others[1]
    gp, y3 = g.add_vertex()
    gp, ea = gp.add_edge(v1, y3)
    gp, eb = gp.add_edge(v2, y3)
    res = mesner_watkins(gp, y1, y2, y3)
    if isinstance(res, Cycle):
        return _open_at(res, y3, v1)
    for w in others[2:]:
        if w in res.Y[2]:
            continue
        c = cycle_through(gp, (y3, w))
        if c is not None:
            p = _open_at(c, y3, v1)
            if len(set(p.interior) & V2) >= 2:
                return p
    raise ConstructionError("partition case without a spare degree-2 vertex")


def _open_at(c: Cycle, y, start) -> Path:
    """Delete ``y`` from cycle ``c`` and return the remaining path starting at ``start``."""
    c = c.rotated(y)
    p = Path(c.vertices[1:], c.edges[1:-1])
    if p.vertices[0] != start:
        p = p.reversed()
    return p


def cycle_through_pair(g: SignedGraph, a, b) -> Cycle | None:
    """A cycle through ``a`` and ``b`` from two internally disjoint paths (flow based)."""
    if a == b or a not in g.vertices or b not in g.vertices:
        return None
    aux = nx.Graph()
    aux.add_nodes_from(g.vertex_ids)
    for e in g.edge_ids:
        u, v = g.ends(e)
        if u != v:
            aux.add_edge(u, ("e", e))
            aux.add_edge(("e", e), v)
    try:
        paths = list(nx.node_disjoint_paths(aux, a, b, cutoff=2))
    except nx.NetworkXNoPath:
        return None
    if len(paths) < 2:
        return None
    p, q = paths[0], paths[1]
    p_v = [x for x in p if not isinstance(x, tuple)]
    p_e = [x[1] for x in p if isinstance(x, tuple)]
    q_v = [x for x in q if not isinstance(x, tuple)][::-1]
    q_e = [x[1] for x in q if isinstance(x, tuple)][::-1]
    return Cycle(tuple(p_v + q_v[1:-1]), tuple(p_e + q_e))
