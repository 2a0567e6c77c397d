"""Shrubberies, removable cycles and nowhere-zero waterings.

A watering of an oriented subcubic signed graph is a Z2xZ3 edge function
whose boundary is (0, 0) at every vertex of degree three and (0, ±1) at every
vertex of degree one or two.  ``water_shrubbery`` builds one recursively,
trying the configurations of the workhorse argument in their proof order;
each handler either produces a removable cycle whose deletion leads to a
smaller instance, or declines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain, combinations, product

import numpy as np

from .flows import (
    Z2xZ3,
    Zk,
    boundary,
    check_orientation,
    cycle_unit,
    default_orientation,
    half_at,
    is_nowhere_zero,
    solve_boundary_positive,
    support_sign,
    switch_orientation,
)
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
    is_cycle,
    iter_cycles,
    iter_paths,
    shortest_path,
)
from .structure import (
    ConstructionError,
    StructureError,
    cycle_through,
    cycle_through_pair,
    degree2_vertices,
    disjoint_unbalanced_pair,
    find_halo,
    find_halo_bruteforce,
    has_unbalanced_theta,
    has_unbalanced_theta_or_loop,
    is_2_connected,
    mesner_watkins,
    path_with_two_interior_v2,
    shorten_cross,
    suppress_degree_2,
)


class ShrubberyError(ValueError):
    pass


class WateringError(RuntimeError):
    pass


WATERING_STATS: dict = {}


def _bump(key: str) -> None:
    WATERING_STATS[key] = WATERING_STATS.get(key, 0) + 1


# recognition

@dataclass(frozen=True)
class ShrubberyReport:
    is_shrubbery: bool
    violated_property: int | None = None
    witness: object = None


def _dense_subsets(g: SignedGraph, max_vertices: int):
    """Vertex sets X (|X| >= 2) with |delta(X)| + sum(3 - deg) <= 3, smallest first."""
    vs = g.vertex_ids
    n = len(vs)
    if n > max_vertices:
        raise ShrubberyError(f"subset vertex cap exceeded: {n} > {max_vertices}")
    if n < 2:
        return
    bit = {v: i for i, v in enumerate(vs)}
    masks = np.arange(1 << n, dtype=np.int64)
    size = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        size += (masks >> i) & 1
    inner = np.zeros(1 << n, dtype=np.int64)
    for e in g.edge_ids:
        u, v = g.ends(e)
        m = (1 << bit[u]) | (1 << bit[v])
        inner += (masks & m) == m
    q = 3 * size - 2 * inner
    hits = np.nonzero((size >= 2) & (q <= 3))[0]
    order = sorted(hits.tolist(), key=lambda m: (int(size[m]), m))
    for m in order:
        yield frozenset(v for v in vs if m >> bit[v] & 1)


def validate_shrubbery(g: SignedGraph, max_vertices: int = 22) -> ShrubberyReport:
    """Check the four defining properties (in order) and report the first violation.

    Property 3 is also applied to a single vertex carrying only positive
    loops, which has no watering at all.
    """
    for v in g.vertex_ids:
        if g.deg(v) > 3:
            return ShrubberyReport(False, 1, v)
    for comp in g.components():
        if all(g.deg(v) == 3 for v in comp):
            h = g.induced(comp)
            for e in h.edge_ids:
                if is_balanced(h.remove_edges([e])):
                    return ShrubberyReport(False, 2, (comp, e))
    for v in g.vertex_ids:
        ls = [e for e in g.loops() if g.ends(e)[0] == v]
        if ls and all(g.sign(e) > 0 for e in ls):
            return ShrubberyReport(False, 3, frozenset([v]))
    for X in _dense_subsets(g, max_vertices):
        if is_balanced(g.induced(X)):
            return ShrubberyReport(False, 3, X)
    for c in iter_cycles(g, 4):
        if len(c) == 4 and g.sign_of(c.edges) > 0:
            return ShrubberyReport(False, 4, c)
    return ShrubberyReport(True)


def star_condition(g: SignedGraph) -> bool:
    """|delta(X)| + sum(3 - deg(x)) >= 3 for every nonempty X (exhaustive)."""
    vs = g.vertex_ids
    for r in range(1, len(vs) + 1):
        for X in combinations(vs, r):
            q = 3 * len(X) - 2 * len(g.inner_edges(X))
            if q < 3:
                return False
    return True


def validate_watering(g: SignedGraph, tau, phi, nowhere_zero: bool = True) -> bool:
    if g.max_degree > 3:
        raise GraphError("waterings need maximum degree at most 3")
    if nowhere_zero and not is_nowhere_zero(g, phi, Z2xZ3):
        return False
    bd = boundary(g, tau, {e: phi.get(e, (0, 0)) for e in g.edge_ids}, Z2xZ3)
    for v, x in bd.items():
        d = g.deg(v)
        if d == 3 and x != (0, 0):
            return False
        if d in (1, 2) and (x[0] != 0 or x[1] == 0):
            return False
    return True


# removable cycles

@dataclass(frozen=True)
class RemovableCycleReport:
    cycle: Cycle
    unbalanced_chords: tuple
    balanced_chords: tuple
    v2_on_cycle: tuple
    removable: bool


def classify_cycle(g: SignedGraph, c: Cycle) -> RemovableCycleReport:
    if not is_cycle(g, c):
        raise GraphError("not a cycle of the graph")
    V = c.vertex_set
    E = c.edge_set
    unb, bal = [], []
    for e in sorted(g.inner_edges(V)):
        if e in E or g.is_loop(e):
            continue
        theta = g.edge_subgraph(E | {e})
        (bal if is_balanced(theta) else unb).append(e)
    v2 = tuple(v for v in c.vertices if g.deg(v) == 2)
    removable = g.sign_of(c.edges) < 0 or len(v2) + len(unb) >= 2
    return RemovableCycleReport(c, tuple(unb), tuple(bal), v2, removable)


def _phi2_boundary(g: SignedGraph, tau, phi, vertices) -> dict:
    out = {v: 0 for v in vertices}
    for v in vertices:
        for h in g.half_edges_at(v):
            val = phi.get(h >> 1)
            if val is not None:
                out[v] = (out[v] + tau[h] * val[1]) % 3
    return out


def extend_over_removable(g: SignedGraph, tau, c: Cycle, phi_prime, report: RemovableCycleReport | None = None,
                          check: bool = True) -> dict:
    """Extend a nowhere-zero watering of ``g - V(c)`` over the removable cycle ``c``.

    The result agrees with ``phi_prime`` off the cycle and its first
    coordinate is supported on ``E(c)`` plus the support of ``phi_prime``.
    """
    rep = report or classify_cycle(g, c)
    if not rep.removable:
        raise WateringError("cycle is not removable")
    VC = c.vertex_set
    rest = g.remove_vertices(VC)
    if set(phi_prime) != set(rest.edge_ids):
        raise WateringError("phi' must be defined exactly on E(g - V(C))")
    if check and not validate_watering(rest, tau, phi_prime):
        raise WateringError("phi' is not a nowhere-zero watering of g - V(C)")
    phi = dict(phi_prime)
    attach = {}
    for e in sorted(g.delta(VC)):
        u, v = g.ends(e)
        w = u if u not in VC else v
        attach.setdefault(w, []).append(e)
    for w in sorted(attach):
        es = attach[w]
        base = _phi2_boundary(g, tau, phi, [w])[w]
        want = {0} if g.deg(w) == 3 else {1, 2}
        for signs in product((1, -1), repeat=len(es)):
            tot = base + sum(tau[half_at(g, e, w)] * s for e, s in zip(es, signs))
            if tot % 3 in want:
                for e, s in zip(es, signs):
                    phi[e] = (0, s % 3)
                break
        else:
            raise WateringError(f"no signs on delta(V(C)) at vertex {w}")
    for e in c.edges:
        phi[e] = (1, 0)
    for e in rep.balanced_chords:
        phi[e] = (0, 1)
    v2c = set(rep.v2_on_cycle)

    def residual(beta):
        cur = _phi2_boundary(g, tau, phi, c.vertices)
        return {v: ((beta.get(v, 0) if v in v2c else 0) - cur[v]) % 3 for v in c.vertices}

    if g.sign_of(c.edges) < 0:
        # Case 1: any signs; correct with the unit functions eta^u
        for e in rep.unbalanced_chords:
            phi[e] = (0, 1)
        mu = residual({v: 1 for v in v2c})
        psi = {e: 0 for e in c.edges}
        for u in c.vertices:
            if not mu[u]:
                continue
            unit = cycle_unit(g, tau, c, start=u)
            b = sum(tau[h] * unit[h >> 1] for h in g.half_edges_at(u) if (h >> 1) in unit)
            inv = 1 if b % 3 == 1 else 2
            for e, x in unit.items():
                psi[e] = (psi[e] + mu[u] * inv * x) % 3
    else:
        # Case 2: pick ±1 for the chord and degree-2 variables so that the cycle equation holds
        pot = {c.vertices[0]: 1}
        for i in range(len(c) - 1):
            pot[c.vertices[i + 1]] = pot[c.vertices[i]] * g.sign(c.edges[i])
        unb = list(rep.unbalanced_chords)
        v2l = [v for v in c.vertices if v in v2c]
        for choice in product((1, -1), repeat=len(unb) + len(v2l)):
            for e, a in zip(unb, choice):
                phi[e] = (0, a % 3)
            beta = dict(zip(v2l, choice[len(unb):]))
            mu = residual(beta)
            if sum(pot[v] * mu[v] for v in c.vertices) % 3 == 0:
                break
        else:
            raise WateringError("no ±1 assignment satisfies the cycle equation")
        sub = g.edge_subgraph(c.edges)
        flips = {v for v in c.vertices if pot[v] < 0}
        st = switch_orientation(sub, {h: tau[h] for e in c.edges for h in (2 * e, 2 * e + 1)}, flips)
        psi = solve_boundary_positive(sub.switch(flips), st, {v: pot[v] * mu[v] % 3 for v in c.vertices}, Zk(3))
    for e in c.edges:
        phi[e] = (1, psi[e] % 3)
    if check:
        if not validate_watering(g, tau, phi):
            raise WateringError("extension is not a watering")
        supp = {e for e in g.edge_ids if phi[e][0]}
        assert supp == set(c.edges) | {e for e, x in phi_prime.items() if x[0]}
    return phi


# the recursion

@dataclass
class _Ctx:
    trace: list = field(default_factory=list)


def _scale(phi, a):
    return {e: (x[0], (a * x[1]) % 3) for e, x in phi.items()}


def water_shrubbery(g: SignedGraph, eps: int | None = None, tau=None, validate: bool = True,
                    trace: list | None = None) -> dict:
    """Nowhere-zero watering of a shrubbery; with ``eps`` the Z2-support has sign ``eps``."""
    tau = tau if tau is not None else default_orientation(g)
    check_orientation(g, tau)
    if g.max_degree > 3:
        raise ShrubberyError("maximum degree exceeds 3")
    if validate:
        rep = validate_shrubbery(g)
        if not rep.is_shrubbery:
            raise ShrubberyError(f"property {rep.violated_property} fails: {rep.witness}")
    if eps is not None:
        if eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        if not has_unbalanced_theta_or_loop(g):
            raise WateringError("a sign target needs an unbalanced theta or a loop")
    ctx = _Ctx(trace if trace is not None else [])
    phi = _water(g, tau, eps, ctx)
    if not validate_watering(g, tau, phi):
        raise WateringError("internal: result is not a nowhere-zero watering")
    if eps is not None and support_sign(g, phi) != eps:
        raise WateringError("internal: support sign differs from the target")
    return phi


def seymour_watering(g: SignedGraph, tau=None, trace: list | None = None) -> dict:
    """Nowhere-zero watering of a balanced subcubic graph satisfying the (★) deficiency bound.

    Runs the same recursion as ``water_shrubbery`` with no sign target; only
    removable cycles through two degree-2 vertices and degree-one peeling occur.
    """
    tau = tau if tau is not None else default_orientation(g)
    if g.max_degree > 3 or not is_balanced(g):
        raise WateringError("needs a balanced subcubic graph")
    return water_shrubbery(g, None, tau, validate=False, trace=trace)


def _water(g: SignedGraph, tau, eps, ctx: _Ctx) -> dict:
    iso = [v for v in g.vertex_ids if g.deg(v) == 0]
    if iso:
        g = g.remove_vertices(iso)
    if not g.edge_ids:
        if eps == -1:
            raise WateringError("no edges to carry a negative support")
        return {}
    comps = g.components()
    if len(comps) > 1:
        return _claim1_components(g, tau, eps, ctx, comps)
    br = bridges(g)
    if br:
        return _claim1_bridge(g, tau, eps, ctx, min(br))
    if eps is None:
        return _claim2_removable(g, tau, ctx)
    if not has_unbalanced_theta(g):
        return _claim2_loop(g, tau, eps, ctx)
    for handler in (_claim4, _claim5, _claim6, _claim7, _claim8, _claim9, _claim10, _claim11, _endgame):
        phi = handler(g, tau, eps, ctx)
        if phi is not None:
            return phi
    _bump("exhaustive")
    ctx.trace.append(("exhaustive",))
    cycles = sorted(iter_cycles(g), key=lambda c: (len(c), tuple(sorted(c.edges))))
    for c in cycles:
        phi = _try(g, tau, eps, c, ctx, "exhaustive")
        if phi is not None:
            return phi
    raise WateringError("no removable cycle of type (3A) or (3B); the input is not a shrubbery")


def _sub(g: SignedGraph, tau, eps, ctx, h: SignedGraph) -> dict:
    assert h.num_edges < g.num_edges, "recursion measure must decrease"
    return _water(h, tau, eps, ctx)


def _claim1_components(g, tau, eps, ctx, comps):
    parts = [g.induced(c) for c in comps]
    _bump("claim1")
    ctx.trace.append(("claim1", "components", len(parts)))
    carrier = None
    if eps is not None:
        carrier = next((i for i, h in enumerate(parts) if has_unbalanced_theta_or_loop(h)), None)
        if carrier is None:
            raise WateringError("no component can carry the sign target")
    phi, sign = {}, 1
    for i, h in enumerate(parts):
        if i == carrier:
            continue
        got = _sub(g, tau, None, ctx, h)
        sign *= support_sign(h, got)
        phi.update(got)
    if carrier is not None:
        phi.update(_sub(g, tau, eps * sign, ctx, parts[carrier]))
    return phi


def _claim1_bridge(g, tau, eps, ctx, f):
    _bump("claim1")
    ctx.trace.append(("claim1", "cut-edge", f))
    rest = g.remove_edges([f])
    parts = [rest.induced(c) for c in rest.components()]
    carrier = None
    if eps is not None:
        carrier = next((i for i, h in enumerate(parts) if has_unbalanced_theta_or_loop(h)), None)
        if carrier is None:
            raise WateringError("no side can carry the sign target")
    sols, sign = {}, 1
    for i, h in enumerate(parts):
        if i == carrier:
            continue
        sols[i] = _sub(g, tau, None, ctx, h)
        sign *= support_sign(h, sols[i])
    if carrier is not None:
        sols[carrier] = _sub(g, tau, eps * sign, ctx, parts[carrier])
    ends = g.ends(f)
    for coeffs in product((1, -1), repeat=len(parts)):
        phi = {f: (0, 1)}
        for i, a in enumerate(coeffs):
            phi.update(_scale(sols[i], a))
        if _ok_at(g, tau, phi, ends):
            return phi
    raise WateringError("no scaling fixes the cut-edge ends")


def _ok_at(g, tau, phi, vertices) -> bool:
    bd = boundary(g, tau, phi, Z2xZ3, check=False)
    for v in set(vertices):
        x = bd[v]
        if g.deg(v) == 3 and x != (0, 0):
            return False
        if g.deg(v) in (1, 2) and (x[0] or not x[1]):
            return False
    return True


def _claim2_loop(g, tau, eps, ctx):
    """Base case: a single vertex with one negative loop."""
    if len(g) != 1 or g.num_edges != 1 or g.sign(g.edge_ids[0]) > 0:
        raise WateringError("sign target requested on a graph without an unbalanced theta or loop")
    _bump("claim2")
    ctx.trace.append(("claim2", "loop"))
    e = g.edge_ids[0]
    return {e: (0, 1) if eps == 1 else (1, 1)}


def _claim2_removable(g, tau, ctx):
    """No sign target: delete any removable cycle and extend."""
    c = find_unbalanced_cycle(g)
    if c is None:
        v2 = sorted(degree2_vertices(g))
        if len(v2) < 2:
            raise WateringError("no removable cycle (fewer than two degree-2 vertices)")
        c = cycle_through_pair(g, v2[0], v2[1])
        if c is None:
            raise WateringError("no cycle through two degree-2 vertices")
    _bump("claim2")
    ctx.trace.append(("claim2", "removable", c.edges))
    rest = g.remove_vertices(c.vertex_set)
    phi_r = _sub(g, tau, None, ctx, rest)
    phi_r = {e: phi_r[e] for e in rest.edge_ids}
    return extend_over_removable(g, tau, c, phi_r, check=False)


def _try(g, tau, eps, c: Cycle, ctx, name) -> dict | None:
    """Use ``c`` if it is removable of type (3A) or (3B)."""
    rep = classify_cycle(g, c)
    if not rep.removable:
        return None
    rest = g.remove_vertices(c.vertex_set)
    s = g.sign_of(c.edges)
    if has_unbalanced_theta(rest):
        kind, sub_eps = "3A", eps * s
    elif s == eps and is_balanced(rest):
        kind, sub_eps = "3B", None
    else:
        return None
    _bump(name)
    ctx.trace.append((name, kind, c.edges))
    phi_r = _sub(g, tau, sub_eps, ctx, rest)
    return extend_over_removable(g, tau, c, {e: phi_r[e] for e in rest.edge_ids}, report=rep, check=False)


def _unbalanced_cycles(g):
    return [c for c in iter_cycles(g) if g.sign_of(c.edges) < 0]


def _cycles_from(g, v0, alive):
    """Cycles through ``v0`` as edge lists, each once; ``alive(path, end)`` prunes."""
    for e in g.incident_edges(v0):
        if g.is_loop(e):
            yield [e]
    seen = {v0}

    def rec(x, es):
        for h in g.half_edges_at(x):
            e = h >> 1
            if g.is_loop(e) or (es and e == es[-1]):
                continue
            y = g.other_end(e, x)
            if y == v0:
                if len(es) >= 1 and es[0] < e:
                    yield es + [e]
                continue
            if y in seen:
                continue
            seen.add(y)
            if alive(seen, y):
                yield from rec(y, es + [e])
            seen.discard(y)

    yield from rec(v0, [])


def _covering_pair(g, need: set):
    """Two disjoint unbalanced cycles whose vertices cover ``need``."""
    if not need:
        unb = _unbalanced_cycles(g)
        for c1, c2 in combinations(unb, 2):
            if not c1.vertex_set & c2.vertex_set:
                return c1, c2
        return None
    v0 = min(need)
    adj = {v: [g.other_end(h >> 1, v) for h in g.half_edges_at(v)] for v in g.vertex_ids}

    def alive(path, end):
        for r in need:
            if r in path:
                continue
            if sum(1 for w in adj[r] if w not in path or w == end or w == v0) < 2:
                return False
        return True

    for es in _cycles_from(g, v0, alive):
        if g.sign_of(es) > 0:
            continue
        c1 = cycle_from_edges(g, es)
        rest = g.remove_vertices(c1.vertex_set)
        R = need - c1.vertex_set
        if any(sum(1 for w in adj[r] if w in rest.vertices) < 2 for r in R):
            continue
        for c2 in iter_cycles(rest):
            if g.sign_of(c2.edges) < 0 and R <= c2.vertex_set:
                return c1, c2
    return None


def _claim4(g, tau, eps, ctx):
    """Two disjoint unbalanced cycles covering every degree-3 vertex."""
    pair = _covering_pair(g, {v for v in g.vertex_ids if g.deg(v) == 3})
    if pair is None:
        return None
    c1, c2 = pair
    for c in pair:
        if has_unbalanced_theta(g.remove_vertices(c.vertex_set)):
            return _try(g, tau, eps, c, ctx, "claim4")
    if eps == -1:
        for c in chain(pair, (c for c in iter_cycles(g) if g.sign_of(c.edges) < 0)):
            if not has_cycle(g.remove_vertices(c.vertex_set)):
                phi = _try(g, tau, eps, c, ctx, "claim4")
                if phi is not None:
                    return phi
        return None
    forest = g.remove_vertices(c1.vertex_set | c2.vertex_set)
    if has_cycle(forest):
        return None
    _bump("claim4")
    ctx.trace.append(("claim4", "two-cycles", c1.edges, c2.edges))
    phi_f = _sub(g, tau, None, ctx, forest)
    mid = g.remove_vertices(c1.vertex_set)
    phi_m = extend_over_removable(mid, tau, c2, {e: phi_f[e] for e in forest.edge_ids}, check=False)
    return extend_over_removable(g, tau, c1, phi_m, check=False)


def _two_cuts(g: SignedGraph) -> list:
    """Two-edge cuts separating cycles as (X, (e, f)) for both sides X."""
    out = []
    for e, f in combinations(g.edge_ids, 2):
        if g.is_loop(e) or g.is_loop(f):
            continue
        parts = g.remove_edges([e, f]).components()
        if len(parts) != 2:
            continue
        a, b = parts
        if g.delta(a) != {e, f}:
            continue
        if has_cycle(g.induced(a)) and has_cycle(g.induced(b)):
            out.append((a, (e, f)))
            out.append((b, (e, f)))
    out.sort(key=lambda t: (len(t[0]), sorted(t[0]), t[1]))
    return out


def _cycle_in_side(g, X, v2):
    """Unbalanced cycle in G[X], else a cycle of G[X] through two degree-2 vertices of G."""
    h = g.induced(X)
    c = find_unbalanced_cycle(h)
    if c is not None:
        return c
    cand = sorted(v for v in X if v in v2)
    for a, b in combinations(cand, 2):
        c = cycle_through_pair(h, a, b)
        if c is not None:
            return c
    return None


def _claim5(g, tau, eps, ctx):
    v2 = degree2_vertices(g)
    for X, cut in _two_cuts(g):
        if not has_unbalanced_theta(g.induced(g.vertices - X)):
            continue
        c = _cycle_in_side(g, X, v2)
        if c is not None:
            phi = _try(g, tau, eps, c, ctx, "claim5")
            if phi is not None:
                return phi
    return None


def _claim6(g, tau, eps, ctx):
    v2 = degree2_vertices(g)
    for X, (e, f) in _two_cuts(g):
        if not is_balanced(g.remove_edges([e, f])):
            continue
        _, flips = canonical_switch(g.remove_edges([e, f]))
        gs = g.switch(flips)
        e1 = e if gs.sign(e) < 0 else f
        if eps == -1:
            u, v = g.ends(e1)
            p = shortest_path(g.remove_edges([e1]), [u], [v])
            if p is None:
                continue
            c = Cycle(p.vertices, p.edges + (e1,))
        else:
            c = None
            cand = sorted(x for x in X if x in v2)
            h = g.induced(X)
            for a, b in combinations(cand, 2):
                c = cycle_through_pair(h, a, b)
                if c is not None:
                    break
            if c is None:
                continue
        phi = _try(g, tau, eps, c, ctx, "claim6")
        if phi is not None:
            return phi
    return None


def _arcs(c: Cycle, a, b) -> list[Path]:
    i, j = c.vertices.index(a), c.vertices.index(b)
    one = c.arc(i, j)
    r = c.reversed().rotated(a)
    two = r.arc(0, r.vertices.index(b))
    return [one, two]


def _claim7(g, tau, eps, ctx):
    cuts = _two_cuts(g)
    if not cuts:
        return None
    v2 = degree2_vertices(g)
    e = min(min(t[1]) for t in cuts)
    S = {e}
    for f in g.edge_ids:
        if f != e and not g.remove_edges([e, f]).is_connected():
            S.add(f)
    rest = g.remove_edges(S)
    parts = [c for c in rest.components() if len(c) > 1]
    parts.sort(key=min)
    info = []
    for comp in parts:
        h = rest.induced(comp)
        X = sorted(v for v in comp if any((hh >> 1) in S for hh in g.half_edges_at(v)))
        if len(X) != 2:
            return None
        if is_balanced(h):
            kind = "balanced"
        elif h.num_edges == len(h) and all(h.deg(v) == 2 for v in h.vertex_ids):
            kind = "cycle"
        else:
            return None
        info.append((h, X, kind))
    unb = [i for i, t in enumerate(info) if t[2] == "cycle"]
    if not unb:
        return None
    first = unb[0]
    paths = {}
    for i, (h, (a, b), kind) in enumerate(info):
        if i == first:
            continue
        if kind == "balanced":
            try:
                p = path_with_two_interior_v2(h, a, b, _check=False)
            except (ConstructionError, StructureError):
                p = next((q for q in iter_paths(h, a, b) if len(set(q.interior) & v2) >= 2), None)
            if p is None:
                return None
        else:
            cyc = cycle_from_edges(h, h.edge_ids)
            arcs = _arcs(cyc, a, b)
            if len(cyc) == 2:
                p = min(arcs, key=lambda q: q.edges)
            else:
                p = next((q for q in arcs if set(q.interior) & v2), None)
                if p is None:
                    return None
        paths[i] = p
    h1, (a1, b1), _ = info[first]
    base = set(S)
    for p in paths.values():
        base |= set(p.edges)
    cyc1 = cycle_from_edges(h1, h1.edge_ids)
    for arc in _arcs(cyc1, a1, b1):
        es = base | set(arc.edges)
        if g.sign_of(es) != eps:
            continue
        try:
            c = cycle_from_edges(g, es)
        except GraphError:
            return None
        return _try(g, tau, eps, c, ctx, "claim7")
    return None


def _claim8(g, tau, eps, ctx):
    pair = disjoint_unbalanced_pair(g)
    if pair is None:
        return None
    for c in pair:
        if has_unbalanced_theta(g.remove_vertices(c.vertex_set)):
            phi = _try(g, tau, eps, c, ctx, "claim8")
            if phi is not None:
                return phi
    return None


def _claim9(g, tau, eps, ctx):
    if eps != -1:
        return None
    c = find_unbalanced_cycle(g)
    cands = [c] + _unbalanced_cycles(g) if c is not None else _unbalanced_cycles(g)
    for c in cands:
        phi = _try(g, tau, eps, c, ctx, "claim9")
        if phi is not None:
            return phi
    return None


def _balancing_edges(g):
    return [e for e in g.edge_ids if is_balanced(g.remove_edges([e]))]


def _claim10(g, tau, eps, ctx):
    v2 = sorted(degree2_vertices(g))
    for e in _balancing_edges(g):
        y1, y2 = g.ends(e)
        if y1 == y2 or g.deg(y1) != 3 or g.deg(y2) != 3 or not v2:
            continue
        y3 = v2[0]
        gp = g.remove_edges([e])
        cands = []
        if is_2_connected(gp) and gp.max_degree <= 3:
            try:
                res = mesner_watkins(gp, y1, y2, y3)
            except (ConstructionError, StructureError):
                res = None
            if isinstance(res, Cycle):
                cands.append(res)
        for w in v2[1:]:
            c = cycle_through_pair(gp, w, y3)
            if c is not None:
                cands.append(c)
        for c in cands:
            phi = _try(g, tau, eps, c, ctx, "claim10")
            if phi is not None:
                return phi
    return None


def _extend_v2(g, vs, es) -> None:
    while g.deg(vs[-1]) == 2:
        f = next((h >> 1 for h in g.half_edges_at(vs[-1]) if (h >> 1) != es[-1]), None)
        if f is None:
            return
        w = g.other_end(f, vs[-1])
        if w in vs:
            return
        vs.append(w)
        es.append(f)


def _maximal_v2_path(g, e) -> Path:
    """Longest path through ``e`` whose interior consists of degree-2 vertices."""
    u, v = g.ends(e)
    vs, es = [u, v], [e]
    _extend_v2(g, vs, es)
    vs.reverse()
    es.reverse()
    _extend_v2(g, vs, es)
    return Path(tuple(vs), tuple(es))


def _claim11(g, tau, eps, ctx):
    v2 = degree2_vertices(g)
    for e in _balancing_edges(g):
        if g.is_loop(e):
            continue
        P = _maximal_v2_path(g, e)
        if len(P.edges) < 2:
            continue
        gp = g.remove_vertices(P.interior)
        for y0, y1 in (P.ends, P.ends[::-1]):
            spare = sorted(v for v in v2 if v in gp.vertices and v not in (y0, y1))
            if len(spare) < 2:
                continue
            y2, y3 = spare[0], spare[1]
            cands = []
            if is_2_connected(gp):
                try:
                    res = mesner_watkins(gp, y1, y2, y3)
                except (ConstructionError, StructureError):
                    res = None
                if isinstance(res, Cycle):
                    cands.append(res)
            for req in ((y2, y3), (y0, y2, y3)):
                c = cycle_through(gp, req)
                if c is not None:
                    cands.append(c)
            for w in spare:
                c = cycle_through_pair(gp, w, y1)
                if c is not None:
                    cands.append(c)
            for c in cands:
                phi = _try(g, tau, eps, c, ctx, "claim11")
                if phi is not None:
                    return phi
    return None


def _endgame(g, tau, eps, ctx):
    """Suppress degree-2 vertices, find a halo, shorten its cross, use D = P1 ∪ P2 ∪ B2 ∪ B4."""
    try:
        sup = suppress_degree_2(g)
    except StructureError:
        return None
    base = sup.base
    try:
        halo = find_halo(base, check=False)
    except (ConstructionError, StructureError):
        _bump("halo_fallback")
        try:
            halo = find_halo_bruteforce(base, check=False)
        except (ConstructionError, StructureError):
            return None
    v2 = degree2_vertices(g)
    sides = halo.sides()

    def weight(i):
        vs = set(sup.expand_path(sides[i]).vertices) | set(sup.expand_path(sides[i + 2]).vertices)
        return len(vs & v2), min(sides[i].edges + sides[i + 2].edges)

    pair = 0 if weight(0) <= weight(1) else 1
    keep1 = set(sides[pair].vertices)
    try:
        short = shorten_cross(base, halo, pair)
    except (ConstructionError, StructureError):
        return None
    s2 = short.sides()
    idx = next(i for i in range(4) if set(s2[i].vertices) <= keep1 and len(s2[i]) == 1)
    others = [s2[(idx + 1) % 4], s2[(idx + 3) % 4]]
    es = set(sup.expand_path(short.P1).edges) | set(sup.expand_path(short.P2).edges)
    for s in others:
        es |= set(sup.expand_path(s).edges)
    try:
        D = cycle_from_edges(g, es)
    except GraphError:
        return None
    return _try(g, tau, eps, D, ctx, "endgame")
