"""Orientations, boundaries and constructive flow lemmas on bidirected graphs.

Edge functions are plain dicts from edge id to a group element.  Integers
represent Z and Z_k; Z2xZ3 elements are pairs ``(a, b)`` with ``a`` mod 2
and ``b`` mod 3.  ``tau[h] == +1`` means half-edge ``h`` points toward its
vertex.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from .graph import Cycle, GraphError, SignedGraph, balancing_flips, find_unbalanced_cycle, iter_cycles, iter_paths


class OrientationError(ValueError):
    pass


class FlowError(ValueError):
    pass


@dataclass(frozen=True)
class Group:
    """Coefficient group: ``Z`` (k=0), ``Zk`` or ``Z2xZ3``."""

    kind: str
    k: int = 0

    @property
    def finite(self) -> bool:
        return self.kind != "Z"

    @property
    def order(self) -> int:
        if self.kind == "Z":
            raise FlowError("Z is infinite")
        return 6 if self.kind == "Z2xZ3" else self.k

    @property
    def zero(self):
        return (0, 0) if self.kind == "Z2xZ3" else 0

    def norm(self, a):
        if self.kind == "Z":
            return a
        if self.kind == "Zk":
            return a % self.k
        return (a[0] % 2, a[1] % 3)

    def add(self, a, b):
        if self.kind == "Z":
            return a + b
        if self.kind == "Zk":
            return (a + b) % self.k
        return ((a[0] + b[0]) % 2, (a[1] + b[1]) % 3)

    def scale(self, c: int, a):
        if self.kind == "Z":
            return c * a
        if self.kind == "Zk":
            return (c * a) % self.k
        return ((c * a[0]) % 2, (c * a[1]) % 3)

    def is_zero(self, a) -> bool:
        return self.norm(a) == self.zero

    def elements(self) -> list:
        if self.kind == "Z":
            raise FlowError("Z is infinite")
        if self.kind == "Zk":
            return list(range(self.k))
        return [(a, b) for a in range(2) for b in range(3)]

    def nonzero(self) -> list:
        return [x for x in self.elements() if x != self.zero]

    def __str__(self):
        return "Z" if self.kind == "Z" else ("Z2xZ3" if self.kind == "Z2xZ3" else f"Z{self.k}")


Z = Group("Z")
Z2xZ3 = Group("Z2xZ3", 6)


def Zk(k: int) -> Group:
    if k < 2:
        raise FlowError("Z_k needs k >= 2")
    return Group("Zk", k)


# orientations

def default_orientation(g: SignedGraph) -> dict:
    """Positive edges run first end -> second end; negative edges get two tails."""
    tau = {}
    for e in g.edge_ids:
        tau[2 * e] = -1
        tau[2 * e + 1] = g.sign(e)
    return tau


def check_orientation(g: SignedGraph, tau: Mapping[int, int]) -> None:
    for e in g.edge_ids:
        a, b = tau.get(2 * e), tau.get(2 * e + 1)
        if a not in (1, -1) or b not in (1, -1):
            raise OrientationError(f"orientation missing or invalid on edge {e}")
        if a * b != -g.sign(e):
            raise OrientationError(f"orientation of edge {e} does not match its sign")


def is_orientation(g: SignedGraph, tau: Mapping[int, int]) -> bool:
    try:
        check_orientation(g, tau)
    except OrientationError:
        return False
    return True


def switch_orientation(g: SignedGraph, tau: Mapping[int, int], flips) -> dict:
    """Negate tau on every half-edge at a flipped vertex (pairs with ``g.switch``)."""
    F = set(flips)
    out = dict(tau)
    for v in F:
        for h in g.half_edges_at(v):
            out[h] = -out[h]
    return out


def reorient_edge(tau: Mapping[int, int], phi: Mapping, e: int, group: Group = Z) -> tuple[dict, dict]:
    t = dict(tau)
    t[2 * e] = -t[2 * e]
    t[2 * e + 1] = -t[2 * e + 1]
    p = dict(phi)
    p[e] = group.scale(-1, p[e])
    return t, p


def half_at(g: SignedGraph, e: int, x: int) -> int:
    u, v = g.ends(e)
    if x == u:
        return 2 * e
    if x == v:
        return 2 * e + 1
    raise GraphError(f"vertex {x} is not an end of edge {e}")


# boundary and predicates

def boundary(g: SignedGraph, tau: Mapping[int, int], phi: Mapping, group: Group = Z, check: bool = True) -> dict:
    if check:
        check_orientation(g, tau)
    out = {v: group.zero for v in g.vertex_ids}
    for e in g.edge_ids:
        val = phi.get(e, group.zero)
        if group.is_zero(val):
            continue
        u, v, _ = g.edges[e]
        out[u] = group.add(out[u], group.scale(tau[2 * e], val))
        out[v] = group.add(out[v], group.scale(tau[2 * e + 1], val))
    return out


def is_flow(g: SignedGraph, tau, phi, group: Group = Z) -> bool:
    return all(group.is_zero(x) for x in boundary(g, tau, phi, group).values())


def is_nowhere_zero(g: SignedGraph, phi, group: Group = Z) -> bool:
    return all(e in phi and not group.is_zero(phi[e]) for e in g.edge_ids)


def support(g: SignedGraph, phi, group: Group = Z) -> list:
    return [e for e in g.edge_ids if not group.is_zero(phi.get(e, group.zero))]


def support_sign(g: SignedGraph, phi) -> int:
    """Sign of the Z2-support of a Z2xZ3 (or Z2) edge function."""
    s = 1
    for e in g.edge_ids:
        val = phi.get(e, 0)
        a = val[0] if isinstance(val, tuple) else val
        if a % 2:
            s *= g.sign(e)
    return s


@dataclass(frozen=True)
class FlowPredicateReport:
    is_flow: bool
    is_nowhere_zero: bool
    k_bound: int | None = None
    balanced: bool | None = None


def flow_report(g: SignedGraph, tau, phi, group: Group = Z) -> FlowPredicateReport:
    k_bound = None
    balanced = None
    if group.kind == "Z":
        k_bound = max((abs(phi.get(e, 0)) for e in g.edge_ids), default=0) + 1
    if group.kind == "Z2xZ3":
        balanced = support_sign(g, phi) == 1
    return FlowPredicateReport(is_flow(g, tau, phi, group), is_nowhere_zero(g, phi, group), k_bound, balanced)


def sign_identity_sides(g: SignedGraph, tau, phi) -> tuple[int, int]:
    """Both sides of the identity sum_v boundary(v) = sum over negative edges of 2*tau*phi."""
    left = sum(boundary(g, tau, phi).values())
    right = 0
    for e in g.edge_ids:
        if g.sign(e) < 0:
            right += 2 * tau[2 * e] * phi.get(e, 0)
    return left, right


# boundary solvers

def _tree_solve(g: SignedGraph, tau, mu, group: Group, tree_edges, keep=None) -> tuple[dict, object]:
    """Leaf elimination on a spanning tree, smallest leaf first.

    Every vertex except the last one standing meets its target.  ``keep``
    pins that last vertex.  Returns the edge function and the last vertex.
    """
    adj = {v: [] for v in g.vertex_ids}
    for e in tree_edges:
        u, v = g.ends(e)
        adj[u].append(e)
        adj[v].append(e)
    deg = {v: len(es) for v, es in adj.items()}
    acc = {v: group.zero for v in g.vertex_ids}
    phi = {e: group.zero for e in g.edge_ids}
    done_edges = set()
    heap = [v for v in g.vertex_ids if deg[v] == 1 and v != keep]
    heapq.heapify(heap)
    remaining = len(g)
    removed = set()
    while remaining > 1:
        if not heap:
            raise GraphError("tree is not spanning")
        v = heapq.heappop(heap)
        if v in removed or deg[v] != 1:
            continue
        e = next(f for f in adj[v] if f not in done_edges)
        h = half_at(g, e, v)
        x = group.scale(tau[h], group.add(group.norm(mu[v]), group.scale(-1, acc[v])))
        phi[e] = x
        done_edges.add(e)
        w = g.other_end(e, v)
        acc[v] = group.add(acc[v], group.scale(tau[h], x))
        acc[w] = group.add(acc[w], group.scale(tau[h ^ 1], x))
        removed.add(v)
        remaining -= 1
        deg[v] = 0
        deg[w] -= 1
        if deg[w] == 1 and w != keep:
            heapq.heappush(heap, w)
    last = next(v for v in g.vertex_ids if v not in removed)
    return phi, last


def _spanning_tree_edges(g: SignedGraph, root=None) -> list:
    _, pedge, _ = g.spanning_forest([root] if root is not None else [])
    return [e for e in pedge.values() if e is not None]


def _total(group: Group, values) -> object:
    s = group.zero
    for x in values:
        s = group.add(s, group.norm(x))
    return s


def solve_boundary_positive(g: SignedGraph, tau, mu: Mapping, group: Group = Z) -> dict:
    """Edge function with boundary ``mu`` on a connected all-positive graph."""
    check_orientation(g, tau)
    if len(g) == 0 or not g.is_connected():
        raise FlowError("graph must be connected")
    if any(s < 0 for s in g.signature.values()):
        raise FlowError("graph must be all-positive")
    if not group.is_zero(_total(group, (mu[v] for v in g.vertex_ids))):
        raise FlowError("boundary targets must sum to zero")
    phi, _ = _tree_solve(g, tau, mu, group, _spanning_tree_edges(g))
    return phi


def cycle_unit(g: SignedGraph, tau, c: Cycle, start=None) -> dict:
    """±1 values along ``c`` with zero boundary off ``start`` and +1 contribution from its first edge.

    The boundary at ``start`` is 2 if ``c`` is unbalanced and 0 if balanced.
    """
    if start is not None and start != c.vertices[0]:
        c = c.rotated(start)
    x0 = c.vertices[0]
    if len(c) == 1:
        e = c.edges[0]
        return {e: tau[2 * e]}
    vals = {}
    n = len(c)
    a = tau[half_at(g, c.edges[0], x0)]
    vals[c.edges[0]] = a
    for i in range(1, n):
        x = c.vertices[i]
        prev, cur = c.edges[i - 1], c.edges[i]
        a = -tau[half_at(g, cur, x)] * tau[half_at(g, prev, x)] * a
        vals[cur] = a
    return vals


def solve_boundary_unbalanced(g: SignedGraph, tau, mu: Mapping) -> dict:
    """Integer edge function with boundary ``mu`` on a connected graph containing an unbalanced cycle."""
    check_orientation(g, tau)
    if len(g) == 0 or not g.is_connected():
        raise FlowError("graph must be connected")
    total = sum(mu[v] for v in g.vertex_ids)
    if total % 2:
        raise FlowError("boundary targets must have even sum")
    c = find_unbalanced_cycle(g)
    if c is None:
        raise FlowError("graph has no unbalanced cycle")
    u = c.vertices[0]
    phi, last = _tree_solve(g, tau, mu, Z, _spanning_tree_edges(g), keep=u)
    assert last == u
    got = sum(tau[h] * phi[h >> 1] for h in g.half_edges_at(u))
    r = mu[u] - got
    assert r % 2 == 0
    if r:
        for e, val in cycle_unit(g, tau, c).items():
            phi[e] += (r // 2) * val
    return phi


def lift_mod_p(g: SignedGraph, tau, psi: Mapping, p: int) -> dict:
    """Integer flow congruent to the Z_p-flow ``psi``, component by component."""
    check_orientation(g, tau)
    gp = Zk(p)
    if not is_flow(g, tau, {e: psi.get(e, 0) % p for e in g.edge_ids}, gp):
        raise FlowError(f"input is not a Z_{p}-flow")
    phi0 = {e: psi.get(e, 0) % p for e in g.edge_ids}
    b = boundary(g, tau, phi0)
    out = dict(phi0)
    for comp in g.components():
        h = g.induced(comp)
        if p % 2 == 0 and support_sign(h, phi0) != 1:
            raise FlowError("even modulus needs a support of positive sign")
        mu = {v: b[v] // p for v in comp}
        assert all(b[v] % p == 0 for v in comp)
        flips = balancing_flips(h)
        if flips is None:
            eta = solve_boundary_unbalanced(h, tau, mu)
        else:
            hs = h.switch(flips)
            ts = switch_orientation(h, tau, flips)
            mus = {v: (-mu[v] if v in flips else mu[v]) for v in comp}
            eta = solve_boundary_positive(hs, ts, mus)
        for e in h.edge_ids:
            out[e] = phi0[e] - p * eta[e]
    return out


# signed circuits and the 2k reduction

def signed_circuits(g: SignedGraph, tau, limit: int = 20000) -> list[dict]:
    """Zero-boundary ±1/±2 patterns: balanced cycles, then pairs of unbalanced cycles.

    Two unbalanced cycles meeting in one vertex are combined directly; two
    disjoint ones are joined by a connecting path carrying ±2.
    """
    out = []
    unbalanced = []
    for c in iter_cycles(g):
        if g.sign_of(c.edges) > 0:
            out.append(cycle_unit(g, tau, c))
        else:
            unbalanced.append(c)
        if len(out) >= limit:
            return out
    for c1, c2 in combinations(unbalanced, 2):
        common = c1.vertex_set & c2.vertex_set
        if len(common) == 1:
            x = next(iter(common))
            p1 = cycle_unit(g, tau, c1, x)
            p2 = cycle_unit(g, tau, c2, x)
            pat = dict(p1)
            for e, val in p2.items():
                pat[e] = -val
            out.append(pat)
        elif not common:
            avoid = c1.vertex_set | c2.vertex_set
            for a in c1.vertices:
                for b in c2.vertices:
                    for path in iter_paths(g, a, b, avoid=avoid):
                        if set(path.interior) & avoid:
                            continue
                        out.append(_barbell(g, tau, c1, c2, path))
                        if len(out) >= limit:
                            return out
        if len(out) >= limit:
            return out
    return out


def _barbell(g, tau, c1, c2, path) -> dict:
    a, b = path.ends
    q = {}
    # path values with zero boundary at interior vertices, +1 contribution at a
    val = tau[half_at(g, path.edges[0], a)]
    q[path.edges[0]] = val
    for i in range(1, len(path.edges)):
        x = path.vertices[i]
        prev, cur = path.edges[i - 1], path.edges[i]
        val = -tau[half_at(g, cur, x)] * tau[half_at(g, prev, x)] * val
        q[cur] = val
    end_contrib = tau[half_at(g, path.edges[-1], b)] * q[path.edges[-1]]
    pat = {e: 2 * v for e, v in q.items()}
    # boundary so far: +2 at a, 2*end_contrib at b; each unit adds +2 at its start
    for e, v in cycle_unit(g, tau, c1, a).items():
        pat[e] = pat.get(e, 0) - v
    for e, v in cycle_unit(g, tau, c2, b).items():
        pat[e] = pat.get(e, 0) - end_contrib * v
    return pat


def _window_flow(g: SignedGraph, tau, phi, k) -> dict | None:
    from .search import integer_search
    domains = {}
    for e in g.edge_ids:
        r = phi[e] % k
        vals = [v for v in range(-2 * k + 1, 2 * k) if v % k == r]
        vals.sort(key=lambda v: (abs(v), v))
        domains[e] = vals
    return integer_search(g, tau, domains)


REDUCTION_STATS = {"local": 0, "window": 0}


def reduce_to_2k(g: SignedGraph, tau, phi: Mapping, k: int, circuits: list | None = None) -> dict:
    """Flow congruent to ``phi`` mod ``k`` with every value in [-(2k-1), 2k-1]."""
    if k <= 0:
        raise FlowError("k must be positive")
    if not is_flow(g, tau, phi):
        raise FlowError("input is not an integer flow")
    cur = {e: phi.get(e, 0) for e in g.edge_ids}
    bound = 2 * k - 1
    if circuits is None:
        circuits = signed_circuits(g, tau)
    weight = sum(abs(x) for x in cur.values())
    improved = True
    while improved:
        improved = False
        for pat in circuits:
            for s in (k, -k):
                delta = 0
                for e, c in pat.items():
                    delta += abs(cur[e] - s * c) - abs(cur[e])
                if delta < 0:
                    for e, c in pat.items():
                        cur[e] -= s * c
                    new_weight = sum(abs(x) for x in cur.values())
                    assert new_weight < weight
                    weight = new_weight
                    improved = True
                    break
    if all(abs(x) <= bound for x in cur.values()):
        REDUCTION_STATS["local"] += 1
        return cur
    found = _window_flow(g, tau, cur, k)
    if found is None:
        raise AssertionError("no flow within the 2k window; circuit catalogue incomplete")
    REDUCTION_STATS["window"] += 1
    assert all(abs(found[e]) <= bound and (found[e] - phi[e]) % k == 0 for e in g.edge_ids)
    assert is_flow(g, tau, found)
    return found


def combine_2_3(g: SignedGraph, tau, psi: Mapping) -> dict:
    """Nowhere-zero 12-flow from a nowhere-zero Z2xZ3-flow with positive-sign Z2 support."""
    check_orientation(g, tau)
    if not is_nowhere_zero(g, psi, Z2xZ3):
        raise FlowError("input must be nowhere-zero")
    if not is_flow(g, tau, psi, Z2xZ3):
        raise FlowError("input is not a Z2xZ3-flow")
    p1 = {e: psi[e][0] % 2 for e in g.edge_ids}
    p2 = {e: psi[e][1] % 3 for e in g.edge_ids}
    for comp in g.components():
        if support_sign(g.induced(comp), p1) != 1:
            raise FlowError("Z2 support must have positive sign")
    f1 = lift_mod_p(g, tau, p1, 2)
    f2 = lift_mod_p(g, tau, p2, 3)
    eta = {e: 3 * f1[e] + 2 * f2[e] for e in g.edge_ids}
    out = reduce_to_2k(g, tau, eta, 6)
    for e in g.edge_ids:
        assert out[e] % 6 != 0 and abs(out[e]) <= 11
    return out


# certificates

def certificate_json(tau: Mapping[int, int], values: Mapping, group: Group = Z, **meta) -> str:
    vals = {str(e): (list(v) if isinstance(v, tuple) else v) for e, v in sorted(values.items())}
    obj = {
        "orientation": {str(h): t for h, t in sorted(tau.items())},
        "values": vals,
        "group": "Zk" if group.kind == "Zk" else group.kind,
    }
    if group.kind == "Zk":
        obj["k"] = group.k
    obj.update(meta)
    return json.dumps(obj, indent=1, sort_keys=True)


def load_certificate(text: str) -> tuple[dict, dict, dict]:
    """Returns ``(tau, values, metadata)`` with integer keys."""
    obj = json.loads(text)
    if not isinstance(obj, dict) or "orientation" not in obj or "values" not in obj:
        raise FlowError("certificate needs 'orientation' and 'values'")
    try:
        tau = {int(h): int(t) for h, t in obj["orientation"].items()}
        values = {int(e): (tuple(v) if isinstance(v, list) else v) for e, v in obj["values"].items()}
    except (TypeError, ValueError, AttributeError) as exc:
        raise FlowError(f"malformed certificate: {exc}") from None
    meta = {k: v for k, v in obj.items() if k not in ("orientation", "values")}
    return tau, values, meta
