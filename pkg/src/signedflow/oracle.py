"""Brute-force ground truth: flow search, flow numbers, frustration index,
the existence test for nowhere-zero integer flows, and restricted-flow
counting on ordinary digraphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

import numpy as np

from .flows import Group, Z2xZ3, Zk, check_orientation, default_orientation, is_flow
from .graph import SignedGraph, bridges, is_balanced
from .search import edge_order, run_search


class CapError(ValueError):
    """Instance larger than the configured cap."""


@dataclass(frozen=True)
class Caps:
    search_edges: int = 18
    subset_vertices: int = 16
    search_states: int = 2_000_000


DEFAULT_CAPS = Caps()


def _require(value: int, cap: int, name: str) -> None:
    if value > cap:
        raise CapError(f"{name} cap exceeded: {value} > {cap}")


@dataclass(frozen=True)
class FlowQuery:
    group: Group
    prescribed: Mapping[int, object] = field(default_factory=dict)
    require_balanced: bool = False
    require_nowhere_zero: bool = True

    def __post_init__(self):
        if self.group.kind == "Z":
            raise ValueError("flow queries need a finite group")
        if self.group.kind == "Zk" and self.group.k > 16:
            raise ValueError("Z_k queries support k <= 16")
        if self.require_balanced and self.group.kind == "Zk" and self.group.k % 2:
            raise ValueError("balanced support needs an even-order group")
        if self.require_nowhere_zero:
            for e, val in self.prescribed.items():
                if self.group.is_zero(val):
                    raise ValueError(f"prescribed value on edge {e} is zero")


def encode(group: Group, x) -> int:
    """Group element as an integer mod |group| (Z2xZ3 via CRT: (a, b) -> 3a + 4b)."""
    if group.kind == "Z2xZ3":
        return (3 * x[0] + 4 * x[1]) % 6
    return x % group.k


def decode(group: Group, x: int):
    if group.kind == "Z2xZ3":
        return (x % 2, x % 3)
    return x


def search_flow(g: SignedGraph, tau, q: FlowQuery, caps: Caps = DEFAULT_CAPS,
                accept: Mapping | None = None, parity: int | None = None) -> dict | None:
    """Exhaustive search for a flow meeting the query (or None).

    ``accept`` overrides the boundary targets per vertex and ``parity``
    overrides the requested support sign; both take group elements/signs.
    """
    _require(g.num_edges, caps.search_edges, "search edge")
    check_orientation(g, tau)
    grp = q.group
    m = grp.order
    elems = [encode(grp, x) for x in (grp.nonzero() if q.require_nowhere_zero else grp.elements())]
    domains = {}
    for e in g.edge_ids:
        if e in q.prescribed:
            domains[e] = [encode(grp, q.prescribed[e])]
        else:
            domains[e] = elems
    acc = None
    if accept is not None:
        acc = {v: frozenset(encode(grp, x) for x in vals) for v, vals in accept.items()}
    par = parity if parity is not None else (1 if q.require_balanced else None)
    order = edge_order(g, first=sorted(q.prescribed))
    sol = run_search(g, tau, domains, m, accept=acc, parity=par, order=order, max_states=caps.search_states)
    if sol is None:
        return None
    return {e: decode(grp, sol[e]) for e in g.edge_ids}


# integer flows

def _rank(rows: list[list[int]]) -> int:
    mat = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][c] != 0:
                f = mat[r][c] / mat[rank][c]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def incidence_rows(g: SignedGraph, tau) -> list[list[int]]:
    cols = g.edge_ids
    rows = []
    for v in g.vertex_ids:
        row = [0] * len(cols)
        for h in g.half_edges_at(v):
            row[cols.index(h >> 1)] += tau[h]
        rows.append(row)
    return rows


def rigid_zero_edges(g: SignedGraph, tau=None) -> list:
    """Edges that vanish in every rational flow (so no nowhere-zero flow exists)."""
    tau = tau or default_orientation(g)
    rows = incidence_rows(g, tau)
    if not rows or not g.edge_ids:
        return []
    full = _rank(rows)
    out = []
    for i, e in enumerate(g.edge_ids):
        reduced = [r[:i] + r[i + 1:] for r in rows]
        if _rank(reduced) < full:
            out.append(e)
    return out


def search_integer_flow(g: SignedGraph, tau, k: int, prescribed: Mapping | None = None,
                        caps: Caps = DEFAULT_CAPS, deepen: bool = True) -> dict | None:
    """Nowhere-zero integer flow with |phi(e)| < k, or None.

    With ``deepen`` the bounds 2, 3, ..., k are tried in turn; a j-flow is a
    k-flow for j <= k, and small domains prune far better.
    """
    _require(g.num_edges, caps.search_edges, "search edge")
    if k < 2:
        return None
    if rigid_zero_edges(g, tau):
        return None
    prescribed = prescribed or {}
    lo = max([2] + [abs(x) + 1 for x in prescribed.values()]) if deepen else k
    for j in range(min(lo, k), k + 1):
        vals = []
        for a in range(1, j):
            vals += [a, -a]
        domains = {e: ([prescribed[e]] if e in prescribed else vals) for e in g.edge_ids}
        order = edge_order(g, first=sorted(prescribed))
        sol = run_search(g, tau, domains, 0, order=order, max_states=caps.search_states)
        if sol is not None:
            return sol
    return None


def flow_number(g: SignedGraph, caps: Caps = DEFAULT_CAPS) -> int | None:
    """Least k admitting a nowhere-zero k-flow, or None when there is no nowhere-zero Z-flow."""
    _require(g.num_edges, caps.search_edges, "search edge")
    tau = default_orientation(g)
    if not g.edge_ids:
        return 1
    if not has_nz_z_flow(g):
        return None
    for k in range(2, 13):
        if search_integer_flow(g, tau, k, caps=caps, deepen=False) is not None:
            return k
    raise AssertionError("nowhere-zero Z-flow exists but no nowhere-zero 12-flow was found")


# switching classes

def frustration_index(g: SignedGraph, caps: Caps = DEFAULT_CAPS) -> int:
    """Fewest negative edges over all switchings (summed over components)."""
    total = 0
    for comp in g.components():
        h = g.induced(comp)
        _require(len(h), caps.subset_vertices, "subset vertex")
        vs = h.vertex_ids[1:]
        bit = {v: i for i, v in enumerate(vs)}
        n = len(vs)
        masks = np.arange(1 << n, dtype=np.int64)
        count = np.zeros(1 << n, dtype=np.int64)
        for e in h.edge_ids:
            u, v, s = h.edges[e]
            if u == v:
                count += 1 if s < 0 else 0
                continue
            bu = (masks >> bit[u]) & 1 if u in bit else 0
            bv = (masks >> bit[v]) & 1 if v in bit else 0
            crossing = np.bitwise_xor(bu, bv) if n else np.zeros(1, dtype=np.int64)
            neg = crossing if s > 0 else 1 - crossing
            count += neg
        total += int(count.min())
    return total


@dataclass(frozen=True)
class Obstruction:
    """Why a component has no nowhere-zero Z-flow."""

    kind: str  # "frustration-1" or "balanced-side"
    edge: int
    component: frozenset

    def describe(self) -> str:
        if self.kind == "frustration-1":
            return f"frustration index 1 (edge {self.edge} is the only negative edge after switching)"
        return f"cut-edge {self.edge} leaves a balanced component"


def nz_z_flow_obstruction(g: SignedGraph) -> Obstruction | None:
    for comp in g.components():
        h = g.induced(comp)
        if not is_balanced(h):
            for e in h.edge_ids:
                if is_balanced(h.remove_edges([e])):
                    return Obstruction("frustration-1", e, comp)
        for e in bridges(h):
            rest = h.remove_edges([e])
            for side in rest.components():
                if is_balanced(rest.induced(side)):
                    return Obstruction("balanced-side", e, frozenset(side))
    return None


def has_nz_z_flow(g: SignedGraph) -> bool:
    return nz_z_flow_obstruction(g) is None


def exists_nz_k_flow(g: SignedGraph, k: int = 12, caps: Caps = DEFAULT_CAPS) -> bool:
    return search_integer_flow(g, default_orientation(g), k, caps=caps) is not None


# restricted counting on ordinary digraphs

def _check_ordinary(g: SignedGraph) -> None:
    if any(s < 0 for s in g.signature.values()):
        raise ValueError("restricted counting needs an all-positive graph")


def count_restricted_flows(g: SignedGraph, tau, gamma: Mapping, group: Group) -> int:
    """Nowhere-zero ``group``-flows equal to ``gamma`` on its domain, by deletion-contraction."""
    _check_ordinary(g)
    check_orientation(g, tau)
    if any(group.is_zero(x) for x in gamma.values()):
        return 0
    return _dc_count(g, tau, dict(gamma), group)


def _dc_count(g: SignedGraph, tau, gamma, group) -> int:
    free = [e for e in g.edge_ids if e not in gamma]
    if not free:
        return 1 if is_flow(g, tau, gamma, group) else 0
    cut = set(bridges(g))
    if cut:
        return 0
    for e in free:
        if g.is_loop(e):
            return (group.order - 1) * _dc_count(g.remove_edges([e]), tau, gamma, group)
    e = free[0]
    return _dc_count(g.contract_edge(e), tau, gamma, group) - _dc_count(g.remove_edges([e]), tau, gamma, group)


def count_restricted_flows_direct(g: SignedGraph, tau, gamma: Mapping, group: Group) -> int:
    """Same count by enumerating every extension."""
    free = [e for e in g.edge_ids if e not in gamma]
    total = 0
    for vals in product(group.nonzero(), repeat=len(free)):
        phi = dict(gamma)
        phi.update(zip(free, vals))
        if all(not group.is_zero(x) for x in phi.values()) and is_flow(g, tau, phi, group):
            total += 1
    return total


def cut_indicator(g: SignedGraph, tau, xs) -> dict:
    """+1 on edges leaving X, -1 on edges entering X, 0 elsewhere."""
    X = set(xs)
    out = {}
    for e in g.edge_ids:
        u, v = g.ends(e)
        if (u in X) == (v in X):
            out[e] = 0
            continue
        h = 2 * e if u in X else 2 * e + 1
        out[e] = 1 if tau[h] < 0 else -1
    return out


def similar(g: SignedGraph, tau, gamma1: Mapping, gamma2: Mapping, group: Group,
            caps: Caps = DEFAULT_CAPS) -> bool:
    if set(gamma1) != set(gamma2):
        raise ValueError("prescriptions must share a domain")
    _require(len(g), caps.subset_vertices, "subset vertex")
    vs = g.vertex_ids
    T = sorted(gamma1)
    for mask in range(1 << len(vs)):
        X = {v for i, v in enumerate(vs) if mask >> i & 1}
        alpha = cut_indicator(g, tau, X)
        s1, s2 = group.zero, group.zero
        for e in T:
            s1 = group.add(s1, group.scale(alpha[e], gamma1[e]))
            s2 = group.add(s2, group.scale(alpha[e], gamma2[e]))
        if group.is_zero(s1) != group.is_zero(s2):
            return False
    return True


__all__ = [
    "Caps", "CapError", "DEFAULT_CAPS", "FlowQuery", "Obstruction", "Z2xZ3", "Zk",
    "count_restricted_flows", "count_restricted_flows_direct", "cut_indicator", "exists_nz_k_flow",
    "flow_number", "frustration_index", "has_nz_z_flow", "nz_z_flow_obstruction", "rigid_zero_edges",
    "search_flow", "search_integer_flow", "similar",
]
