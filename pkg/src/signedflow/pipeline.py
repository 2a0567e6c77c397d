"""End-to-end nowhere-zero 12-flows.

The reduction follows the induction on the measure sum |deg(v) - 5/2|:
degree-2 vertices are contracted, vertices of degree at least four are
split, small balanced cuts are glued through a constrained search, and
balanced 4-cycles are collapsed.  What remains is a cubic shrubbery, which
is watered with sign +1.  Balanced (sub)instances go through Seymour's
route instead.  Every handler pulls the reduced flow back immediately, so
the recursion itself replays the trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Mapping

from .flows import (
    Z,
    Z2xZ3,
    certificate_json,
    check_orientation,
    combine_2_3,
    default_orientation,
    is_flow,
    is_nowhere_zero,
    load_certificate,
    support_sign,
    switch_orientation,
)
from .graph import SignedGraph, balancing_flips, bridges, is_balanced, iter_cycles
from .oracle import Caps, FlowQuery, Obstruction, has_nz_z_flow, nz_z_flow_obstruction, search_flow
from .structure import edge_connectivity_at_least
from .watering import seymour_watering, water_shrubbery

HANDLERS = (
    "degree2-contract",
    "split-vertex",
    "balanced-cut-glue",
    "balanced-4-cycle",
    "shrubbery-dispatch",
    "seymour-dispatch",
)

# G_y can be most of the graph when X is large, so the glue search gets a wider cap.
GLUE_CAPS = Caps(search_edges=200, subset_vertices=16, search_states=20_000_000)


class PipelineError(RuntimeError):
    """A reduction precondition failed (an internal bug, never a wrong answer)."""


@dataclass
class ReductionStep:
    handler: str
    ids: dict
    inverse: dict
    measure: tuple[int, int]

    def describe(self) -> str:
        ids = ", ".join(f"{k}={v}" for k, v in self.ids.items())
        before, after = self.measure
        return f"{self.handler}: {ids} (2*measure {before} -> {after})"


@dataclass
class ReductionTrace:
    steps: list[ReductionStep] = field(default_factory=list)

    def add(self, handler: str, ids: dict, inverse: dict, measure=(0, 0)) -> None:
        assert handler in HANDLERS
        self.steps.append(ReductionStep(handler, ids, inverse, measure))

    def counts(self) -> dict:
        out = {}
        for s in self.steps:
            out[s.handler] = out.get(s.handler, 0) + 1
        return out

    def lines(self) -> list[str]:
        return [f"{i:3d} {s.describe()}" for i, s in enumerate(self.steps)]

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class FlowCertificate:
    orientation: dict
    values: dict
    k: int = 12
    nowhere_zero: bool = True
    balanced_support: bool = True

    def to_json(self) -> str:
        return certificate_json(self.orientation, self.values, Z, k=self.k,
                                nowhere_zero=self.nowhere_zero, balanced_support=self.balanced_support)

    @classmethod
    def from_json(cls, text: str) -> "FlowCertificate":
        tau, values, meta = load_certificate(text)
        return cls(tau, values, int(meta.get("k", 12)), bool(meta.get("nowhere_zero", True)),
                   bool(meta.get("balanced_support", True)))


@dataclass(frozen=True)
class NoZFlow:
    obstruction: Obstruction

    def describe(self) -> str:
        return f"NoZFlow: {self.obstruction.describe()}"


def induction_measure(g: SignedGraph) -> int:
    """Twice the sum of |deg(v) - 5/2| (kept integral)."""
    return sum(abs(2 * d - 5) for d in g.degrees.values())


def _assert_flow(g, tau, psi, where: str) -> None:
    if not is_flow(g, tau, psi, Z2xZ3) or not is_nowhere_zero(g, psi, Z2xZ3):
        raise AssertionError(f"{where}: pulled-back function is not a nowhere-zero flow")
    for comp in g.components():
        if support_sign(g.induced(comp), {e: psi[e][0] for e in g.edge_ids}) != 1:
            raise AssertionError(f"{where}: Z2-support lost its positive sign")


def _edge_value(g: SignedGraph, tau, psi, e, at) -> tuple:
    """Value on non-loop ``e`` making the boundary at ``at`` vanish."""
    total = Z2xZ3.zero
    mine = None
    for h in g.half_edges_at(at):
        if h >> 1 == e:
            mine = h
        else:
            total = Z2xZ3.add(total, Z2xZ3.scale(tau[h], psi[h >> 1]))
    return Z2xZ3.scale(-tau[mine], total)


# handlers

def contract_positive_edge(g: SignedGraph, tau, e, solver: Callable):
    """Flow of ``g`` from a flow of ``g/e`` (``e`` positive, not a loop)."""
    if g.is_loop(e):
        raise PipelineError(f"edge {e} is a loop")
    if g.sign(e) < 0:
        raise PipelineError(f"edge {e} is negative")
    h = g.contract_edge(e)
    th = {x: tau[x] for x in h.half_edges()}
    phi = dict(solver(h, th))
    phi[e] = _edge_value(g, tau, phi, e, g.ends(e)[0])
    return phi


def split_candidates(g: SignedGraph, v):
    """Every split of ``v`` into two vertices of degree at least three, in a fixed order."""
    H = g.half_edges_at(v)
    d = len(H)
    if d < 4:
        raise PipelineError(f"vertex {v} has degree {d} < 4")
    w = g.next_vertex
    new = g.next_edge
    for r in range(2, d // 2 + 1):
        for H2 in combinations(H, r):
            if 2 * r == d and H[0] in H2:
                continue
            edges = {f: list(rec) for f, rec in g.edges.items()}
            for x in H2:
                edges[x >> 1][x & 1] = w
            edges = {f: tuple(rec) for f, rec in edges.items()}
            edges[new] = (v, w, 1)
            yield SignedGraph(g.vertices | {w}, edges, g.next_vertex, g.next_edge), H2, new


def split_vertex(g: SignedGraph, tau, v, accept: Callable = has_nz_z_flow):
    """First admissible split of ``v``; returns ``(g', tau', H2, new_edge)``."""
    for h, H2, new in split_candidates(g, v):
        if accept(h):
            th = dict(tau)
            th[2 * new], th[2 * new + 1] = -1, 1
            return h, th, H2, new
    raise AssertionError(f"no admissible split at vertex {v}")


def small_balanced_cuts(g: SignedGraph):
    """Sets X with |X| >= 2, G[X] balanced and |delta(X)| <= 3, smallest first (lazily)."""
    cuts = set()
    es = g.edge_ids
    for size in range(3):
        for T in combinations(es, size):
            rest = g.remove_edges(T)
            if size and len(rest.components()) > len(g.components()):
                cuts.add(frozenset(T))
            for b in bridges(rest):
                cuts.add(frozenset(T) | {b})
    V = g.vertices
    cands = set()
    for S in cuts:
        comps = g.remove_edges(S).components()
        for r in range(1, len(comps)):
            for pick in combinations(comps, r):
                X = frozenset().union(*pick)
                if len(X) >= 2 and X != V and X not in cands and g.delta(X) <= S:
                    cands.add(X)
    for X in sorted(cands, key=lambda X: (len(X), sorted(X))):
        if is_balanced(g.induced(X)):
            yield X


def glue_balanced_cut(g: SignedGraph, tau, X, solver: Callable, trace: ReductionTrace | None = None):
    """Flow of ``g`` from a flow of G_x and a constrained flow of G_y."""
    X = frozenset(X)
    if len(X) < 2:
        raise PipelineError("X needs at least two vertices")
    inner = g.inner_edges(X)
    cut = g.delta(X)
    if len(cut) > 3:
        raise PipelineError(f"|delta(X)| = {len(cut)} > 3")
    flips = balancing_flips(g.induced(X))
    if flips is None:
        raise PipelineError("G[X] is unbalanced")
    gs = g.switch(flips)
    ts = switch_orientation(g, tau, flips)
    x = gs.next_vertex
    y = x + 1
    ex, ey = {}, {}
    for e, (a, b, s) in gs.edges.items():
        if e in inner:
            ey[e] = (a, b, s)
        else:
            ex[e] = (x if a in X else a, x if b in X else b, s)
            if e in cut:
                ey[e] = (a if a in X else y, b if b in X else y, 1)
    gx = SignedGraph((gs.vertices - X) | {x}, ex, gs.next_vertex, gs.next_edge)
    gy = SignedGraph(X | {y}, ey, gs.next_vertex, gs.next_edge)
    tx = {h: ts[h] for h in gx.half_edges()}
    ty = {h: ts[h] for h in gy.half_edges()}
    for e in cut:
        a, _ = gs.ends(e)
        hin = 2 * e if a in X else 2 * e + 1
        ty[hin ^ 1] = -ts[hin]
    if trace is not None:
        trace.add("balanced-cut-glue", {"X": sorted(X), "cut": sorted(cut)},
                  {"flips": sorted(flips), "x": x, "y": y},
                  (induction_measure(g), induction_measure(gx)))
    phi_x = solver(gx, tx)
    gamma = {e: phi_x[e] for e in cut}
    phi_y = search_flow(gy, ty, FlowQuery(Z2xZ3, gamma), caps=GLUE_CAPS)
    if phi_y is None:
        raise AssertionError("no extension across the balanced cut")
    phi = {e: phi_x[e] for e in ex}
    phi.update({e: phi_y[e] for e in inner})
    return phi


def find_balanced_4cycle(g: SignedGraph):
    for c in iter_cycles(g, max_len=4):
        if len(c) == 4 and g.sign_of(c.edges) > 0:
            return c
    return None


def handle_balanced_4cycle(g: SignedGraph, tau, c, solver: Callable, trace: ReductionTrace | None = None):
    """Flow of ``g`` from a flow of the graph with E(C) deleted and V(C) identified."""
    if len(c) != 4:
        raise PipelineError("cycle must have length 4")
    if g.sign_of(c.edges) < 0:
        raise PipelineError("cycle must be balanced")
    flips = balancing_flips(g.edge_subgraph(c.edges))
    gs = g.switch(flips)
    ts = switch_orientation(g, tau, flips)
    VC = c.vertex_set
    EC = c.edge_set
    z = gs.next_vertex
    edges = {}
    for e, (a, b, s) in gs.edges.items():
        if e not in EC:
            edges[e] = (z if a in VC else a, z if b in VC else b, s)
    h = SignedGraph((gs.vertices - VC) | {z}, edges, gs.next_vertex, gs.next_edge)
    th = {x: ts[x] for x in h.half_edges()}
    if trace is not None:
        trace.add("balanced-4-cycle", {"cycle": list(c.edges), "vertices": list(c.vertices)},
                  {"flips": sorted(flips), "z": z}, (induction_measure(g), induction_measure(h)))
    base = solver(h, th)
    nz = Z2xZ3.nonzero()
    order = list(c.edges)
    for vals in product(nz, repeat=4):
        phi = dict(base)
        phi.update(zip(order, vals))
        if is_flow(gs, ts, phi, Z2xZ3) and support_sign(gs, {e: phi[e][0] for e in phi}) == 1:
            return phi
    raise AssertionError("no extension across the balanced 4-cycle")


# Seymour's route on balanced graphs

def seymour_flow(g: SignedGraph, tau, trace: ReductionTrace | None = None) -> dict:
    """Nowhere-zero Z2xZ3-flow of a balanced bridgeless graph."""
    flips = balancing_flips(g)
    if flips is None:
        raise PipelineError("Seymour's route needs a balanced graph")
    gs = g.switch(flips)
    ts = switch_orientation(g, tau, flips)
    stats: dict = {}
    phi = _seymour(gs, ts, stats)
    if trace is not None:
        trace.add("seymour-dispatch", {"vertices": len(g), "edges": g.num_edges},
                  {"flips": sorted(flips), "steps": dict(sorted(stats.items()))})
    return phi


def _count(stats, key):
    stats[key] = stats.get(key, 0) + 1


def _seymour(g: SignedGraph, tau, stats) -> dict:
    if not g.edges:
        return {}
    loops = g.loops()
    if loops:
        _count(stats, "loop")
        rest = g.remove_edges(loops)
        phi = _seymour(rest, {h: tau[h] for h in rest.half_edges()}, stats)
        phi.update({e: (0, 1) for e in loops})
        return phi
    comps = g.components()
    if len(comps) > 1:
        phi = {}
        for comp in comps:
            h = g.induced(comp)
            phi.update(_seymour(h, {x: tau[x] for x in h.half_edges()}, stats))
        return phi
    if bridges(g):
        raise PipelineError("Seymour's route needs a bridgeless graph")
    for e in g.edge_ids:
        if bridges(g.remove_edges([e])):
            _count(stats, "two-cut")
            return contract_positive_edge(g, tau, e, lambda h, th: _seymour(h, th, stats))
    for v in g.vertex_ids:
        if g.deg(v) >= 4:
            _count(stats, "split")
            h, th, _, _ = split_vertex(g, tau, v, accept=lambda x: edge_connectivity_at_least(x, 3))
            phi = _seymour(h, th, stats)
            return {e: phi[e] for e in g.edge_ids}
    # 3-edge-connected and cubic
    _count(stats, "cubic")
    u = min(g.vertex_ids)
    h = g.remove_vertices([u])
    phi = dict(seymour_watering(h, {x: tau[x] for x in h.half_edges()}))
    star = sorted(g.incident_edges(u))
    for signs in product((1, 2), repeat=len(star)):
        cand = dict(phi)
        cand.update({e: (0, s) for e, s in zip(star, signs)})
        if is_flow(g, tau, cand, Z2xZ3):
            return cand
    raise AssertionError("watering of G - u does not extend")


# the pipeline

def _solve(g: SignedGraph, tau, trace: ReductionTrace | None, check_shrubbery: bool = False) -> dict:
    def rec(h, th):
        return _solve(h, th, trace, check_shrubbery)

    g = g.remove_vertices([v for v in g.vertex_ids if g.deg(v) == 0])
    if not g.edges:
        return {}
    comps = g.components()
    if len(comps) > 1:
        phi = {}
        for comp in comps:
            h = g.induced(comp)
            phi.update(rec(h, {x: tau[x] for x in h.half_edges()}))
        return phi
    if is_balanced(g):
        phi = seymour_flow(g, tau, trace)
        _assert_flow(g, tau, phi, "seymour-dispatch")
        return phi
    before = induction_measure(g)

    for v in g.vertex_ids:
        H = g.half_edges_at(v)
        if len(H) == 2 and H[0] >> 1 != H[1] >> 1:
            e, f = H[0] >> 1, H[1] >> 1
            flips = [v] if g.sign(e) < 0 else []
            gs = g.switch(flips)
            ts = switch_orientation(g, tau, flips)
            after = induction_measure(gs.contract_edge(e))
            assert after < before
            if trace is not None:
                trace.add("degree2-contract", {"vertex": v, "edge": e, "other": f},
                          {"flips": flips, "value_from": f}, (before, after))
            phi = contract_positive_edge(gs, ts, e, rec)
            _assert_flow(g, tau, phi, "degree2-contract")
            return phi

    for v in g.vertex_ids:
        if g.deg(v) >= 4:
            h, th, H2, new = split_vertex(g, tau, v)
            after = induction_measure(h)
            assert after < before
            if trace is not None:
                trace.add("split-vertex", {"vertex": v, "moved_halves": list(H2)},
                          {"drop_edge": new}, (before, after))
            phi = rec(h, th)
            phi = {e: phi[e] for e in g.edge_ids}
            _assert_flow(g, tau, phi, "split-vertex")
            return phi

    if any(g.deg(v) != 3 for v in g.vertex_ids):
        raise PipelineError("a vertex of degree below two survived; input lacks a nowhere-zero Z-flow")

    X = next(small_balanced_cuts(g), None)
    if X is not None:
        phi = glue_balanced_cut(g, tau, X, rec, trace)
        assert trace is None or trace.steps[-1].measure[1] < before
        _assert_flow(g, tau, phi, "balanced-cut-glue")
        return phi

    c = find_balanced_4cycle(g)
    if c is not None:
        phi = handle_balanced_4cycle(g, tau, c, rec, trace)
        assert trace is None or trace.steps[-1].measure[1] < before
        _assert_flow(g, tau, phi, "balanced-4-cycle")
        return phi

    if trace is not None:
        trace.add("shrubbery-dispatch", {"vertices": len(g), "edges": g.num_edges}, {}, (before, before))
    phi = water_shrubbery(g, 1, tau, validate=check_shrubbery)
    _assert_flow(g, tau, phi, "shrubbery-dispatch")
    return phi


def balanced_z2z3_flow(g: SignedGraph, tau=None, trace: ReductionTrace | None = None,
                       check_shrubbery: bool = False) -> dict:
    """Nowhere-zero Z2xZ3-flow whose Z2-support has positive sign on every component."""
    tau = tau if tau is not None else default_orientation(g)
    check_orientation(g, tau)
    if not has_nz_z_flow(g):
        raise PipelineError("graph has no nowhere-zero Z-flow")
    phi = _solve(g, tau, trace, check_shrubbery)
    phi = {e: phi[e] for e in g.edge_ids}
    _assert_flow(g, tau, phi, "pipeline")
    return phi


def twelve_flow(g: SignedGraph, trace: ReductionTrace | None = None,
                check_shrubbery: bool = False) -> FlowCertificate | NoZFlow:
    obs = nz_z_flow_obstruction(g)
    if obs is not None:
        return NoZFlow(obs)
    tau = default_orientation(g)
    psi = balanced_z2z3_flow(g, tau, trace, check_shrubbery)
    eta = combine_2_3(g, tau, psi) if g.edges else {}
    cert = FlowCertificate(tau, eta)
    if not verify_certificate(g, cert):
        raise AssertionError("internal: produced certificate fails verification")
    return cert


# verification, written against the raw edge list only

class CertificateError(ValueError):
    """Certificate is malformed (as opposed to well-formed but wrong)."""


def _coerce(cert) -> tuple[dict, dict, int]:
    if isinstance(cert, FlowCertificate):
        return cert.orientation, cert.values, cert.k
    if isinstance(cert, str):
        try:
            cert = json.loads(cert)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"certificate is not JSON: {exc}") from None
    if not isinstance(cert, Mapping) or "orientation" not in cert or "values" not in cert:
        raise CertificateError("certificate needs 'orientation' and 'values'")
    try:
        tau = {int(h): t for h, t in cert["orientation"].items()}
        vals = {int(e): v for e, v in cert["values"].items()}
        k = int(cert.get("k", 12))
    except (AttributeError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed certificate: {exc}") from None
    return tau, vals, k


def verify_certificate(g: SignedGraph, cert) -> bool:
    """Independent check: orientation, zero boundary, values in 1..11 in absolute value."""
    tau, vals, k = _coerce(cert)
    if k != 12:
        return False
    edges = g.edges
    if set(vals) != set(edges) or set(tau) != {h for e in edges for h in (2 * e, 2 * e + 1)}:
        return False
    net = {v: 0 for v in g.vertices}
    for e, (a, b, s) in edges.items():
        t0, t1, x = tau[2 * e], tau[2 * e + 1], vals[e]
        if t0 not in (1, -1) or t1 not in (1, -1) or t0 * t1 != -s:
            return False
        if type(x) is not int or x == 0 or abs(x) >= k:
            return False
        net[a] += t0 * x
        net[b] += t1 * x
    return all(x == 0 for x in net.values())


__all__ = [
    "FlowCertificate", "HANDLERS", "NoZFlow", "PipelineError", "CertificateError", "ReductionStep",
    "ReductionTrace", "balanced_z2z3_flow", "contract_positive_edge", "find_balanced_4cycle",
    "glue_balanced_cut", "handle_balanced_4cycle", "induction_measure", "seymour_flow",
    "small_balanced_cuts", "split_candidates", "split_vertex", "twelve_flow", "verify_certificate",
]
