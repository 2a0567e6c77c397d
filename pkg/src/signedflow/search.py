"""Exhaustive edge-by-edge search for edge functions with prescribed boundaries.

Values live in Z (modulus 0) or Z_m.  Edges are processed in an order that
keeps the set of partially summed vertices small; a search state is the
edge index, the partial sums on that frontier and (optionally) the sign of
the odd-valued edges, and states that failed once are never expanded again.
"""

from __future__ import annotations

import sys
from typing import Mapping

from .graph import SignedGraph


class SearchCapExceeded(RuntimeError):
    pass


def edge_order(g: SignedGraph, first=()) -> list:
    """Prescribed edges first, then edges grouped by a greedy vertex sweep."""
    first = [e for e in first if e in g.edges]
    pos = {}
    if g.vertex_ids:
        touched = {}
        for e in first:
            for x in g.ends(e):
                touched[x] = touched.get(x, 0) + 1
        remaining = set(g.vertex_ids)
        while remaining:
            # most edges into the placed set, then highest degree, then smallest id
            best = None
            for v in remaining:
                conn = sum(1 for h in g.half_edges_at(v) if g.half_vertex(h ^ 1) in pos)
                key = (-conn, -touched.get(v, 0), -g.deg(v), v)
                if best is None or key < best[0]:
                    best = (key, v)
            v = best[1]
            pos[v] = len(pos)
            remaining.discard(v)
    rest = [e for e in g.edge_ids if e not in set(first)]
    rest.sort(key=lambda e: (max(pos[x] for x in g.ends(e)), min(pos[x] for x in g.ends(e)), e))
    return first + rest


def run_search(g: SignedGraph, tau: Mapping[int, int], domains: Mapping[int, list], modulus: int = 0,
               accept: Mapping[int, frozenset] | None = None, parity: int | None = None,
               count: bool = False, order=None, max_states: int | None = None):
    """Search for values ``phi[e] in domains[e]`` with boundary in ``accept[v]`` (default {0}).

    ``parity`` requests the product of signs over edges whose value is odd.
    Returns one solution dict (or None), or the number of solutions when ``count``.
    """
    m = modulus
    order = list(order) if order is not None else edge_order(g)
    n = len(order)
    acc_sets = {v: frozenset([0]) for v in g.vertex_ids}
    if accept:
        acc_sets.update({v: frozenset(s) for v, s in accept.items()})
    idx = {e: i for i, e in enumerate(order)}
    first_i = {}
    last_i = {}
    for v in g.vertex_ids:
        ids = [idx[h >> 1] for h in g.half_edges_at(v)]
        if not ids:
            if 0 not in acc_sets[v]:
                return 0 if count else None
            continue
        first_i[v] = min(ids)
        last_i[v] = max(ids)
    frontier = []
    for i in range(n + 1):
        frontier.append(tuple(v for v in first_i if first_i[v] < i <= last_i[v]))
    ends = []
    for e in order:
        u, v, s = g.edges[e]
        ends.append((u, v, tau[2 * e], tau[2 * e + 1], s))
    closing = [[] for _ in range(n)]
    for v, i in last_i.items():
        closing[i].append(v)
    doms = [list(domains[e]) for e in order]
    if m:
        doms = [[x % m for x in d] for d in doms]
    # remaining capacity per vertex after index i, for integer pruning
    cap_after = None
    if not m:
        cap_after = [dict() for _ in range(n + 1)]
        for i in range(n - 1, -1, -1):
            cur = dict(cap_after[i + 1])
            u, v, tu, tv, _ = ends[i]
            big = max(abs(x) for x in doms[i]) if doms[i] else 0
            cur[u] = cur.get(u, 0) + big
            cur[v] = cur.get(v, 0) + big
            cap_after[i] = cur
    acc = {v: 0 for v in g.vertex_ids}
    want_parity = parity
    dead = {} if count else set()
    sol = [None] * n
    states = [0]
    limit = max_states
    old_limit = sys.getrecursionlimit()
    if old_limit < 4 * n + 100:
        sys.setrecursionlimit(4 * n + 100)

    def feasible(x, i):
        t = acc[x]
        room = cap_after[i].get(x, 0)
        return any(abs(a - t) <= room for a in acc_sets[x])

    def rec(i, par):
        if i == n:
            ok = want_parity is None or par == want_parity
            return (1 if ok else 0) if count else ok
        key = (i, tuple(acc[x] for x in frontier[i]), par)
        if count:
            got = dead.get(key)
            if got is not None:
                return got
        elif key in dead:
            return False
        states[0] += 1
        if limit is not None and states[0] > limit:
            raise SearchCapExceeded(f"search exceeded {limit} states")
        u, v, tu, tv, s = ends[i]
        total = 0
        for val in doms[i]:
            du, dv = tu * val, tv * val
            if m:
                acc[u] = (acc[u] + du) % m
                acc[v] = (acc[v] + dv) % m
            else:
                acc[u] += du
                acc[v] += dv
            ok = True
            for x in closing[i]:
                if acc[x] not in acc_sets[x]:
                    ok = False
                    break
            if ok and cap_after is not None:
                for x in (u, v):
                    if x in last_i and last_i[x] > i and not feasible(x, i + 1):
                        ok = False
                        break
            if ok:
                npar = par
                if want_parity is not None and val % 2:
                    npar = par * s
                sol[i] = val
                r = rec(i + 1, npar)
                if count:
                    total += r
                elif r:
                    return True
            if m:
                acc[u] = (acc[u] - du) % m
                acc[v] = (acc[v] - dv) % m
            else:
                acc[u] -= du
                acc[v] -= dv
        if count:
            dead[key] = total
            return total
        dead.add(key)
        return False

    try:
        found = rec(0, 1)
    finally:
        sys.setrecursionlimit(old_limit)
    if count:
        return found
    if not found:
        return None
    return {e: sol[i] for i, e in enumerate(order)}


def integer_search(g: SignedGraph, tau, domains, max_states=None) -> dict | None:
    return run_search(g, tau, domains, 0, max_states=max_states)
