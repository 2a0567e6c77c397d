"""Exhaustive and random corpora of signed graphs, and the flow-number census.

Isomorphism is decided by nauty (through pynauty) on the edge-subdivided
incidence graph, so loops and parallel edges are handled uniformly.  Signed
graphs are taken up to switching and automorphism: the canonical negative
edge set is the least characteristic vector, with edge 0 most significant,
over the switching class and the automorphism group.
"""

from __future__ import annotations

import csv
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

import pynauty

from .graph import SignedGraph
from .oracle import DEFAULT_CAPS, Caps, CapError, flow_number, frustration_index, has_nz_z_flow
from .watering import validate_shrubbery

Edges = tuple  # tuple of (u, v) pairs with u <= v


# nauty plumbing

def _incidence(n: int, edges) -> tuple[pynauty.Graph, tuple]:
    adj = {i: [] for i in range(n + len(edges))}
    nonloop, loop = set(), set()
    for i, (u, v) in enumerate(edges):
        node = n + i
        adj[node] = [u] if u == v else [u, v]
        (loop if u == v else nonloop).add(node)
    parts = [p for p in (set(range(n)), nonloop, loop) if p]
    sizes = (n, len(nonloop), len(loop))
    return pynauty.Graph(n + len(edges), adjacency_dict=adj, vertex_coloring=parts), sizes


def certificate(n: int, edges) -> tuple:
    """Isomorphism invariant of a multigraph (equal iff isomorphic)."""
    if n + len(edges) == 0:
        return (0, 0, 0, b"")
    g, sizes = _incidence(n, edges)
    return (*sizes, pynauty.certificate(g))


def canonical_form(n: int, edges) -> Edges:
    """Relabel vertices and reorder edges canonically."""
    if not edges:
        return ()
    g, _ = _incidence(n, edges)
    lab = pynauty.canon_label(g)
    pos = {node: i for i, node in enumerate(lab)}
    order = sorted(range(len(edges)), key=lambda i: pos[n + i])
    out = []
    for i in order:
        u, v = pos[edges[i][0]], pos[edges[i][1]]
        out.append((min(u, v), max(u, v)))
    return tuple(out)


def edge_automorphisms(n: int, edges, limit: int = 500_000) -> list[tuple]:
    """The automorphism group as permutations of edge indices (closure of nauty's generators)."""
    m = len(edges)
    if m == 0:
        return [()]
    g, _ = _incidence(n, edges)
    gens = [tuple(p[n + i] - n for i in range(m)) for p in pynauty.autgrp(g)[0]]
    ident = tuple(range(m))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for s in gens:
                q = tuple(s[p[i]] for i in range(m))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
        if len(seen) > limit:
            raise CapError(f"automorphism group larger than {limit}")
    return sorted(seen)


# switching classes

def _bit(m: int, i: int) -> int:
    return 1 << (m - 1 - i)


def cut_basis(n: int, edges) -> list[int]:
    """Echelon basis of the cut space, pivots at distinct leading bits."""
    m = len(edges)
    basis: list[int] = []
    for v in range(n):
        x = 0
        for i, (a, b) in enumerate(edges):
            if (a == v) != (b == v):
                x |= _bit(m, i)
        for b in basis:
            x = min(x, x ^ b)
        if x:
            basis.append(x)
            basis.sort(reverse=True)
    # full reduction so greedy minimisation is exact
    for i in range(len(basis)):
        for j in range(len(basis)):
            if i != j and basis[j] & (1 << (basis[i].bit_length() - 1)):
                basis[j] ^= basis[i]
    return sorted(basis, reverse=True)


def coset_min(x: int, basis: list[int]) -> int:
    for b in basis:
        x = min(x, x ^ b)
    return x


def permute_mask(x: int, perm: tuple, m: int) -> int:
    out = 0
    for i in range(m):
        if x & _bit(m, i):
            out |= _bit(m, perm[i])
    return out


def canonical_mask(x: int, m: int, basis, autos) -> int:
    return min(coset_min(permute_mask(x, p, m), basis) for p in autos)


def switching_classes(n: int, edges) -> list[int]:
    """Canonical negative-edge masks, one per class up to switching and automorphism."""
    m = len(edges)
    basis = cut_basis(n, edges)
    autos = edge_automorphisms(n, edges)
    free = [i for i in range(m) if not any(b & _bit(m, i) and b.bit_length() - 1 == m - 1 - i for b in basis)]
    out = set()
    for k in range(len(free) + 1):
        for S in combinations(free, k):
            x = 0
            for i in S:
                x |= _bit(m, i)
            out.add(canonical_mask(x, m, basis, autos))
    return sorted(out)


def mask_string(x: int, m: int) -> str:
    return "".join("1" if x & _bit(m, i) else "0" for i in range(m))


def signed_graph(n: int, edges, mask: int) -> SignedGraph:
    m = len(edges)
    return SignedGraph.from_edges(n, [(u, v, -1 if mask & _bit(m, i) else 1) for i, (u, v) in enumerate(edges)])


def graph_text(n: int, edges) -> str:
    return f"{n}:" + " ".join(f"{u}-{v}" for u, v in edges)


# exhaustive generators (level-by-level edge augmentation with nauty dedup)

def _augment(n: int, max_degree: int | None, simple: bool, max_edges: int | None = None) -> Iterator[Edges]:
    level = {certificate(n, ()): ()}
    m = 0
    while level:
        yield from level.values()
        if max_edges is not None and m >= max_edges:
            return
        m += 1
        nxt = {}
        for edges in level.values():
            deg = [0] * n
            for u, v in edges:
                deg[u] += 1
                deg[v] += 1
            present = set(edges)
            for u in range(n):
                for v in range(u, n):
                    if simple and (u == v or (u, v) in present):
                        continue
                    need = 2 if u == v else 1
                    if max_degree is not None and (deg[u] + need > max_degree or (u != v and deg[v] + 1 > max_degree)):
                        continue
                    new = tuple(sorted(edges + ((u, v),)))
                    key = certificate(n, new)
                    if key not in nxt:
                        nxt[key] = new
        level = nxt


def _connected(n: int, edges) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(x) for x in range(n)}) <= 1


def simple_graphs(n: int, connected: bool = True) -> Iterator[Edges]:
    """Every simple graph on ``n`` vertices up to isomorphism, by edge count."""
    for edges in _augment(n, None, simple=True):
        if not connected or _connected(n, edges):
            yield canonical_form(n, edges)


def cubic_multigraphs(n: int, loops: bool = True) -> list[Edges]:
    """Connected cubic multigraphs on ``n`` vertices up to isomorphism."""
    if n % 2:
        return []
    out = []
    for edges in _augment(n, 3, simple=False):
        if len(edges) * 2 != 3 * n or not _connected(n, edges):
            continue
        if not loops and any(u == v for u, v in edges):
            continue
        out.append(canonical_form(n, edges))
    return sorted(out)


def simple_cubic_graphs(n: int) -> list[Edges]:
    """Connected simple cubic graphs on ``n`` vertices up to isomorphism."""
    if n % 2 or n < 4:
        return []
    return sorted(canonical_form(n, es) for es in _augment(n, 3, simple=True, max_edges=3 * n // 2)
                  if 2 * len(es) == 3 * n and _connected(n, es))


def multigraphs(max_edges: int) -> Iterator[tuple[int, Edges]]:
    """Multigraphs with loops, 1..max_edges edges and no isolated vertex, up to isomorphism."""
    for n in range(1, 2 * max_edges + 1):
        for edges in _augment(n, None, simple=False, max_edges=max_edges):
            if edges and len({x for e in edges for x in e}) == n:
                yield n, canonical_form(n, edges)


def _bridgeless(n: int, edges) -> bool:
    for i in range(len(edges)):
        if not _connected(n, edges[:i] + edges[i + 1:]):
            return False
    return True


def two_edge_connected_graphs(max_vertices: int) -> Iterator[tuple[int, Edges]]:
    """Bridgeless connected simple graphs with 3..max_vertices vertices, streamed."""
    for n in range(3, max_vertices + 1):
        for edges in _augment(n, None, simple=True):
            if len(edges) >= n and _connected(n, edges) and _bridgeless(n, edges):
                yield n, canonical_form(n, edges)


def signed_cubic_graphs(max_vertices: int = 8) -> list[tuple[int, Edges, int]]:
    """``(n, edges, mask)`` for connected signed cubic multigraphs up to switching."""
    out = []
    for n in range(2, max_vertices + 1, 2):
        for edges in cubic_multigraphs(n):
            for mask in switching_classes(n, edges):
                out.append((n, edges, mask))
    return out


def signed_simple_graphs(max_vertices: int) -> list[tuple[int, Edges, int]]:
    out = []
    for n in range(1, max_vertices + 1):
        for edges in sorted(simple_graphs(n)):
            for mask in switching_classes(n, edges):
                out.append((n, edges, mask))
    return out


# random corpora

def random_signed_graph(rng: random.Random, max_vertices: int = 12, max_degree: int = 6) -> SignedGraph:
    """Random signed multigraph (loops allowed) with at most ``max_vertices`` and degree cap."""
    n = rng.randint(1, max_vertices)
    deg = [0] * n
    edges = []
    for _ in range(rng.randint(0, max_degree * n // 2)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            if deg[u] + 2 > max_degree:
                continue
            deg[u] += 2
        else:
            if deg[u] >= max_degree or deg[v] >= max_degree:
                continue
            deg[u] += 1
            deg[v] += 1
        edges.append((u, v, rng.choice((1, -1))))
    return SignedGraph.from_edges(n, edges)


def random_corpus(count: int = 1000, seed: int = 0, max_vertices: int = 12, max_degree: int = 6) -> list[SignedGraph]:
    rng = random.Random(seed)
    return [random_signed_graph(rng, max_vertices, max_degree) for _ in range(count)]


def _subdivide(n: int, edges, times: dict) -> tuple[int, list]:
    """Subdivide edge ``i`` ``times[i]`` times; signs ride on the first segment."""
    out = []
    nxt = n
    for i, (u, v, s) in enumerate(edges):
        k = times.get(i, 0)
        chain = [u] + list(range(nxt, nxt + k)) + [v]
        nxt += k
        for j in range(len(chain) - 1):
            out.append((chain[j], chain[j + 1], s if j == 0 else 1))
    return nxt, out


K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
PETERSEN = [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)] + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]


def curated_shrubberies() -> list[tuple[str, SignedGraph]]:
    """Hand-picked instances: negative loop, cycles, subdivided K4 halos, signed Petersen graphs."""
    out = [("negative-loop", SignedGraph.from_edges(1, [(0, 0, -1)]))]
    for k in (3, 5, 6, 7, 8):
        for s in (1, -1):
            edges = [(i, (i + 1) % k, s if i == 0 else 1) for i in range(k)]
            out.append((f"C{k}{'+' if s > 0 else '-'}", SignedGraph.from_edges(k, edges)))
    # K4 with one perfect matching negative is a halo instance once the 4-cycle sides are long enough
    for neg in ((0, 5), (1, 4), (2, 3), (0,), (0, 1)):
        base = [(u, v, -1 if i in neg else 1) for i, (u, v) in enumerate(K4)]
        for pattern in ((), (0, 5), (1, 2, 3, 4), (0, 1, 2, 3, 4, 5)):
            n, es = _subdivide(4, base, {i: 1 for i in pattern})
            out.append((f"K4-neg{neg}-sub{pattern}", SignedGraph.from_edges(n, es)))
    rng = random.Random(7)
    for t in range(20):
        es = [(a, b, rng.choice((1, -1))) for a, b in PETERSEN]
        out.append((f"petersen-{t}", SignedGraph.from_edges(10, es)))
    return [(name, g) for name, g in out if validate_shrubbery(g).is_shrubbery]


def shrubbery_corpus(size: int = 200, seed: int = 0, max_vertices: int = 12,
                     tries: int = 200_000) -> list[tuple[str, SignedGraph]]:
    """Curated shrubberies followed by random validated ones until ``size`` is reached."""
    out = curated_shrubberies()
    seen = {g for _, g in out}
    rng = random.Random(seed)
    for t in range(tries):
        if len(out) >= size:
            break
        n = rng.randint(2, max_vertices)
        # bias towards dense subcubic graphs; sparse ones rarely satisfy the deficiency bound
        deg = [0] * n
        edges = []
        for _ in range(4 * n):
            u, v = rng.randrange(n), rng.randrange(n)
            need = 2 if u == v else 1
            if u == v and rng.random() < 0.7:
                continue
            if deg[u] + need > 3 or (u != v and deg[v] + 1 > 3):
                continue
            deg[u] += 1
            deg[v] += 1
            edges.append((u, v, rng.choice((1, -1))))
        g = SignedGraph.from_edges(n, edges)
        if g in seen or len(g.components()) != 1:
            continue
        if validate_shrubbery(g).is_shrubbery:
            seen.add(g)
            out.append((f"random-{t}", g))
    return out


# census

CSV_FIELDS = ("n", "m", "graph", "negative_edges", "frustration", "nz_z_flow", "flow_number", "flag")


@dataclass(frozen=True)
class CensusRow:
    n: int
    m: int
    graph: str
    negative_edges: str
    frustration: int
    nz_z_flow: bool
    flow_number: int | None

    @property
    def flag(self) -> str:
        return "falsification-candidate" if self.flow_number is not None and self.flow_number > 6 else ""

    def as_csv(self) -> list:
        return [self.n, self.m, self.graph, self.negative_edges, self.frustration, int(self.nz_z_flow),
                "" if self.flow_number is None else self.flow_number, self.flag]


def _census_row(item: tuple, caps: Caps = DEFAULT_CAPS) -> CensusRow:
    n, edges, mask = item
    g = signed_graph(n, edges, mask)
    nz = has_nz_z_flow(g)
    fn = flow_number(g, caps) if nz else None
    return CensusRow(n, len(edges), graph_text(n, edges), mask_string(mask, len(edges)),
                     frustration_index(g, caps), nz, fn)


def census_instances(max_vertices: int, cubic: bool = False, max_edges: int | None = None) -> list[tuple]:
    items = signed_cubic_graphs(max_vertices) if cubic else signed_simple_graphs(max_vertices)
    if max_edges is not None:
        items = [it for it in items if len(it[1]) <= max_edges]
    return items


def run_census(max_vertices: int, cubic: bool = False, jobs: int = 1, max_edges: int | None = None) -> list[CensusRow]:
    """Rows in deterministic instance order, whatever the worker count."""
    items = census_instances(max_vertices, cubic, max_edges)
    if jobs <= 1:
        return [_census_row(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_census_row, items, chunksize=8))


def census_csv(rows: Iterable[CensusRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow(r.as_csv())
    return buf.getvalue()


def census_summary(rows: list[CensusRow]) -> dict:
    flows = [r.flow_number for r in rows if r.flow_number is not None]
    hist = {}
    for k in flows:
        hist[k] = hist.get(k, 0) + 1
    return {
        "instances": len(rows),
        "with_nz_z_flow": len(flows),
        "max_flow_number": max(flows) if flows else None,
        "histogram": dict(sorted(hist.items())),
        "falsification_candidates": [r for r in rows if r.flag],
    }


__all__ = [
    "CSV_FIELDS", "CensusRow", "canonical_form", "multigraphs", "simple_cubic_graphs", "canonical_mask", "census_csv", "census_instances",
    "census_summary", "certificate", "cubic_multigraphs", "curated_shrubberies", "cut_basis",
    "edge_automorphisms", "graph_text", "mask_string", "random_corpus", "random_signed_graph",
    "run_census", "shrubbery_corpus", "signed_cubic_graphs", "signed_graph", "signed_simple_graphs",
    "simple_graphs", "switching_classes", "two_edge_connected_graphs",
]
