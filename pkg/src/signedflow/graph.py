"""Signed multigraphs with half-edge incidence.

Edge ``e`` owns the half-edges ``2*e`` (at its first end) and ``2*e + 1``
(at its second end).  Vertex and edge ids are never renumbered, so a
subgraph shares ids with its parent and maps over half-edges (such as an
orientation) can be restricted without translation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping


class GraphError(ValueError):
    pass


def edge_of(h: int) -> int:
    return h >> 1


def halves(e: int) -> tuple[int, int]:
    return 2 * e, 2 * e + 1


@dataclass(frozen=True)
class Path:
    """A walk without repeated vertices; ``edges[i]`` joins ``vertices[i]`` and ``vertices[i+1]``."""

    vertices: tuple
    edges: tuple

    @property
    def ends(self):
        return self.vertices[0], self.vertices[-1]

    @property
    def interior(self):
        return self.vertices[1:-1]

    def reversed(self) -> "Path":
        return Path(self.vertices[::-1], self.edges[::-1])

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class Cycle:
    """A closed walk without repeated vertices; ``edges[i]`` joins ``vertices[i]`` and ``vertices[i+1 mod n]``."""

    vertices: tuple
    edges: tuple

    def __len__(self):
        return len(self.edges)

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def rotated(self, v) -> "Cycle":
        i = self.vertices.index(v)
        return Cycle(self.vertices[i:] + self.vertices[:i], self.edges[i:] + self.edges[:i])

    def reversed(self) -> "Cycle":
        # keep vertices[0] fixed
        vs = (self.vertices[0],) + self.vertices[:0:-1]
        es = self.edges[::-1]
        return Cycle(vs, es)

    def arc(self, i: int, j: int) -> Path:
        """Forward arc from position ``i`` to position ``j``."""
        n = len(self.vertices)
        vs = [self.vertices[i]]
        es = []
        k = i
        while k != j:
            es.append(self.edges[k])
            k = (k + 1) % n
            vs.append(self.vertices[k])
        return Path(tuple(vs), tuple(es))


class SignedGraph:
    """Immutable signed multigraph.  Loops and parallel edges are allowed."""

    def __init__(self, vertices: Iterable[int], edges: Mapping[int, tuple[int, int, int]],
                 next_vertex: int = 0, next_edge: int = 0):
        vs = frozenset(vertices)
        es = {}
        for e, (u, v, s) in edges.items():
            if u not in vs or v not in vs:
                raise GraphError(f"edge {e} has an endpoint outside the vertex set")
            if s not in (1, -1):
                raise GraphError(f"edge {e} has sign {s!r}")
            es[e] = (u, v, s)
        self._vertices = vs
        self._edges = es
        self.next_vertex = max([next_vertex, *(v + 1 for v in vs)])
        self.next_edge = max([next_edge, *(e + 1 for e in es)])

    @classmethod
    def from_edges(cls, n: int | Iterable[int], edges: Iterable[tuple]) -> "SignedGraph":
        """Build from ``(u, v)`` or ``(u, v, sign)`` tuples; edge ids follow list order."""
        vs = range(n) if isinstance(n, int) else n
        es = {}
        for i, rec in enumerate(edges):
            u, v = rec[0], rec[1]
            s = rec[2] if len(rec) > 2 else 1
            es[i] = (u, v, s)
        return cls(vs, es)

    def _derive(self, vertices, edges) -> "SignedGraph":
        return SignedGraph(vertices, edges, self.next_vertex, self.next_edge)

    # basic access

    @property
    def vertices(self) -> frozenset:
        return self._vertices

    @property
    def edges(self) -> Mapping[int, tuple[int, int, int]]:
        return self._edges

    @cached_property
    def edge_ids(self) -> tuple:
        return tuple(sorted(self._edges))

    @cached_property
    def vertex_ids(self) -> tuple:
        return tuple(sorted(self._vertices))

    @property
    def signature(self) -> dict:
        return {e: s for e, (_, _, s) in self._edges.items()}

    def __len__(self):
        return len(self._vertices)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def __eq__(self, other):
        return (isinstance(other, SignedGraph) and self._vertices == other._vertices
                and self._edges == other._edges)

    def __hash__(self):
        return hash((self._vertices, frozenset(self._edges.items())))

    def __repr__(self):
        return f"SignedGraph(|V|={len(self._vertices)}, |E|={len(self._edges)})"

    def ends(self, e) -> tuple[int, int]:
        u, v, _ = self._edges[e]
        return u, v

    def sign(self, e) -> int:
        return self._edges[e][2]

    def is_loop(self, e) -> bool:
        u, v, _ = self._edges[e]
        return u == v

    def other_end(self, e, x):
        u, v, _ = self._edges[e]
        if x == u:
            return v
        if x == v:
            return u
        raise GraphError(f"vertex {x} is not an end of edge {e}")

    def half_vertex(self, h) -> int:
        return self._edges[h >> 1][h & 1]

    @cached_property
    def _incidence(self) -> dict:
        inc = {v: [] for v in self._vertices}
        for e in self.edge_ids:
            u, v, _ = self._edges[e]
            inc[u].append(2 * e)
            inc[v].append(2 * e + 1)
        return {v: tuple(hs) for v, hs in inc.items()}

    def half_edges(self) -> list[int]:
        return [h for e in self.edge_ids for h in halves(e)]

    def half_edges_at(self, v) -> tuple:
        try:
            return self._incidence[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v}") from None

    def incident_edges(self, v) -> list:
        """Edges at ``v`` in id order; a loop appears once."""
        seen = []
        for h in self.half_edges_at(v):
            e = h >> 1
            if not seen or seen[-1] != e:
                seen.append(e)
        return seen

    def deg(self, v) -> int:
        return len(self.half_edges_at(v))

    @cached_property
    def degrees(self) -> dict:
        return {v: len(hs) for v, hs in self._incidence.items()}

    @cached_property
    def max_degree(self) -> int:
        return max(self.degrees.values(), default=0)

    def neighbors(self, v) -> list:
        out = []
        for e in self.incident_edges(v):
            w = self.other_end(e, v)
            if w != v and w not in out:
                out.append(w)
        return sorted(out)

    def delta(self, xs: Iterable[int]) -> frozenset:
        X = set(xs)
        return frozenset(e for e, (u, v, _) in self._edges.items() if (u in X) != (v in X))

    def inner_edges(self, xs: Iterable[int]) -> frozenset:
        X = set(xs)
        return frozenset(e for e, (u, v, _) in self._edges.items() if u in X and v in X)

    def sign_of(self, es: Iterable[int]) -> int:
        s = 1
        for e in es:
            s *= self._edges[e][2]
        return s

    def loops(self) -> list:
        return [e for e in self.edge_ids if self.is_loop(e)]

    # derived graphs

    def with_signature(self, sig: Mapping[int, int]) -> "SignedGraph":
        if set(sig) != set(self._edges):
            raise GraphError("signature domain does not match the edge set")
        return self._derive(self._vertices, {e: (u, v, sig[e]) for e, (u, v, _) in self._edges.items()})

    def switch(self, flips: Iterable[int]) -> "SignedGraph":
        F = set(flips)
        unknown = F - self._vertices
        if unknown:
            raise GraphError(f"unknown vertex {min(unknown)}")
        es = {}
        for e, (u, v, s) in self._edges.items():
            if (u in F) != (v in F):
                s = -s
            es[e] = (u, v, s)
        return self._derive(self._vertices, es)

    def flip(self, v) -> "SignedGraph":
        return self.switch([v])

    def remove_edges(self, es: Iterable[int]) -> "SignedGraph":
        drop = set(es)
        return self._derive(self._vertices, {e: r for e, r in self._edges.items() if e not in drop})

    def remove_vertices(self, xs: Iterable[int]) -> "SignedGraph":
        X = set(xs)
        return self._derive(self._vertices - X,
                            {e: r for e, r in self._edges.items() if r[0] not in X and r[1] not in X})

    def induced(self, xs: Iterable[int]) -> "SignedGraph":
        X = set(xs) & self._vertices
        return self._derive(X, {e: r for e, r in self._edges.items() if r[0] in X and r[1] in X})

    def edge_subgraph(self, es: Iterable[int], vertices: Iterable[int] | None = None) -> "SignedGraph":
        keep = {e: self._edges[e] for e in es}
        vs = set() if vertices is None else set(vertices)
        for u, v, _ in keep.values():
            vs.add(u)
            vs.add(v)
        return self._derive(vs, keep)

    def add_vertex(self) -> tuple["SignedGraph", int]:
        v = self.next_vertex
        return self._derive(self._vertices | {v}, self._edges), v

    def add_edge(self, u, v, s=1) -> tuple["SignedGraph", int]:
        e = self.next_edge
        es = dict(self._edges)
        es[e] = (u, v, s)
        return self._derive(self._vertices, es), e

    def contract_edge(self, e) -> "SignedGraph":
        """Delete non-loop ``e`` and identify its second end into its first."""
        u, v, _ = self._edges[e]
        if u == v:
            raise GraphError(f"edge {e} is a loop")
        es = {}
        for f, (a, b, s) in self._edges.items():
            if f == e:
                continue
            es[f] = (u if a == v else a, u if b == v else b, s)
        return self._derive(self._vertices - {v}, es)

    # connectivity

    def components(self) -> list[frozenset]:
        seen = set()
        comps = []
        for s in self.vertex_ids:
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for h in self._incidence[x]:
                    y = self.half_vertex(h ^ 1)
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def spanning_forest(self, roots: Iterable[int] = ()) -> tuple[dict, dict, list]:
        """BFS forest.  Returns ``(parent_vertex, parent_edge, order)``; roots map to ``None``."""
        parent, pedge, order = {}, {}, []
        starts = list(roots) + list(self.vertex_ids)
        for s in starts:
            if s in parent:
                continue
            parent[s] = None
            pedge[s] = None
            queue = deque([s])
            while queue:
                x = queue.popleft()
                order.append(x)
                for h in self._incidence[x]:
                    y = self.half_vertex(h ^ 1)
                    if y not in parent:
                        parent[y] = x
                        pedge[y] = h >> 1
                        queue.append(y)
        return parent, pedge, order

    def potentials(self) -> tuple[dict, int | None]:
        """Vertex potentials making forest edges positive, plus the first violating edge (or None)."""
        parent, pedge, order = self.spanning_forest()
        p = {}
        for x in order:
            if parent[x] is None:
                p[x] = 1
            else:
                p[x] = p[parent[x]] * self.sign(pedge[x])
        bad = None
        for e in self.edge_ids:
            u, v, s = self._edges[e]
            if p[u] * p[v] != s:
                bad = e
                break
        return p, bad

    def tree_path(self, parent: dict, pedge: dict, a, b) -> Path | None:
        """Path between ``a`` and ``b`` in a forest given by parent maps."""
        up_a = [a]
        while parent[up_a[-1]] is not None:
            up_a.append(parent[up_a[-1]])
        index = {x: i for i, x in enumerate(up_a)}
        up_b = [b]
        while up_b[-1] not in index:
            nxt = parent[up_b[-1]]
            if nxt is None:
                return None
            up_b.append(nxt)
        meet = up_b[-1]
        left = up_a[:index[meet] + 1]
        right = up_b[:-1][::-1]
        vs = left + right
        es = [pedge[x] for x in up_a[:index[meet]]] + [pedge[x] for x in up_b[:-1]][::-1]
        return Path(tuple(vs), tuple(es))

    def __iter__(self):
        return iter(self.vertex_ids)


# balance and switching

def find_unbalanced_cycle(g: SignedGraph) -> Cycle | None:
    parent, pedge, order = g.spanning_forest()
    p = {}
    for x in order:
        p[x] = 1 if parent[x] is None else p[parent[x]] * g.sign(pedge[x])
    for e in g.edge_ids:
        u, v, s = g.edges[e]
        if p[u] * p[v] == s:
            continue
        if u == v:
            return Cycle((u,), (e,))
        path = g.tree_path(parent, pedge, v, u)
        return Cycle(path.vertices, path.edges + (e,))
    return None


def is_balanced(g: SignedGraph) -> bool:
    return find_unbalanced_cycle(g) is None


def equivalent_signatures(g: SignedGraph, s1: Mapping[int, int], s2: Mapping[int, int]) -> bool:
    if set(s1) != set(g.edges) or set(s2) != set(g.edges):
        raise GraphError("signature domain does not match the edge set")
    return is_balanced(g.with_signature({e: s1[e] * s2[e] for e in g.edges}))


def canonical_switch(g: SignedGraph) -> tuple[SignedGraph, frozenset]:
    """Switch so that every BFS-forest edge is positive."""
    p, _ = g.potentials()
    flips = frozenset(v for v, s in p.items() if s < 0)
    return g.switch(flips), flips


def balancing_flips(g: SignedGraph) -> frozenset | None:
    """Vertex set whose switching makes ``g`` all-positive, or None if unbalanced."""
    h, flips = canonical_switch(g)
    if any(s < 0 for s in h.signature.values()):
        return None
    return flips


# cycles

def cycle_from_edges(g: SignedGraph, es: Iterable[int]) -> Cycle:
    """Order a 2-regular connected edge set into a Cycle starting at its smallest vertex."""
    es = list(es)
    if not es:
        raise GraphError("empty edge set")
    if len(es) == 1:
        u, v = g.ends(es[0])
        if u != v:
            raise GraphError("single non-loop edge is not a cycle")
        return Cycle((u,), (es[0],))
    inc = {}
    for e in es:
        u, v = g.ends(e)
        if u == v:
            raise GraphError("loop inside a longer edge set")
        inc.setdefault(u, []).append(e)
        inc.setdefault(v, []).append(e)
    if any(len(x) != 2 for x in inc.values()):
        raise GraphError("edge set is not 2-regular")
    start = min(inc)
    first = min(inc[start])
    vs, cs = [start], [first]
    x = g.other_end(first, start)
    prev = first
    while x != start:
        vs.append(x)
        a, b = inc[x]
        nxt = b if a == prev else a
        cs.append(nxt)
        prev = nxt
        x = g.other_end(nxt, x)
    if len(cs) != len(es):
        raise GraphError("edge set is not connected")
    return Cycle(tuple(vs), tuple(cs))


def is_cycle(g: SignedGraph, c: Cycle) -> bool:
    n = len(c.vertices)
    if n == 0 or n != len(c.edges) or len(set(c.vertices)) != n or len(set(c.edges)) != n:
        return False
    for i, e in enumerate(c.edges):
        if e not in g.edges:
            return False
        a, b = c.vertices[i], c.vertices[(i + 1) % n]
        if set(g.ends(e)) != {a, b} and not (a == b and g.ends(e) == (a, a)):
            return False
    return True


def iter_cycles(g: SignedGraph, max_len: int | None = None) -> Iterator[Cycle]:
    """All cycles, each once.  Cycles are rooted at their smallest vertex."""
    limit = max_len if max_len is not None else len(g) + 1
    for e in g.loops():
        yield Cycle((g.ends(e)[0],), (e,))
    if limit < 2:
        return
    adj = {v: [(h >> 1, g.half_vertex(h ^ 1)) for h in g.half_edges_at(v) if not g.is_loop(h >> 1)]
           for v in g.vertex_ids}
    for s in g.vertex_ids:
        path_v = [s]
        path_e = []
        on_path = {s}
        stack = [iter(adj[s])]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                if path_e:
                    path_e.pop()
                    on_path.discard(path_v.pop())
                continue
            e, w = nxt
            if path_e and e == path_e[-1]:
                continue
            if w == s:
                if path_e and path_e[0] < e:
                    yield Cycle(tuple(path_v), tuple(path_e) + (e,))
                continue
            if w < s or w in on_path or len(path_e) + 1 >= limit:
                continue
            path_v.append(w)
            path_e.append(e)
            on_path.add(w)
            stack.append(iter(adj[w]))


def iter_paths(g: SignedGraph, a, b, avoid: Iterable[int] = (), max_len: int | None = None) -> Iterator[Path]:
    """All ``a``-``b`` paths whose interior avoids ``avoid``."""
    blocked = set(avoid) - {a, b}
    limit = max_len if max_len is not None else len(g)
    if a == b:
        yield Path((a,), ())
        return
    path_v, path_e = [a], []
    on_path = {a}
    stack = [iter(g.half_edges_at(a))]
    while stack:
        h = next(stack[-1], None)
        if h is None:
            stack.pop()
            if path_e:
                path_e.pop()
                on_path.discard(path_v.pop())
            continue
        e = h >> 1
        w = g.half_vertex(h ^ 1)
        if w == b:
            yield Path(tuple(path_v) + (b,), tuple(path_e) + (e,))
            continue
        if w in on_path or w in blocked or len(path_e) + 1 >= limit:
            continue
        path_v.append(w)
        path_e.append(e)
        on_path.add(w)
        stack.append(iter(g.half_edges_at(w)))


def shortest_path(g: SignedGraph, sources: Iterable[int], targets: Iterable[int],
                  avoid: Iterable[int] = ()) -> Path | None:
    """BFS path from a source to a target; interior avoids ``avoid`` and the sources/targets."""
    S, T = set(sources), set(targets)
    blocked = set(avoid)
    prev = {}
    queue = deque()
    for s in sorted(S):
        if s in T:
            return Path((s,), ())
        prev[s] = None
        queue.append(s)
    while queue:
        x = queue.popleft()
        for h in g.half_edges_at(x):
            y = g.half_vertex(h ^ 1)
            if y in prev:
                continue
            if y in T:
                prev[y] = (x, h >> 1)
                vs, es = [y], []
                while prev[vs[-1]] is not None:
                    px, pe = prev[vs[-1]]
                    es.append(pe)
                    vs.append(px)
                return Path(tuple(vs[::-1]), tuple(es[::-1]))
            if y in blocked or y in S:
                continue
            prev[y] = (x, h >> 1)
            queue.append(y)
    return None


def has_cycle(g: SignedGraph) -> bool:
    return g.num_edges > 0 and g.num_edges >= len(g) - len(g.components()) + 1


def cut_pairs(g: SignedGraph, max_size: int = 2) -> Iterator[tuple]:
    """Edge sets of size 1..max_size whose removal increases the number of components."""
    base = len(g.components())
    for k in range(1, max_size + 1):
        for S in combinations(g.edge_ids, k):
            if len(g.remove_edges(S).components()) > base:
                yield S


# text format

def parse_signed_graph(text: str) -> SignedGraph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "v":
            if n is not None:
                raise GraphError(f"line {lineno}: duplicate vertex count")
            if len(tok) != 2 or not tok[1].isdigit():
                raise GraphError(f"line {lineno}: expected 'v <count>'")
            n = int(tok[1])
        elif tok[0] == "e":
            if n is None:
                raise GraphError(f"line {lineno}: edge before vertex count")
            if len(tok) != 4 or tok[3] not in ("+", "-"):
                raise GraphError(f"line {lineno}: expected 'e <u> <v> <+|->'")
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError:
                raise GraphError(f"line {lineno}: vertex ids must be integers") from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"line {lineno}: vertex id out of range 0..{n - 1}")
            edges.append((u, v, 1 if tok[3] == "+" else -1))
        else:
            raise GraphError(f"line {lineno}: unknown record {tok[0]!r}")
    if n is None:
        raise GraphError("missing 'v <count>' record")
    return SignedGraph.from_edges(n, edges)


def format_signed_graph(g: SignedGraph) -> str:
    """Text form; vertices are renumbered 0..n-1 in id order, edges written in id order."""
    index = {v: i for i, v in enumerate(g.vertex_ids)}
    lines = [f"v {len(g)}"]
    for e in g.edge_ids:
        u, v, s = g.edges[e]
        lines.append(f"e {index[u]} {index[v]} {'+' if s > 0 else '-'}")
    return "\n".join(lines) + "\n"


def bridges(g: SignedGraph) -> list:
    """Cut-edges, found by lowpoint DFS over edge ids (parallel edges are never bridges)."""
    disc, low = {}, {}
    out = []
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
                    if low[x] > disc[p]:
                        out.append(via)
                continue
            e = h >> 1
            if e == via:
                continue
            y = g.half_vertex(h ^ 1)
            if y in disc:
                low[x] = min(low[x], disc[y])
            else:
                disc[y] = low[y] = t
                t += 1
                stack.append((y, e, iter(g.half_edges_at(y))))
    return sorted(out)
