"""Immutable simple undirected graphs and the small-clique machinery built on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .errors import ContractError, ParseError


class Graph:
    """Simple undirected graph on dense vertex ids ``0..n-1``.

    ``labels`` optionally maps dense ids back to the labels of an input file.

    ``adj[v]`` is the strictly increasing tuple of neighbours of ``v`` and
    ``nbrs[v]`` the same as a frozenset for O(1) adjacency tests.  Edges are
    numbered in lexicographic order of ``(min, max)``.
    """

    __slots__ = ("n", "adj", "nbrs", "edges", "edge_index", "labels")

    def __init__(self, n: int, adj: Sequence[Sequence[int]], labels: Optional[Sequence] = None):
        self.n = n
        self.labels = tuple(labels) if labels is not None else None
        self.adj = [tuple(a) for a in adj]
        self.nbrs = [frozenset(a) for a in self.adj]
        self.edges = [(u, v) for u in range(n) for v in self.adj[u] if u < v]
        self.edge_index = {e: i for i, e in enumerate(self.edges)}

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.nbrs[u]

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self.edge_index[key]
        except KeyError:
            raise ContractError(f"{{{u},{v}}} is not an edge") from None

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, tuple(self.adj)))


def build_graph(edges: Iterable, n_hint: Optional[int] = None) -> Graph:
    """Build a Graph from vertex pairs, dropping self-loops and duplicates.

    ``n`` is ``max(n_hint, largest id + 1)`` so isolated vertices below
    ``n_hint`` are kept.
    """
    sets: dict[int, set] = {}
    n = n_hint or 0
    for k, pair in enumerate(edges):
        try:
            u, v = pair
        except (TypeError, ValueError):
            raise ParseError(f"expected a vertex pair, got {pair!r}", line=k + 1) from None
        u, v = int(u), int(v)
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id in {pair!r}", line=k + 1)
        n = max(n, u + 1, v + 1)
        if u == v:
            continue
        sets.setdefault(u, set()).add(v)
        sets.setdefault(v, set()).add(u)
    return Graph(n, [sorted(sets.get(v, ())) for v in range(n)])


def complement_adjacency(g: Graph) -> list[set]:
    everyone = set(range(g.n))
    return [everyone - g.nbrs[v] - {v} for v in range(g.n)]


@dataclass(frozen=True)
class DegeneracyOrder:
    order: tuple
    position: tuple
    d: int
    max_degree: int

    def later(self, g: Graph, v: int) -> list[int]:
        """Neighbours of ``v`` after it in the order, sorted by position."""
        pos = self.position
        p = pos[v]
        return sorted((u for u in g.adj[v] if pos[u] > p), key=pos.__getitem__)


def degeneracy_order(g: Graph) -> DegeneracyOrder:
    """Matula-Beck minimum-degree peeling with a bucket queue, O(n + m)."""
    n = g.n
    deg = [len(a) for a in g.adj]
    maxdeg = max(deg, default=0)
    buckets: list[list[int]] = [[] for _ in range(maxdeg + 1)]
    for v in range(n - 1, -1, -1):
        buckets[deg[v]].append(v)
    done = [False] * n
    order = []
    d = 0
    lo = 0
    while len(order) < n:
        lo = max(lo - 1, 0)
        while True:
            # lazy deletion: stale bucket entries are skipped
            while buckets[lo] and (done[buckets[lo][-1]] or deg[buckets[lo][-1]] != lo):
                buckets[lo].pop()
            if buckets[lo]:
                break
            lo += 1
        v = buckets[lo].pop()
        done[v] = True
        d = max(d, lo)
        order.append(v)
        for u in g.adj[v]:
            if not done[u]:
                deg[u] -= 1
                buckets[deg[u]].append(u)
    position = [0] * n
    for i, v in enumerate(order):
        position[v] = i
    return DegeneracyOrder(tuple(order), tuple(position), d, maxdeg)


def _later_sets(g: Graph, order: DegeneracyOrder) -> list[set]:
    pos = order.position
    return [{u for u in g.adj[v] if pos[u] > pos[v]} for v in range(g.n)]


def list_triangles(g: Graph, order: DegeneracyOrder,
                   visit: Optional[Callable[[int, int, int], None]] = None) -> int:
    """Visit every triangle once as ``(a, b, c)`` in increasing order position."""
    pos = order.position
    later = _later_sets(g, order)
    count = 0
    for a in order.order:
        la = later[a]
        for b in sorted(la, key=pos.__getitem__):
            common = la & later[b]
            if not common:
                continue
            count += len(common)
            if visit is not None:
                for c in sorted(common, key=pos.__getitem__):
                    visit(a, b, c)
    return count


def list_four_cliques(g: Graph, order: DegeneracyOrder,
                      visit: Optional[Callable[[int, int, int, int], None]] = None) -> int:
    """Visit every 4-clique once, vertices in increasing order position."""
    pos = order.position
    later = _later_sets(g, order)
    count = 0
    for a in order.order:
        la = later[a]
        if len(la) < 3:
            continue
        for b in sorted(la, key=pos.__getitem__):
            ab = la & later[b]
            if len(ab) < 2:
                continue
            for c in sorted(ab, key=pos.__getitem__):
                abc = ab & later[c]
                count += len(abc)
                if visit is not None:
                    for x in sorted(abc, key=pos.__getitem__):
                        visit(a, b, c, x)
    return count


def common_neighbors(g: Graph, u: int, v: int) -> list[int]:
    """N(u) & N(v) by merging the two sorted neighbour lists."""
    if not g.has_edge(u, v):
        raise ContractError(f"{{{u},{v}}} is not an edge")
    a, b = g.adj[u], g.adj[v]
    i = j = 0
    out = []
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            out.append(a[i])
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return out


def is_clique(g: Graph, s: Iterable[int]) -> bool:
    vs = list(s)
    nbrs = g.nbrs
    for i, u in enumerate(vs):
        nu = nbrs[u]
        for v in vs[i + 1:]:
            if v not in nu:
                return False
    return True


def maximal_cliques(nbrs: Sequence[Iterable[int]], vertices: Optional[Iterable[int]] = None):
    """Yield maximal cliques (as sorted lists) by Bron-Kerbosch with Tomita pivoting.

    ``nbrs`` is any per-vertex neighbour collection; ``vertices`` restricts the
    search to an induced subgraph.
    """
    nb = [set(x) for x in nbrs]
    cand = set(range(len(nb))) if vertices is None else set(vertices)
    if vertices is not None:
        nb = [s & cand for s in nb]

    def expand(r, p, x):
        if not p and not x:
            yield sorted(r)
            return
        pivot = max(p | x, key=lambda w: len(p & nb[w]))
        for v in sorted(p - nb[pivot]):
            yield from expand(r + [v], p & nb[v], x & nb[v])
            p = p - {v}
            x = x | {v}

    yield from expand([], cand, set())
