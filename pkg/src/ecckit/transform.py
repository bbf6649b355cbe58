"""Transformation of a partially covered ECC instance into a VCC instance.

One VCC vertex per uncovered edge; two are adjacent when the union of their
edges is a clique of the original graph (a triangle for incident edges, a
4-clique otherwise).  Covered edges may supply the clique's internal edges.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ecc_reduce import CoverState
from .errors import InvariantError
from .graph import Graph, DegeneracyOrder, build_graph, degeneracy_order, list_four_cliques, list_triangles


@dataclass(frozen=True)
class VccInstance:
    g: Graph        # the original graph, used for clique checks on reconstruction
    h: Graph
    origin: tuple   # VCC vertex -> (x, y) edge of G
    reverse: dict   # uncovered edge id of G -> VCC vertex

    def endpoints(self, vcc_clique) -> set:
        out = set()
        for i in vcc_clique:
            out.update(self.origin[i])
        return out


def build_vcc_instance(state: CoverState) -> VccInstance:
    g = state.g
    unc = state.uncovered_edges()
    reverse = {e: i for i, e in enumerate(unc)}
    origin = tuple(g.edges[e] for e in unc)

    # only vertices touching an uncovered edge can carry two uncovered edges of one clique
    touched = sorted({x for e in unc for x in g.edges[e]})
    local = {v: i for i, v in enumerate(touched)}
    sub = Graph(len(touched), [sorted(local[u] for u in g.adj[v] if u in local) for v in touched])
    order = degeneracy_order(sub)
    eidx = g.edge_index
    pairs = set()

    def vid(a, b):
        a, b = touched[a], touched[b]
        return reverse.get(eidx[(a, b) if a < b else (b, a)])

    def tri(a, b, c):
        ids = [i for i in (vid(a, b), vid(a, c), vid(b, c)) if i is not None]
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                pairs.add((ids[i], ids[j]))

    def quad(a, b, c, d):
        for p, q in (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))):
            i, j = vid(*p), vid(*q)
            if i is not None and j is not None:
                pairs.add((i, j))

    list_triangles(sub, order, tri)
    list_four_cliques(sub, order, quad)
    h = build_graph(sorted(pairs), n_hint=len(unc))
    return VccInstance(g, h, origin, reverse)


def check_size_bounds(g: Graph, order: DegeneracyOrder, inst: VccInstance) -> dict:
    """Check |V(h)| = m <= d*n and report |E(h)| / (d^2 m)."""
    nh, mh = inst.h.n, inst.h.m
    if nh != g.m:
        raise InvariantError(f"|V(h)| = {nh} but m = {g.m} on a fully uncovered instance")
    if g.m > order.d * g.n:
        raise InvariantError(f"m = {g.m} exceeds d*n = {order.d * g.n}")
    denom = order.d ** 2 * g.m
    return {
        "n": g.n, "m": g.m, "d": order.d,
        "vcc_n": nh, "vcc_m": mh,
        "m_le_dn": True,
        "ratio": mh / denom if denom else 0.0,
    }


def dump_vcc(inst: VccInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# vcc instance n={inst.h.n} m={inst.h.m}\n")
        for i, (x, y) in enumerate(inst.origin):
            fh.write(f"# origin {i} {x} {y}\n")
        for u, v in inst.h.edges:
            fh.write(f"{u} {v}\n")
