"""Covered-edge state and the ECC reduction rules.

Rule 1 removes vertices whose incident edges are all covered, rule 2 covers
an edge lying in exactly one maximal clique, and rule 5 (lifted simplicial)
covers an edge whose uncovered clique-mates span a clique.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graph import Graph, DegeneracyOrder, degeneracy_order, list_four_cliques, list_triangles


class CoverState:
    """Mutable reduction state over an immutable Graph.

    ``cn[e]``/``c[e]`` (common neighbourhood among non-removed vertices and the
    number of edges inside it) are kept exact for every uncovered edge; values
    of covered edges are left stale since no rule reads them.
    """

    def __init__(self, g: Graph, order: Optional[DegeneracyOrder] = None, trace: bool = False):
        self.g = g
        self.order = order or degeneracy_order(g)
        self.covered = bytearray(g.m)
        self.removed = bytearray(g.n)
        self.unbrs = [set(a) for a in g.adj]
        self.cn: list[set] = [set() for _ in range(g.m)]
        self.c = [0] * g.m
        self.forced_cliques: list[tuple] = []
        self.uncovered_count = g.m
        self.dirty: set = set()
        self.trace: Optional[list] = [] if trace else None

    def is_covered(self, u: int, v: int) -> bool:
        return v not in self.unbrs[u]

    def uncovered_edges(self) -> list[int]:
        cov = self.covered
        return [e for e in range(self.g.m) if not cov[e]]

    def cover_edge(self, e: int) -> bool:
        if self.covered[e]:
            return False
        u, v = self.g.edges[e]
        self.covered[e] = 1
        self.unbrs[u].discard(v)
        self.unbrs[v].discard(u)
        self.uncovered_count -= 1
        return True

    def cover_edges(self, edge_ids: Iterable[int]) -> int:
        """Mark edges covered without recording a clique (test/setup helper)."""
        return sum(self.cover_edge(e) for e in edge_ids)

    def add_clique(self, clique, rule=None, trigger=None) -> int:
        """Commit ``clique`` to the cover; returns the number of newly covered edges."""
        cl = tuple(sorted(clique))
        eidx = self.g.edge_index
        newly = 0
        for i, a in enumerate(cl):
            for b in cl[i + 1:]:
                newly += self.cover_edge(eidx[(a, b)])
        self.forced_cliques.append(cl)
        if self.trace is not None:
            self.trace.append({"rule": rule, "trigger": trigger, "clique": list(cl)})
        return newly

    def alive_vertices(self) -> list[int]:
        return [v for v in range(self.g.n) if not self.removed[v]]


def init_cover_state(g: Graph, order: Optional[DegeneracyOrder] = None, trace: bool = False) -> CoverState:
    """All edges uncovered; ``cn`` from triangles and ``c`` from 4-cliques."""
    st = CoverState(g, order, trace)
    eidx = g.edge_index
    cn, c = st.cn, st.c

    def eid(a, b):
        return eidx[(a, b) if a < b else (b, a)]

    def tri(a, b, x):
        cn[eid(a, b)].add(x)
        cn[eid(a, x)].add(b)
        cn[eid(b, x)].add(a)

    def quad(a, b, x, y):
        # every edge of a 4-clique sees the opposite edge among its common neighbours
        for e in (eid(a, b), eid(a, x), eid(a, y), eid(b, x), eid(b, y), eid(x, y)):
            c[e] += 1

    list_triangles(g, st.order, tri)
    list_four_cliques(g, st.order, quad)
    return st


def rule1_sweep(state: CoverState) -> int:
    """Remove every vertex whose incident edges are all covered."""
    g = state.g
    removed, unbrs, cn, c = state.removed, state.unbrs, state.cn, state.c
    eidx = g.edge_index
    count = 0
    for v in range(g.n):
        if removed[v] or unbrs[v]:
            continue
        removed[v] = 1
        count += 1
        if state.trace is not None:
            state.trace.append({"rule": "ecc1", "trigger": v, "clique": None})
        alive = {w for w in g.adj[v] if not removed[w]}
        nv = g.nbrs[v]
        for w in alive:
            # uncovered edges {w, x} inside N(v)
            for x in unbrs[w] & alive:
                if x < w:
                    continue
                e = eidx[(w, x)]
                s = cn[e]
                s.discard(v)
                c[e] -= len(s & nv)
                state.dirty.add(e)
    return count


def rule2_sweep(state: CoverState, candidates: Optional[Iterable[int]] = None) -> int:
    """Cover edges whose common neighbourhood is a clique, in ascending edge id."""
    g = state.g
    cov, cn, c = state.covered, state.cn, state.c
    ids = range(g.m) if candidates is None else sorted(candidates)
    added = 0
    for e in ids:
        if cov[e]:
            continue
        k = len(cn[e])
        if c[e] == k * (k - 1) // 2:
            u, v = g.edges[e]
            state.add_clique(cn[e] | {u, v}, rule="ecc2", trigger=[u, v])
            added += 1
    return added


def lifted_simplicial_clique(state: CoverState, e: int) -> Optional[set]:
    """Vertex set of the uncovered clique-mates of edge ``e`` if it is a clique."""
    g = state.g
    u, w = g.edges[e]
    s = state.cn[e]
    unbrs = state.unbrs
    mates = s & (unbrs[u] | unbrs[w])
    for x in s:
        inner = unbrs[x] & s
        if inner:
            mates.add(x)
            mates |= inner
    nbrs = g.nbrs
    for x in mates:
        if len(mates - nbrs[x]) > 1:
            return None
    mates.add(u)
    mates.add(w)
    return mates


def rule5_lifted_simplicial_sweep(state: CoverState) -> int:
    g = state.g
    cov = state.covered
    added = 0
    for e in range(g.m):
        if cov[e]:
            continue
        clique = lifted_simplicial_clique(state, e)
        if clique is not None:
            state.add_clique(clique, rule="ecc5", trigger=list(g.edges[e]))
            added += 1
    return added


@dataclass
class EccRules:
    rule1: bool = True
    rule2: bool = True
    rule5: bool = False

    @classmethod
    def from_ids(cls, ids: Iterable[int]) -> "EccRules":
        ids = set(int(i) for i in ids)
        bad = ids - {1, 2, 5}
        if bad:
            raise ValueError(f"unknown ECC rule ids {sorted(bad)}; available: 1, 2, 5")
        return cls(1 in ids, 2 in ids, 5 in ids)


@dataclass
class ReduceStats:
    rule1_removed: int = 0
    rule2_cliques: int = 0
    rule5_cliques: int = 0
    rule2_edges: int = 0
    rule5_edges: int = 0
    rounds: int = 0
    times: dict = field(default_factory=lambda: {"rule1": 0.0, "rule2": 0.0, "rule5": 0.0})

    @property
    def covered_edges(self) -> int:
        return self.rule2_edges + self.rule5_edges


def reduce_ecc(state: CoverState, cfg: Optional[EccRules] = None) -> ReduceStats:
    """Alternate rule sweeps (2, then 5, then 1) until none fires."""
    cfg = cfg or EccRules()
    stats = ReduceStats()
    full_rule2 = True
    while True:
        stats.rounds += 1
        changed = False
        if cfg.rule2:
            t = time.perf_counter()
            before = state.uncovered_count
            cand = None if full_rule2 else state.dirty
            state.dirty = set()
            k = rule2_sweep(state, cand)
            full_rule2 = False
            stats.rule2_cliques += k
            stats.rule2_edges += before - state.uncovered_count
            stats.times["rule2"] += time.perf_counter() - t
            changed |= k > 0
        if cfg.rule5:
            t = time.perf_counter()
            before = state.uncovered_count
            k = rule5_lifted_simplicial_sweep(state)
            stats.rule5_cliques += k
            stats.rule5_edges += before - state.uncovered_count
            stats.times["rule5"] += time.perf_counter() - t
            changed |= k > 0
        if cfg.rule1:
            t = time.perf_counter()
            k = rule1_sweep(state)
            stats.rule1_removed += k
            stats.times["rule1"] += time.perf_counter() - t
            changed |= k > 0
        if not changed and not (cfg.rule2 and state.dirty):
            break
    return stats


def write_trace(trace: list, path) -> None:
    with open(path, "w") as fh:
        for ev in trace:
            fh.write(json.dumps(ev) + "\n")
