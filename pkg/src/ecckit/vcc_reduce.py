"""VCC kernelization: simplicial vertices, crown removal and degree-2 folding.

Every rule application is logged as a step so that a cover of the kernel can
be lifted back to the unreduced instance by replaying steps in reverse.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Optional

from .errors import ContractError, InvariantError
from .graph import Graph
from .matching import UNMATCHED, hopcroft_karp


@dataclass(frozen=True)
class FoldRecord:
    v: int
    u: int
    w: int
    v_prime: int
    nu: frozenset
    nw: frozenset


@dataclass(frozen=True)
class Crown:
    I: frozenset
    H: frozenset
    M: tuple             # (head, crown) pairs saturating H
    I_unmatched: tuple


@dataclass
class VccRules:
    simplicial: bool = True
    fold2: bool = True
    crown: bool = True
    simplicial_cap: Optional[int] = 64

    @classmethod
    def from_names(cls, names, simplicial_cap=64) -> "VccRules":
        names = {s.strip() for s in names if s.strip()}
        bad = names - {"simplicial", "fold2", "crown"}
        if bad:
            raise ValueError(f"unknown VCC rules {sorted(bad)}; available: simplicial, fold2, crown")
        return cls("simplicial" in names, "fold2" in names, "crown" in names, simplicial_cap)


@dataclass
class VccReduceStats:
    simplicial_cliques: int = 0
    crown_cliques: int = 0
    crown_vertices: int = 0
    folds: int = 0
    rounds: int = 0
    times: dict = field(default_factory=lambda: {"simplicial": 0.0, "fold2": 0.0, "crown": 0.0})


class VccReduceState:
    """Reduction state over a copy of the instance's adjacency.

    Fold vertices get fresh ids past ``base_n``.  ``steps`` holds
    ``("clique", tuple)`` and ``("fold", FoldRecord)`` entries in the order
    they were applied.
    """

    def __init__(self, h: Graph, trace: bool = False):
        self.base_n = h.n
        self.adj: list[set] = [set(a) for a in h.adj]
        self.alive = [True] * h.n
        self.kernel_size = h.n
        self.steps: list = []
        self.trace: Optional[list] = [] if trace else None

    @property
    def taken_cliques(self) -> list:
        return [s[1] for s in self.steps if s[0] == "clique"]

    @property
    def fold_stack(self) -> list:
        return [s[1] for s in self.steps if s[0] == "fold"]

    @property
    def offset(self) -> int:
        """Cliques accounted for by reductions: one per taken clique and per fold."""
        return len(self.steps)

    def alive_vertices(self) -> list[int]:
        return [v for v, a in enumerate(self.alive) if a]

    def _kill(self, v: int) -> None:
        for x in self.adj[v]:
            self.adj[x].discard(v)
        self.adj[v] = set()
        self.alive[v] = False
        self.kernel_size -= 1

    def take_clique(self, clique, rule: str) -> None:
        cl = tuple(sorted(clique))
        for v in cl:
            self._kill(v)
        self.steps.append(("clique", cl))
        if self.trace is not None:
            self.trace.append({"rule": rule, "trigger": cl[0], "clique": list(cl)})

    def kernel(self):
        """The alive subgraph relabelled densely, plus local -> state id map."""
        ids = self.alive_vertices()
        local = {v: i for i, v in enumerate(ids)}
        return Graph(len(ids), [sorted(local[x] for x in self.adj[v]) for v in ids]), ids

    def is_simplicial(self, v: int) -> bool:
        nb = self.adj[v]
        for x in nb:
            if len(nb - self.adj[x]) > 1:
                return False
        return True


def simplicial_sweep(state: VccReduceState, cap: Optional[int] = 64) -> int:
    """Take ``N[v]`` for simplicial ``v`` of degree <= cap until none is left."""
    heap = state.alive_vertices()
    queued = set(heap)
    heapq.heapify(heap)
    count = 0
    while heap:
        v = heapq.heappop(heap)
        queued.discard(v)
        if not state.alive[v]:
            continue
        if cap is not None and len(state.adj[v]) > cap:
            continue
        if not state.is_simplicial(v):
            continue
        clique = state.adj[v] | {v}
        touched = set()
        for x in clique:
            touched |= state.adj[x]
        state.take_clique(clique, "simplicial")
        count += 1
        for x in touched - clique:
            if x not in queued:
                queued.add(x)
                heapq.heappush(heap, x)
    return count


def is_foldable(state: VccReduceState, v: int) -> bool:
    nb = state.adj[v]
    if not state.alive[v] or len(nb) != 2:
        return False
    u, w = sorted(nb)
    au, aw = state.adj[u], state.adj[w]
    if w in au:
        return False
    only_u = au - aw - {v}
    only_w = aw - au - {v}
    if len(only_u) > len(only_w):
        only_u, only_w = only_w, only_u
    return all(not (state.adj[x] & only_w) for x in only_u)


def degree2_fold(state: VccReduceState, v: int) -> bool:
    """Fold a degree-2 vertex with non-adjacent, crossing-independent neighbours."""
    nb = state.adj[v]
    if not state.alive[v] or len(nb) != 2:
        raise ContractError(f"vertex {v} is not an alive degree-2 vertex")
    u, w = sorted(nb)
    if w in state.adj[u]:
        raise ContractError(f"neighbours {u}, {w} of {v} are adjacent")
    if not is_foldable(state, v):
        return False
    nu, nw = frozenset(state.adj[u]), frozenset(state.adj[w])
    vp = len(state.adj)
    new_nb = (nu | nw) - {v, u, w}
    for x in (v, u, w):
        state._kill(x)
    state.adj.append(set(new_nb))
    state.alive.append(True)
    state.kernel_size += 1
    for x in new_nb:
        state.adj[x].add(vp)
    rec = FoldRecord(v, u, w, vp, nu, nw)
    state.steps.append(("fold", rec))
    if state.trace is not None:
        state.trace.append({"rule": "fold2", "trigger": v, "clique": [u, w, vp]})
    return True


def fold_sweep(state: VccReduceState) -> int:
    heap = [v for v in state.alive_vertices() if len(state.adj[v]) == 2]
    heapq.heapify(heap)
    count = 0
    while heap:
        v = heapq.heappop(heap)
        if not state.alive[v] or len(state.adj[v]) != 2:
            continue
        if is_foldable(state, v):
            degree2_fold(state, v)
            count += 1
            vp = len(state.adj) - 1
            for x in [vp, *state.adj[vp]]:
                if len(state.adj[x]) == 2:
                    heapq.heappush(heap, x)
    return count


def find_crown(state: VccReduceState) -> Optional[Crown]:
    """Crown from the LP relaxation solved on the bipartite double cover.

    Vertices whose left copy is reachable from a free left copy by an
    alternating path while their right copy is not get LP value 0; they form
    the crown ``I`` and ``N(I)`` the head.
    """
    ids = state.alive_vertices()
    if not ids:
        return None
    local = {v: i for i, v in enumerate(ids)}
    adj = [[local[x] for x in sorted(state.adj[v])] for v in ids]
    k = len(ids)
    _, match_l, match_r = hopcroft_karp(k, k, adj)
    seen_l = [False] * k
    seen_r = [False] * k
    stack = [i for i in range(k) if match_l[i] == UNMATCHED]
    for i in stack:
        seen_l[i] = True
    while stack:
        i = stack.pop()
        for j in adj[i]:
            if seen_r[j]:
                continue
            seen_r[j] = True
            w = match_r[j]
            if w != UNMATCHED and not seen_l[w]:
                seen_l[w] = True
                stack.append(w)
    crown = [ids[i] for i in range(k) if seen_l[i] and not seen_r[i]]
    if not crown:
        return None
    I = frozenset(crown)
    H = set()
    for v in I:
        H |= state.adj[v]
    if H & I:
        raise InvariantError("LP crown is not independent")
    heads = sorted(H)
    crowns = sorted(I)
    cl = {v: i for i, v in enumerate(crowns)}
    size, hm, _ = hopcroft_karp(len(heads), len(crowns),
                                [[cl[x] for x in sorted(state.adj[h] & I)] for h in heads])
    if size != len(heads):
        raise InvariantError("LP crown head is not saturated by a matching")
    M = tuple((heads[a], crowns[hm[a]]) for a in range(len(heads)))
    matched = {b for _, b in M}
    return Crown(I, frozenset(H), M, tuple(v for v in crowns if v not in matched))


def crown_sweep(state: VccReduceState) -> tuple[int, int]:
    """Remove crowns until the LP relaxation yields none; (cliques, vertices)."""
    cliques = vertices = 0
    while True:
        crown = find_crown(state)
        if crown is None:
            return cliques, vertices
        for h, i in crown.M:
            state.take_clique((h, i), "crown")
        for i in crown.I_unmatched:
            state.take_clique((i,), "crown")
        cliques += len(crown.M) + len(crown.I_unmatched)
        vertices += len(crown.I) + len(crown.H)


def reduce_vcc(state: VccReduceState, cfg: Optional[VccRules] = None) -> VccReduceStats:
    """Rounds of simplicial -> degree-2 -> crown until a global fixpoint."""
    cfg = cfg or VccRules()
    stats = VccReduceStats()
    while state.kernel_size > 0:
        stats.rounds += 1
        changed = False
        if cfg.simplicial:
            t = time.perf_counter()
            k = simplicial_sweep(state, cfg.simplicial_cap)
            stats.simplicial_cliques += k
            stats.times["simplicial"] += time.perf_counter() - t
            changed |= k > 0
        if cfg.fold2:
            t = time.perf_counter()
            k = fold_sweep(state)
            stats.folds += k
            stats.times["fold2"] += time.perf_counter() - t
            changed |= k > 0
        if cfg.crown:
            t = time.perf_counter()
            k, nv = crown_sweep(state)
            stats.crown_cliques += k
            stats.crown_vertices += nv
            stats.times["crown"] += time.perf_counter() - t
            changed |= k > 0
        if not changed:
            break
    return stats


def unfold(state: VccReduceState, kernel_cover) -> list[set]:
    """Lift a cover of the reduced graph (state ids) to the unreduced instance."""
    cover = [set(c) for c in kernel_cover]
    for kind, item in reversed(state.steps):
        if kind == "clique":
            cover.append(set(item))
            continue
        rec: FoldRecord = item
        holders = [c for c in cover if rec.v_prime in c]
        if not holders:
            raise ContractError(f"cover misses folded vertex {rec.v_prime}")
        for c in holders[1:]:
            c.discard(rec.v_prime)
        cv = holders[0]
        cv.discard(rec.v_prime)
        if cv <= rec.nu:
            cv.add(rec.u)
            cover.append({rec.v, rec.w})
        else:
            cv.add(rec.w)
            cover.append({rec.v, rec.u})
    cover = [c for c in cover if c]
    for c in cover:
        if any(x >= state.base_n for x in c):
            raise ContractError("cover references a vertex that was never folded")
    return cover
