"""End-to-end ECC solving: reduce, transform, reduce again, solve, lift back."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Optional

from .ecc_reduce import EccRules, init_cover_state, reduce_ecc
from .errors import GuardError, InvariantError
from .graph import Graph, is_clique, maximal_cliques
from .transform import VccInstance, build_vcc_instance
from .vcc_reduce import VccReduceState, VccRules, reduce_vcc, unfold
from .vcc_solve import (FEASIBLE, OPTIMAL, SolveBudget, VccSolution, branch_and_reduce,
                        independent_set_lower_bound, iterated_greedy)

BRUTE_FORCE_MAX_M = 24


@dataclass
class PipelineConfig:
    ecc_rules: EccRules = field(default_factory=lambda: EccRules(True, True, True))
    vcc_rules: VccRules = field(default_factory=VccRules)
    solver: str = "bnr"           # "bnr" (exact) or "ig" (iterated greedy)
    seed: int = 0
    reduce_interval: int = 8
    ig_iterations: int = 1000
    gramm_only: bool = False

    @classmethod
    def gramm(cls, **kw) -> "PipelineConfig":
        """ECC rules 1-2 only and no VCC reductions; the kernel is solved as is."""
        return cls(ecc_rules=EccRules(True, True, False),
                   vcc_rules=VccRules(False, False, False), gramm_only=True, **kw)

    @property
    def name(self) -> str:
        return "gramm-only" if self.gramm_only else f"full-{self.solver}"


@dataclass
class EccResult:
    cliques: list
    status: str
    lower_bound: int
    stats: dict
    seed: int
    config: dict

    @property
    def size(self) -> int:
        return len(self.cliques)

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "status": self.status,
            "lower_bound": self.lower_bound,
            "cliques": [list(c) for c in self.cliques],
            "stats": self.stats,
            "seed": self.seed,
            "config": self.config,
        }


@dataclass
class VerifyResult:
    valid: bool
    first_violation: Optional[str] = None

    def __bool__(self):
        return self.valid


def verify_ecc(g: Graph, cliques) -> VerifyResult:
    """Check every set is a clique of ``g`` and every edge lies in some set."""
    name = (lambda v: g.labels[v]) if g.labels else (lambda v: v)
    covered = set()
    for c in cliques:
        cl = sorted(set(c))
        if any(not 0 <= v < g.n for v in cl):
            return VerifyResult(False, f"set {cl} has a vertex outside the graph")
        if not is_clique(g, cl):
            return VerifyResult(False, f"set {[name(v) for v in cl]} is not a clique")
        for i, a in enumerate(cl):
            for b in cl[i + 1:]:
                covered.add((a, b))
    for e in g.edges:
        if e not in covered:
            return VerifyResult(False, f"edge {{{name(e[0])},{name(e[1])}}} is not covered")
    return VerifyResult(True)


def reconstruct(inst: VccInstance, vcc_cover, forced) -> list:
    """Map each VCC clique to the union of its edges' endpoints, then append forced cliques."""
    g = inst.g
    out = []
    for c in vcc_cover:
        cl = tuple(sorted(inst.endpoints(c)))
        if not is_clique(g, cl):
            raise InvariantError(f"VCC clique {sorted(c)} maps to non-clique {list(cl)}")
        out.append(cl)
    for cl in forced:
        cl = tuple(sorted(cl))
        if not is_clique(g, cl):
            raise InvariantError(f"forced set {list(cl)} is not a clique")
        out.append(cl)
    return out


def solve_ecc(g: Graph, cfg: Optional[PipelineConfig] = None,
              budget: Optional[SolveBudget] = None) -> EccResult:
    cfg = cfg or PipelineConfig()
    times = {}
    t = time.perf_counter()
    state = init_cover_state(g)
    ecc_stats = reduce_ecc(state, cfg.ecc_rules)
    times["reduce"] = time.perf_counter() - t
    forced = list(state.forced_cliques)

    t = time.perf_counter()
    inst = build_vcc_instance(state)
    times["transform"] = time.perf_counter() - t

    t = time.perf_counter()
    vst = VccReduceState(inst.h)
    vcc_stats = reduce_vcc(vst, cfg.vcc_rules)
    kg, ids = vst.kernel()
    times["vccreduce"] = time.perf_counter() - t

    t = time.perf_counter()
    if kg.n == 0:
        sol = VccSolution([], OPTIMAL)
    elif cfg.solver == "bnr":
        sol = branch_and_reduce(kg, budget, cfg.vcc_rules, cfg.reduce_interval, cfg.seed)
    elif cfg.solver == "ig":
        sol = iterated_greedy(kg, cfg.seed, budget, iterations=cfg.ig_iterations)
        sol.lower_bound = independent_set_lower_bound(kg, cfg.seed)
        if sol.lower_bound == sol.size:
            sol.status = OPTIMAL
    else:
        raise ValueError(f"unknown solver {cfg.solver!r}")
    times["solve"] = time.perf_counter() - t

    vcc_cover = unfold(vst, [{ids[i] for i in c} for c in sol.cliques])
    cliques = reconstruct(inst, vcc_cover, forced)
    check = verify_ecc(g, cliques)
    if not check:
        raise InvariantError(f"pipeline produced an invalid cover: {check.first_violation}")
    status = OPTIMAL if sol.status == OPTIMAL else FEASIBLE
    lower = len(forced) + vst.offset + sol.lower_bound
    if status == OPTIMAL and lower != len(cliques):
        raise InvariantError(f"optimal run with lower bound {lower} != size {len(cliques)}")
    stats = {
        "n": g.n, "m": g.m,
        "forced_cliques": len(forced),
        "ecc_kernel": state.uncovered_count,
        "vcc_n": inst.h.n, "vcc_m": inst.h.m,
        "vcc_kernel": kg.n,
        "vcc_reduction_cliques": vst.offset,
        "kernel_nodes": sol.nodes,
        "ecc_rules": {"rule1_removed": ecc_stats.rule1_removed,
                      "rule2_cliques": ecc_stats.rule2_cliques,
                      "rule5_cliques": ecc_stats.rule5_cliques},
        "vcc_rules": {"simplicial": vcc_stats.simplicial_cliques,
                      "crown": vcc_stats.crown_cliques,
                      "folds": vcc_stats.folds},
        "times": times,
    }
    config = asdict(cfg)
    return EccResult(cliques, status, lower, stats, cfg.seed, config)


def min_cliques_covering(g: Graph, edge_ids, max_edges: int = BRUTE_FORCE_MAX_M):
    """Exact minimum number of cliques of ``g`` covering the given edges.

    Returns ``(count, cliques)``; every clique is maximal in ``g``.
    """
    edge_ids = sorted(set(edge_ids))
    if len(edge_ids) > max_edges:
        raise GuardError(f"oracle refuses {len(edge_ids)} edges > {max_edges}")
    bit = {e: i for i, e in enumerate(edge_ids)}
    eidx = g.edge_index
    cliques = []
    for cl in maximal_cliques(g.nbrs):
        if len(cl) < 2:
            continue
        mask = 0
        for i, a in enumerate(cl):
            for b in cl[i + 1:]:
                j = bit.get(eidx[(a, b)])
                if j is not None:
                    mask |= 1 << j
        if mask:
            cliques.append((mask, tuple(cl)))
    by_bit = [[c for c in cliques if c[0] >> j & 1] for j in range(len(edge_ids))]

    @lru_cache(maxsize=None)
    def best(left: int):
        if not left:
            return 0, ()
        j = (left & -left).bit_length() - 1
        top = None
        for mask, cl in by_bit[j]:
            k, rest = best(left & ~mask)
            if top is None or k + 1 < top[0]:
                top = (k + 1, (cl,) + rest)
        return top

    k, chosen = best((1 << len(edge_ids)) - 1)
    return k, list(chosen)


def brute_force_ecc(g: Graph, max_edges: int = BRUTE_FORCE_MAX_M):
    """Exact edge clique cover number by maximal-clique set cover; (theta_E, cover)."""
    if g.m > max_edges:
        raise GuardError(f"brute_force_ecc refuses m = {g.m} > {max_edges}")
    return min_cliques_covering(g, range(g.m), max_edges)
