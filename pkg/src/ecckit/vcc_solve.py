"""Solvers for the reduced vertex clique cover kernel."""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import GuardError, InvariantError
from .graph import Graph, maximal_cliques
from .rng import SplitMix64
from .vcc_reduce import VccReduceState, VccRules, reduce_vcc, unfold

OPTIMAL = "optimal"
FEASIBLE = "feasible"
INFEASIBLE_BUDGET = "infeasible-budget"

BRUTE_FORCE_MAX_N = 16


@dataclass
class SolveBudget:
    time_s: Optional[float] = None
    nodes: Optional[int] = None
    target: Optional[int] = None

    def __post_init__(self):
        for name in ("time_s", "nodes", "target"):
            val = getattr(self, name)
            if val is not None and val <= 0:
                raise ValueError(f"budget {name} must be positive or None")


@dataclass
class VccSolution:
    cliques: list
    status: str
    nodes: int = 0
    lower_bound: int = 0
    seed: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.cliques)

    def to_dict(self) -> dict:
        return {
            "cliques": [sorted(c) for c in self.cliques],
            "size": self.size,
            "status": self.status,
            "lower_bound": self.lower_bound,
            "nodes": self.nodes,
            "seed": self.seed,
        }


def _nbrs(h) -> list:
    if isinstance(h, Graph):
        return [set(a) for a in h.adj]
    return [set(a) for a in h]


def check_vcc(nbrs, cliques, n=None) -> None:
    """Raise InvariantError unless ``cliques`` is a vertex clique cover."""
    n = len(nbrs) if n is None else n
    seen = set()
    for c in cliques:
        cl = list(c)
        for i, a in enumerate(cl):
            if not 0 <= a < n:
                raise InvariantError(f"vertex {a} out of range")
            for b in cl[i + 1:]:
                if b not in nbrs[a]:
                    raise InvariantError(f"{sorted(c)} is not a clique ({a}, {b} non-adjacent)")
        seen.update(cl)
    if len(seen) != n:
        missing = min(set(range(n)) - seen)
        raise InvariantError(f"vertex {missing} is not covered")


def _greedy_cover(nbrs, order) -> list:
    cliques: list[set] = []
    for v in order:
        nv = nbrs[v]
        for c in cliques:
            if c <= nv:
                c.add(v)
                break
        else:
            cliques.append({v})
    return cliques


def iterated_greedy(h, seed: int = 0, budget: Optional[SolveBudget] = None,
                    iterations: int = 300) -> VccSolution:
    """Iterated greedy: rebuild the cover vertex by vertex, feeding cliques as blocks.

    Feeding the previous cover's cliques as contiguous blocks can never
    increase the count; single-vertex moves to the front are kept only if
    the result is no worse.
    """
    nbrs = _nbrs(h)
    n = len(nbrs)
    if n == 0:
        return VccSolution([], FEASIBLE, seed=seed)
    rng = SplitMix64(seed)
    order = list(range(n))
    rng.shuffle(order)
    best = _greedy_cover(nbrs, order)
    deadline = None
    if budget is not None and budget.time_s is not None:
        deadline = time.perf_counter() + budget.time_s
    target = budget.target if budget is not None else None
    for _ in range(iterations):
        if target is not None and len(best) <= target:
            break
        if deadline is not None and time.perf_counter() > deadline:
            break
        blocks = [sorted(c) for c in best]
        r = rng.randbelow(10)
        if r < 4:
            blocks.reverse()
        elif r < 7:
            blocks.sort(key=len, reverse=True)
        elif r < 9:
            rng.shuffle(blocks)
        else:
            b = blocks[rng.randbelow(len(blocks))]
            v = b.pop(rng.randbelow(len(b)))
            rng.shuffle(blocks)
            blocks.insert(0, [v])
        cand = _greedy_cover(nbrs, [v for b in blocks for v in b])
        if len(cand) <= len(best):
            best = cand
    check_vcc(nbrs, best)
    return VccSolution(best, FEASIBLE, seed=seed)


def independent_set(h, seed: int = 0, budget: Optional[SolveBudget] = None) -> set:
    """Greedy minimum-degree independent set improved by (1,2)-swaps."""
    nbrs = _nbrs(h)
    n = len(nbrs)
    rng = SplitMix64(seed)
    tiebreak = [rng.next_u64() for _ in range(n)]
    deg = [len(a) for a in nbrs]
    alive = set(range(n))
    I: set = set()
    while alive:
        v = min(alive, key=lambda x: (deg[x], tiebreak[x]))
        I.add(v)
        gone = (nbrs[v] & alive) | {v}
        alive -= gone
        for x in gone:
            for y in nbrs[x] & alive:
                deg[y] -= 1
    deadline = None
    if budget is not None and budget.time_s is not None:
        deadline = time.perf_counter() + budget.time_s
    tight = [len(nbrs[v] & I) for v in range(n)]
    improved = True
    while improved:
        improved = False
        if deadline is not None and time.perf_counter() > deadline:
            break
        for x in sorted(I):
            cands = [v for v in nbrs[x] if tight[v] == 1]
            pair = None
            for i, a in enumerate(cands):
                for b in cands[i + 1:]:
                    if b not in nbrs[a]:
                        pair = (a, b)
                        break
                if pair:
                    break
            if pair is None:
                continue
            I.discard(x)
            for y in nbrs[x]:
                tight[y] -= 1
            added = list(pair)
            for a in added:
                I.add(a)
                for y in nbrs[a]:
                    tight[y] += 1
            # absorb any vertex that became free
            for v in sorted(nbrs[x] | {x}):
                if v not in I and tight[v] == 0:
                    I.add(v)
                    for y in nbrs[v]:
                        tight[y] += 1
            improved = True
            break
    return I


def independent_set_lower_bound(h, seed: int = 0, budget: Optional[SolveBudget] = None) -> int:
    return len(independent_set(h, seed, budget))


def brute_force_vcc(h) -> VccSolution:
    """Exact minimum VCC by memoised search over maximal cliques (n <= 16)."""
    nbrs = _nbrs(h)
    n = len(nbrs)
    if n > BRUTE_FORCE_MAX_N:
        raise GuardError(f"brute_force_vcc refuses n = {n} > {BRUTE_FORCE_MAX_N}")
    masks = [sum(1 << v for v in c) for c in maximal_cliques(nbrs)]
    by_vertex = [[m for m in masks if m >> v & 1] for v in range(n)]

    @lru_cache(maxsize=None)
    def best(left: int):
        if not left:
            return 0, ()
        v = (left & -left).bit_length() - 1
        top = None
        for m in by_vertex[v]:
            k, rest = best(left & ~m)
            if top is None or k + 1 < top[0]:
                top = (k + 1, (m & left,) + rest)
        return top

    k, parts = best((1 << n) - 1)
    cliques = [{v for v in range(n) if p >> v & 1} for p in parts]
    check_vcc(nbrs, cliques)
    return VccSolution(cliques, OPTIMAL, lower_bound=k)


class _BudgetExhausted(Exception):
    pass


class _BranchAndReduce:
    def __init__(self, budget: Optional[SolveBudget], rules: VccRules, interval: int):
        self.budget = budget or SolveBudget()
        self.rules = rules
        self.interval = interval
        self.nodes = 0
        self.exhausted = False
        self.start = time.perf_counter()

    def tick(self):
        self.nodes += 1
        b = self.budget
        if b.nodes is not None and self.nodes > b.nodes:
            raise _BudgetExhausted
        if b.time_s is not None and self.nodes % 128 == 0 and time.perf_counter() - self.start > b.time_s:
            raise _BudgetExhausted

    def solve(self, nbrs: list, upper: int, st: Optional[VccReduceState] = None):
        """Best partition of size < upper found, or None if none exists."""
        if st is None:
            st = VccReduceState(Graph(len(nbrs), [sorted(a) for a in nbrs]))
            reduce_vcc(st, self.rules)
        kg, ids = st.kernel()
        kupper = upper - st.offset
        if kupper <= 0:
            return None
        if kg.n == 0:
            kc = []
        else:
            kc = _Search(self, [set(a) for a in kg.adj], kupper).run()
            if kc is None:
                return None
        return unfold(st, [{ids[i] for i in c} for c in kc])


class _Search:
    """DSATUR-style assignment of kernel vertices to cliques."""

    def __init__(self, owner: _BranchAndReduce, nbrs: list, upper: int):
        self.owner = owner
        self.nbrs = nbrs
        self.n = len(nbrs)
        self.deg = [len(a) for a in nbrs]
        self.best_size = upper
        self.best = None
        self.cliques: list[set] = []
        self.unassigned = set(range(self.n))
        self.compat = [set() for _ in range(self.n)]

    def run(self):
        self._branch(0)
        return self.best

    def _lower_bound(self) -> int:
        used = len(self.cliques)
        if not self.unassigned:
            return used
        compat, nbrs = self.compat, self.nbrs
        order = sorted(self.unassigned, key=lambda v: (len(compat[v]), self.deg[v], v))
        blocked: set = set()
        size = 0
        hosts: set = set()
        for v in order:
            if v in blocked:
                continue
            size += 1
            hosts |= compat[v]
            blocked |= nbrs[v]
        # each open clique hosts at most one vertex of an independent set
        return used + max(0, size - len(hosts))

    def _pick(self) -> int:
        compat, deg = self.compat, self.deg
        return min(self.unassigned, key=lambda v: (len(compat[v]), -deg[v], v))

    def _record(self):
        self.best = [set(c) for c in self.cliques]
        self.best_size = len(self.best)

    def _assign(self, v: int, c: int) -> list:
        undo = []
        nv = self.nbrs[v]
        self.cliques[c].add(v)
        self.unassigned.discard(v)
        for u in self.unassigned:
            if u not in nv and c in self.compat[u]:
                self.compat[u].discard(c)
                undo.append(u)
        return undo

    def _unassign(self, v: int, c: int, undo: list):
        self.cliques[c].discard(v)
        self.unassigned.add(v)
        for u in undo:
            self.compat[u].add(c)

    def _open(self, v: int) -> list:
        c = len(self.cliques)
        self.cliques.append({v})
        self.unassigned.discard(v)
        added = [u for u in self.nbrs[v] if u in self.unassigned]
        for u in added:
            self.compat[u].add(c)
        return added

    def _close(self, v: int, added: list):
        c = len(self.cliques) - 1
        self.cliques.pop()
        self.unassigned.add(v)
        for u in added:
            self.compat[u].discard(c)

    def _try_reduce(self) -> bool:
        """Solve the residual instance by reduction + recursion if reductions bite."""
        rest = sorted(self.unassigned)
        k = len(self.cliques)
        if len(rest) < 4:
            return False
        local = {v: i for i, v in enumerate(rest)}
        aug = [set() for _ in range(len(rest) + k)]
        for v in rest:
            i = local[v]
            aug[i] = {local[u] for u in self.nbrs[v] if u in local}
            for c in self.compat[v]:
                aug[i].add(len(rest) + c)
                aug[len(rest) + c].add(i)
        probe = VccReduceState(Graph(len(aug), [sorted(a) for a in aug]))
        reduce_vcc(probe, self.owner.rules)
        if probe.offset == 0:
            return False
        sub = self.owner.solve(aug, self.best_size, probe)
        if sub is not None:
            cover = [set(c) for c in self.cliques]
            extra = []
            for cl in sub:
                anchors = [x - len(rest) for x in cl if x >= len(rest)]
                members = {rest[x] for x in cl if x < len(rest)}
                if len(anchors) > 1:
                    raise InvariantError("two open cliques merged in residual cover")
                if anchors:
                    cover[anchors[0]] |= members
                else:
                    extra.append(members)
            self.best = cover + extra
            self.best_size = len(self.best)
        return True

    def _branch(self, depth: int):
        self.owner.tick()
        if not self.unassigned:
            if len(self.cliques) < self.best_size:
                self._record()
            return
        if self._lower_bound() >= self.best_size:
            return
        interval = self.owner.interval
        if interval and depth and depth % interval == 0 and self._try_reduce():
            return
        v = self._pick()
        for c in sorted(self.compat[v], key=lambda c: (-len(self.cliques[c]), c)):
            undo = self._assign(v, c)
            self._branch(depth + 1)
            self._unassign(v, c, undo)
            if self._lower_bound() >= self.best_size:
                return
        if len(self.cliques) + 1 < self.best_size:
            added = self._open(v)
            self._branch(depth + 1)
            self._close(v, added)


def branch_and_reduce(h, budget: Optional[SolveBudget] = None, rules: Optional[VccRules] = None,
                      reduce_interval: int = 8, seed: int = 0) -> VccSolution:
    """Exact minimum VCC: reductions, DSATUR-style branching, periodic re-reduction.

    The incumbent starts from one iterated-greedy run.  On budget exhaustion
    the incumbent is returned with status ``feasible``.
    """
    nbrs = _nbrs(h)
    n = len(nbrs)
    if n == 0:
        return VccSolution([], OPTIMAL, seed=seed)
    rules = rules or VccRules()
    incumbent = iterated_greedy(nbrs, seed=seed, iterations=100).cliques
    engine = _BranchAndReduce(budget, rules, reduce_interval)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20 * n + 1000))
    status = OPTIMAL
    try:
        found = engine.solve(nbrs, len(incumbent))
        if found is not None:
            incumbent = found
    except _BudgetExhausted:
        status = FEASIBLE
    finally:
        sys.setrecursionlimit(old_limit)
    cover = [set(c) for c in incumbent]
    check_vcc(nbrs, cover)
    if status == OPTIMAL:
        lb = len(cover)
    else:
        lb = _reduced_lower_bound(nbrs, rules, seed)
    return VccSolution(cover, status, engine.nodes, lb, seed)


def _reduced_lower_bound(nbrs, rules, seed) -> int:
    st = VccReduceState(Graph(len(nbrs), [sorted(a) for a in nbrs]))
    reduce_vcc(st, rules)
    kg, _ = st.kernel()
    return st.offset + independent_set_lower_bound(kg, seed)


def export_ilp(h, upper: int, path) -> dict:
    """Write the assignment ILP in CPLEX LP format; returns row/variable counts."""
    nbrs = _nbrs(h)
    n = len(nbrs)
    slots = range(upper)
    lines = ["\\ vertex clique cover, assignment formulation", "Minimize"]
    lines.append(" obj: " + (" + ".join(f"y{c}" for c in slots) if upper else "0"))
    lines.append("Subject To")
    rows = {"cover": 0, "link": 0, "conflict": 0, "symmetry": 0}
    for v in range(n):
        lines.append(f" cover_{v}: " + " + ".join(f"x{v}_{c}" for c in slots) + " >= 1")
        rows["cover"] += 1
    for v in range(n):
        for c in slots:
            lines.append(f" link_{v}_{c}: x{v}_{c} - y{c} <= 0")
            rows["link"] += 1
    for u in range(n):
        for v in range(u + 1, n):
            if v in nbrs[u]:
                continue
            for c in slots:
                lines.append(f" conflict_{u}_{v}_{c}: x{u}_{c} + x{v}_{c} - y{c} <= 0")
                rows["conflict"] += 1
    for c in range(upper - 1):
        lines.append(f" sym_{c}: y{c} - y{c + 1} >= 0")
        rows["symmetry"] += 1
    lines.append("Binary")
    xs = [f"x{v}_{c}" for v in range(n) for c in slots]
    ys = [f"y{c}" for c in slots]
    for name in xs + ys:
        lines.append(f" {name}")
    lines.append("End")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return {"x_vars": len(xs), "y_vars": len(ys), **rows}
