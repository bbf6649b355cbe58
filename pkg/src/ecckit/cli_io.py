"""File formats, the G(n,p) generator, the benchmark driver and the CLI."""

from __future__ import annotations

import argparse
import csv
import gzip
import io
import json
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .ecc_reduce import EccRules, init_cover_state, reduce_ecc, write_trace
from .errors import EccError, ParseError
from .graph import Graph, build_graph
from .pipeline import PipelineConfig, brute_force_ecc, solve_ecc, verify_ecc
from .rng import SplitMix64
from .transform import build_vcc_instance, dump_vcc
from .vcc_reduce import VccReduceState, VccRules, reduce_vcc
from .vcc_solve import SolveBudget, export_ilp, iterated_greedy

COMMENT_PREFIXES = ("#", "%")
DEFAULT_BENCH_BUDGET_S = 60.0


# ---------------------------------------------------------------- formats

def _is_int(tok: str) -> bool:
    try:
        int(tok)
        return True
    except ValueError:
        return False


def parse_edge_list(path) -> Graph:
    """Read a whitespace separated edge list (optionally gzipped); labels become dense ids.

    Integer labels are numbered in ascending numeric order, anything else in
    ascending string order.  A leading ``n m`` line is treated as a header
    when ``m`` equals the number of body lines and every body label is an
    integer in ``[0, n)``; ids are then kept as they are.
    """
    try:
        if str(path).endswith(".gz"):
            with gzip.open(path, "rt") as fh:
                text = fh.read()
        else:
            text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith(COMMENT_PREFIXES):
            continue
        toks = s.split()
        if len(toks) != 2:
            raise ParseError(f"expected 2 fields, found {len(toks)}: {s!r}", line=lineno)
        rows.append((lineno, toks[0], toks[1]))
    tokens = {t for _, a, b in rows[1:] for t in (a, b)}
    header_n = None
    if rows and _is_int(rows[0][1]) and _is_int(rows[0][2]) and int(rows[0][2]) == len(rows) - 1:
        n0 = int(rows[0][1])
        # "0 1" could be an edge; a header must bound every body label
        if n0 >= 1 and all(_is_int(t) and 0 <= int(t) < n0 for t in tokens):
            header_n = n0
            rows = rows[1:]
    if header_n is not None:
        labels = list(range(header_n))
        ids = {t: int(t) for t in tokens}
    else:
        tokens = {t for _, a, b in rows for t in (a, b)}
        if all(_is_int(t) for t in tokens):
            labels = sorted({int(t) for t in tokens})
            index = {v: i for i, v in enumerate(labels)}
            ids = {t: index[int(t)] for t in tokens}
        else:
            labels = sorted(tokens)
            ids = {t: i for i, t in enumerate(labels)}
    g = build_graph(((ids[a], ids[b]) for _, a, b in rows), n_hint=len(labels))
    return Graph(g.n, g.adj, labels)


def write_edge_list(g: Graph, path, header: bool = True) -> None:
    labels = g.labels or range(g.n)
    with open(path, "w") as fh:
        if header:
            fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges:
            fh.write(f"{labels[u]} {labels[v]}\n")


def write_cover(cliques, path, labels=None) -> None:
    with open(path, "w") as fh:
        fh.write(format_cover(cliques, labels))


def format_cover(cliques, labels=None) -> str:
    out = io.StringIO()
    for c in cliques:
        out.write(" ".join(str(labels[v] if labels else v) for v in sorted(c)) + "\n")
    return out.getvalue()


def read_cover(path, g: Graph) -> list:
    """Read one clique per line in the labels of ``g``."""
    if g.labels is None:
        index = {str(v): v for v in range(g.n)}
    else:
        index = {str(lab): i for i, lab in enumerate(g.labels)}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    cliques = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith(COMMENT_PREFIXES):
            continue
        try:
            cliques.append([index[t] for t in s.split()])
        except KeyError as exc:
            raise ParseError(f"unknown vertex label {exc.args[0]!r}", line=lineno) from None
    return cliques


# ---------------------------------------------------------------- generator

def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each pair (i < j, row-major order) kept when its SplitMix64 draw is < p."""
    if n < 1 or not 0.0 <= p <= 1.0:
        raise ValueError("gen_gnp needs n >= 1 and 0 <= p <= 1")
    iu, ju = np.triu_indices(n, k=1)
    draws = SplitMix64(seed).uniform_block(len(iu))
    keep = draws < p
    return build_graph(zip(iu[keep].tolist(), ju[keep].tolist()), n_hint=n)


# ---------------------------------------------------------------- bench

@dataclass
class BenchRow:
    name: str
    n: object
    m: object
    config: str
    ecc_kernel: object = ""
    vcc_kernel: object = ""
    theta_ub: object = ""
    theta_lb: object = ""
    status: str = ""
    t_reduce: object = ""
    t_transform: object = ""
    t_vccreduce: object = ""
    t_solve: object = ""


CSV_COLUMNS = [f.name for f in fields(BenchRow)]
TIMING_COLUMNS = ("t_reduce", "t_transform", "t_vccreduce", "t_solve")


def config_from_name(name: str, seed: int = 0) -> PipelineConfig:
    if name == "gramm-only":
        return PipelineConfig.gramm(seed=seed)
    if name == "full":
        return PipelineConfig(seed=seed)
    if name == "full-ig":
        return PipelineConfig(solver="ig", seed=seed)
    raise ValueError(f"unknown bench config {name!r}; expected full, full-ig or gramm-only")


def reduce_only(g: Graph, cfg: PipelineConfig) -> dict:
    """Run the reduction stages without solving; kernel sizes and stage times."""
    t = time.perf_counter()
    st = init_cover_state(g)
    reduce_ecc(st, cfg.ecc_rules)
    t_reduce = time.perf_counter() - t
    out = {"ecc_kernel": st.uncovered_count, "forced": len(st.forced_cliques), "t_reduce": t_reduce}
    if cfg.gramm_only:
        return out
    t = time.perf_counter()
    inst = build_vcc_instance(st)
    out["t_transform"] = time.perf_counter() - t
    t = time.perf_counter()
    vst = VccReduceState(inst.h)
    reduce_vcc(vst, cfg.vcc_rules)
    out["t_vccreduce"] = time.perf_counter() - t
    out["vcc_n"] = inst.h.n
    out["vcc_m"] = inst.h.m
    out["vcc_kernel"] = vst.kernel_size
    out["vcc_offset"] = vst.offset
    return out


def _bench_one(task):
    name, g, cfg_name, seed, budget_s, solve = task
    row = BenchRow(name, g.n, g.m, cfg_name)
    try:
        cfg = config_from_name(cfg_name, seed)
        if solve:
            res = solve_ecc(g, cfg, SolveBudget(time_s=budget_s))
            st = res.stats
            row.ecc_kernel = st["ecc_kernel"]
            row.vcc_kernel = "" if cfg.gramm_only else st["vcc_kernel"]
            row.theta_ub, row.theta_lb, row.status = res.size, res.lower_bound, res.status
            row.t_reduce = round(st["times"]["reduce"], 4)
            row.t_transform = round(st["times"]["transform"], 4)
            row.t_vccreduce = round(st["times"]["vccreduce"], 4)
            row.t_solve = round(st["times"]["solve"], 4)
        else:
            out = reduce_only(g, cfg)
            row.ecc_kernel = out["ecc_kernel"]
            row.vcc_kernel = out.get("vcc_kernel", "")
            row.status = "reduced"
            row.t_reduce = round(out["t_reduce"], 4)
            row.t_transform = round(out.get("t_transform", 0.0), 4)
            row.t_vccreduce = round(out.get("t_vccreduce", 0.0), 4)
    except Exception as exc:  # recorded per instance, the run continues
        row.status = f"error: {type(exc).__name__}: {exc}"
    return row


def _mean_row(name: str, cfg_name: str, rows: list) -> BenchRow:
    mean = BenchRow(f"{name}-mean", "", "", cfg_name, status="mean")
    for col in ("n", "m", "ecc_kernel", "vcc_kernel", "theta_ub", "theta_lb") + TIMING_COLUMNS:
        vals = [getattr(r, col) for r in rows if isinstance(getattr(r, col), (int, float))]
        if vals:
            setattr(mean, col, round(statistics.fmean(vals), 4))
    return mean


def run_bench(suite: dict, jobs: int = 1) -> list:
    """One row per (instance, config); generator groups get a trailing mean row per config."""
    configs = suite.get("configs", ["full", "gramm-only"])
    budget_s = suite.get("budget_s", DEFAULT_BENCH_BUDGET_S)
    solve = suite.get("solve", True)
    paper_density = suite.get("paper_density", False)
    seed = suite.get("seed", 0)
    groups = []
    for inst in suite.get("instances", []):
        if "path" in inst:
            g = parse_edge_list(inst["path"])
            name = inst.get("name", Path(inst["path"]).stem)
            groups.append((name, [(name, g)], False))
        elif "gnp" in inst:
            n, p = inst["gnp"]
            p_eff = p / 2 if inst.get("paper_density", paper_density) else p
            gname = inst.get("name", f"gnp-{n}-{p}")
            graphs = [(f"{gname}-s{s}", gen_gnp(n, p_eff, s)) for s in inst.get("seeds", [0])]
            groups.append((gname, graphs, True))
        else:
            raise ValueError(f"suite entry needs 'path' or 'gnp': {inst}")
    tasks = []
    for _, graphs, _ in groups:
        for cfg_name in configs:
            for name, g in graphs:
                tasks.append((name, g, cfg_name, seed, budget_s, solve))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_bench_one, tasks))
    else:
        results = [_bench_one(t) for t in tasks]
    rows = []
    it = iter(results)
    for gname, graphs, is_gen in groups:
        for cfg_name in configs:
            block = [next(it) for _ in graphs]
            rows.extend(block)
            if is_gen:
                rows.append(_mean_row(gname, cfg_name, block))
    return rows


def rows_to_csv(rows) -> str:
    out = io.StringIO()
    w = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(asdict(r))
    return out.getvalue()


# ---------------------------------------------------------------- CLI

def _rule_ids(text: str):
    return [int(x) for x in text.split(",") if x.strip()]


def _pipeline_config(args) -> PipelineConfig:
    if args.gramm_only:
        return PipelineConfig.gramm(seed=args.seed, solver=getattr(args, "solver", "bnr"))
    return PipelineConfig(ecc_rules=EccRules.from_ids(_rule_ids(args.rules)),
                          vcc_rules=VccRules.from_names(args.vcc_rules.split(",")),
                          seed=args.seed, solver=getattr(args, "solver", "bnr"))


def _add_rule_flags(p):
    p.add_argument("--rules", default="1,2,5", help="ECC rule ids (default: 1,2,5)")
    p.add_argument("--vcc-rules", default="simplicial,fold2,crown",
                   help="VCC rules (default: simplicial,fold2,crown)")
    p.add_argument("--gramm-only", action="store_true", help="ECC rules 1,2 only, no VCC reductions")
    p.add_argument("--seed", type=int, default=0)


def _emit(obj, fmt: str, human: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(obj, indent=2) + "\n")
    else:
        out.write(human + "\n")


def _cmd_solve(args) -> int:
    g = parse_edge_list(args.graph)
    budget = SolveBudget(time_s=args.budget_s) if args.budget_s else None
    res = solve_ecc(g, _pipeline_config(args), budget)
    if args.cover_out:
        write_cover(res.cliques, args.cover_out, g.labels)
    d = res.to_dict()
    d["cliques"] = [[g.labels[v] for v in c] for c in res.cliques] if g.labels else d["cliques"]
    if args.format == "json":
        _emit(d, "json", "")
    else:
        st = res.stats
        print(f"theta_E = {res.size} ({res.status}), lower bound {res.lower_bound}")
        print(f"n = {g.n}, m = {g.m}, forced cliques = {st['forced_cliques']}, "
              f"ECC kernel = {st['ecc_kernel']} uncovered edges, VCC kernel = {st['vcc_kernel']} vertices")
    return 0


def _cmd_reduce(args) -> int:
    g = parse_edge_list(args.graph)
    cfg = _pipeline_config(args)
    out = reduce_only(g, cfg)
    if args.trace_out:
        st = init_cover_state(g, trace=True)
        reduce_ecc(st, cfg.ecc_rules)
        write_trace(st.trace, args.trace_out)
    if args.ilp_out and not cfg.gramm_only:
        st = init_cover_state(g)
        reduce_ecc(st, cfg.ecc_rules)
        vst = VccReduceState(build_vcc_instance(st).h)
        reduce_vcc(vst, cfg.vcc_rules)
        kg, _ = vst.kernel()
        upper = max(iterated_greedy(kg, seed=args.seed).size, 1)
        export_ilp(kg, upper, args.ilp_out)
    lines = [f"ECC kernel = {out['ecc_kernel']} uncovered edges (forced cliques = {out['forced']})"]
    if "vcc_kernel" in out:
        lines.append(f"VCC instance = {out['vcc_n']} vertices, {out['vcc_m']} edges")
        lines.append(f"VCC kernel = {out['vcc_kernel']} vertices (reduction cliques = {out['vcc_offset']})")
    _emit(out, args.format, "\n".join(lines))
    return 0


def _cmd_transform(args) -> int:
    g = parse_edge_list(args.graph)
    st = init_cover_state(g)
    if not args.no_reduce:
        reduce_ecc(st, _pipeline_config(args).ecc_rules)
    inst = build_vcc_instance(st)
    if args.output:
        dump_vcc(inst, args.output)
    else:
        buf = io.StringIO()
        buf.write(f"# vcc instance n={inst.h.n} m={inst.h.m}\n")
        for i, (x, y) in enumerate(inst.origin):
            buf.write(f"# origin {i} {x} {y}\n")
        for u, v in inst.h.edges:
            buf.write(f"{u} {v}\n")
        sys.stdout.write(buf.getvalue())
    return 0


def _cmd_verify(args) -> int:
    g = parse_edge_list(args.graph)
    cover = read_cover(args.cover, g)
    res = verify_ecc(g, cover)
    if res.valid:
        print(f"valid: {len(cover)} cliques cover all {g.m} edges")
        return 0
    print(f"invalid: {res.first_violation}")
    return 1


def _cmd_gen(args) -> int:
    p = args.p / 2 if args.paper_density else args.p
    g = gen_gnp(args.n, p, args.seed)
    if args.output:
        write_edge_list(g, args.output)
    else:
        sys.stdout.write(f"{g.n} {g.m}\n" + "".join(f"{u} {v}\n" for u, v in g.edges))
    return 0


def _cmd_bench(args) -> int:
    suite = json.loads(Path(args.suite).read_text())
    if args.budget_s is not None:
        suite["budget_s"] = args.budget_s
    if args.paper_density:
        suite["paper_density"] = True
    rows = run_bench(suite, jobs=args.jobs)
    text = rows_to_csv(rows) if args.format == "csv" else json.dumps([asdict(r) for r in rows], indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_oracle(args) -> int:
    g = parse_edge_list(args.graph)
    k, cover = brute_force_ecc(g)
    if args.format == "json":
        _emit({"theta_E": k, "cliques": cover}, "json", "")
    else:
        print(k)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ecckit", description="Exact minimum edge clique cover with ECC and VCC data reduction")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an edge list to optimality (or within budget)")
    p.add_argument("graph")
    _add_rule_flags(p)
    p.add_argument("--solver", choices=["bnr", "ig"], default="bnr")
    p.add_argument("--budget-s", type=float, default=None)
    p.add_argument("--cover-out", default=None)
    p.add_argument("--format", choices=["human", "json"], default="human")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("reduce", help="run the reductions and report kernel sizes")
    p.add_argument("graph")
    _add_rule_flags(p)
    p.add_argument("--trace-out", default=None, help="write the ECC reduction trace (JSON lines)")
    p.add_argument("--ilp-out", default=None, help="write the VCC kernel as an LP-format ILP")
    p.add_argument("--format", choices=["human", "json"], default="human")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("transform", help="dump the VCC instance of the reduced graph")
    p.add_argument("graph")
    _add_rule_flags(p)
    p.add_argument("--no-reduce", action="store_true", help="transform the fully uncovered graph")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("verify", help="check a cover file against a graph")
    p.add_argument("graph")
    p.add_argument("cover")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="write a G(n,p) edge list")
    p.add_argument("n", type=int)
    p.add_argument("p", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paper-density", action="store_true", help="halve p")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="run a JSON benchmark suite")
    p.add_argument("suite")
    p.add_argument("--budget-s", type=float, default=None)
    p.add_argument("--paper-density", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("oracle", help="brute-force edge clique cover number (small graphs)")
    p.add_argument("graph")
    p.add_argument("--format", choices=["human", "json"], default="human")
    p.set_defaults(func=_cmd_oracle)
    return ap


def cli_main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except (EccError, ValueError, OSError) as exc:
        print(f"ecckit {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
