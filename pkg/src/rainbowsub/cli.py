"""Command-line entry point.

Exit codes: 0 found or pass, 1 proven absent or fail, 2 unknown (budget or
sampling), 64 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import applications as apps
from . import constructions as cons
from . import expander, process, search
from .graph import GraphError
from .groups import GroupError, parse_elements, parse_group
from .io import dumps, read_graph
from .report import TRACE_COLUMNS, ExperimentConfig, emit_report, rows_from_traces

EXIT_OK, EXIT_ABSENT, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 64
# parameters that never change results and stay out of embedded configs
_UNRECORDED = {"threads", "out", "json_out", "csv_out", "cert_out", "func", "command", "seed"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _config(args) -> ExperimentConfig:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in _UNRECORDED}
    return ExperimentConfig(args.command, int(getattr(args, "seed", 0) or 0), params)


def _write_json(args, payload, path=None) -> None:
    text = emit_report(payload, "json", config=_config(args))
    path = path if path is not None else getattr(args, "json_out", None)
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


# ---------------------------------------------------------------------------
# subcommands


def cmd_construct(args) -> int:
    if args.hypercube is not None:
        g = cons.hypercube(args.hypercube)
    elif args.complete is not None:
        g = cons.complete_graph_1f(args.complete)
    elif args.bridge is not None:
        g = cons.cliques_with_bridge(args.bridge)
    elif args.random is not None:
        n, p = args.random
        g = cons.random_graph(int(n), float(p), args.seed)
    elif args.bhg is not None:
        g = cons.bhg_graph(args.bhg, _ints(_need(args.set, "--set")))
    else:
        spec = args.cayley or args.sidon or args.doubling or args.conv
        if spec is None:
            raise UsageError("construct: choose one of --cayley, --sidon, --bhg, --doubling, --conv, "
                             "--hypercube, --complete, --bridge, --random")
        grp = parse_group(spec)
        if args.cayley:
            g = cons.cayley_sum_graph(grp, parse_elements(grp, _need(args.gens, "--gens")))
        elif args.sidon:
            g = cons.sidon_graph(grp, parse_elements(grp, _need(args.set, "--set")))
        elif args.doubling:
            g = cons.doubling_graph(grp, parse_elements(grp, _need(args.A, "--A")),
                                    parse_elements(grp, _need(args.S, "--S")))
        else:
            g = cons.convolution_graph(grp, parse_elements(grp, _need(args.A, "--A")),
                                       parse_elements(grp, _need(args.B, "--B")),
                                       parse_elements(grp, _need(args.L, "--L")))
    text = dumps(g, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _need(value, flag):
    if value is None:
        raise UsageError(f"missing {flag}")
    return value


def cmd_find_cycle(args) -> int:
    g = read_graph(args.input)
    mode = "exact" if args.exact else args.mode
    budget = search.SearchBudget(args.max_nodes, 1, 0, mode)
    try:
        cyc = search.find_rainbow_cycle(g, args.max_len, budget)
    except search.BudgetExhausted as exc:
        _write_json(args, {"status": "unknown", "nodes": exc.nodes}, args.cert_out)
        return EXIT_UNKNOWN
    if cyc is None:
        status = "absent" if mode == "exact" else "unknown"
        _write_json(args, {"status": status}, args.cert_out)
        return EXIT_ABSENT if mode == "exact" else EXIT_UNKNOWN
    _write_json(args, {"status": "found", "kind": "rainbow-cycle", "cycle": cyc.to_json()}, args.cert_out)
    return EXIT_OK


def cmd_find_subdivision(args) -> int:
    g = read_graph(args.input)
    hubs = _ints(args.hubs) if args.hubs else None
    rule = "given" if hubs else args.hub_rule
    budget = search.SearchBudget(args.max_nodes, args.retries, args.seed, args.mode)
    try:
        cert = search.find_subdivision(g, args.t, rule, hubs, args.len_bound, budget, args.c, args.threads)
    except search.NotFound as exc:
        done = {f"{i}-{j}": p.to_json() for (i, j), p in sorted(exc.completed.items())}
        _write_json(args, {"status": "unknown", "completed": done}, args.cert_out)
        return EXIT_UNKNOWN
    payload = {"status": "found", **cert.to_json(), "stats": cert.meta}
    _write_json(args, payload, args.cert_out)
    return EXIT_OK


def _grid(text):
    if text is None:
        return None
    if text == "critical":
        return "critical"
    return [Fraction(x) for x in text.split(",") if x.strip()]


def cmd_expander_check(args) -> int:
    g = read_graph(args.input)
    mode = args.mode
    v = expander.falsify_robust_expander(g, _grid(args.eps_grid), args.u_budget, args.seed, mode,
                                         args.u_exact, args.threads)
    exact = mode == "exact" or (mode == "auto" and g.n <= args.u_exact)
    md = expander.min_degree_check(g)
    payload = {"n": g.n, "edges": len(g.edges), "average_degree": str(md.half_average * 2),
               "scan": "exact" if exact else "sampled",
               "min_degree": {"delta": md.delta, "half_average": str(md.half_average), "pass": md.passed}}
    if v is not None:
        payload.update(status="violation", violation=v.to_json(), verified=expander.verify_violation(g, v))
        _write_json(args, payload)
        return EXIT_ABSENT
    payload["status"] = "none"
    _write_json(args, payload)
    return EXIT_OK if exact else EXIT_UNKNOWN


def cmd_simulate(args) -> int:
    g = read_graph(args.input)
    if args.schedule == "custom":
        if args.kappa is None or args.lam is None or args.beta is None:
            raise UsageError("custom schedule needs --kappa, --lam and --beta")
        preset = "paper"
    else:
        preset = args.schedule
    sched = process.make_schedule(g.n, args.t, preset, args.kappa, args.lam, args.beta, args.retention)
    checkpoints = _ints(args.checkpoints) if args.checkpoints else None
    budget = search.SearchBudget(args.max_nodes, 1, args.seed, args.rp_mode) if args.rp_mode else None
    rep = process.thinning_experiment(g, args.x, sched, args.trials, args.seed, checkpoints, budget,
                                      threads=args.threads)
    rows = rows_from_traces(rep.traces)
    if args.csv_out:
        emit_report(rows, "csv", args.csv_out, _config(args), TRACE_COLUMNS)
    summary = {
        "schedule": sched.to_json(),
        "trials": args.trials,
        "median_rp0": rep.median_rp0,
        "mean_rp": {str(k): v for k, v in rep.mean_rp.items()},
        "bad_event_rate": {str(k): v for k, v in rep.bad_event_rate.items()},
        "ratios": [{"k": r.k, "j": r.j, "measured": r.measured, "reference_rate": r.reference_rate}
                   for r in rep.ratios],
    }
    _write_json(args, summary)
    return EXIT_OK


def _group_and_set(args, flag="set"):
    grp = parse_group(args.group)
    return grp, parse_elements(grp, _need(getattr(args, flag), f"--{flag}"))


def cmd_dim(args) -> int:
    grp, A = _group_and_set(args)
    rep = apps.additive_dimension(grp, A, args.dim_mode, args.C)
    payload = {"group": repr(grp), "size": rep.size, "dimension": rep.dimension,
               "witness": list(rep.witness), "mode": rep.mode, "comparison": rep.comparison}
    if args.check:
        res = apps.is_dissociated(grp, A)
        payload["dissociated"] = res is True
        if res is not True:
            payload["relation"] = res.to_json()
    _write_json(args, payload)
    return EXIT_OK


def cmd_bhg(args) -> int:
    B = _ints(_need(args.set, "--set"))
    budget = search.SearchBudget(args.max_nodes, 1, 0, args.mode)
    try:
        res = apps.bhg_dichotomy(args.n, B, budget)
    except search.BudgetExhausted as exc:
        _write_json(args, {"status": "unknown", "nodes": exc.nodes})
        return EXIT_UNKNOWN
    if isinstance(res, apps.SmallReport):
        _write_json(args, {"status": "absent" if res.proven_absent else "unknown", "n": res.n,
                           "size": res.size, "log_n": res.log_n, "ratio": res.ratio})
        return EXIT_ABSENT if res.proven_absent else EXIT_UNKNOWN
    _write_json(args, {"status": "found", "h0": res.h0, "B_prime": list(res.B_prime),
                       "relation": res.certificate.to_json(), "cycle": res.cycle.to_json()})
    return EXIT_OK


def cmd_conv(args) -> int:
    grp = parse_group(args.group)
    A = parse_elements(grp, _need(args.A, "--A"))
    B = parse_elements(grp, _need(args.B, "--B"))
    res = apps.convolution_threshold_set(grp, A, B, args.sigma)
    _write_json(args, {"S": list(res.S), "counts": {str(k): v for k, v in res.counts.items()}})
    return EXIT_OK


def cmd_validate(args) -> int:
    obj = json.loads(Path(args.cert).read_text())
    if "results" in obj and "config" in obj:
        obj = obj["results"]
    # reports from expander-check, dim and bhg nest their certificate
    for key in ("violation", "relation"):
        if "kind" not in obj and isinstance(obj.get(key), dict):
            obj = obj[key]
    if obj.get("status") == "found" and "relation" in obj and "kind" not in obj:
        obj = obj["relation"]
    kind = obj.get("kind")
    if kind == "subdivision":
        g = read_graph(_need(args.input, "--in"))
        res = search.validate_certificate(search.SubdivisionCertificate.from_json(obj), g)
        ok, reason = res.ok, res.reason
    elif kind == "rainbow-cycle":
        g = read_graph(_need(args.input, "--in"))
        cyc = search.RainbowPath.from_json(obj["cycle"])
        reason = search.path_problem(g, cyc) or (None if cyc.is_cycle else "NotACycle")
        ok = reason is None
    elif kind == "expander-violation":
        g = read_graph(_need(args.input, "--in"))
        ok = expander.verify_violation(g, expander.ExpanderViolation.from_json(obj))
        reason = None if ok else "NotAViolation"
    elif kind in ("signed-product", "alternating-sum"):
        cert = apps.RelationCertificate.from_json(obj)
        grp = parse_group(args.group) if args.group else None
        ok = cert.verify(grp)
        reason = None if ok else "RelationFails"
    else:
        raise UsageError(f"unrecognized certificate kind {kind!r}")
    sys.stdout.write(json.dumps({"valid": ok, "reason": reason}) + "\n")
    return EXIT_OK if ok else EXIT_ABSENT


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rainbowsub", description="Rainbow substructures in properly edge-colored graphs.")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: $RAINBOWSUB_THREADS or 1)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("construct", help="build a graph")
    c.add_argument("--cayley", metavar="GROUP")
    c.add_argument("--sidon", metavar="GROUP")
    c.add_argument("--doubling", metavar="GROUP")
    c.add_argument("--conv", metavar="GROUP")
    c.add_argument("--bhg", type=int, metavar="N")
    c.add_argument("--hypercube", type=int, metavar="K")
    c.add_argument("--complete", type=int, metavar="N", help="1-factorized K_N, N even")
    c.add_argument("--bridge", type=int, metavar="K", help="two K_K joined by one edge")
    c.add_argument("--random", nargs=2, metavar=("N", "P"))
    c.add_argument("--gens")
    c.add_argument("--set")
    c.add_argument("--A")
    c.add_argument("--S")
    c.add_argument("--B")
    c.add_argument("--L")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    f = sub.add_parser("find-cycle", help="search for a rainbow cycle")
    f.add_argument("--in", dest="input", required=True)
    f.add_argument("--exact", action="store_true")
    f.add_argument("--mode", choices=search.MODES, default="exact")
    f.add_argument("--max-len", type=int)
    f.add_argument("--max-nodes", type=int, default=2_000_000)
    f.add_argument("--cert-out")
    f.set_defaults(func=cmd_find_cycle)

    s = sub.add_parser("find-subdivision", help="search for a rainbow subdivided clique")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--hub-rule", choices=("maxdeg", "random"), default="maxdeg")
    s.add_argument("--hubs")
    s.add_argument("--len-bound", type=int)
    s.add_argument("--c", type=float, default=4.0)
    s.add_argument("--mode", choices=search.MODES, default="hybrid")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--retries", type=int, default=16)
    s.add_argument("--max-nodes", type=int, default=2_000_000)
    s.add_argument("--cert-out")
    s.set_defaults(func=cmd_find_subdivision)

    e = sub.add_parser("expander-check", help="look for a robust expansion violation")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--mode", choices=("auto", "exact", "sampled"), default="auto")
    e.add_argument("--eps-grid", help="comma-separated values or 'critical'")
    e.add_argument("--u-budget", type=int, default=20000)
    e.add_argument("--u-exact", type=int, default=expander.DEFAULT_U_EXACT)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--json-out")
    e.set_defaults(func=cmd_expander_check)

    m = sub.add_parser("simulate", help="thinning experiment")
    m.add_argument("--in", dest="input", required=True)
    m.add_argument("--x", type=int, default=0)
    m.add_argument("--t", type=int, default=2)
    m.add_argument("--schedule", choices=("paper", "desk", "custom"), default="desk")
    m.add_argument("--kappa", type=float)
    m.add_argument("--lam", type=float)
    m.add_argument("--beta", type=float)
    m.add_argument("--retention", type=float)
    m.add_argument("--trials", type=int, default=20)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--checkpoints")
    m.add_argument("--rp-mode", choices=search.MODES)
    m.add_argument("--max-nodes", type=int, default=2_000_000)
    m.add_argument("--csv-out")
    m.add_argument("--json-out")
    m.set_defaults(func=cmd_simulate)

    d = sub.add_parser("dim", help="additive dimension")
    d.add_argument("--group", required=True)
    d.add_argument("--set", required=True)
    d.add_argument("--mode", dest="dim_mode", choices=("exact", "greedy"), default="exact")
    d.add_argument("--C", type=float)
    d.add_argument("--check", action="store_true", help="also test whether the whole set is dissociated")
    d.add_argument("--json-out")
    d.set_defaults(func=cmd_dim)

    b = sub.add_parser("bhg", help="B_h[1] dichotomy via rainbow cycles")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--set", required=True)
    b.add_argument("--mode", choices=search.MODES, default="exact")
    b.add_argument("--max-nodes", type=int, default=2_000_000)
    b.add_argument("--json-out")
    b.set_defaults(func=cmd_bhg)

    v = sub.add_parser("conv", help="convolution threshold set")
    v.add_argument("--group", required=True)
    v.add_argument("--A", required=True)
    v.add_argument("--B", required=True)
    v.add_argument("--sigma", type=int, required=True)
    v.add_argument("--json-out")
    v.set_defaults(func=cmd_conv)

    k = sub.add_parser("validate", help="re-check a certificate")
    k.add_argument("--cert", required=True)
    k.add_argument("--in", dest="input")
    k.add_argument("--group")
    k.set_defaults(func=cmd_validate)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required; see --help")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, GroupError, cons.ConstructionError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
