"""Command line front end.

Exit codes: 0 all checks pass, 1 a bound violation or validation failure,
2 malformed input or configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from . import io
from .adversaries import UnknownFamily, figure1_instance, tightness_instance
from .engine import PolicyError, simulate
from .harness import ConfigError, FuzzConfig, adversary_report, fuzz, ratio, verify_constants
from .model import validate_trace
from .numerics import llw_ratio
from .offline import DEFAULT_NODE_LIMIT, NodeLimitExceeded, optimal_wc_max
from .policies import POLICIES, UnknownPolicy, make_policy

OK, FAILED, BAD_INPUT = 0, 1, 2
ADVERSARY_SLACK = 1e-6


class UsageError(Exception):
    pass


def _print_json(obj):
    print(json.dumps(obj, indent=1))


def cmd_simulate(args):
    instance = io.read_instance(args.instance)
    if not len(instance):
        raise UsageError("instance has no jobs")
    trace = simulate(instance, make_policy(args.alg))
    report = validate_trace(instance, trace)
    if args.trace:
        io.write_trace(trace, args.trace)
    _print_json({"alg": args.alg, "wc_max": trace.objective,
                 "completion_order": trace.completion_order(),
                 "violations": [str(v) for v in report.violations]})
    return OK if report.ok else FAILED


def cmd_opt(args):
    instance = io.read_instance(args.instance)
    if not len(instance):
        raise UsageError("instance has no jobs")
    try:
        res = optimal_wc_max(instance, args.node_limit)
    except NodeLimitExceeded as exc:
        res = exc.result
    _print_json({"value": res.value, "order": list(res.order),
                 "explored": res.explored, "optimal": res.optimal})
    return OK if res.optimal else FAILED


def cmd_adversary(args):
    rec = adversary_report(args.alg, args.family)
    valid = validate_trace(rec.instance, rec.trace)
    forced = rec.ratio >= rec.target - ADVERSARY_SLACK
    _print_json({"alg": rec.policy, "family": rec.family, "alg_value": rec.alg,
                 "opt_value": rec.opt, "ratio": rec.ratio, "target": rec.target,
                 "jobs": len(rec.instance), "opt_order": list(rec.opt_order),
                 "instance": io.instance_to_dict(rec.instance)["jobs"],
                 "forced": forced, "violations": [str(v) for v in valid.violations]})
    return OK if forced and valid.ok else FAILED


def cmd_tightness(args):
    try:
        instance = tightness_instance(args.eps, args.weight)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    trace = simulate(instance, make_policy("llw"))
    opt = optimal_wc_max(instance).value
    valid = validate_trace(instance, trace)
    _print_json({"eps": args.eps, "weight": args.weight, "alg_value": trace.objective,
                 "opt_value": opt, "ratio": ratio(trace.objective, opt), "R": llw_ratio(),
                 "violations": [str(v) for v in valid.violations]})
    return OK if valid.ok else FAILED


def cmd_generate(args):
    if args.family == "fig1":
        instance = figure1_instance()
    else:
        instance = tightness_instance(args.eps, args.weight)
    if args.out:
        io.write_instance(instance, args.out)
    else:
        _print_json(io.instance_to_dict(instance))
    return OK


def cmd_fuzz(args):
    config = FuzzConfig(count=args.count, n_max=args.n_max, unit=args.unit,
                        weight_range=tuple(args.weight_range),
                        release_range=tuple(args.release_range),
                        seed=args.seed, policy=args.alg, ratio_bound=args.bound)
    t0 = time.perf_counter()
    rep = fuzz(config, workers=args.workers, dump_dir=args.dump_dir)
    elapsed = time.perf_counter() - t0
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["seed", "n", "alg_value", "opt_value", "ratio"])
            for _, sub, n, alg, opt, r in rep.rows:
                w.writerow([sub, n, f"{alg:.12g}", f"{opt:.12g}", f"{r:.12g}"])
    _print_json({"alg": args.alg, "count": rep.count, "seed": args.seed, "unit": args.unit,
                 "bound": config.bound, "max_ratio": rep.max_ratio,
                 "argmax_index": rep.argmax_index, "argmax_seed": rep.argmax_seed,
                 "argmax_instance": io.instance_to_dict(rep.argmax_instance)["jobs"],
                 "violations": rep.violations, "invalid_traces": rep.invalid_traces,
                 "histogram": rep.histogram_lines(), "seconds": round(elapsed, 3)})
    return OK if rep.violations == 0 and rep.invalid_traces == 0 else FAILED


def cmd_verify_constants(args):
    checks = verify_constants(args.tol)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name:<40} value={c.value!r:<22} error={c.error:.3e}")
    return OK if all(c.passed for c in checks) else FAILED


def _range(text):
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="restartsched",
                                description="Online weighted-makespan scheduling with restarts.")
    sub = p.add_subparsers(dest="command", required=True)
    algs = sorted(POLICIES)

    s = sub.add_parser("simulate", help="run a policy on an instance file")
    s.add_argument("--alg", required=True, choices=algs)
    s.add_argument("--instance", required=True)
    s.add_argument("--trace", help="write the trace JSON here")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("opt", help="exact offline optimum of an instance file")
    s.add_argument("--instance", required=True)
    s.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)
    s.set_defaults(func=cmd_opt)

    s = sub.add_parser("adversary", help="run a lower-bound adversary against a policy")
    s.add_argument("--alg", required=True)
    s.add_argument("--family", required=True, choices=["general", "unit"])
    s.set_defaults(func=cmd_adversary)

    s = sub.add_parser("tightness", help="LLW on the two-job tightness instance")
    s.add_argument("--eps", type=float, default=1e-4)
    s.add_argument("--weight", type=float, default=1e5)
    s.set_defaults(func=cmd_tightness)

    s = sub.add_parser("generate", help="write a fixed instance (fig1 or tightness)")
    s.add_argument("--family", required=True, choices=["fig1", "tightness"])
    s.add_argument("--eps", type=float, default=1e-4)
    s.add_argument("--weight", type=float, default=1e5)
    s.add_argument("--out")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("fuzz", help="random instances, ratio against the exact optimum")
    s.add_argument("--alg", required=True)
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--unit", action="store_true")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--csv")
    s.add_argument("--weight-range", type=_range, default=(1.0, 10.0), metavar="LO,HI")
    s.add_argument("--release-range", type=_range, default=(0.0, 8.0), metavar="LO,HI")
    s.add_argument("--bound", type=float, help="ratio bound to check (default R)")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--dump-dir", help="write violating instances here")
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("verify-constants", help="check the ratio constants")
    s.add_argument("--tol", type=float, default=1e-12)
    s.set_defaults(func=cmd_verify_constants)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except (io.FormatError, ConfigError, UnknownPolicy, UnknownFamily, UsageError,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except PolicyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
