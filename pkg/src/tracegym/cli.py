"""Command line entry point.

Subcommands mirror the suites; ``check`` runs a checker on tensors from a
JSON file and ``tail`` evaluates the tail bounds for models from a JSON
file.  Exit codes: 0 ok, 1 an inequality failed, 2 bad configuration,
3 numerical error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, TraceGymError
from .inequalities import (
    check_alt_multi,
    check_alt_two,
    check_gt_multi,
    check_gt_multi_general,
    check_gt_two,
    check_log_trace_multi,
)
from .quadrature import build_quadrature
from .random_tensors import model_from_json, tail_bound_sweep
from .suite import SUITES, SuiteConfig, result_json, run_suite
from .tensor import Shape, tensor_from_json

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3
CHECKS = ("gt-two", "alt-two", "alt-multi", "gt-multi", "gt-multi-general", "log-trace")


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from exc


def _shape(text: str) -> Shape:
    try:
        return Shape.parse(text)
    except (ValueError, TraceGymError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _suite_parser(sub, name: str):
    p = sub.add_parser(name, help=f"run the {name} suite")
    p.add_argument("--shape", type=_shape, default=Shape.parse("2;2"),
                   help='tensor shape, "2,2" (square) or "2,2;2,2"')
    p.add_argument("--n", type=int, default=None, help="number of instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--theta", type=_floats, default=(0.25, 0.5, 0.75, 1.0))
    p.add_argument("--p", type=_floats, default=(1.0, 2.0, 3.0))
    p.add_argument("--q", type=_floats, default=(1.0, 0.5, 0.25, 0.125))
    p.add_argument("--quad-budget", type=float, default=1e-6)
    p.add_argument("--family", choices=("random", "commuting"), default="random")
    p.add_argument("--constant", choices=("paper", "matricized"), default="paper",
                   help="dimensional constant used by the tail bounds")
    p.add_argument("--out", type=Path, default=None,
                   help="JSON output path; a CSV margins table is written next to it")
    p.set_defaults(command="suite", suite=name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tracegym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUITES + ("all",):
        _suite_parser(sub, name)

    c = sub.add_parser("check", help="run one checker on tensors from a JSON file")
    c.add_argument("kind", choices=CHECKS)
    c.add_argument("input", type=Path, help='JSON: {"tensors": [tensor, ...]}')
    c.add_argument("--theta", type=float, default=0.5)
    c.add_argument("--p", type=float, default=2.0)
    c.add_argument("--q", type=float, default=1.0)
    c.add_argument("--r", type=float, default=0.5)
    c.add_argument("--quad-budget", type=float, default=1e-6)
    c.add_argument("--variant", choices=("display", "proof"), default="display")
    c.set_defaults(command="check")

    t = sub.add_parser("tail", help="tail bounds for models from a JSON file")
    t.add_argument("input", type=Path, help='JSON: {"models": [model, ...]}')
    t.add_argument("--zeta", type=_floats, required=True)
    t.add_argument("--constant", choices=("paper", "matricized"), default="paper")
    t.add_argument("--coupling", choices=("independent", "joint"), default="independent")
    t.add_argument("--trials", type=int, default=10_000)
    t.add_argument("--seed", type=int, default=0)
    t.set_defaults(command="tail")
    return parser


def _load_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _run_check(args) -> tuple[int, str]:
    data = _load_json(args.input)
    tensors = [tensor_from_json(t) for t in data.get("tensors", [])]
    if args.kind in ("gt-two", "alt-two") and len(tensors) != 2:
        raise ConfigError(f"{args.kind} needs exactly two tensors")
    if args.kind == "gt-two":
        rep = check_gt_two(*tensors)
    elif args.kind == "alt-two":
        rep = check_alt_two(*tensors, r=args.r, q=args.q)
    elif args.kind == "alt-multi":
        rep = check_alt_multi(tensors, args.theta, args.p, build_quadrature(args.theta, args.quad_budget))
    elif args.kind == "gt-multi":
        rep = check_gt_multi(tensors, args.p, build_quadrature(0.0, args.quad_budget))
    elif args.kind == "gt-multi-general":
        rep = check_gt_multi_general(tensors, args.p, build_quadrature(0.0, args.quad_budget))
    else:
        rep = check_log_trace_multi(tensors, args.q, build_quadrature(0.0, args.quad_budget),
                                    variant=args.variant)
    text = json.dumps(rep.to_dict(), sort_keys=True, indent=2)
    return (EXIT_FAIL if rep.verdict == "fail" else EXIT_OK), text


def _run_tail(args) -> tuple[int, str]:
    data = _load_json(args.input)
    models = [model_from_json(m) for m in data.get("models", [])]
    if not models:
        raise ConfigError("no models given")
    reports = tail_bound_sweep(models, args.zeta, constant_mode=args.constant,
                               coupling=args.coupling, n_trials=args.trials, seed=args.seed)
    text = json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=2)
    unsound = any(r.sound is False for r in reports)
    return (EXIT_FAIL if unsound else EXIT_OK), text


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "suite":
            cfg = SuiteConfig(
                suite=args.suite, shape=args.shape, n_instances=args.n, seed=args.seed,
                theta_list=args.theta, p_list=args.p, q_list=args.q,
                quad_budget=args.quad_budget, output_path=str(args.out) if args.out else None,
                family=args.family, constant_mode=args.constant,
            )
            result = run_suite(cfg)
            s = result.summary
            print(f"{args.suite}: {s['total']} checks, {s['pass']} pass, {s['equality']} equality, "
                  f"{s['fail']} fail, {s['errors']} errors ({result.wall_time:.1f}s)", file=sys.stderr)
            if args.out is None:
                print(result_json(result))
            return result.exit_code
        code, text = _run_check(args) if args.command == "check" else _run_tail(args)
        print(text)
        return code
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TraceGymError, ArithmeticError, ValueError) as exc:
        if isinstance(exc, ValueError):
            print(f"configuration error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
