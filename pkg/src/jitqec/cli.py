"""Command-line interface: validate geometries, run cells, run sweeps.

Exit codes: 0 success, 1 validation failure, 2 I/O error, 3 internal
contract violation.  Options may also be given in a key=value config file;
explicit flags win over the file, the file wins over defaults.
"""

from __future__ import annotations

import argparse
import sys

from . import harness, lattice
from .correction import CorrectionError
from .lattice import GeometryError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_CONTRACT = 3


def _load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _apply_config(args, parser_defaults: dict) -> None:
    if not getattr(args, "config", None):
        return
    cfg = _load_config(args.config)
    for key, raw in cfg.items():
        if not hasattr(args, key):
            raise ValueError(f"unknown config key {key!r}")
        default = parser_defaults.get(key)
        # only fill values the user left at their default
        if getattr(args, key) != default:
            continue
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, raw.lower() in ("1", "true", "yes"))
        elif isinstance(current, int):
            setattr(args, key, int(raw))
        elif isinstance(current, float):
            setattr(args, key, float(raw))
        elif isinstance(current, list):
            setattr(args, key, raw.split(","))
        else:
            setattr(args, key, raw)


def cmd_validate(args) -> int:
    codes = ["A", "B", "C"] if args.code == "all" else [args.code]
    ok = True
    for code in codes:
        sl = lattice.build_slice(code, args.distance, 0)
        report = lattice.validate_slice(sl)
        for name, passed, detail in report.checks:
            mark = "pass" if passed else "FAIL"
            print(f"{code} L={args.distance} {name:28s} {mark} {detail}")
        ok = ok and report.ok
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_run(args) -> int:
    config = harness.TrialConfig(args.code, args.distance, args.p,
                                 timesteps=args.timesteps, c=args.c, r=args.r,
                                 seed=args.seed, trials=args.trials)
    sink = open(args.debug_dump, "w") if args.debug_dump else None
    try:
        if sink is not None:
            fails = 0
            for i in range(config.trials):
                if harness.run_trial(config, i, debug_sink=sink):
                    fails += 1
            stats = harness.TrialStats(fails, config.trials)
            ci = harness.agresti_coull(fails, config.trials)
        else:
            stats, ci = harness.run_cell(config, workers=args.workers)
    finally:
        if sink is not None:
            sink.close()
    print(f"code={args.code} L={args.distance} p={args.p} "
          f"trials={stats.trials} failures={stats.failures} "
          f"p_fail={ci.center:.6g} ci_halfwidth={ci.halfwidth:.6g}")
    if args.out:
        harness.run_sweep([args.code], [args.distance], [args.p],
                          stats.trials, args.seed, args.out,
                          c=args.c, r=args.r, timesteps=args.timesteps,
                          workers=args.workers)
    return EXIT_OK


def cmd_sweep(args) -> int:
    codes = [c.strip() for c in args.codes.split(",") if c.strip()]
    distances = [int(x) for x in args.distances.split(",") if x.strip()]
    ps = [float(x) for x in args.p_list.split(",") if x.strip()]
    harness.run_sweep(codes, distances, ps, args.trials, args.seed, args.out,
                      c=args.c, r=args.r, timesteps=args.timesteps,
                      workers=args.workers)
    print(f"sweep written to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jitqec",
        description="Just-in-time decoding of sliced 3D surface codes")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("validate", help="check slice geometries")
    pv.add_argument("--code", choices=["A", "B", "C", "all"], default="all")
    pv.add_argument("--distance", type=int, default=3)
    pv.add_argument("--config")
    pv.set_defaults(func=cmd_validate)

    pr = sub.add_parser("run", help="estimate one (code, L, p) cell")
    pr.add_argument("--code", choices=["A", "B", "C"], required=True)
    pr.add_argument("--distance", type=int, required=True)
    pr.add_argument("--p", type=float, required=True)
    pr.add_argument("--trials", type=int, default=1000)
    pr.add_argument("--c", type=int, default=2)
    pr.add_argument("--r", type=int, default=2)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--timesteps", type=int, default=0,
                    help="0 means ceil(L/2)")
    pr.add_argument("--workers", type=int, default=1)
    pr.add_argument("--out", help="append the cell to a sweep CSV")
    pr.add_argument("--debug-dump", dest="debug_dump",
                    help="write per-timestep decoder records as JSON lines")
    pr.add_argument("--config")
    pr.set_defaults(func=cmd_run)

    ps_ = sub.add_parser("sweep", help="sweep a (code, L, p) grid to CSV")
    ps_.add_argument("--codes", default="A,B,C")
    ps_.add_argument("--distances", default="3,5,7")
    ps_.add_argument("--p-list", dest="p_list", required=True)
    ps_.add_argument("--trials", type=int, required=True)
    ps_.add_argument("--seed", type=int, default=0)
    ps_.add_argument("--c", type=int, default=2)
    ps_.add_argument("--r", type=int, default=2)
    ps_.add_argument("--timesteps", type=int, default=0)
    ps_.add_argument("--workers", type=int, default=1)
    ps_.add_argument("--out", required=True)
    ps_.add_argument("--config")
    ps_.set_defaults(func=cmd_sweep)
    return parser


def _defaults_for(parser, command: str) -> dict:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            sub = action.choices[command]
            return {a.dest: a.default for a in sub._actions}
    return {}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    defaults = _defaults_for(parser, args.command)
    try:
        _apply_config(args, defaults)
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc, OSError) else EXIT_IO
    except (GeometryError, CorrectionError) as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
