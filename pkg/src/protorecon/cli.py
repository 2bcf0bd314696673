"""Command-line entry point.

Subcommands: grid (full protocol), tau-sweep, analyze (recompute
aggregates from runs.csv), report (emit tables.md), check (theorem bound
suites). Exit codes: 0 ok, 1 usage error, 2 runtime/IO failure, 3 bound
check failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import reporting, theory
from .harness import DEFAULT_TAUS, GridConfig, run_grid, run_tau_sweep
from .kernels import backend_name


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit(2); we reserve 2 for IO
        raise UsageError(message)


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--master-seed", type=int, default=None)
    p.add_argument("--n", type=int, nargs="+", default=None, help="dataset sizes")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--lambda", dest="lambda_coeff", type=float, default=None,
                   help="shared structural-loss coefficient")
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--literal-seed-tuple", action="store_true", default=None,
                   help="include the mask in seed derivation (unpairs mask comparisons)")
    p.add_argument("--config", type=Path, default=None, help="flat key=value config file")


def _read_config_file(path: Path) -> dict:
    values = {}
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, _, raw = line.partition("=")
        values[key.strip()] = raw.strip()
    return values


_CONFIG_PARSERS = {
    "master_seed": int,
    "n_list": lambda s: tuple(int(v) for v in s.replace(",", " ").split()),
    "datasets_per_n": int,
    "inits_per_dataset": int,
    "masks": lambda s: tuple(s.replace(",", " ").split()),
    "lambda_coeff": float,
    "tau": float,
    "epochs": int,
    "lr": float,
    "output_dir": Path,
    "jobs": int,
    "literal_seed_tuple": lambda s: s.lower() in ("1", "true", "yes"),
}


def build_config(args) -> GridConfig:
    cfg = GridConfig()
    if args.config is not None:
        overrides = {}
        for key, raw in _read_config_file(args.config).items():
            if key not in _CONFIG_PARSERS:
                raise UsageError(f"unknown config key {key!r}")
            try:
                overrides[key] = _CONFIG_PARSERS[key](raw)
            except ValueError as exc:
                raise UsageError(f"bad value for config key {key!r}: {exc}")
        cfg = replace(cfg, **overrides)
    flag_map = {
        "master_seed": args.master_seed,
        "n_list": tuple(args.n) if args.n else None,
        "epochs": args.epochs,
        "lr": args.lr,
        "lambda_coeff": args.lambda_coeff,
        "tau": args.tau,
        "output_dir": args.out,
        "jobs": args.jobs,
        "literal_seed_tuple": args.literal_seed_tuple,
    }
    cfg = replace(cfg, **{k: v for k, v in flag_map.items() if v is not None})
    return cfg


def _cmd_grid(args) -> int:
    cfg = build_config(args)
    t0 = time.perf_counter()
    records = run_grid(cfg)
    sweep = run_tau_sweep(cfg) if args.with_tau_sweep else None
    reporting.emit_outputs(records, cfg.output_dir, cfg=cfg, sweep_records=sweep)
    elapsed = time.perf_counter() - t0
    print(f"grid: {len(records)} runs ({backend_name()} backend) -> {cfg.output_dir} "
          f"in {elapsed:.1f}s")
    return 0


def _cmd_tau_sweep(args) -> int:
    cfg = build_config(args)
    taus = tuple(args.taus) if args.taus else DEFAULT_TAUS
    sweep = run_tau_sweep(cfg, taus=taus)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    reporting.write_tau_sweep_csv(sweep, out / "tau_sweep.csv")
    reporting.write_tau_summary_csv(reporting.tau_summary(sweep), out / "tau_summary.csv")
    print(f"tau-sweep: {len(sweep)} runs over taus {taus} -> {out}")
    return 0


def _cmd_analyze(args) -> int:
    out = args.out if args.out is not None else GridConfig().output_dir
    runs_path = Path(out) / "runs.csv"
    records = reporting.read_runs_csv(runs_path)
    sweep_path = Path(out) / "tau_sweep.csv"
    sweep = reporting.read_tau_sweep_csv(sweep_path) if sweep_path.exists() else None
    reporting.emit_outputs(records, Path(out), cfg=None, sweep_records=sweep)
    print(f"analyze: recomputed aggregates for {len(records)} runs in {out}")
    return 0


def _cmd_report(args) -> int:
    out = args.out if args.out is not None else GridConfig().output_dir
    records = reporting.read_runs_csv(Path(out) / "runs.csv")
    sweep_path = Path(out) / "tau_sweep.csv"
    sweep = reporting.read_tau_sweep_csv(sweep_path) if sweep_path.exists() else None
    reporting.write_tables_md(records, sweep, Path(out) / "tables.md")
    print(f"report: wrote {Path(out) / 'tables.md'}")
    return 0


def _cmd_check(args) -> int:
    n_configs = args.configs
    failures = 0
    for name, suite in (
        ("coverage-monotonicity", theory.run_coverage_suite),
        ("overlap-bound", theory.run_overlap_suite),
        ("separation-bound", theory.run_separation_suite),
    ):
        report = suite(n_configs=n_configs, seed=args.seed)
        status = "PASS" if report.passed else "FAIL"
        print(f"{status} {name}: {report.config_count} configs, "
              f"max violation {report.max_violation:.3e} "
              f"(worst seed {report.worst_config_seed})")
        failures += 0 if report.passed else 1
    return 3 if failures else 0


def make_parser() -> _Parser:
    parser = _Parser(prog="protorecon", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_grid = sub.add_parser("grid", help="run the full ablation grid")
    _add_grid_flags(p_grid)
    p_grid.add_argument("--with-tau-sweep", action="store_true",
                        help="also run the default temperature sweep")
    p_grid.set_defaults(func=_cmd_grid)

    p_tau = sub.add_parser("tau-sweep", help="temperature sweep on the separation-only mask")
    _add_grid_flags(p_tau)
    p_tau.add_argument("--taus", type=float, nargs="+", default=None)
    p_tau.set_defaults(func=_cmd_tau_sweep)

    p_an = sub.add_parser("analyze", help="recompute aggregates from runs.csv")
    p_an.add_argument("--out", type=Path, default=None)
    p_an.set_defaults(func=_cmd_analyze)

    p_rep = sub.add_parser("report", help="emit tables.md from runs.csv")
    p_rep.add_argument("--out", type=Path, default=None)
    p_rep.set_defaults(func=_cmd_report)

    p_chk = sub.add_parser("check", help="run the loss-bound suites")
    p_chk.add_argument("--configs", type=int, default=10000)
    p_chk.add_argument("--seed", type=int, default=0)
    p_chk.set_defaults(func=_cmd_check)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
