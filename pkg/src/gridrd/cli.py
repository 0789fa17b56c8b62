"""Command-line surface: run, sweep, analyze, plot-data.

Exit codes: 0 success, 1 usage error, 2 configuration error, 3 runtime
error (bad input files, impossible scenarios, simulation failures).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import Config, ConfigError, load_config
from .domain import ResourceQuery
from .harness import (
    SweepKind,
    SweepSpec,
    analyze,
    format_analysis_table,
    plot_data,
    read_observations,
    run_sweep,
    write_analysis,
    write_observations,
)
from .scenarios import ScenarioConfig, ScenarioKind, run_scenario

USAGE_EXIT = 1
CONFIG_EXIT = 2
RUNTIME_EXIT = 3


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _scenario(name: str) -> ScenarioKind:
    try:
        return ScenarioKind(name)
    except ValueError:
        names = ", ".join(k.value for k in ScenarioKind)
        raise argparse.ArgumentTypeError(f"unknown scenario {name!r} (choose from {names})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridrd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, default=None, help="key = value config file")
        p.add_argument("--no-jitter", action="store_true", help="disable timing jitter")

    p_run = sub.add_parser("run", parents=[], help="run one scenario once")
    common(p_run)
    p_run.add_argument("--scenario", type=_scenario, default=ScenarioKind.BASELINE)
    p_run.add_argument("--users", type=int, default=100)
    p_run.add_argument("--resources", type=int, default=100)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out", type=Path, default=None, help="write per-user times CSV")

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep with replications")
    common(p_sweep)
    p_sweep.add_argument("--sweep-kind", type=SweepKind, default=SweepKind.DIAGONAL,
                         choices=list(SweepKind))
    p_sweep.add_argument("--scenario", type=_scenario, action="append", default=None,
                         help="repeatable; default: baseline, direct, centralized")
    p_sweep.add_argument("--fixed-values", type=int, nargs="+", default=None)
    p_sweep.add_argument("--range", dest="varying", default=None, metavar="START:STOP:STEP")
    p_sweep.add_argument("--points", type=int, nargs="+", default=None,
                         help="diagonal points (users = resources)")
    p_sweep.add_argument("--replications", type=int, default=10)
    p_sweep.add_argument("--seed", type=int, default=0, help="base seed")
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.add_argument("--out", type=Path, required=True, help="observations CSV path")

    p_an = sub.add_parser("analyze", help="pointwise mean-difference tests of two sweeps")
    p_an.add_argument("csv_a", type=Path)
    p_an.add_argument("csv_b", type=Path)
    p_an.add_argument("--alpha", type=float, default=0.05)
    p_an.add_argument("--out", type=Path, default=None, help="analysis CSV path")

    p_plot = sub.add_parser("plot-data", help="emit plot-ready series files")
    p_plot.add_argument("csv", type=Path)
    p_plot.add_argument("--group-by", choices=("users", "resources", "diagonal"),
                        required=True)
    p_plot.add_argument("--out-dir", type=Path, default=Path("."))

    return parser


def _load(args: argparse.Namespace) -> Config:
    cfg = load_config(args.config) if args.config else Config()
    if getattr(args, "no_jitter", False):
        cfg = replace(cfg, latency=cfg.latency.without_jitter())
    return cfg


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = _load(args)
    scenario_cfg = ScenarioConfig(
        kind=args.scenario,
        n_users=args.users,
        n_resources=args.resources,
        latency=cfg.latency,
        seed=args.seed,
        topology=cfg.topology if args.scenario is ScenarioKind.DISTRIBUTED else None,
        query=ResourceQuery() if args.scenario is ScenarioKind.DISTRIBUTED else None,
        policy=cfg.policy,
    )
    result = run_scenario(scenario_cfg)
    print(f"scenario = {args.scenario.value}")
    print(f"users = {args.users}")
    print(f"resources = {args.resources}")
    print(f"seed = {args.seed}")
    print(f"mean_time_s = {result.mean_time!r}")
    for kind, count in result.trace_summary.items():
        print(f"events.{kind} = {count}")
    if result.failed_users:
        print(f"failed_users = {','.join(map(str, result.failed_users))}")
    if args.out is not None:
        lines = ["user,discovery_time_s"]
        lines += [f"{j},{t!r}" for j, t in enumerate(result.per_user_times)]
        args.out.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
    return 0


def _parse_range(raw: str) -> tuple[int, int, int]:
    parts = raw.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--range wants START:STOP:STEP, got {raw!r}")
    try:
        return tuple(int(p) for p in parts)  # type: ignore[return-value]
    except ValueError:
        raise ConfigError(f"--range wants integers, got {raw!r}") from None


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load(args)
    kwargs = {}
    if args.fixed_values is not None:
        kwargs["fixed_values"] = tuple(args.fixed_values)
    if args.varying is not None:
        start, stop, step = _parse_range(args.varying)
        kwargs.update(varying_start=start, varying_stop=stop, varying_step=step)
    if args.points is not None:
        kwargs["diagonal_points"] = tuple(args.points)
    if args.scenario is not None:
        kwargs["scenarios"] = tuple(args.scenario)
    spec = SweepSpec(
        kind=args.sweep_kind,
        replications=args.replications,
        base_seed=args.seed,
        **kwargs,
    )
    rows = run_sweep(spec, cfg, workers=args.workers)
    write_observations(rows, args.out)
    print(f"wrote {len(rows)} observations to {args.out}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    rows = analyze(read_observations(args.csv_a), read_observations(args.csv_b),
                   alpha=args.alpha)
    sys.stdout.write(format_analysis_table(rows))
    if args.out is not None:
        write_analysis(rows, args.out)
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    paths = plot_data(read_observations(args.csv), args.group_by, args.out_dir)
    for path in paths:
        print(path)
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "analyze": _cmd_analyze,
    "plot-data": _cmd_plot,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"gridrd: config error: {exc}", file=sys.stderr)
        return CONFIG_EXIT
    except Exception as exc:  # runtime failures: bad inputs, impossible runs
        print(f"gridrd: error: {exc}", file=sys.stderr)
        return RUNTIME_EXIT


if __name__ == "__main__":
    sys.exit(main())
