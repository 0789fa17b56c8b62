"""Experiment orchestration: sweeps, observation CSVs, analysis reports.

Every output byte is determined by (sweep spec, config, base seed).  Each
sweep cell derives its own seed as

    mix64(base_seed, scenario_ordinal, users, resources, replication)

so cells are statistically decoupled yet exactly reproducible, and cells
may run in parallel without changing the output: results are assembled in
deterministic cell order, never completion order.

File formats (fixed; the test suite pins them with golden files):

* observations CSV, header ``scenario,users,resources,replication,seed,discovery_time_s``
* analysis CSV, header ``users,resources,pair,mean_diff,se,ci_low,ci_high,p_value,verdict``
* plot series: two whitespace-separated columns, one ``x mean`` point per line
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from . import stats
from .config import Config, ConfigError
from .domain import ResourceQuery
from .scenarios import RunResult, ScenarioConfig, ScenarioKind, run_scenario
from .simkern import mix64
from .stats import MeanDifferenceTest, unpaired_t_test

OBSERVATION_HEADER = "scenario,users,resources,replication,seed,discovery_time_s"
ANALYSIS_HEADER = "users,resources,pair,mean_diff,se,ci_low,ci_high,p_value,verdict"


class HarnessError(Exception):
    pass


class ParseError(HarnessError):
    pass


class GridMismatch(HarnessError):
    pass


class SweepKind(str, Enum):
    FIXED_USERS = "fixed-users"
    FIXED_RESOURCES = "fixed-resources"
    DIAGONAL = "diagonal"


@dataclass(frozen=True)
class SweepSpec:
    kind: SweepKind = SweepKind.DIAGONAL
    fixed_values: tuple[int, ...] = (20, 60, 100)
    varying_start: int = 20
    varying_stop: int = 100
    varying_step: int = 20
    diagonal_points: tuple[int, ...] = (20, 40, 60, 80, 100)
    replications: int = 10
    base_seed: int = 0
    scenarios: tuple[ScenarioKind, ...] = (
        ScenarioKind.BASELINE,
        ScenarioKind.DIRECT,
        ScenarioKind.CENTRALIZED,
    )

    def points(self) -> list[tuple[int, int]]:
        """(users, resources) grid points in emission order."""
        if self.kind is SweepKind.DIAGONAL:
            if not self.diagonal_points:
                raise ConfigError("diagonal sweep needs diagonal_points")
            return [(d, d) for d in self.diagonal_points]
        if self.varying_step <= 0:
            raise ConfigError("varying_step must be > 0")
        varying = list(range(self.varying_start, self.varying_stop + 1, self.varying_step))
        if not varying or not self.fixed_values:
            raise ConfigError("sweep ranges must be non-empty")
        if self.kind is SweepKind.FIXED_USERS:
            return [(u, r) for u in self.fixed_values for r in varying]
        return [(u, r) for r in self.fixed_values for u in varying]

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if not self.scenarios:
            raise ConfigError("sweep needs at least one scenario")


@dataclass(frozen=True)
class ObservationRow:
    scenario: ScenarioKind
    users: int
    resources: int
    replication: int
    seed: int
    discovery_time_s: float


@dataclass(frozen=True)
class AnalysisRow:
    users: int
    resources: int
    pair: str
    test: MeanDifferenceTest


def cell_seed(base_seed: int, scenario: ScenarioKind, users: int, resources: int,
              replication: int) -> int:
    return mix64(base_seed, scenario.ordinal, users, resources, replication)


def _cell_config(scenario: ScenarioKind, users: int, resources: int, seed: int,
                 config: Config) -> ScenarioConfig:
    kwargs = {}
    if scenario is ScenarioKind.DISTRIBUTED:
        kwargs = {"topology": config.topology, "query": ResourceQuery(), "policy": config.policy}
    return ScenarioConfig(
        kind=scenario,
        n_users=users,
        n_resources=resources,
        latency=config.latency,
        seed=seed,
        **kwargs,
    )


def run_sweep(spec: SweepSpec, config: Config, workers: int = 1) -> list[ObservationRow]:
    """Run every (scenario, point, replication) cell of the sweep.

    ``workers > 1`` runs cells on a thread pool; each cell owns its engine
    and RNG, and rows come back in deterministic cell order either way.
    """
    if ScenarioKind.DISTRIBUTED in spec.scenarios and config.topology is None:
        raise ConfigError("distributed sweeps need topology.depth/branching or topology.zones")
    points = spec.points()
    cells = [
        (scenario, users, resources, rep)
        for scenario in sorted(spec.scenarios, key=lambda s: s.ordinal)
        for (users, resources) in points
        for rep in range(spec.replications)
    ]

    def run_cell(cell: tuple[ScenarioKind, int, int, int]) -> ObservationRow:
        scenario, users, resources, rep = cell
        seed = cell_seed(spec.base_seed, scenario, users, resources, rep)
        result: RunResult = run_scenario(_cell_config(scenario, users, resources, seed, config))
        return ObservationRow(
            scenario=scenario,
            users=users,
            resources=resources,
            replication=rep,
            seed=seed,
            discovery_time_s=result.mean_time,
        )

    if workers <= 1:
        rows = [run_cell(cell) for cell in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_cell, cells))
    rows.sort(key=lambda r: (r.scenario.ordinal, r.users, r.resources, r.replication))
    return rows


# -- observation CSV ---------------------------------------------------------


def format_observations(rows: list[ObservationRow]) -> str:
    out = [OBSERVATION_HEADER]
    for r in rows:
        out.append(
            f"{r.scenario.value},{r.users},{r.resources},{r.replication},"
            f"{r.seed},{r.discovery_time_s!r}"
        )
    return "\n".join(out) + "\n"


def write_observations(rows: list[ObservationRow], path: str | Path) -> None:
    Path(path).write_text(format_observations(rows), encoding="utf-8", newline="")


def parse_observations(text: str, source: str = "<string>") -> list[ObservationRow]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(f"{source}:1: empty observations file") from None
    if header != OBSERVATION_HEADER.split(","):
        raise ParseError(f"{source}:1: bad header {','.join(header)!r}")
    rows = []
    for lineno, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != 6:
            raise ParseError(f"{source}:{lineno}: expected 6 fields, got {len(record)}")
        try:
            rows.append(
                ObservationRow(
                    scenario=ScenarioKind(record[0]),
                    users=int(record[1]),
                    resources=int(record[2]),
                    replication=int(record[3]),
                    seed=int(record[4]),
                    discovery_time_s=float(record[5]),
                )
            )
        except ValueError as exc:
            raise ParseError(f"{source}:{lineno}: {exc}") from None
    if not rows:
        raise ParseError(f"{source}: no observation rows")
    return rows


def read_observations(path: str | Path) -> list[ObservationRow]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_observations(text, source=str(path))


# -- analysis ----------------------------------------------------------------


def _single_scenario(rows: list[ObservationRow], source: str) -> ScenarioKind:
    kinds = {r.scenario for r in rows}
    if len(kinds) != 1:
        names = ", ".join(sorted(k.value for k in kinds))
        raise GridMismatch(f"{source} mixes scenarios ({names}); analyze one per side")
    return kinds.pop()


def _by_point(rows: list[ObservationRow]) -> dict[tuple[int, int], list[ObservationRow]]:
    grouped: dict[tuple[int, int], list[ObservationRow]] = {}
    for row in rows:
        grouped.setdefault((row.users, row.resources), []).append(row)
    for cell in grouped.values():
        cell.sort(key=lambda r: r.replication)
    return grouped


def analyze(rows_a: list[ObservationRow], rows_b: list[ObservationRow],
            alpha: float = 0.05) -> list[AnalysisRow]:
    """Pointwise unpaired comparison: mean(a) - mean(b) at each grid point.

    Both inputs must cover the same (users, resources, replication) grid;
    row order is irrelevant.
    """
    kind_a = _single_scenario(rows_a, "first input")
    kind_b = _single_scenario(rows_b, "second input")
    grid_a, grid_b = _by_point(rows_a), _by_point(rows_b)
    if set(grid_a) != set(grid_b):
        only_a = sorted(set(grid_a) - set(grid_b))
        only_b = sorted(set(grid_b) - set(grid_a))
        raise GridMismatch(f"grids differ: only in first {only_a}, only in second {only_b}")
    pair = f"{kind_a.value}-vs-{kind_b.value}"
    out = []
    for point in sorted(grid_a):
        cell_a, cell_b = grid_a[point], grid_b[point]
        reps_a = [r.replication for r in cell_a]
        reps_b = [r.replication for r in cell_b]
        if reps_a != reps_b:
            raise GridMismatch(f"replication sets differ at point {point}")
        test = unpaired_t_test(
            [r.discovery_time_s for r in cell_a],
            [r.discovery_time_s for r in cell_b],
            alpha=alpha,
        )
        out.append(AnalysisRow(users=point[0], resources=point[1], pair=pair, test=test))
    return out


def format_analysis_csv(rows: list[AnalysisRow]) -> str:
    out = [ANALYSIS_HEADER]
    for r in rows:
        t = r.test
        out.append(
            f"{r.users},{r.resources},{r.pair},{t.mean_diff!r},{t.se!r},"
            f"{t.ci_low!r},{t.ci_high!r},{t.p_value!r},{t.verdict.value}"
        )
    return "\n".join(out) + "\n"


def _fmt_p(p: float) -> str:
    return "<0.0001" if p < 0.0001 else f"{p:.4f}"


def format_analysis_table(rows: list[AnalysisRow]) -> str:
    """Aligned text report, one line per grid point."""
    if not rows:
        return "(no analysis rows)\n"
    alpha = rows[0].test.alpha
    header = [
        "Users,Resources",
        "Mean Difference",
        "SE of Mean Difference",
        f"Confidence Interval {100 * (1 - alpha):g}%",
        "p-Value",
        "Verdict",
    ]
    body = []
    for r in rows:
        t = r.test
        body.append([
            f"{r.users},{r.resources}",
            f"{t.mean_diff:.3f}",
            f"{t.se:.3f}",
            f"({t.ci_low:.3f}, {t.ci_high:.3f})",
            _fmt_p(t.p_value),
            t.verdict.value,
        ])
    widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip()
             for line in [header] + body]
    return "\n".join(lines) + "\n"


def write_analysis(rows: list[AnalysisRow], path: str | Path) -> None:
    Path(path).write_text(format_analysis_csv(rows), encoding="utf-8", newline="")


# -- plot series -------------------------------------------------------------


def plot_data(rows: list[ObservationRow], group_by: str, out_dir: str | Path) -> list[Path]:
    """Write one ``x mean_time`` series file per (scenario, fixed value).

    ``group_by`` names the fixed axis: "users" (x is resources),
    "resources" (x is users), or "diagonal" (x is the common count).
    Returns the written paths, sorted.
    """
    if group_by not in ("users", "resources", "diagonal"):
        raise ParseError(f"unknown group_by {group_by!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    series: dict[tuple[ScenarioKind, int | None], dict[int, list[float]]] = {}
    for row in rows:
        if group_by == "diagonal":
            if row.users != row.resources:
                continue
            key, x = (row.scenario, None), row.users
        elif group_by == "users":
            key, x = (row.scenario, row.users), row.resources
        else:
            key, x = (row.scenario, row.resources), row.users
        series.setdefault(key, {}).setdefault(x, []).append(row.discovery_time_s)
    if not series:
        raise ParseError(f"no rows usable for group_by={group_by!r}")

    paths = []
    for (scenario, fixed), points in sorted(series.items(), key=lambda kv: (kv[0][0].ordinal, kv[0][1] or 0)):
        name = (f"{scenario.value}_diagonal.dat" if fixed is None
                else f"{scenario.value}_{group_by}{fixed}.dat")
        path = out / name
        lines = [f"{x} {stats.mean(times)!r}" for x, times in sorted(points.items())]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
        paths.append(path)
    return sorted(paths)
