"""Discovery-architecture drivers producing per-user discovery times.

Four scenarios share one timing core.  A discovery's base cost grows with
the number of registered resources and active users; each architecture
stacks its own constant overhead on top:

  baseline      raw simulated grid, no service layer in front
  direct        the client already knows the finder endpoint (+t_ws)
  centralized   the endpoint is first looked up in a regional registry
                (+t_ws +t_registry)
  distributed   the regional registry may have to resolve through the
                repository tree (+t_hop per extra repository contacted);
                answers get cached, so repeat queries collapse to the
                centralized cost

Per-user jitter draws are keyed by (run seed, user index) only, so two
scenarios run with the same seed see identical jitter and their per-user
differences are exactly the configured overheads.  Events exist for trace
accounting; the reported times come from the latency model itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from . import stats
from .domain import (
    ATTR_ARCH,
    ATTR_MIPS_PER_PE,
    ATTR_OS,
    ATTR_PE_COUNT,
    FinderRecord,
    MetadataCatalog,
    ResourceQuery,
    ResourceSpec,
    summarize,
)
from .registry import NotFound, ResolutionPolicy, Topology, TopologySpec, build_topology
from .simkern import (
    Engine,
    Event,
    EventKind,
    LatencyModel,
    Rng,
    mix64,
    sample_jitter,
    trace_counts,
)

_JITTER_STREAM = 0x4A49_5454  # tags the per-user jitter substream


class ScenarioError(Exception):
    pass


class ConfigMismatch(ScenarioError):
    pass


class ScenarioKind(str, Enum):
    BASELINE = "baseline"
    DIRECT = "direct"
    CENTRALIZED = "centralized"
    DISTRIBUTED = "distributed"

    @property
    def ordinal(self) -> int:
        return list(ScenarioKind).index(self)


@dataclass(frozen=True)
class ScenarioConfig:
    kind: ScenarioKind
    n_users: int
    n_resources: int
    latency: LatencyModel = LatencyModel()
    seed: int = 0
    topology: TopologySpec | None = None
    query: ResourceQuery | None = None
    finder_zones: tuple[str, ...] | None = None
    policy: ResolutionPolicy = ResolutionPolicy()

    def __post_init__(self) -> None:
        if self.n_users < 1 or self.n_resources < 1:
            raise ConfigMismatch("a run needs at least one user and one resource")


@dataclass(frozen=True)
class RunResult:
    config: ScenarioConfig
    per_user_times: tuple[float, ...]
    mean_time: float
    trace_summary: Mapping[str, int]
    failed_users: tuple[int, ...] = ()


def _user_jitter(cfg: ScenarioConfig, user: int) -> float:
    rng = Rng(mix64(cfg.seed, _JITTER_STREAM, user))
    return sample_jitter(rng, cfg.latency, cfg.n_users, cfg.n_resources)


def _base_time(cfg: ScenarioConfig) -> float:
    lat = cfg.latency
    return lat.t_base + lat.t_reg * cfg.n_resources + lat.t_user * cfg.n_users


def _require_kind(cfg: ScenarioConfig, kind: ScenarioKind) -> None:
    if cfg.kind is not kind:
        raise ConfigMismatch(f"config is for {cfg.kind.value!r}, not {kind.value!r}")


def _run(cfg: ScenarioConfig, on_user_query) -> RunResult:
    """Shared event choreography: registrations, then one query per user."""
    lat = cfg.latency
    engine = Engine()
    for i in range(cfg.n_resources):
        engine.schedule(Event(fire_at=lat.t_reg * (i + 1), kind=EventKind.RESOURCE_REGISTER, payload=i))
    queries_start = lat.t_reg * cfg.n_resources
    for j in range(cfg.n_users):
        engine.schedule(Event(fire_at=queries_start, kind=EventKind.USER_QUERY, payload=j))

    times: list[float] = [0.0] * cfg.n_users
    failed: list[int] = []

    def handler(eng: Engine, event: Event) -> None:
        if event.kind is EventKind.USER_QUERY:
            on_user_query(eng, event.payload, times, failed)

    trace = engine.run(handler)
    times_tuple = tuple(times)
    return RunResult(
        config=cfg,
        per_user_times=times_tuple,
        mean_time=stats.mean(times_tuple),
        trace_summary=dict(sorted(trace_counts(trace).items())),
        failed_users=tuple(failed),
    )


def run_baseline(cfg: ScenarioConfig) -> RunResult:
    """No service layer: discovery cost is the raw simulated grid time."""
    _require_kind(cfg, ScenarioKind.BASELINE)
    base = _base_time(cfg)

    def on_query(eng: Engine, user: int, times: list[float], failed: list[int]) -> None:
        times[user] = base * _user_jitter(cfg, user)

    return _run(cfg, on_query)


def run_direct(cfg: ScenarioConfig) -> RunResult:
    """Known endpoint: baseline plus one web-service invocation per user."""
    _require_kind(cfg, ScenarioKind.DIRECT)
    base = _base_time(cfg)
    lat = cfg.latency

    def on_query(eng: Engine, user: int, times: list[float], failed: list[int]) -> None:
        times[user] = base * _user_jitter(cfg, user) + lat.t_ws
        eng.schedule(Event(fire_at=eng.now + lat.t_ws, kind=EventKind.SERVICE_CALL, payload=user))

    return _run(cfg, on_query)


def run_centralized(cfg: ScenarioConfig) -> RunResult:
    """Registry-first: direct cost plus one registry lookup per user."""
    _require_kind(cfg, ScenarioKind.CENTRALIZED)
    base = _base_time(cfg)
    lat = cfg.latency

    def on_query(eng: Engine, user: int, times: list[float], failed: list[int]) -> None:
        times[user] = base * _user_jitter(cfg, user) + lat.t_ws + lat.t_registry
        lookup_done = eng.now + lat.t_registry
        eng.schedule(Event(fire_at=lookup_done, kind=EventKind.REGISTRY_LOOKUP, payload=user))
        eng.schedule(Event(fire_at=lookup_done + lat.t_ws, kind=EventKind.SERVICE_CALL, payload=user))

    return _run(cfg, on_query)


def run_distributed(cfg: ScenarioConfig) -> RunResult:
    """Tree-wide resolution: centralized cost plus per-hop cost beyond the
    first repository.  Users are dealt round-robin onto leaf repositories
    in user order; each query resolves live against the shared topology, so
    earlier resolutions warm the caches later users hit.  A user whose
    query nothing in the tree satisfies is flagged in ``failed_users`` and
    pays only the centralized cost."""
    _require_kind(cfg, ScenarioKind.DISTRIBUTED)
    if cfg.topology is None:
        raise ConfigMismatch("distributed runs need a topology spec")
    if cfg.query is None:
        raise ConfigMismatch("distributed runs need a resource query")
    base = _base_time(cfg)
    lat = cfg.latency

    topology = build_topology(cfg.topology)
    _populate_finders(topology, cfg)
    leaves = topology.leaves()

    def on_query(eng: Engine, user: int, times: list[float], failed: list[int]) -> None:
        origin = leaves[user % len(leaves)]
        times[user] = base * _user_jitter(cfg, user) + lat.t_ws + lat.t_registry
        lookup_cost = lat.t_registry
        ok = True
        try:
            result = topology.resolve(origin, cfg.query, eng.now, cfg.policy)
            extra = lat.t_hop * (result.hop_count - 1)
            times[user] += extra
            lookup_cost += extra
        except NotFound:
            ok = False
            failed.append(user)
        lookup_done = eng.now + lookup_cost
        eng.schedule(Event(fire_at=lookup_done, kind=EventKind.REGISTRY_LOOKUP, payload=user))
        if ok:
            eng.schedule(Event(fire_at=lookup_done + lat.t_ws, kind=EventKind.SERVICE_CALL, payload=user))

    return _run(cfg, on_query)


def _populate_finders(topology: Topology, cfg: ScenarioConfig) -> None:
    """Deal the synthetic resource pool round-robin over finder sites.

    One finder per site; by default every leaf repository hosts one, which
    is the architecture's best case.  ``finder_zones`` narrows the sites to
    model regions without local finders.
    """
    sites = list(cfg.finder_zones) if cfg.finder_zones is not None else topology.leaves()
    if not sites:
        raise ConfigMismatch("distributed runs need at least one finder site")
    pools: dict[str, list[ResourceSpec]] = {site: [] for site in sites}
    for i in range(cfg.n_resources):
        site = sites[i % len(sites)]
        zone = topology.node(site).zone
        pools[site].append(
            ResourceSpec(
                resource_id=f"res-{i:04d}",
                numeric_attrs={ATTR_PE_COUNT: 4.0, ATTR_MIPS_PER_PE: 1000.0},
                tag_attrs={ATTR_ARCH: "x86", ATTR_OS: "linux"},
                home_zone=zone,
            )
        )
    for site in sites:
        node = topology.node(site)
        finder_id = f"fnd-{site}"
        catalog = MetadataCatalog(finder_id=finder_id, entries=tuple(pools[site]))
        record = FinderRecord(
            finder_id=finder_id,
            endpoint=f"svc://{site}/finder",
            home_zone=node.zone,
            summary=summarize(catalog),
        )
        topology.register_finder(site, record)


_RUNNERS = {
    ScenarioKind.BASELINE: run_baseline,
    ScenarioKind.DIRECT: run_direct,
    ScenarioKind.CENTRALIZED: run_centralized,
    ScenarioKind.DISTRIBUTED: run_distributed,
}


def run_scenario(cfg: ScenarioConfig) -> RunResult:
    return _RUNNERS[cfg.kind](cfg)
