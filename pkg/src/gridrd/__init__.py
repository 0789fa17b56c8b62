"""Deterministic simulator and analysis toolkit for grid resource discovery.

Subpackages by responsibility: ``domain`` (resources, queries, summaries),
``registry`` (the DNS-style repository tree), ``simkern`` (event engine,
RNG, latency model), ``scenarios`` (the measured architectures),
``stats`` (mean-difference testing), ``harness``/``config``/``cli``
(experiments, files, command line).
"""

from .config import Config, load_config
from .domain import (
    FinderRecord,
    MetadataCatalog,
    MetadataSummary,
    ResourceQuery,
    ResourceSpec,
    ZoneName,
)
from .harness import ObservationRow, SweepKind, SweepSpec, analyze, plot_data, run_sweep
from .registry import ResolutionPolicy, Topology, TopologySpec, build_topology
from .scenarios import RunResult, ScenarioConfig, ScenarioKind, run_scenario
from .simkern import Engine, Event, EventKind, LatencyModel, Rng, mix64
from .stats import MeanDifferenceTest, Verdict, test_from_summary, unpaired_t_test

__version__ = "0.1.0"

__all__ = [
    "Config",
    "Engine",
    "Event",
    "EventKind",
    "FinderRecord",
    "LatencyModel",
    "MeanDifferenceTest",
    "MetadataCatalog",
    "MetadataSummary",
    "ObservationRow",
    "ResolutionPolicy",
    "ResourceQuery",
    "ResourceSpec",
    "Rng",
    "RunResult",
    "ScenarioConfig",
    "ScenarioKind",
    "SweepKind",
    "SweepSpec",
    "Topology",
    "TopologySpec",
    "Verdict",
    "ZoneName",
    "analyze",
    "build_topology",
    "load_config",
    "mix64",
    "plot_data",
    "run_scenario",
    "run_sweep",
    "test_from_summary",
    "unpaired_t_test",
    "__version__",
]
