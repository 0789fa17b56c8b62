"""Deterministic discrete-event kernel and the parametric latency model.

The engine is a plain priority queue over (fire_at, seq): ties in virtual
time are broken by scheduling order, never by anything platform-dependent.
Randomness comes from splitmix64 (Steele, Lea & Flood, "Fast splittable
pseudorandom number generators", OOPSLA 2014): a 64-bit counter-based
generator whose integer stream is reproducible on any platform.  The same
finalizer doubles as the seed-mixing hash used everywhere a derived seed is
needed, so every random draw in the system traces back to one base seed.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Callable, Iterable

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SimulationError(Exception):
    pass


class SchedulingInPast(SimulationError):
    pass


class HandlerError(SimulationError):
    """An event handler raised; the run is aborted with event context."""


def _splitmix64_finalize(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix64(*parts: int) -> int:
    """Fold integers into one 64-bit seed via splitmix64 finalization.

    Used to derive per-cell and per-stream seeds: mix64(base, a, b, ...) is
    order-sensitive, deterministic, and documented here as THE seed hash.
    """
    h = 0
    for part in parts:
        h = _splitmix64_finalize((h + _GOLDEN + (part & _MASK64)) & _MASK64)
    return h


class Rng:
    """splitmix64 stream: identical seed, identical draws, any platform."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _splitmix64_finalize(self._state)

    def random(self) -> float:
        """Uniform draw in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0**-53

    def normal(self) -> float:
        """Standard normal via Box-Muller; consumes exactly two uniforms."""
        u1 = self.random()
        u2 = self.random()
        if u1 <= 0.0:
            u1 = 2.0**-53
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def lognormal_unit_mean(self, rel_sd: float) -> float:
        """Positive draw with mean exactly 1 and relative std dev ``rel_sd``."""
        if rel_sd <= 0.0:
            return 1.0
        s2 = math.log(1.0 + rel_sd * rel_sd)
        return math.exp(-0.5 * s2 + math.sqrt(s2) * self.normal())


class EventKind(str, Enum):
    RESOURCE_REGISTER = "resource_register"
    USER_QUERY = "user_query"
    SERVICE_CALL = "service_call"
    REGISTRY_LOOKUP = "registry_lookup"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Event:
    fire_at: float
    kind: EventKind
    payload: Any = None
    seq: int = -1  # assigned by the engine at schedule time


class Engine:
    """Single-threaded discrete-event loop with a virtual clock."""

    def __init__(self) -> None:
        self.now = 0.0
        self._queue: list[tuple[float, int, Event]] = []
        self._next_seq = 0

    def schedule(self, event: Event) -> Event:
        """Enqueue an event at or after the current virtual time."""
        if event.fire_at < self.now:
            raise SchedulingInPast(
                f"cannot schedule {event.kind.value} at t={event.fire_at} (now={self.now})"
            )
        stamped = replace(event, seq=self._next_seq)
        self._next_seq += 1
        heapq.heappush(self._queue, (stamped.fire_at, stamped.seq, stamped))
        return stamped

    def run(self, handler: Callable[["Engine", Event], None]) -> list[Event]:
        """Drain the queue in (fire_at, seq) order, returning the trace.

        The handler may schedule further events.  Handler exceptions abort
        the run, wrapped with the offending event for diagnosis.
        """
        trace: list[Event] = []
        while self._queue:
            _, _, event = heapq.heappop(self._queue)
            self.now = event.fire_at
            trace.append(event)
            try:
                handler(self, event)
            except Exception as exc:
                raise HandlerError(
                    f"handler failed on {event.kind.value} (seq={event.seq}) at t={self.now}"
                ) from exc
        return trace


@dataclass(frozen=True)
class LatencyModel:
    """Per-entity timing parameters, all in virtual seconds.

    A discovery takes ``t_base + t_reg*n_resources + t_user*n_users``
    before architecture-specific overheads: ``t_ws`` per web-service call,
    ``t_registry`` per registry lookup, ``t_hop`` per extra repository hop
    in a distributed resolution.  The multiplicative jitter has unit mean
    and a relative spread that grows with total load.
    """

    t_reg: float = 0.06006
    t_user: float = 0.06006
    t_ws: float = 1.890
    t_registry: float = 1.716
    t_hop: float = 0.5
    t_base: float = 0.0
    jitter_sigma0: float = 0.5
    jitter_gamma: float = 1.07
    jitter_enabled: bool = True

    def __post_init__(self) -> None:
        for name in ("t_reg", "t_user", "t_ws", "t_registry", "t_hop", "t_base",
                     "jitter_sigma0", "jitter_gamma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    def without_jitter(self) -> "LatencyModel":
        return replace(self, jitter_enabled=False)


# Load of 20 users x 20 resources anchors the jitter scale: there the
# relative spread is jitter_sigma0 itself.
JITTER_ANCHOR_LOAD = 400.0


def jitter_relative_sd(model: LatencyModel, n_users: int, n_resources: int) -> float:
    """The load-dependent relative std dev of the jitter factor."""
    load = (n_users * n_resources) / JITTER_ANCHOR_LOAD
    return model.jitter_sigma0 * load**model.jitter_gamma


def sample_jitter(rng: Rng, model: LatencyModel, n_users: int, n_resources: int) -> float:
    """One multiplicative jitter draw: positive, mean 1; exactly 1 when disabled."""
    if n_users < 1 or n_resources < 1:
        raise ValueError("jitter needs at least one user and one resource")
    if not model.jitter_enabled:
        return 1.0
    return rng.lognormal_unit_mean(jitter_relative_sd(model, n_users, n_resources))


def trace_counts(trace: Iterable[Event]) -> dict[str, int]:
    """Event counts by kind, for run summaries."""
    counts: dict[str, int] = {}
    for event in trace:
        counts[event.kind.value] = counts.get(event.kind.value, 0) + 1
    return counts
