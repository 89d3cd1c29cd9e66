"""Virtual actuated signal controller with pedestrian intervals.

A single-ring controller serves phases round-robin on a fixed tick. Each
green runs its configured minimum unless a pedestrian call was latched
before green onset, in which case the green extends (up to max green) so
the WALK and pedestrian clearance intervals fit; pedestrian clearance may
finish during yellow when max green caps the extension.

State transitions are pure functions over an immutable state: the same
(state, plan, call schedule) always yields the same trajectory bit-exact.
``ControllerHost`` wraps a current state behind a lock for callers that
interact asynchronously (the wire-protocol agent).
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, replace
from pathlib import Path

GREEN = "GREEN"
YELLOW = "YELLOW"
ALL_RED = "ALL_RED"

WALK = "WALK"
FLASHING_DONT_WALK = "FLASHING_DONT_WALK"
DONT_WALK = "DONT_WALK"

# Minimum usable crossing speed assumed when checking clearance times (m/s).
CLEARANCE_WALK_SPEED_MPS = 1.2

MIN_WALK_S = 4.0


class PlanError(ValueError):
    """Malformed or inconsistent timing plan."""


class UnknownPhaseError(KeyError):
    """Pedestrian call addressed to a phase the plan does not define."""


@dataclass(frozen=True)
class PhaseConfig:
    phase_id: int
    min_green_s: float
    max_green_s: float
    yellow_s: float
    all_red_s: float
    walk_s: float
    ped_clearance_s: float

    def __post_init__(self) -> None:
        if not isinstance(self.phase_id, int) or self.phase_id <= 0:
            raise PlanError(f"phase_id must be a positive integer, got {self.phase_id!r}")
        for name in ("min_green_s", "max_green_s", "yellow_s", "all_red_s",
                     "walk_s", "ped_clearance_s"):
            if getattr(self, name) <= 0:
                raise PlanError(f"phase {self.phase_id}: {name} must be > 0")
        if self.min_green_s > self.max_green_s:
            raise PlanError(f"phase {self.phase_id}: min_green_s exceeds max_green_s")
        if self.walk_s < MIN_WALK_S:
            raise PlanError(f"phase {self.phase_id}: walk_s must be >= {MIN_WALK_S} s")
        if self.walk_s > self.max_green_s:
            raise PlanError(f"phase {self.phase_id}: walk_s cannot exceed max_green_s")
        if self.walk_s + self.ped_clearance_s > self.max_green_s + self.yellow_s:
            raise PlanError(
                f"phase {self.phase_id}: walk + ped_clearance "
                f"({self.walk_s + self.ped_clearance_s} s) cannot finish within "
                f"max green + yellow ({self.max_green_s + self.yellow_s} s)"
            )


@dataclass(frozen=True)
class TimingPlan:
    phases: tuple[PhaseConfig, ...]
    tick_s: float = 0.1

    def __post_init__(self) -> None:
        if self.tick_s <= 0:
            raise PlanError(f"tick_s must be > 0, got {self.tick_s}")
        if len(self.phases) < 2:
            raise PlanError(f"plan needs >= 2 phases, got {len(self.phases)}")
        ids = [p.phase_id for p in self.phases]
        if len(set(ids)) != len(ids):
            raise PlanError(f"duplicate phase ids in {ids}")

    def phase(self, phase_id: int) -> PhaseConfig:
        for p in self.phases:
            if p.phase_id == phase_id:
                return p
        raise UnknownPhaseError(phase_id)

    def phase_ids(self) -> tuple[int, ...]:
        return tuple(p.phase_id for p in self.phases)

    def ticks(self, seconds: float) -> int:
        return max(1, round(seconds / self.tick_s))

    def cycle_s(self) -> float:
        """Upper bound on one full rotation: sum of max green + yellow + all-red."""
        return sum(p.max_green_s + p.yellow_s + p.all_red_s for p in self.phases)


@dataclass(frozen=True)
class ControllerState:
    """One controller's complete timing state at a tick boundary."""

    active_index: int
    interval: str
    interval_ticks: int
    green_target_ticks: int
    walk_ticks: tuple[int, ...]       # remaining WALK ticks, by plan phase order
    fdw_ticks: tuple[int, ...]        # remaining clearance ticks, by plan phase order
    latched: tuple[bool, ...]         # pending pedestrian calls, by plan phase order

    def active_phase(self, plan: TimingPlan) -> int:
        return plan.phases[self.active_index].phase_id

    def interval_elapsed_s(self, plan: TimingPlan) -> float:
        return self.interval_ticks * plan.tick_s

    def ped_indication(self, plan: TimingPlan, phase_id: int) -> str:
        i = plan.phase_ids().index(phase_id)
        if self.walk_ticks[i] > 0:
            return WALK
        if self.fdw_ticks[i] > 0:
            return FLASHING_DONT_WALK
        return DONT_WALK

    def remaining_walk_s(self, plan: TimingPlan, phase_id: int) -> float:
        i = plan.phase_ids().index(phase_id)
        return self.walk_ticks[i] * plan.tick_s


@dataclass(frozen=True)
class SignalSnapshot:
    """Pure projection of controller state for displays and the client."""

    timestamp_s: float
    active_phase: int
    interval: str
    ped_indication: dict[int, str]
    remaining_walk_s: float


def _green_target(plan: TimingPlan, index: int, serve_ped: bool) -> int:
    cfg = plan.phases[index]
    min_g = plan.ticks(cfg.min_green_s)
    if not serve_ped:
        return min_g
    service = plan.ticks(cfg.walk_s) + plan.ticks(cfg.ped_clearance_s)
    return min(max(min_g, service), plan.ticks(cfg.max_green_s))


def initial_state(plan: TimingPlan) -> ControllerState:
    n = len(plan.phases)
    return ControllerState(
        active_index=0,
        interval=GREEN,
        interval_ticks=0,
        green_target_ticks=_green_target(plan, 0, serve_ped=False),
        walk_ticks=(0,) * n,
        fdw_ticks=(0,) * n,
        latched=(False,) * n,
    )


def place_ped_call(state: ControllerState, plan: TimingPlan, phase_id: int) -> ControllerState:
    """Latch a pedestrian call; idempotent, cleared only at WALK onset."""
    if phase_id not in plan.phase_ids():
        raise UnknownPhaseError(phase_id)
    i = plan.phase_ids().index(phase_id)
    if state.latched[i]:
        return state
    latched = list(state.latched)
    latched[i] = True
    return replace(state, latched=tuple(latched))


def tick(state: ControllerState, plan: TimingPlan) -> ControllerState:
    """Advance one fixed step."""
    walk = list(state.walk_ticks)
    fdw = list(state.fdw_ticks)
    for i, cfg in enumerate(plan.phases):
        if walk[i] > 0:
            walk[i] -= 1
            if walk[i] == 0:
                fdw[i] = plan.ticks(cfg.ped_clearance_s)
        elif fdw[i] > 0:
            fdw[i] -= 1

    idx = state.active_index
    interval = state.interval
    elapsed = state.interval_ticks + 1
    target = state.green_target_ticks
    latched = list(state.latched)
    cfg = plan.phases[idx]

    if interval == GREEN and elapsed >= target:
        interval, elapsed = YELLOW, 0
    elif interval == YELLOW and elapsed >= plan.ticks(cfg.yellow_s):
        interval, elapsed = ALL_RED, 0
    elif interval == ALL_RED and elapsed >= plan.ticks(cfg.all_red_s):
        idx = (idx + 1) % len(plan.phases)
        interval, elapsed = GREEN, 0
        serve = latched[idx]
        target = _green_target(plan, idx, serve_ped=serve)
        if serve:
            latched[idx] = False
            walk[idx] = plan.ticks(plan.phases[idx].walk_s)
            fdw[idx] = 0

    return ControllerState(
        active_index=idx,
        interval=interval,
        interval_ticks=elapsed,
        green_target_ticks=target,
        walk_ticks=tuple(walk),
        fdw_ticks=tuple(fdw),
        latched=tuple(latched),
    )


def snapshot(state: ControllerState, plan: TimingPlan, timestamp_s: float = 0.0) -> SignalSnapshot:
    indications = {pid: state.ped_indication(plan, pid) for pid in plan.phase_ids()}
    return SignalSnapshot(
        timestamp_s=timestamp_s,
        active_phase=state.active_phase(plan),
        interval=state.interval,
        ped_indication=indications,
        remaining_walk_s=state.remaining_walk_s(plan, state.active_phase(plan)),
    )


DEFAULT_PLAN = TimingPlan(
    phases=(
        PhaseConfig(1, min_green_s=10.0, max_green_s=40.0, yellow_s=3.0,
                    all_red_s=2.0, walk_s=7.0, ped_clearance_s=11.0),
        PhaseConfig(2, min_green_s=10.0, max_green_s=40.0, yellow_s=3.0,
                    all_red_s=2.0, walk_s=7.0, ped_clearance_s=11.0),
    ),
    tick_s=0.1,
)


def loads_plan(text: str) -> TimingPlan:
    """Parse a timing plan document; see load_plan() for the schema."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise PlanError(f"timing plan is not valid JSON: {e}") from e
    if not isinstance(doc, dict) or not isinstance(doc.get("phases"), list):
        raise PlanError("timing plan must be an object with a 'phases' list")
    phases = []
    for i, obj in enumerate(doc["phases"]):
        if not isinstance(obj, dict):
            raise PlanError(f"phases[{i}]: expected an object")
        try:
            phases.append(
                PhaseConfig(
                    phase_id=obj["phase_id"],
                    min_green_s=float(obj["min_green_s"]),
                    max_green_s=float(obj["max_green_s"]),
                    yellow_s=float(obj["yellow_s"]),
                    all_red_s=float(obj["all_red_s"]),
                    walk_s=float(obj["walk_s"]),
                    ped_clearance_s=float(obj["ped_clearance_s"]),
                )
            )
        except KeyError as e:
            raise PlanError(f"phases[{i}]: missing field {e}") from None
    return TimingPlan(phases=tuple(phases), tick_s=float(doc.get("tick_s", 0.1)))


def load_plan(path: str | Path) -> TimingPlan:
    """Load a timing plan file.

    Schema (JSON)::

        {"tick_s": s, "phases": [{
            "phase_id": int, "min_green_s": s, "max_green_s": s,
            "yellow_s": s, "all_red_s": s, "walk_s": s,
            "ped_clearance_s": s}, ...]}
    """
    return loads_plan(Path(path).read_text())


def check_leg_clearance(plan: TimingPlan, phase_id: int, crossing_length_m: float) -> None:
    """Reject binding a crosswalk to a phase whose clearance is too short."""
    cfg = plan.phase(phase_id)
    needed = crossing_length_m / CLEARANCE_WALK_SPEED_MPS
    if cfg.ped_clearance_s < needed:
        raise PlanError(
            f"phase {phase_id}: ped_clearance {cfg.ped_clearance_s} s is shorter than "
            f"{needed:.1f} s needed for a {crossing_length_m} m crossing"
        )


class ControllerHost:
    """Owns a live controller state; serializes ticks and external calls.

    The wire-protocol agent mutates and reads through this host from its
    receive thread while the simulation loop advances ticks.
    """

    def __init__(self, plan: TimingPlan):
        self.plan = plan
        self._state = initial_state(plan)
        self._lock = threading.Lock()
        self._ticks = 0

    @property
    def state(self) -> ControllerState:
        with self._lock:
            return self._state

    @property
    def time_s(self) -> float:
        with self._lock:
            return self._ticks * self.plan.tick_s

    def tick(self) -> ControllerState:
        with self._lock:
            self._state = tick(self._state, self.plan)
            self._ticks += 1
            return self._state

    def place_ped_call(self, phase_id: int) -> None:
        with self._lock:
            self._state = place_ped_call(self._state, self.plan, phase_id)

    def snapshot(self) -> SignalSnapshot:
        with self._lock:
            return snapshot(self._state, self.plan, self._ticks * self.plan.tick_s)

    def reset(self) -> None:
        with self._lock:
            self._state = initial_state(self.plan)
            self._ticks = 0
