"""Scenario documents: route, error model, script, and validation.

A scenario binds an intersection corpus and timing plan to a walked route
with a GPS error model. The error model displaces each fix along-track by
a distance-dependent bias plus optional Gaussian noise; the bias is a
piecewise-linear function of remaining distance to the intersection,
clamped at the table ends. Negative bias means the fix reads closer to
the intersection than ground truth.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .. import controller as ctl
from .. import geo
from ..geo import GeoPoint
from ..intersections import CorpusError, Registry, loads as load_corpus

GPS_ONLY = "GPS_ONLY"
ENHANCED = "ENHANCED"
GPS_MODES = (GPS_ONLY, ENHANCED)

SHORT_TAP = "SHORT_TAP"
LONG_TAP = "LONG_TAP"
TAP_KINDS = (SHORT_TAP, LONG_TAP)


class ScenarioError(ValueError):
    """Scenario document rejected before any stepping."""


@dataclass(frozen=True)
class GpsErrorModel:
    """Along-track bias table plus noise level for one positioning mode."""

    mode: str
    bias_table: tuple[tuple[float, float], ...]  # (remaining_m, bias_m), decreasing
    noise_sigma_m: float = 0.0

    def __post_init__(self) -> None:
        if self.mode not in GPS_MODES:
            raise ScenarioError(f"gps mode must be one of {GPS_MODES}, got {self.mode!r}")
        if not math.isfinite(self.noise_sigma_m) or self.noise_sigma_m < 0:
            raise ScenarioError(f"noise sigma must be finite and >= 0, got {self.noise_sigma_m}")
        distances = [d for d, _ in self.bias_table]
        if any(d2 >= d1 for d1, d2 in zip(distances, distances[1:])):
            raise ScenarioError(f"bias table distances must strictly decrease, got {distances}")
        for d, b in self.bias_table:
            if not (math.isfinite(d) and math.isfinite(b)):
                raise ScenarioError("bias table entries must be finite")

    def bias_at(self, remaining_m: float) -> float:
        """Piecewise-linear bias, clamped beyond the table ends."""
        table = self.bias_table
        if not table:
            return 0.0
        if remaining_m >= table[0][0]:
            return table[0][1]
        if remaining_m <= table[-1][0]:
            return table[-1][1]
        for (d1, b1), (d2, b2) in zip(table, table[1:]):
            if d2 <= remaining_m <= d1:
                frac = (d1 - remaining_m) / (d1 - d2)
                return b1 + frac * (b2 - b1)
        raise AssertionError("unreachable: table is ordered")

    def sample_deviation(self, remaining_m: float, rng) -> float:
        """One measured-minus-true deviation draw at this remaining distance.

        With sigma 0 the random stream is untouched, so seeds do not matter.
        """
        dev = self.bias_at(remaining_m)
        if self.noise_sigma_m > 0:
            dev += rng.gauss(0.0, self.noise_sigma_m)
        return dev


@dataclass(frozen=True)
class TapEvent:
    time_s: float
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in TAP_KINDS:
            raise ScenarioError(f"tap kind must be one of {TAP_KINDS}, got {self.kind!r}")
        if self.time_s < 0:
            raise ScenarioError(f"tap time must be >= 0, got {self.time_s}")


@dataclass(frozen=True)
class Scenario:
    name: str
    registry: Registry
    plan: ctl.TimingPlan
    route: tuple[GeoPoint, ...]
    walk_speed_mps: float = 1.2
    fix_interval_s: float = 1.0
    tick_s: float = 0.1
    seed: int = 0
    arrival_radius_m: float = geo.DEFAULT_ARRIVAL_RADIUS_M
    gps_mode: str = ENHANCED
    noise_sigma_m: float = 0.0
    bias_tables: dict = field(default_factory=dict)  # mode -> ((remaining, bias), ...)
    reference_points: tuple[tuple[str, float], ...] = ()
    script: tuple[TapEvent, ...] = ()
    start_delay_s: float = 0.0
    duration_s: float | None = None

    def __post_init__(self) -> None:
        if len(self.route) < 2:
            raise ScenarioError(f"route needs >= 2 waypoints, got {len(self.route)}")
        if self.walk_speed_mps <= 0:
            raise ScenarioError(f"walk speed must be > 0, got {self.walk_speed_mps}")
        if self.tick_s <= 0:
            raise ScenarioError(f"tick must be > 0, got {self.tick_s}")
        if self.fix_interval_s < self.tick_s:
            raise ScenarioError(
                f"fix interval {self.fix_interval_s} s must be >= tick {self.tick_s} s"
            )
        if abs(self.plan.tick_s - self.tick_s) > 1e-12:
            raise ScenarioError(
                f"scenario tick {self.tick_s} s differs from plan tick {self.plan.tick_s} s"
            )
        if not -(2**63) <= self.seed < 2**63:
            raise ScenarioError("seed must fit in 64 bits")
        if self.arrival_radius_m <= 0:
            raise ScenarioError("arrival radius must be > 0")
        if self.start_delay_s < 0:
            raise ScenarioError("start delay must be >= 0")
        if self.duration_s is not None and self.duration_s <= 0:
            raise ScenarioError("duration must be > 0 when given")
        if len(self.registry) == 0:
            raise ScenarioError("scenario corpus has no intersections")
        # Crosswalks must be servable by the plan they are bound to.
        for x in self.registry:
            for leg in x.legs:
                if leg.ped_phase not in self.plan.phase_ids():
                    raise ScenarioError(
                        f"intersection '{x.id}' leg '{leg.street_name}' binds unknown "
                        f"phase {leg.ped_phase}"
                    )
                try:
                    ctl.check_leg_clearance(self.plan, leg.ped_phase, leg.crossing_length_m)
                except ctl.PlanError as e:
                    raise ScenarioError(f"intersection '{x.id}': {e}") from e
        for mode in self.bias_tables:
            if mode not in GPS_MODES:
                raise ScenarioError(f"bias table for unknown mode {mode!r}")
        self.error_model()  # validates the active table
        times = [e.time_s for e in self.script]
        if times != sorted(times):
            raise ScenarioError("script events must be time-ordered")
        for label, d in self.reference_points:
            if not label or d < 0:
                raise ScenarioError(f"bad reference point ({label!r}, {d})")

    def error_model(self, mode: str | None = None) -> GpsErrorModel:
        mode = mode or self.gps_mode
        table = tuple(tuple(row) for row in self.bias_tables.get(mode, ()))
        return GpsErrorModel(mode, table, self.noise_sigma_m)

    def with_mode(self, mode: str) -> "Scenario":
        if mode not in GPS_MODES:
            raise ScenarioError(f"gps mode must be one of {GPS_MODES}, got {mode!r}")
        return replace(self, gps_mode=mode)

    def route_length_m(self) -> float:
        return sum(
            geo.distance(a, b) for a, b in zip(self.route, self.route[1:])
        )

    def horizon_s(self) -> float:
        """Fixed run length: explicit duration or a generous derived bound."""
        if self.duration_s is not None:
            return self.duration_s
        walk_time = self.route_length_m() / self.walk_speed_mps
        script_tail = max((e.time_s for e in self.script), default=0.0)
        longest_leg = max(
            (leg.crossing_length_m for x in self.registry for leg in x.legs),
            default=0.0,
        )
        crossing_time = self.start_delay_s + longest_leg / self.walk_speed_mps
        return max(walk_time, script_tail) + self.plan.cycle_s() + crossing_time + 30.0

    def total_ticks(self) -> int:
        return int(math.ceil(self.horizon_s() / self.tick_s))


def _resolve_section(doc: dict, key: str, base_dir: Path | None, loader):
    """A section is either inline (object) or a file reference (string)."""
    section = doc.get(key)
    if section is None:
        raise ScenarioError(f"scenario missing '{key}'")
    if isinstance(section, str):
        path = Path(section)
        if not path.is_absolute():
            if base_dir is None:
                raise ScenarioError(f"'{key}' is a relative path but scenario has no directory")
            path = base_dir / path
        try:
            text = path.read_text()
        except OSError as e:
            raise ScenarioError(f"cannot read {key} file {path}: {e}") from e
        return loader(text)
    return loader(json.dumps(section))


def loads(text: str, base_dir: str | Path | None = None) -> Scenario:
    """Parse a scenario document; see load() for the schema."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"scenario is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ScenarioError("scenario root must be an object")
    base = Path(base_dir) if base_dir is not None else None

    try:
        registry = _resolve_section(doc, "corpus", base, load_corpus)
    except CorpusError as e:
        raise ScenarioError(f"corpus: {e}") from e
    try:
        plan = _resolve_section(doc, "timing_plan", base, ctl.loads_plan)
    except ctl.PlanError as e:
        raise ScenarioError(f"timing_plan: {e}") from e

    route_raw = doc.get("route")
    if not isinstance(route_raw, list):
        raise ScenarioError("scenario.route: expected a list of waypoints")
    route = []
    for i, wp in enumerate(route_raw):
        try:
            route.append(GeoPoint(float(wp["lat"]), float(wp["lon"])))
        except (KeyError, TypeError, ValueError, geo.GeoError) as e:
            raise ScenarioError(f"scenario.route[{i}]: {e}") from e

    em = doc.get("error_model", {})
    if not isinstance(em, dict):
        raise ScenarioError("scenario.error_model: expected an object")
    bias_tables = {}
    for mode, rows in (em.get("bias_tables") or {}).items():
        try:
            bias_tables[mode] = tuple((float(d), float(b)) for d, b in rows)
        except (TypeError, ValueError) as e:
            raise ScenarioError(f"error_model.bias_tables[{mode!r}]: {e}") from e

    script = []
    for i, ev in enumerate(doc.get("script", [])):
        try:
            script.append(TapEvent(float(ev["t"]), str(ev["kind"])))
        except (KeyError, TypeError, ValueError) as e:
            raise ScenarioError(f"scenario.script[{i}]: {e}") from e

    refs = []
    for i, row in enumerate(doc.get("reference_points", [])):
        try:
            label, dist = row
            refs.append((str(label), float(dist)))
        except (TypeError, ValueError) as e:
            raise ScenarioError(f"scenario.reference_points[{i}]: {e}") from e

    duration = doc.get("duration_s")
    return Scenario(
        name=str(doc.get("name", "scenario")),
        registry=registry,
        plan=plan,
        route=tuple(route),
        walk_speed_mps=float(doc.get("walk_speed_mps", 1.2)),
        fix_interval_s=float(doc.get("fix_interval_s", 1.0)),
        tick_s=float(doc.get("tick_s", 0.1)),
        seed=int(doc.get("seed", 0)),
        arrival_radius_m=float(doc.get("arrival_radius_m", geo.DEFAULT_ARRIVAL_RADIUS_M)),
        gps_mode=str(em.get("mode", ENHANCED)),
        noise_sigma_m=float(em.get("noise_sigma_m", 0.0)),
        bias_tables=bias_tables,
        reference_points=tuple(refs),
        script=tuple(script),
        start_delay_s=float(doc.get("start_delay_s", 0.0)),
        duration_s=float(duration) if duration is not None else None,
    )


def load(path: str | Path) -> Scenario:
    """Load a scenario file; corpus/timing_plan may be inline or relative paths.

    Schema (JSON)::

        {"name": str,
         "corpus": "corpus.json" | {...inline corpus...},
         "timing_plan": "plan.json" | {...inline plan...},
         "route": [{"lat": deg, "lon": deg}, ...],
         "walk_speed_mps": m/s, "fix_interval_s": s, "tick_s": s,
         "seed": int, "arrival_radius_m": m,
         "error_model": {"mode": "ENHANCED"|"GPS_ONLY", "noise_sigma_m": m,
                         "bias_tables": {"ENHANCED": [[remaining_m, bias_m], ...],
                                         "GPS_ONLY": [[remaining_m, bias_m], ...]}},
         "reference_points": [["label", distance_m], ...],
         "script": [{"t": s, "kind": "SHORT_TAP"|"LONG_TAP"}, ...],
         "start_delay_s": s, "duration_s": s | null}
    """
    p = Path(path)
    return loads(p.read_text(), base_dir=p.parent)
