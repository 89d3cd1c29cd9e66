"""Pedestrian client: event-driven state machine producing announcements.

Consumes location fixes, tap gestures, signal snapshots, and attitude
samples one at a time (single logical event loop, never accessed
concurrently) and emits structured announcements — the text that a
spoken interface would read out. Pedestrian calls go out through an
injected manager so the state machine stays transport-agnostic.

Within one approach the mode only moves forward:

    FAR -> APPROACHING -> AT_INTERSECTION -> CALL_PLACED -> CROSSING -> DONE

GPS jitter can re-cross a distance band without re-announcing it, and only
an explicit reset() rewinds the machine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol

from . import controller as ctl
from . import geo
from .geo import GeoPoint, Heading
from .intersections import CrossingLeg, Intersection, Registry, crossing_options

FAR = "FAR"
APPROACHING = "APPROACHING"
AT_INTERSECTION = "AT_INTERSECTION"
CALL_PLACED = "CALL_PLACED"
CROSSING = "CROSSING"
DONE = "DONE"

DISTANCE = "DISTANCE"
ARRIVAL = "ARRIVAL"
OPTION = "OPTION"
TURN_GUIDANCE = "TURN_GUIDANCE"
CALL_CONFIRMED = "CALL_CONFIRMED"
WALK_START = "WALK_START"
REMAINING_TIME = "REMAINING_TIME"
CLEARANCE_WARNING = "CLEARANCE_WARNING"
ERROR = "ERROR"

DEFAULT_ALIGNMENT_TOLERANCE_DEG = 5.0
DEFAULT_TILT_LIMIT_DEG = 30.0

GUIDANCE_INVALID = "INVALID"
GUIDANCE_ALIGNED = "ALIGNED"
GUIDANCE_TURN = "TURN"


class CallPlacer(Protocol):
    """The slice of the wire manager the client needs."""

    def place_call(self, phase_id: int): ...


@dataclass(frozen=True)
class Announcement:
    timestamp_s: float
    kind: str
    text: str
    payload: dict

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("announcement text must be non-empty")

    def record(self) -> dict:
        return {
            "t": self.timestamp_s,
            "kind": self.kind,
            "text": self.text,
            "payload": self.payload,
        }


@dataclass(frozen=True)
class AttitudeSample:
    heading: Heading
    pitch_deg: float
    roll_deg: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.pitch_deg <= 90.0:
            raise ValueError(f"pitch {self.pitch_deg} outside [-90, 90]")
        if not -180.0 <= self.roll_deg <= 180.0:
            raise ValueError(f"roll {self.roll_deg} outside [-180, 180]")


@dataclass(frozen=True)
class Guidance:
    """Outcome of a heading check: turn instruction, aligned, or untrusted."""

    kind: str
    turn_deg: float = 0.0
    direction: str | None = None


def heading_guidance(
    sample: AttitudeSample,
    target: Heading,
    tilt_limit_deg: float = DEFAULT_TILT_LIMIT_DEG,
    alignment_tolerance_deg: float = DEFAULT_ALIGNMENT_TOLERANCE_DEG,
) -> Guidance:
    """Turn instruction toward ``target``, or INVALID when the compass
    cannot be trusted because the device is tilted past the limit."""
    if abs(sample.pitch_deg) > tilt_limit_deg or abs(sample.roll_deg) > tilt_limit_deg:
        return Guidance(GUIDANCE_INVALID)
    err = geo.heading_error(sample.heading, target)
    if abs(err) <= alignment_tolerance_deg:
        return Guidance(GUIDANCE_ALIGNED)
    return Guidance(GUIDANCE_TURN, turn_deg=err, direction="right" if err > 0 else "left")


@dataclass
class ClientState:
    mode: str = FAR
    target: Intersection | None = None
    announced_bands: set[int] = field(default_factory=set)
    selection_index: int | None = None
    selected_leg: CrossingLeg | None = None
    last_heading: Heading | None = None
    tilt_valid: bool = True
    last_distance_m: float | None = None
    clearance_warned: bool = False
    last_whole_second: int | None = None


class VgdClient:
    """One pedestrian's client instance bound to a registry and manager."""

    def __init__(
        self,
        registry: Registry,
        manager: CallPlacer,
        arrival_radius_m: float = geo.DEFAULT_ARRIVAL_RADIUS_M,
        alignment_tolerance_deg: float = DEFAULT_ALIGNMENT_TOLERANCE_DEG,
        tilt_limit_deg: float = DEFAULT_TILT_LIMIT_DEG,
    ):
        self.registry = registry
        self.manager = manager
        self.arrival_radius_m = arrival_radius_m
        self.alignment_tolerance_deg = alignment_tolerance_deg
        self.tilt_limit_deg = tilt_limit_deg
        self.state = ClientState()

    def reset(self) -> None:
        """Explicit rewind to FAR; the only allowed backward transition."""
        self.state = ClientState()

    # -- events ------------------------------------------------------------

    def on_location(self, t: float, fix: GeoPoint) -> list[Announcement]:
        s = self.state
        if s.mode in (AT_INTERSECTION, CALL_PLACED, CROSSING, DONE):
            return []
        if len(self.registry) == 0:
            return [Announcement(t, ERROR, "No intersections are loaded.", {})]

        if s.target is None or s.mode == FAR:
            s.target, d = self.registry.nearest_intersection(fix)
        else:
            d = geo.distance(fix, s.target.center)
        s.last_distance_m = d

        zone = geo.zone_of(d, self.arrival_radius_m)
        out: list[Announcement] = []
        if zone.kind == "ARRIVED":
            s.mode = AT_INTERSECTION
            streets = [leg.street_name for leg in s.target.legs]
            out.append(Announcement(
                t, ARRIVAL,
                f"Arrived at {s.target.name}. Crossings: {', '.join(streets)}. "
                "Short tap to hear options.",
                {"intersection_id": s.target.id, "streets": streets,
                 "distance_m": round(d)},
            ))
            return out

        for band in geo.BAND_THRESHOLDS_M:
            if d <= band and band not in s.announced_bands:
                s.announced_bands.add(band)
                out.append(Announcement(
                    t, DISTANCE,
                    f"{s.target.name} in {round(d)} meters.",
                    {"band_m": band, "distance_m": round(d),
                     "intersection_id": s.target.id},
                ))
        if zone.kind == "BAND" and s.mode == FAR:
            s.mode = APPROACHING
        return out

    def on_short_tap(self, t: float) -> list[Announcement]:
        s = self.state
        if s.mode != AT_INTERSECTION:
            return []
        options = crossing_options(s.target)
        s.selection_index = 0 if s.selection_index is None \
            else (s.selection_index + 1) % len(options)
        leg = options[s.selection_index]
        return [Announcement(
            t, OPTION,
            f"Cross {leg.street_name}, heading {leg.crossing_heading.deg:.0f} degrees. "
            "Long tap to request crossing.",
            {"index": s.selection_index, "street": leg.street_name,
             "heading_deg": leg.crossing_heading.deg, "ped_phase": leg.ped_phase},
        )]

    def on_long_tap(self, t: float) -> list[Announcement]:
        s = self.state
        if s.mode != AT_INTERSECTION or s.selection_index is None:
            return []
        leg = crossing_options(s.target)[s.selection_index]
        try:
            self.manager.place_call(leg.ped_phase)
        except Exception as e:
            return [Announcement(
                t, ERROR,
                f"Could not reach the signal controller for {leg.street_name}.",
                {"street": leg.street_name, "ped_phase": leg.ped_phase,
                 "reason": str(e)},
            )]
        s.selected_leg = leg
        s.mode = CALL_PLACED
        out = [Announcement(
            t, CALL_CONFIRMED,
            f"Crossing call placed for {leg.street_name}. Wait for the walk signal.",
            {"street": leg.street_name, "ped_phase": leg.ped_phase},
        )]
        out.append(self._turn_guidance(t, leg))
        return out

    def _turn_guidance(self, t: float, leg: CrossingLeg) -> Announcement:
        target = leg.crossing_heading
        if self.state.last_heading is not None and self.state.tilt_valid:
            err = geo.heading_error(self.state.last_heading, target)
            if abs(err) > self.alignment_tolerance_deg:
                word = "right" if err > 0 else "left"
                return Announcement(
                    t, TURN_GUIDANCE,
                    f"Turn {word} {abs(err):.0f} degrees to face {leg.street_name}.",
                    {"turn_deg": err, "direction": word,
                     "target_heading_deg": target.deg},
                )
        return Announcement(
            t, TURN_GUIDANCE,
            f"Face heading {target.deg:.0f} degrees to cross {leg.street_name}.",
            {"turn_deg": None, "direction": None, "target_heading_deg": target.deg},
        )

    def on_signal(self, t: float, snap: ctl.SignalSnapshot) -> list[Announcement]:
        s = self.state
        if s.mode not in (CALL_PLACED, CROSSING) or s.selected_leg is None:
            return []
        phase = s.selected_leg.ped_phase
        indication = snap.ped_indication.get(phase, ctl.DONT_WALK)
        out: list[Announcement] = []

        if s.mode == CALL_PLACED:
            if indication == ctl.WALK:
                s.mode = CROSSING
                s.clearance_warned = False
                whole = int(math.ceil(snap.remaining_walk_s - 1e-9))
                s.last_whole_second = whole
                out.append(Announcement(
                    t, WALK_START,
                    f"Walk sign is on. Safe to cross {s.selected_leg.street_name}.",
                    {"street": s.selected_leg.street_name, "ped_phase": phase},
                ))
                out.append(self._remaining(t, whole))
            return out

        # CROSSING: count down once per whole second of remaining walk.
        if indication == ctl.WALK:
            whole = int(math.ceil(snap.remaining_walk_s - 1e-9))
            if s.last_whole_second is not None and whole < s.last_whole_second:
                if whole >= 1:
                    out.append(self._remaining(t, whole))
                s.last_whole_second = whole
        elif indication == ctl.FLASHING_DONT_WALK:
            if not s.clearance_warned:
                s.clearance_warned = True
                out.append(Announcement(
                    t, CLEARANCE_WARNING,
                    "Flashing dont walk. Finish crossing.",
                    {"ped_phase": phase},
                ))
        else:  # DONT_WALK after the service: crossing window over
            s.mode = DONE
        return out

    def _remaining(self, t: float, whole: int) -> Announcement:
        return Announcement(
            t, REMAINING_TIME,
            f"{whole} seconds remaining.",
            {"seconds": whole},
        )

    def on_attitude(self, t: float, sample: AttitudeSample) -> list[Announcement]:
        s = self.state
        s.last_heading = sample.heading
        s.tilt_valid = (
            abs(sample.pitch_deg) <= self.tilt_limit_deg
            and abs(sample.roll_deg) <= self.tilt_limit_deg
        )
        if s.mode not in (CALL_PLACED, CROSSING) or s.selected_leg is None:
            return []
        guidance = heading_guidance(
            sample, s.selected_leg.crossing_heading,
            self.tilt_limit_deg, self.alignment_tolerance_deg,
        )
        if guidance.kind != GUIDANCE_TURN:
            return []
        word = guidance.direction
        return [Announcement(
            t, TURN_GUIDANCE,
            f"Turn {word} {abs(guidance.turn_deg):.0f} degrees to face "
            f"{s.selected_leg.street_name}.",
            {"turn_deg": guidance.turn_deg, "direction": word,
             "target_heading_deg": s.selected_leg.crossing_heading.deg},
        )]
