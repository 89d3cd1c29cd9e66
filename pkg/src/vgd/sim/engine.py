"""Fixed-step co-simulation: pedestrian, GPS error, client, wire, controller.

One engine owns one controller host (served by a real UDP agent on
loopback), one wire manager, and one client. Every step advances one tick:

    1. due script taps and queued interactive actions (wire calls happen
       synchronously here, so their WIRE_TX/WIRE_RX records land in order)
    2. a GPS fix when due (true + measured positions, client location event)
    3. signal snapshot, SIGNAL change record, client signal event
    4. controller tick
    5. pedestrian kinematics (approach, then the selected crossing once the
       client reports the walk sign plus any reaction delay)

Identical (scenario, seed) pairs produce byte-identical event logs: all
timestamps are simulation time, random draws come from one seeded stream,
and wire request ids count from 1 per run.
"""

from __future__ import annotations

import random
from collections import deque

from .. import client as vc
from .. import controller as ctl
from .. import geo
from ..geo import GeoPoint
from ..intersections import Intersection
from ..ntcip import (
    CallRejected,
    NO_ERROR,
    ObjectRegistry,
    UdpAgent,
    UdpManager,
    encode,
)
from ..ntcip import objects as ntcip_objects
from . import events as ev
from .events import EventLog
from .scenario import LONG_TAP, SHORT_TAP, Scenario

WALK_TOGGLE = "WALK_TOGGLE"
ACTION_KINDS = (SHORT_TAP, LONG_TAP, WALK_TOGGLE)


class _Route:
    """Arc-length addressable polyline over great-circle segments."""

    def __init__(self, waypoints: tuple[GeoPoint, ...]):
        self.points = waypoints
        self.seg_lengths = [
            geo.distance(a, b) for a, b in zip(waypoints, waypoints[1:])
        ]
        self.cum = [0.0]
        for length in self.seg_lengths:
            self.cum.append(self.cum[-1] + length)
        self.total_m = self.cum[-1]

    def point_at(self, walked_m: float) -> GeoPoint:
        s = min(max(walked_m, 0.0), self.total_m)
        if s <= 0.0:
            return self.points[0]
        if s >= self.total_m:
            return self.points[-1]
        for i, seg_len in enumerate(self.seg_lengths):
            if s <= self.cum[i + 1]:
                offset = s - self.cum[i]
                if offset == 0.0:
                    return self.points[i]
                heading = geo.bearing(self.points[i], self.points[i + 1])
                return geo.destination(self.points[i], heading, offset)
        return self.points[-1]


def displace_along_track(
    center: GeoPoint,
    true_point: GeoPoint,
    true_distance_m: float,
    deviation_m: float,
) -> GeoPoint:
    """Move a fix along the ray from the intersection center through the
    true position so its distance reads ``true + deviation`` (floored at 0)."""
    if true_distance_m < 1e-9:
        return true_point
    measured_d = max(0.0, true_distance_m + deviation_m)
    outward = geo.bearing(center, true_point)
    return geo.destination(center, outward, measured_d)


def measured_position(scenario: Scenario, t: float, rng: random.Random | None = None) -> GeoPoint:
    """One measured fix for the pedestrian's position at time ``t``.

    Assumes uninterrupted walking from the route start (the scripted
    kinematics). With a nonzero noise sigma, repeated calls draw fresh
    noise from ``rng`` (seeded from the scenario when omitted).

    Raises:
        ScenarioError: when ``t`` is outside the scenario horizon.
    """
    from .scenario import ScenarioError

    if not 0 <= t <= scenario.horizon_s():
        raise ScenarioError(f"t={t} s outside scenario horizon {scenario.horizon_s()} s")
    route = _Route(scenario.route)
    target = scenario.registry.nearest_intersection(scenario.route[-1])[0]
    true_point = route.point_at(scenario.walk_speed_mps * t)
    true_d = geo.distance(true_point, target.center)
    deviation = scenario.error_model().sample_deviation(
        true_d, rng if rng is not None else random.Random(scenario.seed)
    )
    return displace_along_track(target.center, true_point, true_d, deviation)


class _LoggingCallPlacer:
    """Manager facade that records wire traffic into the event log."""

    def __init__(self, manager: UdpManager, log: EventLog, clock):
        self.manager = manager
        self.log = log
        self.clock = clock

    def place_call(self, phase_id: int):
        req = self.manager.build_place_call(phase_id)
        self.log.add(self.clock(), ev.WIRE_TX, {
            "pdu": req.pdu_type,
            "request_id": req.request_id,
            "oid": str(req.varbinds[0].oid),
            "value": 1,
            "hex": encode(req).hex(),
        })
        resp = self.manager.request(req)  # ControllerUnreachable propagates
        self.log.add(self.clock(), ev.WIRE_RX, {
            "pdu": resp.pdu_type,
            "request_id": resp.request_id,
            "error_status": resp.error_status,
            "error_index": resp.error_index,
            "hex": encode(resp).hex(),
        })
        if resp.error_status != NO_ERROR:
            raise CallRejected(resp.error_status, resp.error_index)
        return resp


class Engine:
    """Stepwise co-simulation of one scenario."""

    def __init__(
        self,
        scenario: Scenario,
        start_walking: bool = True,
        community: bytes = ntcip_objects.DEFAULT_COMMUNITY,
    ):
        self.scenario = scenario
        self.plan = scenario.plan
        self.registry = scenario.registry
        self.log = EventLog()

        # Ephemeral agent port: engines must coexist (parallel sessions/tests).
        self.host = ctl.ControllerHost(self.plan)
        self.agent = UdpAgent(
            self.host, ObjectRegistry(self.plan), community=community, port=0
        ).start()
        self.manager = UdpManager(self.agent.endpoint, community=community)
        self.placer = _LoggingCallPlacer(self.manager, self.log, lambda: self.time_s)
        self.client = vc.VgdClient(
            self.registry, self.placer, arrival_radius_m=scenario.arrival_radius_m
        )

        self.rng = random.Random(scenario.seed)
        self.error_model = scenario.error_model()
        self.route = _Route(scenario.route)
        self.target: Intersection = self.registry.nearest_intersection(
            scenario.route[-1]
        )[0]

        self.tick_index = 0
        self.fix_every = max(1, round(scenario.fix_interval_s / scenario.tick_s))
        self._script = [
            (round(e.time_s / scenario.tick_s), e.kind) for e in scenario.script
        ]
        self._script_i = 0
        self._actions: deque[str] = deque()

        self.walking = start_walking
        self.walked_m = 0.0
        self.position = scenario.route[0]
        self.route_done = False
        self.crossing_origin: GeoPoint | None = None
        self.crossing_walked = 0.0
        self.crossing_done = False
        self.walk_started_t: float | None = None
        self.last_true_fix: dict | None = None
        self.last_measured_fix: dict | None = None
        self.announcements: list[dict] = []
        self._prev_signal_key = None

    # -- lifecycle -----------------------------------------------------------

    def close(self) -> None:
        self.manager.close()
        self.agent.stop()

    def __enter__(self) -> "Engine":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- accessors -----------------------------------------------------------

    @property
    def time_s(self) -> float:
        # Rounded so tick timestamps stay clean multiples of the tick.
        return round(self.tick_index * self.scenario.tick_s, 9)

    def enqueue_action(self, kind: str) -> None:
        if kind not in ACTION_KINDS:
            raise ValueError(f"unknown action {kind!r}")
        self._actions.append(kind)

    # -- stepping ------------------------------------------------------------

    def step(self) -> None:
        t = self.time_s
        self._process_taps(t)
        if self.tick_index % self.fix_every == 0:
            self._fix(t)
        self._signal(t)
        self.host.tick()
        self._kinematics(t)
        self.tick_index += 1

    def run_to_end(self) -> EventLog:
        for _ in range(self.scenario.total_ticks()):
            self.step()
        return self.log

    # -- internals -------------------------------------------------------------

    def _announce(self, anns: list[vc.Announcement]) -> None:
        for a in anns:
            record = a.record()
            self.announcements.append(record)
            self.log.add(a.timestamp_s, ev.ANNOUNCE, record)

    def _dispatch_tap(self, t: float, kind: str) -> None:
        if kind == SHORT_TAP:
            self._announce(self.client.on_short_tap(t))
        elif kind == LONG_TAP:
            self._announce(self.client.on_long_tap(t))
        elif kind == WALK_TOGGLE:
            self.walking = not self.walking

    def _process_taps(self, t: float) -> None:
        while (
            self._script_i < len(self._script)
            and self._script[self._script_i][0] <= self.tick_index
        ):
            self._dispatch_tap(t, self._script[self._script_i][1])
            self._script_i += 1
        while self._actions:
            self._dispatch_tap(t, self._actions.popleft())

    def _fix(self, t: float) -> None:
        p = self.position
        true_d = geo.distance(p, self.target.center)
        self.last_true_fix = {
            "lat": p.lat_deg, "lon": p.lon_deg, "distance_m": true_d,
        }
        self.log.add(t, ev.FIX_TRUE, self.last_true_fix)

        measured = self.measured_from(p, true_d)
        measured_d = geo.distance(measured, self.target.center)
        self.last_measured_fix = {
            "lat": measured.lat_deg, "lon": measured.lon_deg, "distance_m": measured_d,
        }
        self.log.add(t, ev.FIX_MEASURED, self.last_measured_fix)
        self._announce(self.client.on_location(t, measured))

    def measured_from(self, true_point: GeoPoint, true_distance_m: float) -> GeoPoint:
        """Displace a true position along-track per the active error model."""
        deviation = self.error_model.sample_deviation(true_distance_m, self.rng)
        return displace_along_track(
            self.target.center, true_point, true_distance_m, deviation
        )

    def _signal(self, t: float) -> None:
        snap = ctl.snapshot(self.host.state, self.plan, t)
        key = (snap.active_phase, snap.interval, tuple(sorted(snap.ped_indication.items())))
        if key != self._prev_signal_key:
            self._prev_signal_key = key
            self.log.add(t, ev.SIGNAL, {
                "active_phase": snap.active_phase,
                "interval": snap.interval,
                "ped": {str(pid): ind for pid, ind in sorted(snap.ped_indication.items())},
                "remaining_walk_s": snap.remaining_walk_s,
            })
        was_crossing = self.client.state.mode == vc.CROSSING
        self._announce(self.client.on_signal(t, snap))
        if not was_crossing and self.client.state.mode == vc.CROSSING:
            self.walk_started_t = t

    def _kinematics(self, t: float) -> None:
        step_m = self.scenario.walk_speed_mps * self.scenario.tick_s

        if not self.route_done:
            if self.walking:
                self.walked_m += step_m
                if self.walked_m >= self.route.total_m:
                    self.walked_m = self.route.total_m
                    self.route_done = True
                    self.log.add(t, ev.METRIC, {
                        "metric": "route_complete",
                        "walked_m": self.route.total_m,
                    })
                self.position = self.route.point_at(self.walked_m)
            return

        # Crossing: gated on the client's walk-sign state plus reaction delay.
        if self.crossing_done or self.client.state.mode not in (vc.CROSSING, vc.DONE):
            return
        leg = self.client.state.selected_leg
        if leg is None or self.walk_started_t is None:
            return
        if t < self.walk_started_t + self.scenario.start_delay_s or not self.walking:
            return
        if self.crossing_origin is None:
            self.crossing_origin = self.position
            self.log.add(t, ev.METRIC, {
                "metric": "crossing_start",
                "street": leg.street_name,
                "ped_phase": leg.ped_phase,
            })
        self.crossing_walked += step_m
        if self.crossing_walked >= leg.crossing_length_m:
            self.crossing_walked = leg.crossing_length_m
            self.crossing_done = True
        self.position = geo.destination(
            self.crossing_origin, leg.crossing_heading, self.crossing_walked
        )
        if self.crossing_done:
            self.log.add(t, ev.METRIC, {
                "metric": "crossing_complete",
                "street": leg.street_name,
                "crossed_m": leg.crossing_length_m,
            })

    # -- service support -------------------------------------------------------

    def snapshot_bundle(self) -> dict:
        snap = ctl.snapshot(self.host.state, self.plan, self.time_s)
        return {
            "time_s": self.time_s,
            "scenario": self.scenario.name,
            "client_mode": self.client.state.mode,
            "walking": self.walking,
            "pedestrian": {
                "lat": self.position.lat_deg,
                "lon": self.position.lon_deg,
                "true_fix": self.last_true_fix,
                "measured_fix": self.last_measured_fix,
            },
            "signal": {
                "active_phase": snap.active_phase,
                "interval": snap.interval,
                "ped": {str(pid): ind for pid, ind in sorted(snap.ped_indication.items())},
                "remaining_walk_s": snap.remaining_walk_s,
            },
            "selected_street": (
                self.client.state.selected_leg.street_name
                if self.client.state.selected_leg else None
            ),
        }


def run(scenario: Scenario, start_walking: bool = True) -> EventLog:
    """Run a scenario to its horizon; returns the complete event log."""
    with Engine(scenario, start_walking=start_walking) as engine:
        return engine.run_to_end()
