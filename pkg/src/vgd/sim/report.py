"""Reports computed from event logs: distance deviations and crossing metrics.

Deviation sign convention: deviation = measured - true, so negative means
the measured fix read closer to the intersection than ground truth.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import events as ev
from .events import EventLog

# A reference point counts as reached only if some fix's true distance
# comes at least this close to it.
MATCH_TOLERANCE_M = 3.0


@dataclass(frozen=True)
class DeviationEntry:
    label: str
    reference_m: float
    true_m: float | None
    measured_m: float | None
    deviation_m: float | None
    deviation_pct: float | None

    @property
    def missing(self) -> bool:
        return self.true_m is None


@dataclass(frozen=True)
class DeviationReport:
    mode: str
    entries: tuple[DeviationEntry, ...]

    def entry(self, label: str) -> DeviationEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def to_text(self) -> str:
        lines = [
            f"Distance deviation report ({self.mode})",
            f"{'point':>8}  {'ref m':>8}  {'true m':>8}  {'meas m':>8}  "
            f"{'dev m':>8}  {'dev %':>8}",
        ]
        for e in self.entries:
            if e.missing:
                lines.append(f"{e.label:>8}  {e.reference_m:>8.1f}  {'-- not reached --':>38}")
            else:
                lines.append(
                    f"{e.label:>8}  {e.reference_m:>8.1f}  {e.true_m:>8.2f}  "
                    f"{e.measured_m:>8.2f}  {e.deviation_m:>+8.2f}  "
                    f"{100.0 * e.deviation_pct:>+7.1f}%"
                )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "mode": self.mode,
            "entries": [
                {
                    "label": e.label,
                    "reference_m": e.reference_m,
                    "true_m": e.true_m,
                    "measured_m": e.measured_m,
                    "deviation_m": e.deviation_m,
                    "deviation_pct": e.deviation_pct,
                }
                for e in self.entries
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        """Plot-data export: reference point, mode, deviation m, deviation %."""
        lines = ["reference_point,mode,deviation_m,deviation_pct"]
        for e in self.entries:
            if e.missing:
                lines.append(f"{e.label},{self.mode},,")
            else:
                lines.append(
                    f"{e.label},{self.mode},{e.deviation_m:.3f},{100.0 * e.deviation_pct:.2f}"
                )
        return "\n".join(lines) + "\n"


def deviation_report(
    log: EventLog,
    reference_points: tuple[tuple[str, float], ...],
    mode: str = "",
) -> DeviationReport:
    """Pair true and measured distances at the fixes nearest each reference.

    Reference points whose nearest fix is farther than MATCH_TOLERANCE_M in
    true distance are marked missing (never reached).
    """
    true_fixes = log.filter(ev.FIX_TRUE)
    measured_fixes = log.filter(ev.FIX_MEASURED)
    pairs = [
        (t.payload["distance_m"], m.payload["distance_m"])
        for t, m in zip(true_fixes, measured_fixes)
        if t.time_s == m.time_s
    ]
    entries = []
    for label, ref_m in reference_points:
        best = None
        for true_m, measured_m in pairs:
            gap = abs(true_m - ref_m)
            if best is None or gap < best[0]:
                best = (gap, true_m, measured_m)
        if best is None or best[0] > MATCH_TOLERANCE_M:
            entries.append(DeviationEntry(label, ref_m, None, None, None, None))
            continue
        _, true_m, measured_m = best
        deviation = measured_m - true_m
        pct = deviation / true_m if true_m > 0 else None
        entries.append(DeviationEntry(label, ref_m, true_m, measured_m, deviation, pct))
    return DeviationReport(mode=mode, entries=tuple(entries))


@dataclass(frozen=True)
class CrossingMetrics:
    complete: bool
    arrival_announce_s: float | None = None
    call_sent_s: float | None = None
    walk_onset_s: float | None = None
    walk_end_s: float | None = None
    step_off_s: float | None = None
    crossing_complete_s: float | None = None
    call_to_walk_s: float | None = None
    crossing_cycle_s: float | None = None
    start_within_walk: bool | None = None
    notes: tuple[str, ...] = ()

    def to_json(self) -> str:
        doc = {k: getattr(self, k) for k in (
            "complete", "arrival_announce_s", "call_sent_s", "walk_onset_s",
            "walk_end_s", "step_off_s", "crossing_complete_s", "call_to_walk_s",
            "crossing_cycle_s", "start_within_walk",
        )}
        doc["notes"] = list(self.notes)
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def crossing_metrics(log: EventLog) -> CrossingMetrics:
    """Score one crossing cycle from the log's wire, signal, and metric records."""
    notes = []

    def first_announce(kind: str):
        for e in log.announcements():
            if e.payload.get("kind") == kind:
                return e
        return None

    arrival = first_announce("ARRIVAL")
    confirmed = first_announce("CALL_CONFIRMED")

    acked_ids = {
        e.payload["request_id"]
        for e in log.filter(ev.WIRE_RX)
        if e.payload.get("error_status") == 0
    }
    call_sent = next(
        (e for e in log.filter(ev.WIRE_TX)
         if e.payload.get("pdu") == "SetRequest"
         and e.payload.get("request_id") in acked_ids),
        None,
    )

    phase = confirmed.payload["payload"]["ped_phase"] if confirmed else None
    walk_onset = walk_end = None
    if phase is not None and call_sent is not None:
        for e in log.filter(ev.SIGNAL):
            indication = e.payload["ped"].get(str(phase))
            if walk_onset is None:
                if e.time_s >= call_sent.time_s and indication == "WALK":
                    walk_onset = e.time_s
            elif indication != "WALK":
                walk_end = e.time_s
                break

    def first_metric(name: str):
        for e in log.filter(ev.METRIC):
            if e.payload.get("metric") == name:
                return e
        return None

    step_off = first_metric("crossing_start")
    done = first_metric("crossing_complete")

    for label, value in (
        ("no arrival announcement", arrival),
        ("no acknowledged pedestrian call", call_sent),
        ("walk interval never started", walk_onset),
        ("pedestrian never stepped off", step_off),
        ("crossing never completed", done),
    ):
        if value is None:
            notes.append(label)

    complete = not notes
    return CrossingMetrics(
        complete=complete,
        arrival_announce_s=arrival.time_s if arrival else None,
        call_sent_s=call_sent.time_s if call_sent else None,
        walk_onset_s=walk_onset,
        walk_end_s=walk_end,
        step_off_s=step_off.time_s if step_off else None,
        crossing_complete_s=done.time_s if done else None,
        call_to_walk_s=(
            walk_onset - call_sent.time_s
            if walk_onset is not None and call_sent is not None else None
        ),
        crossing_cycle_s=(
            done.time_s - arrival.time_s
            if done is not None and arrival is not None else None
        ),
        start_within_walk=(
            walk_onset <= step_off.time_s <= (walk_end if walk_end is not None else float("inf"))
            if step_off is not None and walk_onset is not None else None
        ),
        notes=tuple(notes),
    )
