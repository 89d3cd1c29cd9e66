"""Timestamped event stream emitted by scenario runs.

Serialized as line-delimited JSON with sorted keys so identical runs
produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

FIX_TRUE = "FIX_TRUE"
FIX_MEASURED = "FIX_MEASURED"
ANNOUNCE = "ANNOUNCE"
WIRE_TX = "WIRE_TX"
WIRE_RX = "WIRE_RX"
SIGNAL = "SIGNAL"
METRIC = "METRIC"

CATEGORIES = (FIX_TRUE, FIX_MEASURED, ANNOUNCE, WIRE_TX, WIRE_RX, SIGNAL, METRIC)


class EventLogError(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    time_s: float
    category: str
    payload: dict

    def __post_init__(self) -> None:
        if self.category not in CATEGORIES:
            raise EventLogError(f"unknown event category {self.category!r}")


class EventLog:
    """Append-only, time-ordered event record."""

    def __init__(self, events: list[Event] | None = None):
        self.events: list[Event] = []
        for e in events or []:
            self.append(e)

    def append(self, event: Event) -> None:
        if self.events and event.time_s < self.events[-1].time_s:
            raise EventLogError(
                f"event at {event.time_s} s before log tail {self.events[-1].time_s} s"
            )
        self.events.append(event)

    def add(self, time_s: float, category: str, payload: dict) -> None:
        self.append(Event(time_s, category, payload))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def filter(self, category: str) -> list[Event]:
        return [e for e in self.events if e.category == category]

    def announcements(self) -> list[Event]:
        return self.filter(ANNOUNCE)

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps(
                {"t": e.time_s, "category": e.category, "payload": e.payload},
                sort_keys=True,
                separators=(",", ":"),
            )
            + "\n"
            for e in self.events
        )

    def announcements_jsonl(self) -> str:
        """The announcement transcript: one record per ANNOUNCE event."""
        return "".join(
            json.dumps(e.payload, sort_keys=True, separators=(",", ":")) + "\n"
            for e in self.announcements()
        )

    @classmethod
    def from_jsonl(cls, text: str) -> "EventLog":
        log = cls()
        for i, line in enumerate(text.splitlines()):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                log.append(Event(obj["t"], obj["category"], obj["payload"]))
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise EventLogError(f"line {i + 1}: {e}") from e
        return log
