"""Session host: one engine per session, advanced by a clock loop.

A SCRIPTED session free-runs to the scenario horizon; an INTERACTIVE
session advances in wall time scaled by a speed factor and accepts tap
and walk-toggle actions. All engine mutations are serialized through the
session lock, and every tick publishes an immutable snapshot bundle, so
polls between ticks return identical views.
"""

from __future__ import annotations

import itertools
import threading
import time

from ..sim.engine import Engine, WALK_TOGGLE
from ..sim.scenario import LONG_TAP, SHORT_TAP, Scenario

SCRIPTED = "SCRIPTED"
INTERACTIVE = "INTERACTIVE"

READY = "READY"
RUNNING = "RUNNING"
PAUSED = "PAUSED"
FINISHED = "FINISHED"

RESET = "RESET"
ACTION_KINDS = (SHORT_TAP, LONG_TAP, WALK_TOGGLE, RESET)

ANNOUNCEMENT_WINDOW = 20


class SessionError(ValueError):
    """Invalid action or transition for the session's current status."""


class Session:
    def __init__(
        self,
        session_id: str,
        scenario: Scenario,
        mode: str = INTERACTIVE,
        speed: float = 1.0,
    ):
        if mode not in (SCRIPTED, INTERACTIVE):
            raise SessionError(f"unknown session mode {mode!r}")
        if speed <= 0:
            raise SessionError(f"speed factor must be > 0, got {speed}")
        self.id = session_id
        self.scenario = scenario
        self.mode = mode
        self.speed = speed
        self.status = READY
        self._lock = threading.RLock()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self._engine = self._build_engine()
        self._published = self._bundle()

    def _build_engine(self) -> Engine:
        # Interactive pedestrians stand still until the user toggles walking.
        return Engine(self.scenario, start_walking=(self.mode == SCRIPTED))

    def _bundle(self) -> dict:
        bundle = self._engine.snapshot_bundle()
        bundle["session_id"] = self.id
        bundle["status"] = self.status
        bundle["mode"] = self.mode
        bundle["speed"] = self.speed
        bundle["announcements"] = list(self._engine.announcements[-ANNOUNCEMENT_WINDOW:])
        return bundle

    def _publish(self) -> None:
        self._published = self._bundle()

    # -- control -------------------------------------------------------------

    def start(self) -> str:
        with self._lock:
            if self.status == FINISHED:
                raise SessionError("session is finished; reset it to run again")
            if self.status == RUNNING:
                return self.status
            self.status = RUNNING
            self._publish()
        if self._thread is None or not self._thread.is_alive():
            self._stop.clear()
            self._thread = threading.Thread(
                target=self._loop, name=f"session-{self.id}", daemon=True
            )
            self._thread.start()
        return RUNNING

    def pause(self) -> str:
        with self._lock:
            if self.status != RUNNING:
                raise SessionError(f"cannot pause a {self.status} session")
            self.status = PAUSED
            self._publish()
        return PAUSED

    def reset(self) -> str:
        self._stop.set()
        thread = self._thread
        if thread is not None and thread is not threading.current_thread():
            thread.join(timeout=5.0)
        with self._lock:
            self._engine.close()
            self._engine = self._build_engine()
            self.status = READY
            self._publish()
        return READY

    def close(self) -> None:
        self._stop.set()
        if self._thread is not None and self._thread.is_alive():
            self._thread.join(timeout=5.0)
        with self._lock:
            self._engine.close()

    # -- actions & queries -----------------------------------------------------

    def submit_action(self, kind: str) -> dict:
        if kind not in ACTION_KINDS:
            raise SessionError(f"unknown action kind {kind!r}")
        if kind == RESET:
            self.reset()
            return {"accepted": True, "kind": kind, "status": self.status}
        with self._lock:
            if self.status != RUNNING:
                raise SessionError(f"cannot accept {kind} while {self.status}")
            self._engine.enqueue_action(kind)
            return {"accepted": True, "kind": kind, "time_s": self._engine.time_s}

    def snapshot(self) -> dict:
        with self._lock:
            return self._published

    def announcements(self, limit: int | None = None) -> list[dict]:
        with self._lock:
            records = list(self._engine.announcements)
        return records if limit is None else records[-limit:]

    def event_log_jsonl(self) -> str:
        with self._lock:
            return self._engine.log.to_jsonl()

    def summary(self) -> dict:
        return {
            "id": self.id,
            "scenario": self.scenario.name,
            "mode": self.mode,
            "status": self.status,
            "speed": self.speed,
        }

    # -- loop ------------------------------------------------------------------

    def _loop(self) -> None:
        total = self.scenario.total_ticks()
        wall_step = self.scenario.tick_s / self.speed
        while not self._stop.is_set():
            with self._lock:
                if self.status != RUNNING:
                    return
                if self._engine.tick_index >= total:
                    self.status = FINISHED
                    self._publish()
                    return
                self._engine.step()
                self._publish()
            if self.mode == INTERACTIVE:
                time.sleep(wall_step)


class SessionStore:
    """Registry of live sessions."""

    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._ids = itertools.count(1)
        self._lock = threading.Lock()

    def create(self, scenario: Scenario, mode: str = INTERACTIVE,
               speed: float = 1.0) -> Session:
        with self._lock:
            session = Session(f"s{next(self._ids)}", scenario, mode=mode, speed=speed)
            self._sessions[session.id] = session
            return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise SessionError(f"unknown session {session_id!r}") from None

    def list(self) -> list[dict]:
        with self._lock:
            return [s.summary() for s in self._sessions.values()]

    def close_all(self) -> None:
        with self._lock:
            sessions = list(self._sessions.values())
            self._sessions.clear()
        for s in sessions:
            s.close()
