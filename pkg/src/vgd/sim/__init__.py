"""Deterministic scenario engine, event log, and reports."""

from .engine import Engine, measured_position, run  # noqa: F401
from .events import Event, EventLog, EventLogError  # noqa: F401
from .report import (  # noqa: F401
    CrossingMetrics,
    DeviationReport,
    crossing_metrics,
    deviation_report,
)
from .scenario import (  # noqa: F401
    ENHANCED,
    GPS_ONLY,
    GpsErrorModel,
    Scenario,
    ScenarioError,
    TapEvent,
    load,
    loads,
)
