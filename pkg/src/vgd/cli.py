"""Command-line entry points: run, serve, report, validate."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path

from . import controller as ctl
from . import intersections
from .service.http_api import VgdService
from .service.session import INTERACTIVE, SessionStore
from .sim import crossing_metrics, deviation_report, run as run_scenario
from .sim import scenario as sc
from .sim.events import EventLog

MODE_FLAGS = {"gps": sc.GPS_ONLY, "enhanced": sc.ENHANCED}


def resolve_scenario_path(ref: str) -> Path:
    """A filesystem path, or the name of a scenario shipped in vgd.data."""
    p = Path(ref)
    if p.exists():
        return p
    name = ref if ref.endswith(".json") else f"{ref}.json"
    packaged = resources.files("vgd.data").joinpath(name)
    if packaged.is_file():
        return Path(str(packaged))
    raise FileNotFoundError(f"no scenario file or shipped scenario named {ref!r}")


def load_scenario(args) -> sc.Scenario:
    scenario = sc.load(resolve_scenario_path(args.scenario))
    if getattr(args, "seed", None) is not None:
        scenario = replace(scenario, seed=args.seed)
    if getattr(args, "mode", None):
        scenario = scenario.with_mode(MODE_FLAGS[args.mode])
    return scenario


def cmd_run(args) -> int:
    scenario = load_scenario(args)
    log = run_scenario(scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "events.jsonl").write_text(log.to_jsonl())
    (out / "announcements.jsonl").write_text(log.announcements_jsonl())

    metrics = crossing_metrics(log)
    (out / "metrics.json").write_text(metrics.to_json())

    if scenario.reference_points:
        report = deviation_report(log, scenario.reference_points, mode=scenario.gps_mode)
        (out / "deviation.txt").write_text(report.to_text())
        (out / "deviation.json").write_text(report.to_json())
        (out / "deviation.csv").write_text(report.to_csv())
        print(report.to_text())
    print(f"{scenario.name}: {len(log)} events, "
          f"{len(log.announcements())} announcements -> {out}")
    if metrics.complete:
        print(f"crossing complete: call->walk {metrics.call_to_walk_s:.1f} s, "
              f"cycle {metrics.crossing_cycle_s:.1f} s, "
              f"start within walk: {metrics.start_within_walk}")
    return 0


def cmd_serve(args) -> int:
    scenario = load_scenario(args)
    store = SessionStore()
    session = store.create(scenario, mode=INTERACTIVE, speed=args.speed)
    console_dir = Path(args.console_dir) if args.console_dir else None
    if console_dir is not None and not console_dir.is_dir():
        print(f"console dir {console_dir} not found", file=sys.stderr)
        return 2
    service = VgdService(store, console_dir=console_dir, port=args.port)
    print(f"session {session.id} ({scenario.name}) at http://127.0.0.1:{service.port}/",
          flush=True)
    print("POST /api/sessions/%s/start to begin; Ctrl-C to stop" % session.id, flush=True)
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        service.stop()
    return 0


def cmd_report(args) -> int:
    log = EventLog.from_jsonl(Path(args.log).read_text())
    scenario = load_scenario(args) if args.scenario else None
    if scenario is not None and scenario.reference_points:
        report = deviation_report(log, scenario.reference_points, mode=scenario.gps_mode)
        print(report.to_text())
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / "deviation.txt").write_text(report.to_text())
            (out / "deviation.json").write_text(report.to_json())
            (out / "deviation.csv").write_text(report.to_csv())
    metrics = crossing_metrics(log)
    print(metrics.to_json())
    return 0


def cmd_validate(args) -> int:
    failures = []
    if args.scenario:
        try:
            scenario = sc.load(resolve_scenario_path(args.scenario))
            print(f"scenario ok: {scenario.name} "
                  f"({len(scenario.route)} waypoints, {scenario.total_ticks()} ticks)")
        except (sc.ScenarioError, FileNotFoundError) as e:
            failures.append(f"scenario: {e}")
    if args.corpus:
        try:
            registry = intersections.load(args.corpus)
            print(f"corpus ok: {len(registry)} intersections")
        except (intersections.CorpusError, OSError) as e:
            failures.append(f"corpus: {e}")
    if args.plan:
        try:
            plan = ctl.load_plan(args.plan)
            print(f"timing plan ok: {len(plan.phases)} phases, cycle <= {plan.cycle_s()} s")
        except (ctl.PlanError, OSError) as e:
            failures.append(f"timing plan: {e}")
    if not (args.scenario or args.corpus or args.plan):
        failures.append("nothing to validate: pass --scenario, --corpus, or --plan")
    for f in failures:
        print(f"INVALID {f}", file=sys.stderr)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vgd",
        description="Virtual guide dog: simulated accessible pedestrian signal stack",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scripted scenario and write logs/reports")
    p_run.add_argument("--scenario", required=True,
                       help="scenario file path or shipped name (e.g. crossing_demo)")
    p_run.add_argument("--seed", type=int, default=None, help="override scenario seed")
    p_run.add_argument("--mode", choices=sorted(MODE_FLAGS), default=None,
                       help="override GPS error mode")
    p_run.add_argument("--out", default="out", help="output directory")
    p_run.set_defaults(func=cmd_run)

    p_serve = sub.add_parser("serve", help="host an interactive session over HTTP")
    p_serve.add_argument("--scenario", required=True)
    p_serve.add_argument("--seed", type=int, default=None)
    p_serve.add_argument("--mode", choices=sorted(MODE_FLAGS), default=None)
    p_serve.add_argument("--port", type=int, default=8700)
    p_serve.add_argument("--speed", type=float, default=1.0,
                         help="wall-clock speed factor for the session loop")
    p_serve.add_argument("--console-dir", default=None,
                         help="directory with the built browser console")
    p_serve.set_defaults(func=cmd_serve)

    p_report = sub.add_parser("report", help="recompute reports from a saved event log")
    p_report.add_argument("--log", required=True, help="events.jsonl from a previous run")
    p_report.add_argument("--scenario", default=None,
                          help="scenario (for reference points and mode)")
    p_report.add_argument("--seed", type=int, default=None)
    p_report.add_argument("--mode", choices=sorted(MODE_FLAGS), default=None)
    p_report.add_argument("--out", default=None)
    p_report.set_defaults(func=cmd_report)

    p_val = sub.add_parser("validate", help="lint scenario, corpus, or timing plan files")
    p_val.add_argument("--scenario", default=None)
    p_val.add_argument("--corpus", default=None)
    p_val.add_argument("--plan", default=None)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
