"""Acceptance suite: one test per release criterion, with pinned tolerances.

Run with ``pytest -v -s tests/test_acceptance.py`` to see one PASS line
per criterion.
"""

import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import data_path
from vgd import controller as ctl
from vgd import geo
from vgd import sim
from vgd.geo import GeoPoint
from vgd.ntcip import DecodeError, decode, encode
from vgd.sim import events as ev
from vgd.sim import scenario as sc
from test_geo import ORACLE_PAIRS
from test_ntcip_codec import GOLDEN_DIR, GOLDEN_MESSAGES, random_message

DEV_TOL_M = 0.1
DEV_TOL_PP = 0.005  # 0.5 percentage points


def ok(line: str) -> None:
    print(f"ACCEPTANCE PASS: {line}")


class TestDeviationCalibration:
    def test_deviation_calibration_both_modes(self):
        t0 = time.monotonic()
        scenario = sc.load(data_path("deviation_walk.json"))

        enhanced = sim.deviation_report(
            sim.run(scenario), scenario.reference_points, mode="ENHANCED")
        gps = sim.deviation_report(
            sim.run(scenario.with_mode(sc.GPS_ONLY)), scenario.reference_points,
            mode="GPS_ONLY")
        elapsed = time.monotonic() - t0

        assert enhanced.entry("start").deviation_m == pytest.approx(-18.0, abs=DEV_TOL_M)
        assert enhanced.entry("#2").deviation_m == pytest.approx(-1.7, abs=DEV_TOL_M)
        assert enhanced.entry("#2").deviation_pct == pytest.approx(-0.05, abs=DEV_TOL_PP)
        assert enhanced.entry("#3").deviation_m == pytest.approx(-2.9, abs=DEV_TOL_M)
        assert enhanced.entry("#3").deviation_pct == pytest.approx(-0.08, abs=DEV_TOL_PP)

        assert gps.entry("start").deviation_m == pytest.approx(-14.8, abs=DEV_TOL_M)
        assert gps.entry("#2").deviation_pct == pytest.approx(+0.05, abs=DEV_TOL_PP)
        assert gps.entry("#3").deviation_pct == pytest.approx(-0.12, abs=DEV_TOL_PP)

        assert elapsed < 5.0, f"deviation walks took {elapsed:.2f} s, limit 5 s"
        ok(f"deviation calibration reproduced in both modes ({elapsed:.2f} s)")


class TestAnnouncementProtocol:
    def test_600m_approach_bands_and_transcript_stability(self):
        scenario = sc.load(data_path("approach_600m.json"))
        logs = [sim.run(scenario) for _ in range(3)]
        transcripts = [log.announcements_jsonl() for log in logs]
        assert transcripts[0] == transcripts[1] == transcripts[2]

        log = logs[0]
        announcements = log.announcements()
        distance = [a for a in announcements if a.payload["kind"] == "DISTANCE"]
        arrival = [a for a in announcements if a.payload["kind"] == "ARRIVAL"]
        assert len(announcements) == 6
        assert [a.payload["payload"]["band_m"] for a in distance] == [500, 400, 300, 200, 100]
        assert len(arrival) == 1

        fixes = {e.time_s: e.payload["distance_m"] for e in log.filter(ev.FIX_MEASURED)}
        for a in announcements:
            assert fixes[a.time_s] <= 500.0 + 1e-9
        ok("600 m approach: five distance bands, one arrival, transcript "
           "byte-stable across 3 runs")


class TestEndToEndActuation:
    def test_taps_place_call_and_walk_follows(self):
        t0 = time.monotonic()
        scenario = sc.load(data_path("crossing_demo.json"))
        log = sim.run(scenario)
        elapsed = time.monotonic() - t0

        sequence = {}
        for i, e in enumerate(log):
            if e.category == ev.WIRE_TX and e.payload["pdu"] == "SetRequest" \
                    and "tx" not in sequence:
                assert e.payload["oid"].startswith("1.3.6.1.4.1.1206.99.1.")
                sequence["tx"] = (i, e.time_s)
            elif e.category == ev.WIRE_RX and e.payload["error_status"] == 0 \
                    and "rx" not in sequence:
                sequence["rx"] = (i, e.time_s)
            elif e.category == ev.ANNOUNCE and e.payload["kind"] == "CALL_CONFIRMED" \
                    and "confirmed" not in sequence:
                selected_phase = e.payload["payload"]["ped_phase"]
                sequence["confirmed"] = (i, e.time_s)
            elif e.category == ev.SIGNAL and "confirmed" in sequence \
                    and "walk" not in sequence \
                    and e.payload["ped"].get(str(selected_phase)) == "WALK":
                sequence["walk"] = (i, e.time_s)
            elif e.category == ev.ANNOUNCE and e.payload["kind"] == "WALK_START" \
                    and "walk_start" not in sequence:
                sequence["walk_start"] = (i, e.time_s)

        order = ["tx", "rx", "confirmed", "walk", "walk_start"]
        assert all(k in sequence for k in order), f"missing events: {sequence}"
        indices = [sequence[k][0] for k in order]
        assert indices == sorted(indices), f"events out of causal order: {sequence}"
        call_to_walk = sequence["walk"][1] - sequence["tx"][1]
        assert call_to_walk <= scenario.plan.cycle_s()
        assert elapsed < 10.0, f"actuation run took {elapsed:.2f} s, limit 10 s"
        ok(f"end-to-end actuation in causal order, call->WALK {call_to_walk:.1f} s "
           f"({elapsed:.2f} s)")


class TestCodecProperties:
    def test_roundtrip_fuzz_and_golden(self):
        rng = random.Random(20240817)
        for _ in range(1000):
            message = random_message(rng)
            assert decode(encode(message)) == message

        fuzz = random.Random(321)
        for _ in range(10_000):
            blob = bytes(fuzz.randrange(256) for _ in range(fuzz.randint(0, 100)))
            try:
                decode(blob)
            except DecodeError:
                pass

        for name, expected in GOLDEN_MESSAGES.items():
            raw = bytes.fromhex((GOLDEN_DIR / f"{name}.hex").read_text().strip())
            assert decode(raw) == expected, name
            assert encode(expected) == raw, name
        ok("codec: 1000 roundtrips, 10000 fuzz inputs, all golden dumps bit-exact")


class TestControllerSafety:
    def test_hundred_thousand_ticks_randomized_calls(self):
        plan = ctl.DEFAULT_PLAN
        cycle_ticks = round(plan.cycle_s() / plan.tick_s)
        total = 0
        for seed in range(20):
            rng = random.Random(seed)
            state = ctl.initial_state(plan)
            pending: dict[int, int] = {}
            for t in range(5000):
                if rng.random() < 0.02:
                    phase = rng.choice(plan.phase_ids())
                    state = ctl.place_ped_call(state, plan, phase)
                    pending.setdefault(phase, t)
                state = ctl.tick(state, plan)
                total += 1
                walking = [pid for pid in plan.phase_ids()
                           if state.ped_indication(plan, pid) == ctl.WALK]
                assert len(walking) <= 1, "two WALK indications at once"
                if walking:
                    assert walking[0] == state.active_phase(plan)
                    assert state.interval == ctl.GREEN
                for pid in list(pending):
                    if state.ped_indication(plan, pid) == ctl.WALK:
                        assert t - pending[pid] <= cycle_ticks, \
                            f"seed {seed}: phase {pid} waited past one cycle"
                        del pending[pid]
            for pid, placed in pending.items():
                assert 5000 - placed <= cycle_ticks, f"seed {seed} starved phase {pid}"
        assert total >= 100_000
        ok(f"controller safety held over {total} ticks across 20 seeds")


class TestGeoOracle:
    def test_25_frozen_pairs(self):
        assert len(ORACLE_PAIRS) == 25
        for lat1, lon1, lat2, lon2, dist_m, brg_deg in ORACLE_PAIRS:
            a, b = GeoPoint(lat1, lon1), GeoPoint(lat2, lon2)
            assert geo.distance(a, b) == pytest.approx(dist_m, rel=1e-4)
            diff = abs((geo.bearing(a, b).deg - brg_deg + 180.0) % 360.0 - 180.0)
            assert diff <= 0.01
        ok("geo: 25 extended-precision oracle pairs within 0.01% / 0.01 deg")


class TestDeterminism:
    def test_byte_identical_logs_across_processes(self, tmp_path):
        outputs = []
        for run_dir in ("a", "b"):
            out = tmp_path / run_dir
            result = subprocess.run(
                [sys.executable, "-m", "vgd", "run",
                 "--scenario", "crossing_demo", "--out", str(out)],
                capture_output=True, text=True, timeout=120,
                cwd=str(Path(__file__).parent.parent),
            )
            assert result.returncode == 0, result.stderr
            outputs.append((out / "events.jsonl").read_bytes())
        assert outputs[0] == outputs[1]
        assert len(outputs[0]) > 0
        ok("determinism: two process invocations produced byte-identical event logs")
