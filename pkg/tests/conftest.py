"""Shared builders for scenario-level tests."""

import copy
import json
from importlib import resources

import pytest

from vgd.sim import scenario as sc


def data_path(name: str) -> str:
    return str(resources.files("vgd.data").joinpath(name))


INLINE_PLAN = {
    "tick_s": 0.1,
    "phases": [
        {"phase_id": 1, "min_green_s": 10.0, "max_green_s": 40.0, "yellow_s": 3.0,
         "all_red_s": 2.0, "walk_s": 7.0, "ped_clearance_s": 11.0},
        {"phase_id": 2, "min_green_s": 10.0, "max_green_s": 40.0, "yellow_s": 3.0,
         "all_red_s": 2.0, "walk_s": 7.0, "ped_clearance_s": 11.0},
    ],
}

# Center matches the shipped corpus; route runs due north of it.
CENTER = {"lat": 40.7424, "lon": -74.179}

INLINE_CORPUS = {
    "intersections": [
        {
            "id": "test-x",
            "name": "Test Crossing",
            "center": CENTER,
            "legs": [
                {"street_name": "North St", "entry": {"lat": 40.742478, "lon": -74.178941},
                 "heading_deg": 0.0, "length_m": 12.0, "ped_phase": 2},
                {"street_name": "East St", "entry": {"lat": 40.742355, "lon": -74.178897},
                 "heading_deg": 90.0, "length_m": 12.0, "ped_phase": 1},
            ],
        }
    ]
}


def scenario_doc(**overrides) -> dict:
    doc = {
        "name": "test-scenario",
        "corpus": copy.deepcopy(INLINE_CORPUS),
        "timing_plan": copy.deepcopy(INLINE_PLAN),
        "route": [
            {"lat": 40.74292610241279, "lon": -74.17899999999997},  # 58.5 m out
            {"lat": 40.74248993203638, "lon": -74.17899999999997},  # 10 m out
        ],
        "walk_speed_mps": 1.2,
        "fix_interval_s": 1.0,
        "tick_s": 0.1,
        "seed": 11,
        "arrival_radius_m": 15.0,
        "error_model": {"mode": "ENHANCED", "noise_sigma_m": 0.0, "bias_tables": {}},
        "reference_points": [],
        "script": [],
    }
    doc.update(overrides)
    return doc


def make_scenario(**overrides) -> sc.Scenario:
    return sc.loads(json.dumps(scenario_doc(**overrides)))


@pytest.fixture
def crossing_script():
    return [
        {"t": 52.0, "kind": "SHORT_TAP"},
        {"t": 54.0, "kind": "SHORT_TAP"},
        {"t": 56.0, "kind": "LONG_TAP"},
    ]
