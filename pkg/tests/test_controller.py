"""Controller state machine tests.

Expected tick numbers in the hand-trace tests come from stepping the
default plan by hand: tick 0.1 s, per phase min green 100 ticks, yellow 30,
all red 20, walk 70, ped clearance 110; an unserved phase occupies
100+30+20 = 150 ticks, a ped-served green extends to 180 ticks.
"""

import random

import pytest

from vgd import controller as ctl
from vgd.controller import (
    ALL_RED,
    DEFAULT_PLAN,
    DONT_WALK,
    FLASHING_DONT_WALK,
    GREEN,
    WALK,
    YELLOW,
    PhaseConfig,
    PlanError,
    TimingPlan,
    UnknownPhaseError,
)


def step(state, n, plan=DEFAULT_PLAN):
    for _ in range(n):
        state = ctl.tick(state, plan)
    return state


class TestPlanValidation:
    def test_default_plan_is_valid(self):
        assert DEFAULT_PLAN.cycle_s() == 90.0

    def test_needs_two_phases(self):
        with pytest.raises(PlanError, match=">= 2 phases"):
            TimingPlan(phases=(DEFAULT_PLAN.phases[0],))

    def test_duplicate_phase_ids(self):
        with pytest.raises(PlanError, match="duplicate phase ids"):
            TimingPlan(phases=(DEFAULT_PLAN.phases[0], DEFAULT_PLAN.phases[0]))

    def test_min_green_bounded_by_max(self):
        with pytest.raises(PlanError, match="min_green_s exceeds"):
            PhaseConfig(1, 50.0, 40.0, 3.0, 2.0, 7.0, 11.0)

    def test_walk_minimum(self):
        with pytest.raises(PlanError, match="walk_s must be >="):
            PhaseConfig(1, 10.0, 40.0, 3.0, 2.0, 3.0, 11.0)

    def test_ped_service_must_fit_window(self):
        with pytest.raises(PlanError, match="cannot finish within"):
            PhaseConfig(1, 10.0, 12.0, 3.0, 2.0, 7.0, 11.0)

    def test_loads_plan_roundtrip(self):
        text = """
        {"tick_s": 0.1, "phases": [
          {"phase_id": 1, "min_green_s": 10, "max_green_s": 40, "yellow_s": 3,
           "all_red_s": 2, "walk_s": 7, "ped_clearance_s": 11},
          {"phase_id": 2, "min_green_s": 10, "max_green_s": 40, "yellow_s": 3,
           "all_red_s": 2, "walk_s": 7, "ped_clearance_s": 11}]}
        """
        assert ctl.loads_plan(text) == DEFAULT_PLAN

    def test_loads_plan_missing_field(self):
        with pytest.raises(PlanError, match="missing field"):
            ctl.loads_plan('{"phases": [{"phase_id": 1}]}')

    def test_leg_clearance_check(self):
        ctl.check_leg_clearance(DEFAULT_PLAN, 1, 12.0)
        with pytest.raises(PlanError, match="shorter than"):
            ctl.check_leg_clearance(DEFAULT_PLAN, 1, 14.0)


class TestUnactuatedCycle:
    def test_phase_runs_min_green_yellow_all_red(self):
        state = ctl.initial_state(DEFAULT_PLAN)
        assert (state.active_phase(DEFAULT_PLAN), state.interval) == (1, GREEN)
        state = step(state, 99)
        assert (state.active_phase(DEFAULT_PLAN), state.interval) == (1, GREEN)
        state = step(state, 1)  # tick 100
        assert (state.active_phase(DEFAULT_PLAN), state.interval) == (1, YELLOW)
        state = step(state, 30)  # tick 130
        assert (state.active_phase(DEFAULT_PLAN), state.interval) == (1, ALL_RED)
        state = step(state, 20)  # tick 150
        assert (state.active_phase(DEFAULT_PLAN), state.interval) == (2, GREEN)

    def test_ped_stays_dont_walk_without_calls(self):
        state = ctl.initial_state(DEFAULT_PLAN)
        for _ in range(1500):
            state = ctl.tick(state, DEFAULT_PLAN)
            assert state.ped_indication(DEFAULT_PLAN, 1) == DONT_WALK
            assert state.ped_indication(DEFAULT_PLAN, 2) == DONT_WALK


class TestPedService:
    def test_call_on_other_phase_served_at_next_green_onset(self):
        state = step(ctl.initial_state(DEFAULT_PLAN), 50)
        state = ctl.place_ped_call(state, DEFAULT_PLAN, 2)
        state = step(state, 99)  # tick 149: still ALL_RED of phase 1
        assert state.interval == ALL_RED
        assert state.ped_indication(DEFAULT_PLAN, 2) == DONT_WALK
        state = step(state, 1)  # tick 150: phase 2 green onset
        assert (state.active_phase(DEFAULT_PLAN), state.interval) == (2, GREEN)
        assert state.ped_indication(DEFAULT_PLAN, 2) == WALK
        assert state.remaining_walk_s(DEFAULT_PLAN, 2) == pytest.approx(7.0)
        assert state.latched == (False, False)

    def test_walk_then_clearance_then_dont_walk_with_green_extension(self):
        state = step(ctl.initial_state(DEFAULT_PLAN), 50)
        state = ctl.place_ped_call(state, DEFAULT_PLAN, 2)
        state = step(state, 100)  # tick 150: WALK onset
        state = step(state, 69)   # tick 219: last WALK tick
        assert state.ped_indication(DEFAULT_PLAN, 2) == WALK
        state = step(state, 1)    # tick 220: clearance begins
        assert state.ped_indication(DEFAULT_PLAN, 2) == FLASHING_DONT_WALK
        assert state.interval == GREEN
        state = step(state, 109)  # tick 329: last clearance tick, green still on
        assert state.ped_indication(DEFAULT_PLAN, 2) == FLASHING_DONT_WALK
        assert state.interval == GREEN
        state = step(state, 1)    # tick 330: service done, extended green ends
        assert state.ped_indication(DEFAULT_PLAN, 2) == DONT_WALK
        assert state.interval == YELLOW

    def test_clearance_duration_is_exact(self):
        state = step(ctl.initial_state(DEFAULT_PLAN), 50)
        state = ctl.place_ped_call(state, DEFAULT_PLAN, 2)
        fdw_ticks = 0
        for _ in range(2000):
            state = ctl.tick(state, DEFAULT_PLAN)
            if state.ped_indication(DEFAULT_PLAN, 2) == FLASHING_DONT_WALK:
                fdw_ticks += 1
        assert fdw_ticks == 110

    def test_call_after_own_walk_window_waits_full_cycle(self):
        # Phase 1 green began at tick 0 with no call; a call at tick 10 is
        # served at phase 1's next onset, tick 300.
        state = step(ctl.initial_state(DEFAULT_PLAN), 10)
        state = ctl.place_ped_call(state, DEFAULT_PLAN, 1)
        state = step(state, 289)  # tick 299
        assert state.ped_indication(DEFAULT_PLAN, 1) == DONT_WALK
        assert state.latched == (True, False)
        state = step(state, 1)    # tick 300
        assert (state.active_phase(DEFAULT_PLAN), state.interval) == (1, GREEN)
        assert state.ped_indication(DEFAULT_PLAN, 1) == WALK

    def test_latch_survives_until_served(self):
        state = step(ctl.initial_state(DEFAULT_PLAN), 10)
        state = ctl.place_ped_call(state, DEFAULT_PLAN, 1)
        for _ in range(250):
            state = ctl.tick(state, DEFAULT_PLAN)
            assert state.latched[0] or state.ped_indication(DEFAULT_PLAN, 1) == WALK

    def test_place_call_idempotent(self):
        state = step(ctl.initial_state(DEFAULT_PLAN), 30)
        once = ctl.place_ped_call(state, DEFAULT_PLAN, 2)
        twice = ctl.place_ped_call(once, DEFAULT_PLAN, 2)
        assert once == twice

    def test_unknown_phase_rejected(self):
        with pytest.raises(UnknownPhaseError):
            ctl.place_ped_call(ctl.initial_state(DEFAULT_PLAN), DEFAULT_PLAN, 99)


class TestSnapshot:
    def test_snapshot_is_pure(self):
        state = step(ctl.initial_state(DEFAULT_PLAN), 42)
        a = ctl.snapshot(state, DEFAULT_PLAN, 4.2)
        b = ctl.snapshot(state, DEFAULT_PLAN, 4.2)
        assert a == b

    def test_remaining_walk_decreases_by_tick(self):
        state = step(ctl.initial_state(DEFAULT_PLAN), 50)
        state = ctl.place_ped_call(state, DEFAULT_PLAN, 2)
        state = step(state, 100)  # WALK onset
        prev = state.remaining_walk_s(DEFAULT_PLAN, 2)
        for _ in range(69):
            state = ctl.tick(state, DEFAULT_PLAN)
            cur = state.remaining_walk_s(DEFAULT_PLAN, 2)
            assert cur == pytest.approx(prev - 0.1)
            prev = cur

    def test_remaining_walk_zero_when_dont_walk(self):
        state = step(ctl.initial_state(DEFAULT_PLAN), 42)
        snap = ctl.snapshot(state, DEFAULT_PLAN)
        assert snap.ped_indication[1] == DONT_WALK
        assert snap.remaining_walk_s == 0.0


class TestSafetyProperties:
    CYCLE_TICKS = 900  # sum of max green + yellow + all red over both phases

    def test_randomized_schedules_hold_invariants(self):
        total_ticks = 0
        for seed in range(20):
            rng = random.Random(seed)
            plan = DEFAULT_PLAN
            state = ctl.initial_state(plan)
            pending: dict[int, int] = {}
            for t in range(5000):
                if rng.random() < 0.01:
                    phase = rng.choice(plan.phase_ids())
                    already_walking = state.ped_indication(plan, phase) == WALK
                    state = ctl.place_ped_call(state, plan, phase)
                    if phase not in pending and not already_walking:
                        pending[phase] = t
                state = ctl.tick(state, plan)
                total_ticks += 1

                walking = [pid for pid in plan.phase_ids()
                           if state.ped_indication(plan, pid) == WALK]
                assert len(walking) <= 1
                if walking:
                    assert walking[0] == state.active_phase(plan)
                    assert state.interval == GREEN

                for pid in list(pending):
                    if state.ped_indication(plan, pid) == WALK:
                        assert t - pending[pid] <= self.CYCLE_TICKS
                        del pending[pid]
            for pid, placed in pending.items():
                assert 5000 - placed <= self.CYCLE_TICKS, f"seed {seed} starved phase {pid}"
        assert total_ticks >= 100_000

    def test_trajectory_is_deterministic(self):
        def run():
            rng = random.Random(77)
            state = ctl.initial_state(DEFAULT_PLAN)
            trace = []
            for _ in range(3000):
                if rng.random() < 0.02:
                    state = ctl.place_ped_call(state, DEFAULT_PLAN, rng.choice((1, 2)))
                state = ctl.tick(state, DEFAULT_PLAN)
                trace.append(state)
            return trace

        assert run() == run()


class TestControllerHost:
    def test_host_matches_functional_core(self):
        host = ctl.ControllerHost(DEFAULT_PLAN)
        state = ctl.initial_state(DEFAULT_PLAN)
        host.place_ped_call(2)
        state = ctl.place_ped_call(state, DEFAULT_PLAN, 2)
        for _ in range(200):
            host.tick()
            state = ctl.tick(state, DEFAULT_PLAN)
        assert host.state == state
        assert host.snapshot().timestamp_s == pytest.approx(20.0)

    def test_reset_restores_initial(self):
        host = ctl.ControllerHost(DEFAULT_PLAN)
        for _ in range(500):
            host.tick()
        host.reset()
        assert host.state == ctl.initial_state(DEFAULT_PLAN)
