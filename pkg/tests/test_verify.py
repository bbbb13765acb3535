import pytest

from altersup.attack import build_observer, singleton_estimates
from altersup.fsa import Automaton
from altersup.gridworld import SCENARIO_DELETE, SCENARIO_REPLACE, robot_model
from altersup.model import assemble_model
from altersup.oracle import OracleConfig, def_check_ca_observable, def_check_cas_observable
from altersup.verify import (
    check_ca_controllable,
    check_cad_controllable,
    check_cad_observable,
    check_cas_controllable,
    check_lm_closed,
    deterministic_supervisor_exists,
    nonblocking_supervisor_exists,
)

# Events whose occurrence can leave the legal region of the grid.
ESCAPING_EVENTS = ("d1", "d3", "e2", "e3")


class TestControllability:
    def test_clean_actuator_side_holds(self, delete_model):
        assert check_cad_controllable(delete_model).holds
        assert check_ca_controllable(delete_model).holds
        assert check_cas_controllable(delete_model).holds

    @pytest.mark.parametrize("event", ESCAPING_EVENTS)
    def test_attackable_escaping_event_breaks_ca(self, event):
        m = robot_model(None, attackable_control=[event])
        assert not check_ca_controllable(m).holds

    @pytest.mark.parametrize("event", ["e1", "e4", "d2", "d4"])
    def test_attackable_interior_event_keeps_ca(self, event):
        m = robot_model(None, attackable_control=[event])
        assert check_ca_controllable(m).holds
        # But the second deterministic-control condition still fails.
        assert not check_cad_controllable(m).holds

    def test_attackable_d1_exits_at_the_first_obstacle(self):
        verdict = check_ca_controllable(robot_model(None, attackable_control=["d1"]))
        assert not verdict.holds
        assert (verdict.witnesses[0].plant_states, verdict.witnesses[0].event) == ((3, 8), "d1")

    def test_e3_fails_both_conditions(self):
        m = robot_model(None, attackable_control=["e3"])
        verdict = check_cad_controllable(m)
        assert not verdict.holds
        kinds = {w.kind for w in verdict.witnesses}
        assert kinds == {"uncontrollable-exit", "attackable-event-in-spec"}
        exits = [w for w in verdict.witnesses if w.kind == "uncontrollable-exit"]
        assert [(w.plant_states, w.event) for w in exits] == [((18, 19), "e3")]

    def test_unused_event_satisfies_both_conditions(self):
        m = robot_model(None, attackable_control=["e5"])
        assert check_cad_controllable(m).holds

    def test_uncontrollable_d1_fails_classical_part(self):
        m = robot_model(None, uncontrollable=["d1"])
        verdict = check_cas_controllable(m)
        assert not verdict.holds
        assert verdict.witnesses[0].plant_states == (3, 8)

    def test_spec_equals_plant_is_vacuous(self):
        m = robot_model(None, uncontrollable=["d1", "e2"], obstacles=[])
        assert check_cad_controllable(m).holds

    def test_attackable_event_in_spec_fails_condition_two(self):
        m = robot_model(None, attackable_control=["e2"])
        verdict = check_cas_controllable(m)
        assert any(w.kind == "attackable-event-in-spec" for w in verdict.witnesses)

    def test_first_flag_truncates(self):
        m = robot_model(None, uncontrollable=list(ESCAPING_EVENTS))
        full = check_ca_controllable(m)
        assert len(full.witnesses) > 1
        assert len(check_ca_controllable(m, first=True).witnesses) == 1


class TestObservability:
    def test_replace_scenario_holds(self, replace_model, replace_observer):
        verdict = check_cad_observable(replace_model, replace_observer)
        assert verdict.holds and not verdict.witnesses

    def test_delete_scenario_holds(self, delete_model, delete_observer):
        verdict = check_cad_observable(delete_model, delete_observer)
        assert verdict.holds
        # The unrestricted biconditional fails only by vacuity here.
        assert not verdict.unrestricted_holds

    def test_inject_scenario_fails_at_the_merged_estimate(self, inject_model, inject_observer):
        verdict = check_cad_observable(inject_model, inject_observer)
        assert not verdict.holds
        assert all(w.kind == "estimate-conflict" for w in verdict.witnesses)
        for w in verdict.witnesses:
            assert w.event == "e3"
            assert w.plant_states == (13, 18)
            assert {13, 18} <= w.observer_state
        assert len(verdict.witnesses) == 2  # one per attacked entry path
        first = check_cad_observable(inject_model, inject_observer, first=True)
        assert len(first.witnesses) == 1

    def test_mismatched_observer_rejected(self, inject_model, delete_observer):
        from altersup.model import ModelError

        tiny = assemble_model(
            Automaton.make(initial=0, transitions=[(0, "a", 1)], marked=[0, 1]), [0, 1]
        )
        with pytest.raises(ModelError):
            check_cad_observable(tiny, delete_observer)


class TestLmClosed:
    def test_goal_fixture_holds(self):
        m = robot_model(SCENARIO_DELETE, nonblocking=True)
        assert m.spec.marked == frozenset({25})
        assert check_lm_closed(m).holds

    def test_all_marked_holds(self, delete_model):
        assert check_lm_closed(delete_model).holds

    def test_spurious_marking_fails(self):
        plant = robot_model(None, nonblocking=True).plant
        m = assemble_model(plant, sorted(set(plant.states) - {8, 9, 19}), spec_marked=[24, 25])
        verdict = check_lm_closed(m)
        assert not verdict.holds
        assert verdict.witnesses[0].plant_states == (24,)

    def test_missing_marking_fails(self):
        plant = Automaton.make(initial=0, transitions=[(0, "a", 1)], marked=[0, 1])
        m = assemble_model(plant, [0, 1], spec_marked=[1])
        verdict = check_lm_closed(m)
        assert not verdict.holds
        assert verdict.witnesses[0].plant_states == (0,)


class TestExistence:
    def test_deterministic_existence_per_scenario(
        self, replace_model, replace_observer, delete_model, delete_observer,
        inject_model, inject_observer,
    ):
        assert deterministic_supervisor_exists(replace_model, replace_observer).exists
        assert deterministic_supervisor_exists(delete_model, delete_observer).exists
        result = deterministic_supervisor_exists(inject_model, inject_observer)
        assert not result.exists
        assert result.controllability.holds and not result.observability.holds

    def test_actuator_attack_blocks_existence(self):
        m = robot_model(SCENARIO_REPLACE, attackable_control=["e3"])
        obs = build_observer(m)
        result = deterministic_supervisor_exists(m, obs)
        assert not result.exists and not result.controllability.holds

    def test_nonblocking_existence_per_scenario(self):
        for scenario, expected in (
            (SCENARIO_REPLACE, True),
            (SCENARIO_DELETE, True),
            ("inject-down-moves", False),
        ):
            m = robot_model(scenario, nonblocking=True)
            obs = build_observer(m)
            assert nonblocking_supervisor_exists(m, obs).exists == expected

    def test_marking_mismatch_blocks_nonblocking(self):
        plant = Automaton.make(initial=0, transitions=[(0, "a", 1)], marked=[0, 1])
        m = assemble_model(plant, [0, 1], spec_marked=[1])
        obs = build_observer(m)
        result = nonblocking_supervisor_exists(m, obs)
        assert not result.exists
        assert not result.lm_closed.holds
        assert result.controllability.holds and result.observability.holds


class TestProperties:
    def test_deterministic_controllability_is_the_conjunction(self, random_models):
        for m in random_models:
            cad = check_cad_controllable(m).holds
            ca = check_ca_controllable(m).holds
            cas = check_cas_controllable(m).holds
            assert cad == (ca and cas)

    def test_deterministic_observability_implies_bounded_definitions(self, random_models):
        cfg = OracleConfig(max_plant_len=7)
        for m in random_models:
            obs = build_observer(m)
            if check_cad_observable(m, obs).holds:
                assert def_check_ca_observable(m, cfg, obs, first=True).holds
                assert def_check_cas_observable(m, cfg, obs, first=True).holds

    def test_unambiguous_estimates_imply_observability(self, random_models, replace_model, replace_observer):
        assert singleton_estimates(replace_observer)
        assert check_cad_observable(replace_model, replace_observer).holds
        for m in random_models:
            obs = build_observer(m)
            if singleton_estimates(obs):
                assert check_cad_observable(m, obs).holds
