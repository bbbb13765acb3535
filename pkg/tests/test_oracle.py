import pytest

from altersup.attack import build_observer
from altersup.closedloop import build_large, build_small
from altersup.fsa import Automaton, enumerate_words, subset_construct
from altersup.gridworld import SCENARIO_DELETE, robot_model
from altersup.model import ModelError, assemble_model
from altersup.oracle import (
    OracleConfig,
    def_check_ca_observable,
    def_check_cad_observable,
    def_check_cas_observable,
    def_membership,
    enumerate_observations,
    legal_strings,
    phi_pi_automaton,
    plant_strings,
    theta_pi_automaton,
)
from altersup.synth import synth_conservative
from altersup.verify import check_cad_observable


class TestConfig:
    def test_bound_must_be_positive(self):
        with pytest.raises(ValueError):
            OracleConfig(max_plant_len=0)


class TestThetaAutomaton:
    def test_unattacked_string_maps_to_itself(self, delete_model):
        w = ("d1", "d2")  # no deleted move involved
        theta = subset_construct(theta_pi_automaton(delete_model, w))
        assert enumerate_words(theta, 4) == [w]

    def test_deleted_move_maps_to_epsilon(self, delete_model):
        theta = subset_construct(theta_pi_automaton(delete_model, ("e1",)))
        assert enumerate_words(theta, 3) == [()]

    def test_injection_appends_noise_tail(self, inject_model):
        phi = phi_pi_automaton(inject_model, ("d1", "d2", "e1", "e2"))
        members = set(enumerate_observations(inject_model, ("d1", "d2", "e1", "e2"), 6))
        assert members == {
            ("d1", "d2", "e1", "e2"),
            ("d1", "d2", "e1", "e2", "d2"),
            ("d1", "d2", "e1", "e2", "d3"),
            ("d1", "d2", "e1", "e2", "d2", "d2"),
            ("d1", "d2", "e1", "e2", "d2", "d3"),
            ("d1", "d2", "e1", "e2", "d3", "d2"),
            ("d1", "d2", "e1", "e2", "d3", "d3"),
        }
        assert phi.accepts(("d1", "d2", "e1", "e2", "d3", "d3", "d2"))

    def test_string_outside_the_plant_is_an_error(self, delete_model):
        with pytest.raises(ModelError):
            theta_pi_automaton(delete_model, ("e3",))


class TestPhiAutomaton:
    def test_full_observation_equals_theta(self, inject_model):
        w = ("e1", "e2", "d1", "d2")
        theta = subset_construct(theta_pi_automaton(inject_model, w))
        phi = phi_pi_automaton(inject_model, w)
        for v in enumerate_words(theta, 6):
            assert phi.accepts(v)

    def test_replacement_rewrites_the_event(self, replace_model):
        phi = phi_pi_automaton(replace_model, ("e1", "e2", "d1"))
        assert enumerate_words(phi, 4) == [("e1", "e1", "d1")]

    def test_unobservable_string_maps_to_epsilon(self):
        plant = Automaton.make(initial=0, transitions=[(0, "u", 1), (1, "u", 2)], marked=[0, 1, 2])
        m = assemble_model(plant, [0, 1, 2], unobservable=["u"])
        phi = phi_pi_automaton(m, ("u", "u"))
        assert enumerate_words(phi, 2) == [()]


class TestDefCheckDeterministicObservability:
    def test_delete_scenario_has_no_violation(self, delete_model):
        verdict = def_check_cad_observable(delete_model, OracleConfig(max_plant_len=10))
        assert verdict.holds

    def test_replace_scenario_has_no_violation(self, replace_model):
        assert def_check_cad_observable(replace_model, OracleConfig(max_plant_len=8)).holds

    def test_inject_scenario_violates_with_the_known_pair(self, inject_model):
        verdict = def_check_cad_observable(inject_model, OracleConfig(max_plant_len=8))
        assert not verdict.holds
        assert any(
            w.event == "e3" and w.plant_states == (13, 18) for w in verdict.witnesses
        )

    def test_legal_language_equal_to_plant_never_violates(self):
        # With no obstacles nothing can exit the legal set, whatever the attack.
        m = robot_model(SCENARIO_DELETE, obstacles=[])
        assert def_check_cad_observable(m, OracleConfig(max_plant_len=6)).holds

    def test_agrees_with_the_estimate_check_and_shares_a_witness(
        self, inject_model, inject_observer
    ):
        exact = check_cad_observable(inject_model, inject_observer)
        brute = def_check_cad_observable(inject_model, OracleConfig(max_plant_len=8))
        assert exact.holds == brute.holds == False
        exact_pairs = {(w.plant_states, w.event) for w in exact.witnesses}
        brute_pairs = {(w.plant_states, w.event) for w in brute.witnesses}
        assert exact_pairs & brute_pairs

    def test_observation_sharing_pair_has_the_expected_common_string(self, inject_model):
        from altersup.fsa import intersection_empty

        left = phi_pi_automaton(inject_model, ("d1", "d2", "e1", "e2"))
        right = phi_pi_automaton(inject_model, ("d1", "d2", "e1", "e2", "d3"))
        empty, shared = intersection_empty(left, right)
        assert not empty
        assert shared == ("d1", "d2", "e1", "e2", "d3")
        no_overlap = phi_pi_automaton(inject_model, ("e1", "e2"))
        assert intersection_empty(left, no_overlap) == (True, None)


class TestDefCheckBoundObservability:
    def test_delete_scenario_passes_both(self, delete_model, delete_observer):
        cfg = OracleConfig(max_plant_len=10)
        assert def_check_ca_observable(delete_model, cfg, delete_observer).holds
        assert def_check_cas_observable(delete_model, cfg, delete_observer).holds

    def test_inject_scenario_splits_the_two_bounds(self, inject_model, inject_observer):
        # The deterministic condition fails while the upper-bound condition
        # still holds; the lower-bound condition is what breaks.
        cfg = OracleConfig(max_plant_len=8)
        assert def_check_ca_observable(inject_model, cfg, inject_observer).holds
        assert not def_check_cas_observable(inject_model, cfg, inject_observer).holds

    def test_no_attack_full_observation_passes(self):
        m = robot_model(None)
        obs = build_observer(m)
        cfg = OracleConfig(max_plant_len=6)
        assert def_check_ca_observable(m, cfg, obs).holds
        assert def_check_cas_observable(m, cfg, obs).holds

    def test_both_bounds_can_pass_while_the_deterministic_condition_fails(self):
        # Two branches whose attacked observations overlap on one string
        # while each branch keeps a private observation, so either bound can
        # pick a certifying observation but the overlap sinks determinism.
        plant = Automaton.make(
            initial=0,
            transitions=[(0, "a", 1), (0, "b", 2), (1, "c", 3), (2, "c", 4)],
            marked=[0, 1, 2, 3, 4],
            alphabet=["a", "b", "c", "d"],
        )
        ambiguous_a = Automaton.make(
            initial="a0", transitions=[("a0", "a", "a1"), ("a0", "b", "a1")], marked=["a1"]
        )
        ambiguous_b = Automaton.make(
            initial="b0", transitions=[("b0", "b", "b1"), ("b0", "d", "b1")], marked=["b1"]
        )
        m = assemble_model(
            plant,
            [0, 1, 2, 3],
            attacks_by_transition={(0, "a", 1): ambiguous_a, (0, "b", 2): ambiguous_b},
        )
        obs = build_observer(m)
        cfg = OracleConfig(max_plant_len=6)
        assert not check_cad_observable(m, obs).holds
        assert not def_check_cad_observable(m, cfg).holds
        assert def_check_ca_observable(m, cfg, obs).holds
        assert def_check_cas_observable(m, cfg, obs).holds


class TestDefMembership:
    def test_empty_string_is_always_a_member(self, delete_model, delete_observer):
        sup = synth_conservative(delete_model, delete_observer)
        assert def_membership(delete_model, sup, (), "large")
        assert def_membership(delete_model, sup, (), "small")

    def test_legal_strings_are_members_in_the_delete_scenario(
        self, delete_model, delete_observer
    ):
        sup = synth_conservative(delete_model, delete_observer)
        for w in legal_strings(delete_model, 8):
            assert def_membership(delete_model, sup, w, "large")
            assert def_membership(delete_model, sup, w, "small")

    def test_attackable_control_suffix_never_in_the_small_language(self):
        m = robot_model(None, attackable_control=["e1"])
        obs = build_observer(m)
        sup = synth_conservative(m, obs)
        assert def_membership(m, sup, ("e1",), "large")
        assert not def_membership(m, sup, ("e1",), "small")

    def test_unknown_kind_rejected(self, delete_model, delete_observer):
        sup = synth_conservative(delete_model, delete_observer)
        with pytest.raises(ValueError):
            def_membership(delete_model, sup, (), "medium")

    @pytest.mark.parametrize("scenario_fixture", ["replace", "delete", "inject"])
    def test_agreement_with_the_products(self, scenario_fixture, request):
        m = request.getfixturevalue(f"{scenario_fixture}_model")
        obs = request.getfixturevalue(f"{scenario_fixture}_observer")
        sup = synth_conservative(m, obs)
        large = build_large(m, obs, sup)
        small = build_small(m, obs, sup)
        for w in plant_strings(m, 6):
            assert def_membership(m, sup, w, "large") == large.automaton.generates(w)
            assert def_membership(m, sup, w, "small") == small.automaton.generates(w)
