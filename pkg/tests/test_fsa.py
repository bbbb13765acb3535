import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altersup.fsa import (
    EPSILON,
    Automaton,
    AutomatonError,
    dfa_equivalent,
    enumerate_words,
    epsilon_closure,
    intersection_empty,
    isomorphic,
    language_subset,
    map_labels,
    nfa_accepts,
    nfa_run,
    single_word_automaton,
    string_language_nfa,
    subset_construct,
    sync_product,
    trim_report,
)
from altersup.gridworld import grid_plant

ALPHABET = ("a", "b")


@st.composite
def nfas(draw, max_states=5, with_epsilon=True):
    n = draw(st.integers(1, max_states))
    labels = list(ALPHABET) + ([EPSILON] if with_epsilon else [])
    edges = draw(
        st.lists(
            st.tuples(
                st.integers(0, n - 1), st.sampled_from(labels), st.integers(0, n - 1)
            ),
            max_size=3 * n,
        )
    )
    marked = draw(st.sets(st.integers(0, n - 1)))
    return Automaton.make(
        initial=0, transitions=edges, marked=marked, states=range(n), alphabet=ALPHABET
    )


@st.composite
def dfas(draw, max_states=5):
    n = draw(st.integers(1, max_states))
    transitions = []
    for s in range(n):
        for e in ALPHABET:
            target = draw(st.one_of(st.none(), st.integers(0, n - 1)))
            if target is not None:
                transitions.append((s, e, target))
    marked = draw(st.sets(st.integers(0, n - 1)))
    return Automaton.make(
        initial=0, transitions=transitions, marked=marked, states=range(n), alphabet=ALPHABET
    )


def words_up_to(n):
    out = [()]
    frontier = [()]
    for _ in range(n):
        frontier = [w + (e,) for w in frontier for e in ALPHABET]
        out.extend(frontier)
    return out


class TestAutomaton:
    def test_rejects_unknown_endpoints(self):
        with pytest.raises(AutomatonError):
            Automaton(
                states=frozenset([0]),
                alphabet=frozenset(["a"]),
                transitions=frozenset([(0, "a", 1)]),
                initial=0,
                marked=frozenset(),
            )
        with pytest.raises(AutomatonError):
            Automaton(
                states=frozenset([0]),
                alphabet=frozenset(["a"]),
                transitions=frozenset([(0, "b", 0)]),
                initial=0,
                marked=frozenset(),
            )

    def test_epsilon_not_an_alphabet_member(self):
        with pytest.raises(AutomatonError):
            Automaton.make(initial=0, alphabet=[EPSILON])

    def test_deterministic_flag(self):
        a = Automaton.make(initial=0, transitions=[(0, "a", 1), (0, "a", 2)])
        assert not a.is_deterministic
        b = Automaton.make(initial=0, transitions=[(0, "a", 1), (1, EPSILON, 0)], alphabet=["a"])
        assert not b.is_deterministic
        assert grid_plant().is_deterministic


class TestEpsilonClosure:
    def test_identity_without_epsilon(self):
        a = Automaton.make(initial="x", transitions=[("x", "a", "y")])
        assert epsilon_closure(a, frozenset(["x"])) == frozenset(["x"])

    def test_transitive_chain(self):
        a = Automaton.make(
            initial="x",
            transitions=[("x", EPSILON, "p"), ("p", EPSILON, "q")],
            alphabet=[],
        )
        assert epsilon_closure(a, frozenset(["x"])) == frozenset(["x", "p", "q"])

    def test_unknown_state_is_an_error(self):
        a = Automaton.make(initial="x")
        with pytest.raises(AutomatonError):
            epsilon_closure(a, frozenset(["nope"]))

    @given(nfas(), st.sets(st.integers(0, 4)))
    def test_idempotent_and_monotone(self, a, seed):
        states = frozenset(s for s in seed if s in a.states)
        once = epsilon_closure(a, states)
        assert epsilon_closure(a, once) == once
        assert states <= once
        bigger = epsilon_closure(a, once | frozenset([a.initial]))
        assert once <= bigger


class TestSubsetConstruct:
    def test_accessible_dfa_becomes_singletons(self):
        plant = grid_plant()
        det = subset_construct(plant)
        assert det.is_deterministic
        assert all(len(s) == 1 for s in det.states)
        assert isomorphic(det, plant)

    def test_no_marked_states_is_handled_totally(self):
        a = Automaton.make(initial=0, transitions=[(0, "a", 1)], marked=[])
        det = subset_construct(a)
        assert det.marked == frozenset()
        assert det.initial == frozenset([0])

    @given(nfas())
    @settings(max_examples=60)
    def test_language_agreement_bounded(self, a):
        det = subset_construct(a)
        assert det.is_deterministic
        assert not any(label is EPSILON for _, label, _ in det.transitions)
        for w in words_up_to(4):
            assert det.accepts(w) == nfa_accepts(a, w)
            assert det.generates(w) == bool(nfa_run(a, w))


class TestSyncProduct:
    def test_selfloop_identity_element(self):
        plant = grid_plant()
        loop = Automaton.make(
            initial="*",
            transitions=[("*", e, "*") for e in sorted(plant.alphabet)],
            marked=["*"],
            alphabet=plant.alphabet,
        )
        assert isomorphic(sync_product(plant, loop), plant)

    def test_disjoint_languages_have_no_marked_state(self):
        a = single_word_automaton(("a",), alphabet=ALPHABET)
        b = single_word_automaton(("b",), alphabet=ALPHABET)
        assert sync_product(a, b).marked == frozenset()

    def test_strict_requires_equal_alphabets(self):
        a = single_word_automaton(("a",))
        b = single_word_automaton(("b",))
        with pytest.raises(AutomatonError):
            sync_product(a, b, sync="strict")
        shared = sync_product(a, b, sync="shared")
        assert shared.accepts(("a", "b")) and shared.accepts(("b", "a"))

    def test_epsilon_input_rejected(self):
        a = Automaton.make(initial=0, transitions=[(0, EPSILON, 1)], alphabet=["a"])
        with pytest.raises(AutomatonError):
            sync_product(a, a)


class TestTrimReport:
    def test_grid_goal_marked_is_trim(self):
        assert trim_report(grid_plant(goal_only_marked=True)).is_trim

    def test_unreachable_state_breaks_trim(self):
        a = Automaton.make(initial=0, transitions=[(0, "a", 1)], marked=[1], states=[0, 1, 2])
        report = trim_report(a)
        assert not report.is_trim
        assert 2 not in report.accessible

    def test_empty_marking_has_no_coaccessible_states(self):
        a = Automaton.make(initial=0, transitions=[(0, "a", 1)], marked=[])
        assert trim_report(a).coaccessible == frozenset()

    @given(nfas())
    def test_fixpoint_of_one_more_step(self, a):
        report = trim_report(a)
        step = set(report.accessible)
        for s, _, t in a.transitions:
            if s in report.accessible:
                step.add(t)
        assert step == set(report.accessible)
        back = set(report.coaccessible)
        for s, _, t in a.transitions:
            if t in report.coaccessible:
                back.add(s)
        assert back == set(report.coaccessible)


class TestDfaEquivalent:
    def test_reflexive(self):
        plant = grid_plant()
        assert dfa_equivalent(plant, plant) == (True, None)

    def test_removed_transition_gives_witness_ending_with_label(self):
        plant = grid_plant()
        smaller = Automaton(
            states=plant.states,
            alphabet=plant.alphabet,
            transitions=plant.transitions - frozenset([(1, "d1", 6)]),
            initial=plant.initial,
            marked=plant.marked,
        )
        equal, witness = dfa_equivalent(plant, smaller)
        assert not equal
        assert witness[-1] == "d1"

    def test_rejects_nondeterministic_input(self):
        a = Automaton.make(initial=0, transitions=[(0, "a", 0), (0, "a", 1)])
        with pytest.raises(AutomatonError):
            dfa_equivalent(a, a)

    @given(dfas(), dfas())
    @settings(max_examples=60)
    def test_symmetric(self, a, b):
        assert dfa_equivalent(a, b)[0] == dfa_equivalent(b, a)[0]

    @given(dfas())
    @settings(max_examples=60)
    def test_transitive_through_renaming_and_determinization(self, a):
        renamed = Automaton(
            states=frozenset(("r", s) for s in a.states),
            alphabet=a.alphabet,
            transitions=frozenset((("r", s), e, ("r", t)) for s, e, t in a.transitions),
            initial=("r", a.initial),
            marked=frozenset(("r", s) for s in a.marked),
        )
        det = subset_construct(a)
        assert dfa_equivalent(a, renamed)[0]
        assert dfa_equivalent(renamed, det)[0]
        assert dfa_equivalent(a, det)[0]


class TestStringLanguageNfa:
    def test_concatenation_of_single_events(self):
        nfa = string_language_nfa([single_word_automaton(("a",)), single_word_automaton(("b",))])
        assert nfa_accepts(nfa, ("a", "b"))
        assert not nfa_accepts(nfa, ("a",))
        assert not nfa_accepts(nfa, ("b", "a"))

    def test_empty_sequence_marks_epsilon(self):
        nfa = string_language_nfa([])
        assert nfa_accepts(nfa, ())
        assert not nfa_accepts(nfa, ("a",)) if "a" in nfa.alphabet else True
        assert enumerate_words(subset_construct(nfa), 3) == [()]

    def test_head_with_loop_then_tail(self):
        head = Automaton.make(
            initial=0,
            transitions=[(0, "d2", 1), (1, "d2", 1), (1, "d3", 1)],
            marked=[1],
        )
        nfa = string_language_nfa([head, single_word_automaton(("e3",))])
        det = subset_construct(nfa)
        assert det.accepts(("d2", "e3"))
        assert det.accepts(("d2", "d3", "d2", "e3"))
        assert not det.accepts(("d2",))
        assert not det.accepts(("e3",))


class TestIntersectionEmpty:
    def test_disjoint_singletons(self):
        a = single_word_automaton(("a",), alphabet=ALPHABET)
        b = single_word_automaton(("b",), alphabet=ALPHABET)
        assert intersection_empty(a, b) == (True, None)

    def test_self_intersection_nonempty(self):
        a = single_word_automaton(("a", "b"))
        empty, witness = intersection_empty(a, a)
        assert not empty and witness == ("a", "b")

    def test_accepts_epsilon_nfas(self):
        left = string_language_nfa([single_word_automaton(("a",)), single_word_automaton(("b",))])
        right = Automaton.make(
            initial=0, transitions=[(0, "a", 1), (1, "b", 1)], marked=[1], alphabet=("a", "b")
        )
        empty, witness = intersection_empty(left, right)
        assert not empty and witness == ("a", "b")


class TestHelpers:
    def test_map_labels_erases_to_epsilon(self):
        a = single_word_automaton(("u", "o"))
        b = map_labels(a, lambda e: EPSILON if e == "u" else e, alphabet=["o"])
        assert nfa_accepts(b, ("o",))

    def test_language_subset(self):
        small = single_word_automaton(("a",), alphabet=ALPHABET)
        big = Automaton.make(
            initial=0, transitions=[(0, "a", 1), (0, "b", 1)], marked=[1], alphabet=ALPHABET
        )
        assert language_subset(small, big)[0]
        ok, witness = language_subset(big, small)
        assert not ok and witness == ("b",)

    def test_enumerate_words_orders_shortest_first(self):
        a = Automaton.make(initial=0, transitions=[(0, "a", 0), (0, "b", 0)], marked=[0])
        words = enumerate_words(a, 2)
        assert words[:3] == [(), ("a",), ("b",)]
        assert len(words) == 7
