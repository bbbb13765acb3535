"""Closed-loop languages of a supervised plant under attacks.

Because the supervisor sees tampered observations and the plant receives
tampered commands, the closed loop generates a nondeterministic family of
languages.  Its upper bound (the large language) admits an event when some
consistent observation and some tampered command enable it; its lower
bound (the small language) only when every consistent observation enables
it and no tampering can remove it.  Both are built as deterministic
products of the plant state with the set of observer states consistent
with the string so far.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .attack import InternalConsistencyError, Observer, observer_step
from .fsa import Automaton, Word, dfa_equivalent, trim_report
from .model import ModelError, SystemModel
from .synth import Supervisor

KIND_LARGE = "large"
KIND_SMALL = "small"


@dataclass(frozen=True, eq=False)
class ClosedLoopAutomaton:
    """Deterministic closed-loop product.

    Every state is a pair (plant state, frozenset of observer states); the
    observer-state set carried by a reachable product state is exactly the
    set of observer states consistent with some tampered observation of the
    string that reached it.
    """

    automaton: Automaton
    kind: str

    @staticmethod
    def plant_component(state):
        return state[0]

    @staticmethod
    def observation_component(state) -> frozenset:
        return state[1]


def _build(m: SystemModel, obs: Observer, sup: Supervisor, kind: str) -> ClosedLoopAutomaton:
    if sup.observer is not obs:
        raise ModelError("supervisor does not belong to this observer")
    plant = m.plant
    uc = m.uncontrollable_events
    atk = m.attackable_control_events
    marked_obs = obs.automaton.marked

    def admits(event, B) -> bool:
        if kind == KIND_LARGE:
            if event in uc or event in atk:
                return True
            return any(event in sup.enabled(y) for y in B)
        if event in atk:
            return False
        if event in uc:
            return True
        return all(event in sup.enabled(y) for y in B)

    initial = (plant.initial, frozenset([obs.initial]))
    states = {initial}
    transitions = set()
    queue = deque([initial])
    while queue:
        x, B = queue.popleft()
        if not B <= marked_obs:
            raise InternalConsistencyError(
                "closed-loop reached an observation no plant string produces"
            )
        for event in sorted(plant.alphabet):
            target = plant.step(x, event)
            if target is None or not admits(event, B):
                continue
            B_next = observer_step(m, obs, B, (x, event, target))
            nxt = (target, B_next)
            transitions.add(((x, B), event, nxt))
            if nxt not in states:
                states.add(nxt)
                queue.append(nxt)
    marked = frozenset(s for s in states if s[0] in plant.marked)
    automaton = Automaton(
        states=frozenset(states),
        alphabet=plant.alphabet,
        transitions=frozenset(transitions),
        initial=initial,
        marked=marked,
    )
    return ClosedLoopAutomaton(automaton=automaton, kind=kind)


def build_large(m: SystemModel, obs: Observer, sup: Supervisor) -> ClosedLoopAutomaton:
    """Upper bound: an event passes when some situation would let it through."""
    return _build(m, obs, sup, KIND_LARGE)


def build_small(m: SystemModel, obs: Observer, sup: Supervisor) -> ClosedLoopAutomaton:
    """Lower bound: an event passes only when no situation can block it."""
    return _build(m, obs, sup, KIND_SMALL)


def marked_large(cl: ClosedLoopAutomaton, m: SystemModel) -> Automaton:
    """The large product as a marked-language automaton (marking: plant marked)."""
    if cl.kind != KIND_LARGE:
        raise ModelError("marked language is defined on the large product")
    return cl.automaton


@dataclass(frozen=True)
class NonblockingReport:
    nonblocking: bool
    cond1: bool
    cond2: bool
    witness: Optional[Word] = None


def check_nonblocking(m: SystemModel, obs: Observer, sup: Supervisor) -> NonblockingReport:
    """Nonblocking supervision: the large loop must stay able to reach a
    marking (condition 1) and must equal the small loop so no tampering can
    withdraw an admitted event (condition 2)."""
    large = build_large(m, obs, sup)
    small = build_small(m, obs, sup)
    report = trim_report(large.automaton)
    cond1 = report.coaccessible == large.automaton.states
    witness: Optional[Word] = None
    if not cond1:
        witness = _shortest_path_to(large.automaton, large.automaton.states - report.coaccessible)
    equal, diff = dfa_equivalent(large.automaton, small.automaton, compare_marked=False)
    if witness is None and not equal:
        witness = diff
    return NonblockingReport(
        nonblocking=cond1 and equal, cond1=cond1, cond2=equal, witness=witness
    )


def _shortest_path_to(a: Automaton, targets: frozenset) -> Optional[Word]:
    seen = {a.initial}
    queue = deque([(a.initial, ())])
    while queue:
        state, word = queue.popleft()
        if state in targets:
            return word
        for event in sorted(a.alphabet):
            nxt = a.step(state, event)
            if nxt is not None and nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + (event,)))
    return None
