"""Attack-aware observation machinery.

Sensor attacks are realized in three steps: splice every attack-language
automaton in place of its attacked transition (connected by ε edges), erase
unobservable labels, and determinize.  The resulting deterministic
"observer" tracks, per observation string, the set of plant states (plus
in-flight attack copies) the system may be in; its marked states are
exactly those whose member set meets the plant, i.e. the observations that
can actually be produced by some completed plant string.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Mapping

from .fsa import (
    EPSILON,
    Automaton,
    epsilon_closure,
    state_key,
    subset_construct,
)
from .model import ModelError, SystemModel, Transition, describe_transition, require_valid


class InternalConsistencyError(RuntimeError):
    """Observer and model disagree; indicates a corrupted input pairing."""


@dataclass(frozen=True, eq=False)
class AttackedAutomaton:
    """Plant with attack languages spliced in.

    ``automaton`` ranges over the plant states plus fresh attack copies and
    marks exactly the plant states.  ``added_states`` maps each copy id back
    to (attacked transition, attack-automaton state).
    """

    automaton: Automaton
    origin_states: frozenset
    added_states: Mapping[Any, tuple[Transition, Any]]


def splice_attacks(base: Automaton, attacks: Mapping[Transition, Automaton]) -> AttackedAutomaton:
    """Replace each attacked transition by a fresh copy of its language.

    The attacked edge (x, σ, x') is removed; the copy is entered from x by
    an ε edge and every marked copy state gets an ε edge onto x'.  Copies
    are never shared between attacked transitions.  All base states are
    marked: a marked run corresponds to a fully substituted plant string.
    """
    transitions = set(base.transitions)
    states = set(base.states)
    added: dict[Any, tuple[Transition, Any]] = {}
    for k, tr in enumerate(sorted(attacks, key=state_key)):
        if tr not in base.transitions:
            raise ModelError(f"attack keyed on missing transition {describe_transition(tr)}")
        src, _, dst = tr
        language = attacks[tr]
        transitions.discard(tr)
        rename = {f: ("att", k, f) for f in language.states}
        states.update(rename.values())
        added.update((copy, (tr, f)) for f, copy in rename.items())
        for a, label, b in language.transitions:
            transitions.add((rename[a], label, rename[b]))
        transitions.add((src, EPSILON, rename[language.initial]))
        for f in language.marked:
            transitions.add((rename[f], EPSILON, dst))
    automaton = Automaton(
        states=frozenset(states),
        alphabet=base.alphabet,
        transitions=frozenset(transitions),
        initial=base.initial,
        marked=base.states,
    )
    return AttackedAutomaton(automaton=automaton, origin_states=base.states, added_states=added)


def build_attacked_plant(m: SystemModel) -> AttackedAutomaton:
    require_valid(m)
    return splice_attacks(m.plant, m.attacks)


def observation_projection(g: AttackedAutomaton, m: SystemModel) -> Automaton:
    """Erase unobservable labels from the attacked plant.

    Attack-copy transitions already carry observable labels only, so this
    touches plant transitions alone.  The result's alphabet is the set of
    observable events.
    """
    observable = m.observable_events
    transitions = frozenset(
        (s, e if (e is EPSILON or e in observable) else EPSILON, t)
        for s, e, t in g.automaton.transitions
    )
    return Automaton(
        states=g.automaton.states,
        alphabet=observable,
        transitions=transitions,
        initial=g.automaton.initial,
        marked=g.automaton.marked,
    )


@dataclass(frozen=True, eq=False)
class Observer:
    """Deterministic attack-aware observer.

    States are member subsets of plant states and attack copies; a state is
    marked iff its member set meets the plant states.  ``attacked`` caches
    the spliced automaton the observer was determinized from.  The reach
    memo only ever stores idempotent entries, so concurrent readers can at
    worst recompute one.
    """

    automaton: Automaton
    origin_states: frozenset
    attacked: AttackedAutomaton
    _reach_memo: dict = field(default_factory=dict, repr=False)

    @property
    def initial(self) -> frozenset:
        return self.automaton.initial


def build_observer(m: SystemModel) -> Observer:
    g = build_attacked_plant(m)
    projected = observation_projection(g, m)
    return Observer(
        automaton=subset_construct(projected),
        origin_states=g.origin_states,
        attacked=g,
    )


def estimate(obs: Observer, y: frozenset) -> frozenset:
    """Plant-state part of an observer state (the state estimate)."""
    if y not in obs.automaton.states:
        raise ModelError(f"not an observer state: {sorted(y, key=state_key)!r}")
    return y & obs.origin_states


def singleton_estimates(obs: Observer) -> bool:
    """True when no observation ever leaves more than one plant candidate.

    This is the determinism test that matters after ε-closure: the splice
    always introduces ε edges, so the projected automaton is never literally
    deterministic, but estimates can still be unambiguous.
    """
    return all(len(y & obs.origin_states) <= 1 for y in obs.automaton.states)


def attack_reach(m: SystemModel, obs: Observer, y: frozenset, tr: Transition) -> frozenset:
    """Observer states reachable from y by reading any string of tr's attack.

    Computed by breadth-first search over (observer state, attack state)
    pairs; memoized per (y, tr) on the observer.
    """
    key = (y, tr)
    cached = obs._reach_memo.get(key)
    if cached is not None:
        return cached
    language = m.attacks[tr]
    result = set()
    start = (y, language.initial)
    seen = {start}
    queue = deque([start])
    while queue:
        state, f = queue.popleft()
        if f in language.marked:
            result.add(state)
        for label, f_next in language.outgoing(f):
            nxt_state = obs.automaton.step(state, label)
            if nxt_state is None:
                continue
            nxt = (nxt_state, f_next)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    frozen = frozenset(result)
    obs._reach_memo[key] = frozen
    return frozen


def observer_step(m: SystemModel, obs: Observer, B: frozenset, tr: Transition) -> frozenset:
    """Advance a set of observer states across one plant transition.

    Unobservable unattacked transitions leave the set alone; observable
    unattacked ones apply the observer's transition function pointwise;
    attacked ones take the union of the attack-language reach sets.
    """
    if not B:
        raise ModelError("observer_step requires a nonempty observer-state set")
    if tr not in m.plant.transitions:
        raise ModelError(f"not a plant transition: {describe_transition(tr)}")
    event = tr[1]
    if tr in m.attacks:
        result = set()
        for y in B:
            result |= attack_reach(m, obs, y, tr)
    elif event not in m.observable_events:
        return frozenset(B)
    else:
        result = set()
        for y in B:
            nxt = obs.automaton.step(y, event)
            if nxt is not None:
                result.add(nxt)
    if not result:
        raise InternalConsistencyError(
            f"no observation image for reachable transition {describe_transition(tr)}"
        )
    return frozenset(result)


def fold_observer(m: SystemModel, obs: Observer, word) -> frozenset:
    """Observer-state set after a plant string, by folding observer_step."""
    B = frozenset([obs.initial])
    state = m.plant.initial
    for event in word:
        nxt = m.plant.step(state, event)
        if nxt is None:
            raise ModelError(f"string leaves the plant at {event!r}")
        B = observer_step(m, obs, B, (state, event, nxt))
        state = nxt
    return B


def unobservable_reach(m: SystemModel, states: frozenset) -> frozenset:
    """ε-closure inside the projected attacked plant (helper for tests)."""
    g = build_attacked_plant(m)
    return epsilon_closure(observation_projection(g, m), states)
