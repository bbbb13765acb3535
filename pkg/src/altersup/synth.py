"""State-estimate supervisors and tampered-command reasoning.

Two supervisors are read off the observer.  The conservative one enables an
event at an estimate unless some estimated legal state would be driven
illegal; the optimistic one enables it only when some estimated legal state
is kept legal.  They coincide (on the events that can actually occur at
legal estimate members) exactly when the model is attack-observable.

Actuator attacks add or remove attackable controllable events from an
issued command; a tampered command family is represented symbolically by
the issued set plus the attackable set, with closed-form membership tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .attack import Observer
from .fsa import state_key
from .model import ModelError, SystemModel, require_valid


@dataclass(frozen=True, eq=False)
class Supervisor:
    """Total enablement table over observer states."""

    table: Mapping[frozenset, frozenset]
    observer: Observer
    model: SystemModel

    def enabled(self, y: frozenset) -> frozenset:
        try:
            return self.table[y]
        except KeyError:
            raise ModelError(f"not a state of this supervisor's observer: {y!r}") from None

    def disabled(self, y: frozenset) -> frozenset:
        return self.model.events - self.enabled(y)


def _legal_estimate(m: SystemModel, y: frozenset) -> list:
    return [x for x in y if x in m.legal_states]


def synth_conservative(m: SystemModel, obs: Observer) -> Supervisor:
    """Enable an event unless it could drive some estimated legal state illegal."""
    require_valid(m)
    table = {}
    for y in obs.automaton.states:
        unsafe = set()
        for x in _legal_estimate(m, y):
            for e, target in m.plant.outgoing(x):
                if target not in m.legal_states:
                    unsafe.add(e)
        table[y] = m.events - unsafe
    return Supervisor(table=table, observer=obs, model=m)


def synth_optimistic(m: SystemModel, obs: Observer) -> Supervisor:
    """Enable an event only when it keeps some estimated legal state legal."""
    require_valid(m)
    table = {}
    for y in obs.automaton.states:
        good = set()
        for x in _legal_estimate(m, y):
            for e, target in m.plant.outgoing(x):
                if target in m.legal_states:
                    good.add(e)
        table[y] = frozenset(good)
    return Supervisor(table=table, observer=obs, model=m)


def feasible_events(m: SystemModel, y: frozenset) -> frozenset:
    """Events defined at some legal member of the estimate."""
    out = set()
    for x in _legal_estimate(m, y):
        out.update(e for e, _ in m.plant.outgoing(x))
    return frozenset(out)


def supervisors_equal(a: Supervisor, b: Supervisor) -> tuple[bool, tuple]:
    """Agreement of two supervisors on the marked observer states.

    Compared on the events feasible at some legal estimate member; an event
    no legal candidate can execute carries no control decision (the
    universal form vacuously enables it, the existential form does not).
    Differences are (observer state, event, side holding the event).
    """
    if a.observer is not b.observer:
        raise ModelError("supervisors defined over different observers")
    m = a.model
    diffs = []
    for y in sorted(a.observer.automaton.marked, key=state_key):
        ea, eb = a.enabled(y), b.enabled(y)
        for e in sorted(feasible_events(m, y)):
            if (e in ea) != (e in eb):
                diffs.append((y, e, "first" if e in ea else "second"))
    return not diffs, tuple(diffs)


def uncontrollable_conflicts(sup: Supervisor) -> tuple:
    """Observer states where an uncontrollable event is not enabled.

    The closed-loop semantics always lets uncontrollable events pass, so
    this is a lint on the table itself, not a soundness problem.
    """
    uc = sup.model.uncontrollable_events
    out = []
    for y in sorted(sup.observer.automaton.states, key=state_key):
        missing = uc - sup.enabled(y)
        out.extend((y, e) for e in sorted(missing))
    return tuple(out)


def disablement_by_estimate(sup: Supervisor) -> dict[frozenset, frozenset]:
    """Nonempty disablement sets of marked observer states, keyed by estimate.

    Only events some estimate member could execute can end up disabled, so
    this is exactly the supervisor's meaningful interventions.
    """
    out: dict[frozenset, frozenset] = {}
    for y in sup.observer.automaton.marked:
        disabled = sup.disabled(y)
        if disabled:
            est = frozenset(x for x in y if x in sup.observer.origin_states)
            out[est] = disabled
    return out


@dataclass(frozen=True)
class ControlCommandSet:
    """All commands the plant may receive after tampering of one issued command.

    Tampering may remove issued attackable events and add arbitrary
    attackable events, so the family is determined by the issued set and
    the attackable set alone.
    """

    base: frozenset
    attackable: frozenset

    def members(self) -> frozenset:
        """Explicit enumeration; exponential in the attackable set (tests only)."""
        from itertools import chain, combinations

        def subsets(s):
            s = sorted(s)
            return chain.from_iterable(combinations(s, r) for r in range(len(s) + 1))

        out = set()
        for removed in subsets(self.attackable):
            for added in subsets(self.attackable):
                out.add((self.base - set(removed)) | set(added))
        return frozenset(frozenset(g) for g in out)


def command_contains_exists(c: ControlCommandSet, event: str) -> bool:
    """Is the event in some tampered command? Closed form: base ∪ attackable."""
    return event in c.base or event in c.attackable


def command_contains_forall(c: ControlCommandSet, event: str) -> bool:
    """Is the event in every tampered command? Closed form: base − attackable."""
    return event in c.base and event not in c.attackable
