"""Existence checks for deterministic and nonblocking supervision under
sensor and actuator attacks.

Controllability is decided on the legal sub-automaton: no uncontrollable or
control-attackable event may exit the legal state set, and no
control-attackable event may appear in the legal language at all.
Observability is decided on the CA-observer: a marked observer state is a
conflict for an event when its legal estimate contains both a state the
event keeps legal and a state the event drives illegal, because one control
decision must then serve both.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .attack import Observer
from .fsa import state_key
from .model import ModelError, SystemModel, require_valid


@dataclass(frozen=True)
class Witness:
    kind: str
    event: Optional[str] = None
    observer_state: Optional[frozenset] = None
    plant_states: Optional[tuple] = None
    detail: str = ""


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witnesses: tuple[Witness, ...] = ()


def _verdict(witnesses: list[Witness]) -> Verdict:
    witnesses.sort(key=lambda w: (w.kind, str(w.event), state_key(w.plant_states or ())))
    return Verdict(holds=not witnesses, witnesses=tuple(witnesses))


def _exit_witnesses(m: SystemModel, events: frozenset, first: bool) -> list[Witness]:
    """Legal states from which an event in ``events`` escapes the legal set."""
    legal = m.legal_states
    out = []
    for x in sorted(legal, key=state_key):
        for e in sorted(events):
            target = m.plant.step(x, e)
            if target is not None and target not in legal:
                out.append(
                    Witness(
                        kind="uncontrollable-exit",
                        event=e,
                        plant_states=(x, target),
                        detail=f"{e} leads from legal {x!r} to illegal {target!r}",
                    )
                )
                if first:
                    return out
    return out


def _spec_event_witnesses(m: SystemModel, first: bool) -> list[Witness]:
    """Control-attackable events occurring inside the legal sub-automaton."""
    bad = m.attackable_control_events
    out = []
    for s, e, t in sorted(m.spec.transitions, key=state_key):
        if e in bad:
            out.append(
                Witness(
                    kind="attackable-event-in-spec",
                    event=e,
                    plant_states=(s, t),
                    detail=f"control-attackable {e} appears in the legal language at {s!r}",
                )
            )
            if first:
                return out
    return out


def check_ca_controllable(m: SystemModel, first: bool = False) -> Verdict:
    """No uncontrollable or control-attackable event exits the legal set."""
    require_valid(m)
    events = m.uncontrollable_events | m.attackable_control_events
    return _verdict(_exit_witnesses(m, events, first))


def check_cas_controllable(m: SystemModel, first: bool = False) -> Verdict:
    """Classical controllability plus a legal language free of attackable controls."""
    require_valid(m)
    witnesses = _exit_witnesses(m, m.uncontrollable_events, first)
    if not (first and witnesses):
        witnesses += _spec_event_witnesses(m, first)
    return _verdict(witnesses)


def check_cad_controllable(m: SystemModel, first: bool = False) -> Verdict:
    """Both conditions at once (the deterministic-control requirement)."""
    require_valid(m)
    events = m.uncontrollable_events | m.attackable_control_events
    witnesses = _exit_witnesses(m, events, first)
    if not (first and witnesses):
        witnesses += _spec_event_witnesses(m, first)
    return _verdict(witnesses)


@dataclass(frozen=True)
class ObservabilityVerdict(Verdict):
    # The literal two-sided condition without the feasibility restriction is
    # informational only: it is false whenever some event is infeasible at an
    # entire legal estimate, which says nothing about control conflicts.
    unrestricted_holds: bool = True


def check_cad_observable(m: SystemModel, obs: Observer, first: bool = False) -> ObservabilityVerdict:
    """Estimate-conflict check over the marked observer states.

    A violation pairs an event with a marked observer state whose legal
    estimate contains both a state kept legal by the event and a state
    driven illegal by it.  Only events feasible at some legal estimate
    member are judged; the unrestricted reading is reported separately.
    """
    require_valid(m)
    if obs.origin_states != m.plant.states:
        raise ModelError("observer was not built from this model")
    legal = m.legal_states
    witnesses: list[Witness] = []
    unrestricted = True
    for y in sorted(obs.automaton.marked, key=state_key):
        legal_estimate = [x for x in sorted(y, key=state_key) if x in legal]
        for e in sorted(m.plant.alphabet):
            stays = exits = None
            for x in legal_estimate:
                target = m.plant.step(x, e)
                if target is None:
                    continue
                if target in legal:
                    stays = x if stays is None else stays
                else:
                    exits = x if exits is None else exits
            if (exits is None) != (stays is not None):
                unrestricted = False
            if stays is not None and exits is not None:
                witnesses.append(
                    Witness(
                        kind="estimate-conflict",
                        event=e,
                        observer_state=y,
                        plant_states=(stays, exits),
                        detail=(
                            f"at estimate {sorted(legal_estimate, key=state_key)!r}, "
                            f"{e} stays legal from {stays!r} but exits from {exits!r}"
                        ),
                    )
                )
                if first:
                    return ObservabilityVerdict(
                        holds=False, witnesses=tuple(witnesses), unrestricted_holds=False
                    )
    base = _verdict(witnesses)
    return ObservabilityVerdict(
        holds=base.holds,
        witnesses=base.witnesses,
        unrestricted_holds=unrestricted and base.holds,
    )


def check_lm_closed(m: SystemModel, first: bool = False) -> Verdict:
    """Marking condition: spec marking must equal legal-and-plant-marked."""
    require_valid(m)
    expected = m.spec.states & m.plant.marked
    witnesses = []
    for x in sorted(expected ^ m.spec.marked, key=state_key):
        side = "missing from" if x in expected else "spurious in"
        witnesses.append(
            Witness(
                kind="marking-mismatch",
                plant_states=(x,),
                detail=f"state {x!r} {side} the spec marking",
            )
        )
        if first:
            break
    return _verdict(witnesses)


@dataclass(frozen=True)
class SupervisorExistence:
    exists: bool
    controllability: Verdict
    observability: ObservabilityVerdict


def deterministic_supervisor_exists(m: SystemModel, obs: Observer, first: bool = False) -> SupervisorExistence:
    """A deterministic supervisor exists iff both conditions hold."""
    controllability = check_cad_controllable(m, first)
    observability = check_cad_observable(m, obs, first)
    return SupervisorExistence(
        exists=controllability.holds and observability.holds,
        controllability=controllability,
        observability=observability,
    )


@dataclass(frozen=True)
class NonblockingExistence:
    exists: bool
    lm_closed: Verdict
    controllability: Verdict
    observability: ObservabilityVerdict


def nonblocking_supervisor_exists(m: SystemModel, obs: Observer, first: bool = False) -> NonblockingExistence:
    """A nonblocking supervisor exists iff the marking condition and both
    deterministic-control conditions hold (controllability is structural on
    the legal sub-automaton, so the prefix closure needs no separate pass)."""
    lm = check_lm_closed(m, first)
    controllability = check_cad_controllable(m, first)
    observability = check_cad_observable(m, obs, first)
    return NonblockingExistence(
        exists=lm.holds and controllability.holds and observability.holds,
        lm_closed=lm,
        controllability=controllability,
        observability=observability,
    )
