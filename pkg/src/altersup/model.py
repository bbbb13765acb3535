"""Domain model: plant, legal sub-automaton, event attributes, and the
per-transition sensor-attack map.

A system model bundles a deterministic trim plant, the legal sub-automaton
induced by a set of legal states, a controllability/observability attribute
per event, and a total mapping from attackable observable transitions to
attack-language automata (each marking the observable strings the attacker
may substitute for that transition's event).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Mapping

from .fsa import EPSILON, Automaton, render_state, state_key, trim_report

Transition = tuple[Any, str, Any]


class ModelError(ValueError):
    """Operation applied to an invalid or mismatched system model."""


@dataclass(frozen=True)
class EventAttributes:
    controllable: bool = True
    observable: bool = True
    attackable_control: bool = False
    attackable_observation: bool = False

    def __post_init__(self):
        if self.attackable_control and not self.controllable:
            raise ModelError("attackable control events must be controllable")
        if self.attackable_observation and not self.observable:
            raise ModelError("attackable observation events must be observable")


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str
    element: Any = None


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]


@dataclass(frozen=True)
class SystemModel:
    plant: Automaton
    spec: Automaton
    attributes: Mapping[str, EventAttributes]
    attacks: Mapping[Transition, Automaton]

    @cached_property
    def events(self) -> frozenset:
        return self.plant.alphabet

    def _select(self, pred) -> frozenset:
        return frozenset(e for e in self.events if pred(self.attributes[e]))

    @cached_property
    def controllable_events(self) -> frozenset:
        return self._select(lambda a: a.controllable)

    @cached_property
    def uncontrollable_events(self) -> frozenset:
        return self._select(lambda a: not a.controllable)

    @cached_property
    def observable_events(self) -> frozenset:
        return self._select(lambda a: a.observable)

    @cached_property
    def unobservable_events(self) -> frozenset:
        return self._select(lambda a: not a.observable)

    @cached_property
    def attackable_control_events(self) -> frozenset:
        return self._select(lambda a: a.attackable_control)

    @cached_property
    def attackable_observation_events(self) -> frozenset:
        return self._select(lambda a: a.attackable_observation)

    @cached_property
    def legal_states(self) -> frozenset:
        return self.spec.states


def attackable_transitions(m: SystemModel) -> frozenset:
    """The sensor-attack surface: the domain of the attack map.

    Per-event attack declarations expand to every transition carrying the
    event, so for those models this is exactly the set of plant transitions
    labeled by attackable observable events; per-transition declarations
    narrow the surface to the keyed transitions.
    """
    return frozenset(m.attacks)


def induced_subautomaton(plant: Automaton, legal_states: Iterable, marked=None) -> Automaton:
    """Restriction of the plant to a legal state set (transitions induced)."""
    legal = frozenset(legal_states)
    unknown = legal - plant.states
    if unknown:
        raise ModelError(f"legal states not in plant: {sorted(unknown, key=state_key)!r}")
    if plant.initial not in legal:
        raise ModelError("the initial state must be legal")
    transitions = frozenset(
        (s, e, t) for s, e, t in plant.transitions if s in legal and t in legal
    )
    if marked is None:
        marked = legal & plant.marked
    return Automaton(
        states=legal,
        alphabet=plant.alphabet,
        transitions=transitions,
        initial=plant.initial,
        marked=frozenset(marked),
    )


def assemble_model(
    plant: Automaton,
    legal_states: Iterable,
    *,
    spec_marked: Iterable | None = None,
    uncontrollable: Iterable[str] = (),
    unobservable: Iterable[str] = (),
    attackable_control: Iterable[str] = (),
    attacks_by_event: Mapping[str, Automaton] | None = None,
    attacks_by_transition: Mapping[Transition, Automaton] | None = None,
) -> SystemModel:
    """Convenience constructor.

    Per-event attacks are expanded to one entry per transition carrying that
    event; the attackable-observation attribute is derived from the attack
    keys.  The legal sub-automaton is induced from ``legal_states``.
    """
    uncontrollable = frozenset(uncontrollable)
    unobservable = frozenset(unobservable)
    attackable_control = frozenset(attackable_control)
    attacks: dict[Transition, Automaton] = {}
    if attacks_by_transition:
        attacks.update(attacks_by_transition)
    if attacks_by_event:
        for event, language in attacks_by_event.items():
            targets = [tr for tr in plant.transitions if tr[1] == event]
            if not targets:
                raise ModelError(f"no plant transition carries attacked event {event!r}")
            for tr in targets:
                attacks[tr] = language
    attacked_events = {tr[1] for tr in attacks}
    attributes = {
        e: EventAttributes(
            controllable=e not in uncontrollable,
            observable=e not in unobservable,
            attackable_control=e in attackable_control,
            attackable_observation=e in attacked_events,
        )
        for e in plant.alphabet
    }
    spec = induced_subautomaton(plant, legal_states, spec_marked)
    return SystemModel(plant=plant, spec=spec, attributes=dict(attributes), attacks=dict(attacks))


def _check_attack_language(m: SystemModel, tr, language: Automaton, violations: list):
    observable = m.observable_events
    for _, label, _ in language.transitions:
        if label is EPSILON:
            violations.append(
                Violation("attack-alphabet", "attack language automata must be ε-free", tr)
            )
            return
        if label not in observable:
            violations.append(
                Violation(
                    "attack-alphabet",
                    f"attack language for {tr!r} uses non-observable label {label!r}",
                    tr,
                )
            )
            return
    report = trim_report(language)
    if not (report.accessible & report.coaccessible & language.states):
        violations.append(
            Violation("attack-language-empty", f"attack language for {tr!r} marks no string", tr)
        )


def validate(m: SystemModel) -> ValidationReport:
    """Check every structural model invariant; one violation per broken rule."""
    violations: list[Violation] = []
    plant, spec = m.plant, m.spec

    if set(m.attributes) != set(plant.alphabet):
        violations.append(
            Violation("attributes", "event attributes must cover exactly the plant alphabet")
        )
    if not plant.is_deterministic:
        violations.append(Violation("plant-deterministic", "the plant must be deterministic"))
    plant_trim = trim_report(plant)
    if not plant_trim.is_trim:
        dead = sorted(plant.states - (plant_trim.accessible & plant_trim.coaccessible), key=state_key)
        violations.append(
            Violation("plant-trim", f"plant states neither reachable nor coreachable: {dead!r}")
        )

    if spec.alphabet != plant.alphabet:
        violations.append(Violation("sub-automaton", "spec alphabet differs from plant alphabet"))
    if spec.initial != plant.initial:
        violations.append(Violation("sub-automaton", "spec initial state differs from plant"))
    if not spec.states <= plant.states:
        violations.append(Violation("sub-automaton", "spec states are not plant states"))
    else:
        induced = frozenset(
            (s, e, t)
            for s, e, t in plant.transitions
            if s in spec.states and t in spec.states
        )
        extra = spec.transitions - plant.transitions
        missing = induced - spec.transitions
        if extra:
            violations.append(
                Violation("sub-automaton", f"spec transitions absent from plant: {sorted(extra, key=state_key)!r}")
            )
        if missing:
            violations.append(
                Violation(
                    "sub-automaton",
                    f"spec must be the induced restriction; missing {sorted(missing, key=state_key)!r}",
                )
            )
    spec_trim = trim_report(spec)
    if not spec_trim.is_trim:
        violations.append(Violation("spec-trim", "the legal sub-automaton must be trim"))
    if not spec.marked <= spec.states:
        violations.append(Violation("spec-marking", "spec marked states must be spec states"))

    for e, attr in m.attributes.items():
        # EventAttributes enforces the implications; re-check for dict-built models.
        if attr.attackable_control and not attr.controllable:
            violations.append(Violation("attr-attackable-control", f"{e} attackable but uncontrollable"))
        if attr.attackable_observation and not attr.observable:
            violations.append(Violation("attr-attackable-observation", f"{e} attackable but unobservable"))

    attackable_events = m.attackable_observation_events
    for tr in sorted(m.attacks, key=state_key):
        if tr not in plant.transitions:
            violations.append(
                Violation("pi-domain", f"attack keyed on missing transition {tr!r}", tr)
            )
        elif tr[1] not in attackable_events:
            violations.append(
                Violation("pi-domain", f"attack keyed on non-attackable event {tr[1]!r}", tr)
            )
    covered = {tr[1] for tr in m.attacks}
    for e in sorted(attackable_events - covered):
        violations.append(
            Violation("pi-total", f"attackable observable event {e!r} has no attack language")
        )
    for tr, language in m.attacks.items():
        _check_attack_language(m, tr, language, violations)

    violations.sort(key=lambda v: (v.rule, v.detail))
    return ValidationReport(ok=not violations, violations=tuple(violations))


def require_valid(m: SystemModel):
    report = validate(m)
    if not report.ok:
        lines = "; ".join(f"{v.rule}: {v.detail}" for v in report.violations)
        raise ModelError(f"invalid model: {lines}")
    return m


# Attack-language builders for the common sensor-attack shapes.

def deletion_attack() -> Automaton:
    """The event's observation may be erased entirely: marks {ε}."""
    return Automaton.make(initial="a0", marked=["a0"], alphabet=frozenset())


def replacement_attack(*replacement: str) -> Automaton:
    """The observation is replaced by one fixed observable string."""
    transitions = [(f"a{i}", e, f"a{i+1}") for i, e in enumerate(replacement)]
    return Automaton.make(
        initial="a0", transitions=transitions, marked=[f"a{len(replacement)}"]
    )


def insertion_attack(event: str, inserted: str) -> Automaton:
    """An extra observation may be inserted before or after the real one."""
    transitions = [
        ("a0", event, "a1"),
        ("a1", inserted, "a2"),
        ("a0", inserted, "b1"),
        ("b1", event, "a2"),
    ]
    return Automaton.make(initial="a0", transitions=transitions, marked=["a2"])


def all_out_attack(observable_events: Iterable[str]) -> Automaton:
    """The observation may become any observable string."""
    events = sorted(frozenset(observable_events))
    transitions = [("a0", e, "a0") for e in events]
    return Automaton.make(initial="a0", transitions=transitions, marked=["a0"], alphabet=events)


def describe_transition(tr: Transition) -> str:
    s, e, t = tr
    return f"({render_state(s)},{e},{render_state(t)})"
