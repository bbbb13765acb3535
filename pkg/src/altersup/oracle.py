"""Independent bounded evaluation of the defining conditions.

Everything here reasons per plant string: the set of tampered observations
of a string is materialized as a concatenation NFA of per-transition pieces
(the event itself, or the transition's attack language), projected and
determinized.  Infinite attack languages are never enumerated element-wise;
all per-string questions go through regular-language products, so answers
are exact per string and bounded only in plant-string length.  These
routines deliberately avoid the incremental observer stepping used by the
closed-loop builder: they are the cross-check for it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .attack import Observer, build_observer
from .fsa import (
    EPSILON,
    Automaton,
    Word,
    enumerate_words,
    intersection_empty,
    map_labels,
    render_word,
    single_word_automaton,
    string_language_nfa,
    subset_construct,
)
from .model import ModelError, SystemModel, require_valid
from .synth import (
    ControlCommandSet,
    Supervisor,
    command_contains_exists,
    command_contains_forall,
)
from .verify import Verdict, Witness

KIND_LARGE = "large"
KIND_SMALL = "small"


@dataclass(frozen=True)
class OracleConfig:
    """Bounds for brute-force enumeration.

    ``max_plant_len`` bounds enumerated plant strings; ``max_witness_len``
    bounds explicit member listings of regular sets.
    """

    max_plant_len: int = 8
    max_witness_len: int = 12

    def __post_init__(self):
        if self.max_plant_len < 1:
            raise ValueError("max_plant_len must be at least 1")


def transition_path(m: SystemModel, word: Word) -> list:
    """The plant transitions a string takes; error if it leaves the plant."""
    path = []
    state = m.plant.initial
    for event in word:
        nxt = m.plant.step(state, event)
        if nxt is None:
            raise ModelError(f"string {render_word(word)} is not generated by the plant")
        path.append((state, event, nxt))
        state = nxt
    return path


def theta_pi_automaton(m: SystemModel, word: Word) -> Automaton:
    """NFA marking exactly the tampered versions of one plant string.

    Concatenates, per transition taken, either the single-event language or
    the transition's attack language.
    """
    require_valid(m)
    pieces = []
    for tr in transition_path(m, word):
        attack = m.attacks.get(tr)
        pieces.append(attack if attack is not None else single_word_automaton((tr[1],)))
    return string_language_nfa(pieces)


def phi_pi_automaton(m: SystemModel, word: Word) -> Automaton:
    """DFA marking the observations of the tampered versions of one string."""
    theta = theta_pi_automaton(m, word)
    observable = m.observable_events
    projected = map_labels(
        theta, lambda e: e if e in observable else EPSILON, alphabet=observable
    )
    return subset_construct(projected)


def observation_classes(m: SystemModel, obs: Observer, word: Word) -> frozenset:
    """Observer states reached by the observations of one plant string.

    Walks the product of the string's observation DFA with the observer and
    collects the observer states paired with a marked observation state.
    """
    phi = phi_pi_automaton(m, word)
    start = (phi.initial, obs.initial)
    seen = {start}
    queue = deque([start])
    classes = set()
    while queue:
        p, y = queue.popleft()
        if p in phi.marked:
            classes.add(y)
        for event in sorted(phi.alphabet):
            pn = phi.step(p, event)
            yn = obs.automaton.step(y, event)
            if pn is None or yn is None:
                continue
            nxt = (pn, yn)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(classes)


def legal_strings(m: SystemModel, max_len: int) -> list[Word]:
    """Strings of the legal language up to a length bound."""
    return enumerate_words(m.spec, max_len, marked_only=False)


def plant_strings(m: SystemModel, max_len: int) -> list[Word]:
    return enumerate_words(m.plant, max_len, marked_only=False)


def def_check_cad_observable(
    m: SystemModel, cfg: OracleConfig = OracleConfig(), first: bool = False
) -> Verdict:
    """Definition-level check: two legal strings must never share an
    observation when an event extends one inside and the other outside the
    legal language.

    Enumerates string pairs up to the bound; the observation-overlap test
    per pair is an exact regular-language intersection.
    """
    require_valid(m)
    words = legal_strings(m, cfg.max_plant_len)
    spec, plant = m.spec, m.plant
    ends = {w: spec.run(w) for w in words}
    phis: dict[Word, Automaton] = {}

    def phi(w: Word) -> Automaton:
        cached = phis.get(w)
        if cached is None:
            cached = phis[w] = phi_pi_automaton(m, w)
        return cached

    witnesses = []
    for event in sorted(plant.alphabet):
        keeps = [w for w in words if spec.step(ends[w], event) is not None]
        escapes = [
            w
            for w in words
            if spec.step(ends[w], event) is None and plant.step(ends[w], event) is not None
        ]
        if not keeps or not escapes:
            continue
        for w in keeps:
            for w2 in escapes:
                empty, shared = intersection_empty(phi(w), phi(w2))
                if empty:
                    continue
                witnesses.append(
                    Witness(
                        kind="estimate-conflict",
                        event=event,
                        plant_states=(ends[w], ends[w2]),
                        detail=(
                            f"legal strings {render_word(w)} and {render_word(w2)} "
                            f"share observation {render_word(shared)}; "
                            f"{event} stays legal after the first, exits after the second"
                        ),
                    )
                )
                if first:
                    return Verdict(holds=False, witnesses=tuple(witnesses))
    return Verdict(holds=not witnesses, witnesses=tuple(witnesses))


def _estimate_keeps_legal(m: SystemModel, y: frozenset, event: str) -> bool:
    """No estimated legal state is driven illegal by the event."""
    legal = m.legal_states
    for x in y:
        if x in legal:
            target = m.plant.step(x, event)
            if target is not None and target not in legal:
                return False
    return True


def _estimate_has_legal_continuation(m: SystemModel, y: frozenset, event: str) -> bool:
    """Some estimated legal state takes the event and stays legal."""
    legal = m.legal_states
    for x in y:
        if x in legal:
            target = m.plant.step(x, event)
            if target is not None and target in legal:
                return True
    return False


def def_check_ca_observable(
    m: SystemModel,
    cfg: OracleConfig = OracleConfig(),
    obs: Observer | None = None,
    first: bool = False,
) -> Verdict:
    """Upper-bound observability: whenever an event legally extends a string,
    some consistent observation must rule out every illegal continuation.

    Observations are handled symbolically as observer states; reported
    violations are real, a pass is conclusive only up to the bound.
    """
    require_valid(m)
    if obs is None:
        obs = build_observer(m)
    witnesses = []
    for w in legal_strings(m, cfg.max_plant_len):
        end = m.spec.run(w)
        extendable = [e for e in sorted(m.plant.alphabet) if m.spec.step(end, e) is not None]
        if not extendable:
            continue
        classes = observation_classes(m, obs, w)
        for event in extendable:
            if not any(_estimate_keeps_legal(m, y, event) for y in classes):
                witnesses.append(
                    Witness(
                        kind="estimate-conflict",
                        event=event,
                        plant_states=(end,),
                        detail=(
                            f"no observation of {render_word(w)} certifies that "
                            f"{event} stays legal"
                        ),
                    )
                )
                if first:
                    return Verdict(holds=False, witnesses=tuple(witnesses))
    return Verdict(holds=not witnesses, witnesses=tuple(witnesses))


def def_check_cas_observable(
    m: SystemModel,
    cfg: OracleConfig = OracleConfig(),
    obs: Observer | None = None,
    first: bool = False,
) -> Verdict:
    """Lower-bound observability: an event every consistent observation
    supports (some legal candidate takes it and stays legal) must itself be
    legal after the string."""
    require_valid(m)
    if obs is None:
        obs = build_observer(m)
    witnesses = []
    for w in legal_strings(m, cfg.max_plant_len):
        end = m.spec.run(w)
        escaping = [
            e
            for e in sorted(m.plant.alphabet)
            if m.plant.step(end, e) is not None and m.spec.step(end, e) is None
        ]
        if not escaping:
            continue
        classes = observation_classes(m, obs, w)
        for event in escaping:
            if classes and all(
                _estimate_has_legal_continuation(m, y, event) for y in classes
            ):
                witnesses.append(
                    Witness(
                        kind="estimate-conflict",
                        event=event,
                        plant_states=(end,),
                        detail=(
                            f"every observation of {render_word(w)} supports {event}, "
                            f"which is illegal after it"
                        ),
                    )
                )
                if first:
                    return Verdict(holds=False, witnesses=tuple(witnesses))
    return Verdict(holds=not witnesses, witnesses=tuple(witnesses))


def def_membership(m: SystemModel, sup: Supervisor, word: Word, kind: str) -> bool:
    """Literal evaluation of the closed-loop language recursions.

    Tracks, per prefix, the symbolic set of observer states consistent with
    the prefix, and tests command membership through the tampered-command
    closed forms.
    """
    if kind not in (KIND_LARGE, KIND_SMALL):
        raise ValueError(f"kind must be large or small, got {kind!r}")
    obs = sup.observer
    attackable = m.attackable_control_events
    uncontrollable = m.uncontrollable_events
    state = m.plant.initial
    for k, event in enumerate(word):
        nxt = m.plant.step(state, event)
        if nxt is None:
            return False
        if event not in uncontrollable:
            classes = observation_classes(m, obs, word[:k])
            commands = [
                ControlCommandSet(base=sup.enabled(y), attackable=attackable) for y in classes
            ]
            if kind == KIND_LARGE:
                if not any(command_contains_exists(c, event) for c in commands):
                    return False
            else:
                if not all(command_contains_forall(c, event) for c in commands):
                    return False
        state = nxt
    return True


def enumerate_observations(m: SystemModel, word: Word, max_len: int | None = None) -> list[Word]:
    """Explicit members of the observation set of one string, up to a bound
    (the default witness-length bound when none is given)."""
    if max_len is None:
        max_len = OracleConfig().max_witness_len
    return enumerate_words(phi_pi_automaton(m, word), max_len, marked_only=True)
