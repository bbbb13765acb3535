"""Random small system models for cross-validation batches.

Plants are generated as deterministic DAGs (edges follow a fixed state
order) with every state marked, so their languages are finite and bounded
enumeration by the brute-force routines is complete rather than merely
bounded.  Illegal regions never re-enter the legal set: all transitions
from an illegal state to a legal one are dropped.  On such plants a string
ends in a legal state iff it never left the legal set, which keeps the
estimate-level checks and the string-level definitions in exact agreement.
Attack languages may still contain cycles (and hence be infinite).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .fsa import Automaton, trim_report
from .model import (
    SystemModel,
    assemble_model,
    deletion_attack,
    replacement_attack,
    validate,
)

EVENT_POOL = ("a", "b", "c", "d")


@dataclass(frozen=True)
class RandomModelConfig:
    min_states: int = 3
    max_states: int = 8
    max_events: int = 4
    max_attacked_transitions: int = 2
    max_attack_states: int = 3
    p_illegal: float = 0.3
    p_unobservable: float = 0.15
    p_uncontrollable: float = 0.25
    p_attackable_control: float = 0.3


def _random_dag_plant(rng: random.Random, cfg: RandomModelConfig) -> Automaton:
    n = rng.randint(cfg.min_states, cfg.max_states)
    events = list(EVENT_POOL[: rng.randint(2, cfg.max_events)])
    transitions = set()
    used = set()

    def add_edge(src, dst):
        free = [e for e in events if (src, e) not in used]
        if not free:
            return False
        e = rng.choice(free)
        used.add((src, e))
        transitions.add((src, e, dst))
        return True

    for dst in range(1, n):
        for _ in range(8):
            if add_edge(rng.randrange(dst), dst):
                break
    for src in range(n):
        for dst in range(src + 1, n):
            if rng.random() < 0.25:
                add_edge(src, dst)
    return Automaton.make(
        initial=0, transitions=transitions, marked=range(n), alphabet=events, states=range(n)
    )


def _reachable_restriction(plant: Automaton) -> Automaton:
    reachable = set()
    stack = [plant.initial]
    while stack:
        s = stack.pop()
        if s in reachable:
            continue
        reachable.add(s)
        stack.extend(t for _, t in plant.outgoing(s))
    transitions = {(s, e, t) for s, e, t in plant.transitions if s in reachable}
    return Automaton.make(
        initial=plant.initial,
        transitions=transitions,
        marked=set(plant.marked) & reachable,
        alphabet=plant.alphabet,
        states=reachable,
    )


def _random_attack_language(rng: random.Random, observable: list, cfg: RandomModelConfig) -> Automaton:
    shape = rng.random()
    if shape < 0.25:
        return deletion_attack()
    if shape < 0.5:
        return replacement_attack(*(rng.choice(observable) for _ in range(rng.randint(1, 2))))
    if shape < 0.7:
        head = rng.choice(observable)
        loop = rng.sample(observable, k=min(len(observable), rng.randint(1, 2)))
        transitions = [("a0", head, "a1")] + [("a1", e, "a1") for e in loop]
        return Automaton.make(initial="a0", transitions=transitions, marked=["a1"])
    n = rng.randint(1, cfg.max_attack_states)
    states = [f"a{i}" for i in range(n)]
    transitions = set()
    for s in states:
        for e in observable:
            if rng.random() < 0.4:
                transitions.add((s, e, states[rng.randrange(n)]))
    marked = [s for s in states if rng.random() < 0.5] or [states[-1]]
    language = Automaton.make(initial="a0", transitions=transitions, marked=marked, states=states)
    if "a0" not in trim_report(language).coaccessible:
        # The random edges missed every marked state; patch one in so the
        # attack language is nonempty.
        transitions.add(("a0", rng.choice(observable), marked[0]))
        language = Automaton.make(
            initial="a0", transitions=transitions, marked=marked, states=states
        )
    return language


def random_model(rng: random.Random, cfg: RandomModelConfig = RandomModelConfig()) -> SystemModel:
    """Draw one valid random model (re-draws internally until valid)."""
    for _ in range(200):
        plant = _reachable_restriction(_random_dag_plant(rng, cfg))
        states = sorted(plant.states)
        if len(states) < 2:
            continue

        illegal = {s for s in states if s != plant.initial and rng.random() < cfg.p_illegal}
        # Illegal regions are absorbing: drop every edge back into the legal set.
        transitions = {
            (s, e, t)
            for s, e, t in plant.transitions
            if not (s in illegal and t not in illegal)
        }
        plant = _reachable_restriction(
            Automaton.make(
                initial=plant.initial,
                transitions=transitions,
                marked=set(plant.states),
                alphabet=plant.alphabet,
                states=plant.states,
            )
        )
        legal = sorted(set(plant.states) - illegal)

        events = sorted(plant.alphabet)
        unobservable = {e for e in events if rng.random() < cfg.p_unobservable}
        observable = [e for e in events if e not in unobservable]
        uncontrollable = {e for e in events if rng.random() < cfg.p_uncontrollable}
        attackable_control = {
            e
            for e in events
            if e not in uncontrollable and rng.random() < cfg.p_attackable_control
        }

        attacks = {}
        if observable:
            per_event = {}
            for s, e, t in plant.transitions:
                per_event.setdefault(e, []).append((s, e, t))
            candidates = [e for e in observable if e in per_event]
            rng.shuffle(candidates)
            budget = cfg.max_attacked_transitions
            for e in candidates:
                need = len(per_event[e])
                if need <= budget and rng.random() < 0.8:
                    language = _random_attack_language(rng, observable, cfg)
                    for tr in per_event[e]:
                        attacks[tr] = language
                    budget -= need
                if budget == 0:
                    break

        try:
            m = assemble_model(
                plant,
                legal,
                uncontrollable=uncontrollable,
                unobservable=unobservable,
                attackable_control=attackable_control,
                attacks_by_transition=attacks,
            )
        except Exception:
            continue
        if validate(m).ok:
            return m
    raise RuntimeError("could not draw a valid random model")
