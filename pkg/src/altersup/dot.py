"""Graphviz DOT rendering of automata, observers, and closed-loop products.

Conventions: the initial state is drawn bold with an entry arrow, marked
states are double circles, and illegal plant states are dashed.  Parallel
edges between the same pair of states are folded into one comma-labeled
edge.
"""

from __future__ import annotations

from .attack import Observer
from .closedloop import ClosedLoopAutomaton
from .fsa import Automaton, state_key
from .model import SystemModel


def _quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def render_member(member) -> str:
    if isinstance(member, tuple) and len(member) == 3 and member[0] == "att":
        return f"~{member[1]}:{member[2]}"
    return str(member)


def member_set_label(y: frozenset) -> str:
    return "{" + ",".join(render_member(x) for x in sorted(y, key=state_key)) + "}"


def automaton_dot(
    a: Automaton,
    *,
    name: str = "automaton",
    label=None,
    dashed: frozenset = frozenset(),
    rankdir: str = "LR",
) -> str:
    label = label or render_member
    order = sorted(a.states, key=state_key)
    ids = {s: f"q{i}" for i, s in enumerate(order)}
    lines = [f"digraph {_quote(name)} {{", f"  rankdir = {rankdir};", "  __init [shape=point, style=invis];"]
    for s in order:
        shape = "doublecircle" if s in a.marked else "circle"
        styles = []
        if s == a.initial:
            styles.append("bold")
        if s in dashed:
            styles.append("dashed")
        style = f', style="{",".join(styles)}"' if styles else ""
        lines.append(f"  {ids[s]} [label={_quote(label(s))}, shape={shape}{style}];")
    lines.append(f"  __init -> {ids[a.initial]};")
    grouped: dict = {}
    for s, e, t in a.transitions:
        grouped.setdefault((s, t), []).append("ε" if e is None else e)
    for (s, t), events in sorted(grouped.items(), key=lambda kv: state_key(kv[0])):
        lines.append(f"  {ids[s]} -> {ids[t]} [label={_quote(','.join(sorted(events)))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def plant_dot(m: SystemModel, *, name: str = "plant") -> str:
    illegal = m.plant.states - m.spec.states
    return automaton_dot(m.plant, name=name, dashed=illegal)


def observer_dot(obs: Observer, m: SystemModel | None = None, *, name: str = "observer") -> str:
    dashed = frozenset()
    if m is not None:
        illegal = m.plant.states - m.spec.states
        dashed = frozenset(
            y for y in obs.automaton.states if (y & obs.origin_states) and (y & obs.origin_states) <= illegal
        )
    return automaton_dot(obs.automaton, name=name, label=member_set_label, dashed=dashed)


def closedloop_dot(cl: ClosedLoopAutomaton, *, name: str | None = None) -> str:
    def label(state):
        x, B = state
        sets = ",".join(member_set_label(y) for y in sorted(B, key=state_key))
        return f"{render_member(x)} | {{{sets}}}"

    return automaton_dot(cl.automaton, name=name or f"{cl.kind}-loop", label=label)
