"""Grid-robot fixture: a robot on a rows x cols cell grid that can only move
right or down.

Cells are numbered row-major starting at 1, so cell = cols*(row-1)+col.
Event ``e<k>`` moves right from column k, ``d<r>`` moves down from row r;
the last column/row events exist in the alphabet but label no transition.
Obstacle cells are illegal: the legal sub-automaton is the grid minus the
obstacles.
"""

from __future__ import annotations

from typing import Iterable

from .fsa import Automaton
from .model import (
    SystemModel,
    assemble_model,
    deletion_attack,
    replacement_attack,
)

DEFAULT_OBSTACLES = frozenset({8, 9, 19})

SCENARIO_REPLACE = "replace-e2-with-e1"
SCENARIO_DELETE = "delete-e1"
SCENARIO_INJECT = "inject-down-moves"
SCENARIOS = (SCENARIO_REPLACE, SCENARIO_DELETE, SCENARIO_INJECT)


def grid_plant(rows: int = 5, cols: int = 5, *, goal_only_marked: bool = False) -> Automaton:
    """The free-movement grid automaton.

    All cells are marked by default; with ``goal_only_marked`` only the
    bottom-right cell is.
    """
    def cell(r, c):
        return cols * (r - 1) + c

    transitions = []
    for r in range(1, rows + 1):
        for c in range(1, cols + 1):
            if c < cols:
                transitions.append((cell(r, c), f"e{c}", cell(r, c + 1)))
            if r < rows:
                transitions.append((cell(r, c), f"d{r}", cell(r + 1, c)))
    alphabet = {f"e{c}" for c in range(1, cols + 1)} | {f"d{r}" for r in range(1, rows + 1)}
    marked = [rows * cols] if goal_only_marked else range(1, rows * cols + 1)
    return Automaton.make(initial=1, transitions=transitions, marked=marked, alphabet=alphabet)


def _tail_noise_attack(first: str, noise: Iterable[str]) -> Automaton:
    """Marks first·noise*: the real observation followed by spurious moves."""
    transitions = [("a0", first, "a1")]
    transitions += [("a1", e, "a1") for e in sorted(noise)]
    return Automaton.make(initial="a0", transitions=transitions, marked=["a1"])


def robot_model(
    scenario: str | None = None,
    *,
    nonblocking: bool = False,
    uncontrollable: Iterable[str] = (),
    attackable_control: Iterable[str] = (),
    obstacles: Iterable[int] = DEFAULT_OBSTACLES,
) -> SystemModel:
    """The 5x5 robot under one of the three sensor-attack scenarios.

    ``nonblocking=True`` marks only the goal cell 25 (in plant and spec);
    otherwise all states are marked.  All events are observable;
    ``uncontrollable`` and ``attackable_control`` adjust the control-side
    attributes.
    """
    plant = grid_plant(goal_only_marked=nonblocking)
    legal = sorted(set(plant.states) - set(obstacles))

    attacks_by_event = None
    attacks_by_transition = None
    if scenario == SCENARIO_REPLACE:
        attacks_by_event = {"e2": replacement_attack("e1")}
    elif scenario == SCENARIO_DELETE:
        attacks_by_event = {"e1": deletion_attack()}
    elif scenario == SCENARIO_INJECT:
        attacks_by_transition = {
            (8, "d2", 13): _tail_noise_attack("d2", ["d2", "d3"]),
            (12, "e2", 13): _tail_noise_attack("e2", ["d2", "d3"]),
        }
    elif scenario is not None:
        raise ValueError(f"unknown scenario {scenario!r}; pick one of {SCENARIOS}")

    return assemble_model(
        plant,
        legal,
        uncontrollable=uncontrollable,
        attackable_control=attackable_control,
        attacks_by_event=attacks_by_event,
        attacks_by_transition=attacks_by_transition,
    )
