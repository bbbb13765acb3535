#!/usr/bin/env python3
"""End-to-end walk through the grid-robot scenarios.

For each sensor-attack scenario: build the observer, decide the existence
conditions, synthesize the state-estimate supervisors, compare the closed
loops against the legal language, and decide nonblocking on the
goal-marked variant.  Optionally dumps DOT graphs.

Run from the repository root:  python3 scripts/robot_demo.py [--dot-dir DIR]
"""

from __future__ import annotations

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from altersup import (
    build_large,
    build_observer,
    build_small,
    check_nonblocking,
    dfa_equivalent,
    deterministic_supervisor_exists,
    nonblocking_supervisor_exists,
)
from altersup.dot import closedloop_dot, member_set_label, observer_dot
from altersup.fsa import render_word
from altersup.gridworld import SCENARIOS, robot_model
from altersup.synth import (
    disablement_by_estimate,
    supervisors_equal,
    synth_conservative,
    synth_optimistic,
)


def yesno(b):
    return "yes" if b else "no"


def run_scenario(name, dot_dir):
    print(f"=== scenario: {name} ===")
    m = robot_model(name)
    obs = build_observer(m)
    print(f"observer: {len(obs.automaton.states)} states")

    det = deterministic_supervisor_exists(m, obs)
    print(f"deterministic supervisor exists: {yesno(det.exists)}")
    for w in det.observability.witnesses:
        print(f"  conflict: {w.detail}")

    sp = synth_conservative(m, obs)
    sr = synth_optimistic(m, obs)
    equal, diffs = supervisors_equal(sp, sr)
    print(f"conservative == optimistic (on feasible events): {yesno(equal)}")
    for y, e, side in diffs:
        print(f"  differ at {member_set_label(y)} on {e} ({side} supervisor enables it)")
    table = disablement_by_estimate(sp)
    if table:
        print("disablements of the conservative supervisor:")
        for est in sorted(table, key=lambda s: sorted(map(str, s))):
            print(f"  {member_set_label(est)}: {', '.join(sorted(table[est]))}")

    large = build_large(m, obs, sp)
    small = build_small(m, obs, sp)
    eq_ls, witness = dfa_equivalent(large.automaton, small.automaton, compare_marked=False)
    print(f"large == small under the conservative supervisor: {yesno(eq_ls)}")
    if witness:
        print(f"  distinguishing string: {render_word(witness)}")

    goal = robot_model(name, nonblocking=True)
    goal_obs = build_observer(goal)
    nb = nonblocking_supervisor_exists(goal, goal_obs)
    print(f"nonblocking supervisor exists (goal-marked): {yesno(nb.exists)}")
    if nb.exists:
        report = check_nonblocking(goal, goal_obs, synth_conservative(goal, goal_obs))
        print(f"  synthesized supervisor nonblocking: {yesno(report.nonblocking)}")

    if dot_dir:
        dot_dir.mkdir(parents=True, exist_ok=True)
        (dot_dir / f"{name}-observer.dot").write_text(observer_dot(obs, m), encoding="utf-8")
        (dot_dir / f"{name}-large.dot").write_text(closedloop_dot(large), encoding="utf-8")
    print()


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dot-dir", type=pathlib.Path, default=None)
    args = parser.parse_args()
    for name in SCENARIOS:
        run_scenario(name, args.dot_dir)


if __name__ == "__main__":
    main()
