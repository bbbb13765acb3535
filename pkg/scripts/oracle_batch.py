#!/usr/bin/env python3
"""Random-model agreement batch.

Draws random models and cross-checks the estimate-level observability
decision against the brute-force definition check, the bounded upper and
lower observability definitions, supervisor equality, closed-loop
membership, and the containment of the small loop in the large one.

Run from the repository root:
    python3 scripts/oracle_batch.py --models 200 --seed 1 --max-len 8
"""

from __future__ import annotations

import argparse
import pathlib
import random
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from altersup import build_large, build_observer, build_small, check_cad_observable
from altersup.fsa import language_subset
from altersup.oracle import (
    OracleConfig,
    def_check_ca_observable,
    def_check_cad_observable,
    def_check_cas_observable,
    def_membership,
    plant_strings,
)
from altersup.randgen import RandomModelConfig, random_model
from altersup.synth import supervisors_equal, synth_conservative, synth_optimistic


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--models", type=int, default=200)
    parser.add_argument("--seed", type=int, default=20260809)
    parser.add_argument("--max-len", type=int, default=8)
    parser.add_argument("--member-len", type=int, default=6)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    cfg = OracleConfig(max_plant_len=args.max_len)
    t0 = time.perf_counter()
    holds = fails = 0
    disagreements = []
    for i in range(args.models):
        m = random_model(rng, RandomModelConfig())
        obs = build_observer(m)
        exact = check_cad_observable(m, obs)
        brute = def_check_cad_observable(m, cfg, first=True)
        if exact.holds != brute.holds:
            disagreements.append(i)
            continue
        holds += exact.holds
        fails += not exact.holds

        if exact.holds:
            assert def_check_ca_observable(m, cfg, obs, first=True).holds
            assert def_check_cas_observable(m, cfg, obs, first=True).holds
            assert supervisors_equal(synth_conservative(m, obs), synth_optimistic(m, obs))[0]

        sup = synth_conservative(m, obs)
        large = build_large(m, obs, sup)
        small = build_small(m, obs, sup)
        assert language_subset(small.automaton, large.automaton)[0]
        for w in plant_strings(m, args.member_len):
            assert def_membership(m, sup, w, "large") == large.automaton.generates(w)
            assert def_membership(m, sup, w, "small") == small.automaton.generates(w)

    dt = time.perf_counter() - t0
    print(f"{args.models} models in {dt:.1f}s: {holds} observable, {fails} not")
    if disagreements:
        print(f"DISAGREEMENTS at model indices {disagreements}")
        return 1
    print("all cross-checks agree")
    return 0


if __name__ == "__main__":
    sys.exit(main())
