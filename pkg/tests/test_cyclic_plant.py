"""End-to-end behavior on a cyclic plant (the grid fixtures and the random
batch are acyclic, so this pins the machinery on loops): a work cell that
loads, works, unloads, and may jam, where the unload report is deletable."""

from altersup.attack import build_observer, estimate
from altersup.closedloop import build_large, build_small
from altersup.fsa import Automaton
from altersup.model import assemble_model, deletion_attack, validate
from altersup.oracle import (
    OracleConfig,
    def_check_cad_observable,
    def_membership,
    plant_strings,
)
from altersup.synth import (
    supervisors_equal,
    synth_conservative,
    synth_optimistic,
    uncontrollable_conflicts,
)
from altersup.verify import check_cad_controllable, check_cad_observable


def work_cell():
    plant = Automaton.make(
        initial=0,
        transitions=[
            (0, "load", 1),
            (1, "work", 2),
            (2, "unload", 0),
            (1, "jam", 3),
            (3, "reset", 0),
        ],
        marked=[0],
        alphabet=["load", "work", "unload", "jam", "reset"],
    )
    return assemble_model(
        plant,
        [0, 1, 2],
        uncontrollable=["jam"],
        attacks_by_event={"unload": deletion_attack()},
    )


def test_cyclic_work_cell_end_to_end():
    m = work_cell()
    assert validate(m).ok

    # The jam is uncontrollable and leaves the legal set.
    cad = check_cad_controllable(m)
    assert not cad.holds
    assert (cad.witnesses[0].plant_states, cad.witnesses[0].event) == ((1, 3), "jam")

    obs = build_observer(m)
    assert len(obs.automaton.states) == 4
    estimates = {frozenset(estimate(obs, y)) for y in obs.automaton.states}
    assert frozenset({0, 2}) in estimates  # deletion merges post-work and idle

    # The merged estimate never disagrees on any event, so observability holds
    # and the brute-force check concurs on the looping language.
    assert check_cad_observable(m, obs).holds
    assert def_check_cad_observable(m, OracleConfig(max_plant_len=8), first=True).holds

    sp = synth_conservative(m, obs)
    sr = synth_optimistic(m, obs)
    assert supervisors_equal(sp, sr)[0]
    # The conservative table withholds the uncontrollable jam, which the
    # closed-loop semantics ignores but the lint reports.
    assert any(e == "jam" for _, e in uncontrollable_conflicts(sp))

    large = build_large(m, obs, sp)
    small = build_small(m, obs, sp)
    assert len(large.automaton.states) == 5
    assert large.automaton.generates(("load", "jam"))  # uncontrollable passes
    assert large.automaton.generates(("load", "work", "unload", "load"))
    for w in plant_strings(m, 6):
        assert def_membership(m, sp, w, "large") == large.automaton.generates(w)
        assert def_membership(m, sp, w, "small") == small.automaton.generates(w)
