"""Supervisory control of discrete-event systems under sensor and actuator
attacks: observer construction, existence checks, supervisor synthesis, and
closed-loop language comparison."""

from .attack import (
    AttackedAutomaton,
    InternalConsistencyError,
    Observer,
    build_attacked_plant,
    build_observer,
    estimate,
    fold_observer,
    observation_projection,
    observer_step,
    singleton_estimates,
)
from .closedloop import (
    ClosedLoopAutomaton,
    NonblockingReport,
    build_large,
    build_small,
    check_nonblocking,
    marked_large,
)
from .fsa import (
    EPSILON,
    Automaton,
    AutomatonError,
    dfa_equivalent,
    epsilon_closure,
    intersection_empty,
    isomorphic,
    string_language_nfa,
    subset_construct,
    sync_product,
    trim_report,
)
from .model import (
    EventAttributes,
    ModelError,
    SystemModel,
    ValidationReport,
    all_out_attack,
    assemble_model,
    attackable_transitions,
    deletion_attack,
    insertion_attack,
    replacement_attack,
    validate,
)
from .oracle import (
    OracleConfig,
    def_check_ca_observable,
    def_check_cad_observable,
    def_check_cas_observable,
    def_membership,
    phi_pi_automaton,
    theta_pi_automaton,
)
from .synth import (
    ControlCommandSet,
    Supervisor,
    command_contains_exists,
    command_contains_forall,
    supervisors_equal,
    synth_conservative,
    synth_optimistic,
)
from .verify import (
    NonblockingExistence,
    ObservabilityVerdict,
    SupervisorExistence,
    Verdict,
    Witness,
    check_ca_controllable,
    check_cad_controllable,
    check_cad_observable,
    check_cas_controllable,
    check_lm_closed,
    deterministic_supervisor_exists,
    nonblocking_supervisor_exists,
)

__all__ = [name for name in dir() if not name.startswith("_")]
