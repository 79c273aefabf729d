"""Exact structural analysis of Petri nets: semiflows, bounds, home spaces, liveness."""

from .errors import PetriError
from .net import PetriNet, enabled, fire, fire_sequence, incidence, parse_net, serialize_net
from .semiflows import (
    GeneratingSet,
    Kind,
    Semiflow,
    Semiring,
    decompose_over_N,
    hilbert_basis,
    is_minimal_semiflow,
    is_minimal_support,
    minimal_support_cover,
    minimal_support_semiflows,
    rational_kernel_basis,
    supports,
    verify_semiflow,
)
from .invariants import (
    invariant_value,
    iota,
    is_structurally_bounded,
    mu_bound,
    rho,
    structurally_bounded_places,
    threshold_dead_transitions,
)
from .predicate import parse_predicate
from .reachability import (
    TransitionGraph,
    build_graph,
    home_states,
    is_home_space,
    is_home_state,
    live_transitions,
    scc_decomposition,
    sinks,
)
from .casebook import casebook_net

__version__ = "0.1.0"
