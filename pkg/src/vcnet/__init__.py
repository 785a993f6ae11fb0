"""Vertex-cover-parameterized model checking for 1-safe Petri nets."""

from .net import (
    PetriNet, NetDocument, ReachGraph, enabled, fire, format_net,
    is_coverable, is_reachable, parse_net, reachability_graph, verify_one_safe,
)
from .structure import (
    FlowGraph, NeighbourhoodTable, PathDecomposition, benefit_depth,
    flow_graph, format_decomposition, interface_set, interfaces,
    is_vertex_cover, min_vertex_cover, neighbourhoods, parse_decomposition,
    validate_path_decomposition,
)
from .ltl import Formula, atoms, eval_ltl, parse_ltl
from .automata import (
    WordAutomaton, determinize, format_automaton, ltl_to_buchi, ltl_to_nfa,
    parse_automaton,
)
from .explicit import Counterexample, Verdict, explicit_model_check
from .ilp import (
    BOTTOM, LabelledDigraph, LinearSystem, budget_walk_search,
    connected_path_flow, feasible, reconstruct_walk,
)
from .eca import (
    EdgeConstrainedAutomaton, SpecialSet, build_eca, lift_word,
    normalize_run, special_places, valid_run_check,
)
from .fptcheck import (
    FptVerdict, ProductGraph, accepting_lasso_exists,
    accepting_path_exists_finite, budget_graph_check, fpt_model_check, product,
)
from .reductions import (
    CspInstance, PebblingInstance, PwSatInstance, brute_force_csp,
    brute_force_ppwsat, build_reduction_decomposition, csp_to_net,
    format_csp, format_pebbling, format_ppwsat, formula_gadget_net,
    net_to_pebbling, parse_csp, parse_pebbling, parse_ppwsat,
    pebbling_reachable, sat_to_net,
)
from .samples import chain_net, manufacturing_net

__all__ = [name for name in dir() if not name.startswith("_")]
