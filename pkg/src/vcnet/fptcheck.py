"""Products of the edge-constrained automaton with word automata, and the
feasibility-based acceptance decisions behind the parameterized checker.

A finite-kind product node is accepting when its automaton component can
take one more step on the node's letter into an accepting state and its
constrained component is final.  An accepting path additionally owes every
triggered interface its full budget (the exhaustion equalities).  On the
Buchi side only unconstrained edges can repeat forever, so acceptance
reduces to reaching a nontrivial bottom-edge SCC that contains an accepting
node, through a budget-feasible connected path flow.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .automata import WordAutomaton, ltl_to_buchi, ltl_to_nfa
from .eca import EdgeConstrainedAutomaton, build_eca, special_places
from .errors import AlphabetMismatch, BudgetSpaceLimit, OneSafetyViolation
from .explicit import tarjan_sccs
from .ilp import BOTTOM, LabelledDigraph, budget_walk_search, connected_path_flow
from .ltl import Formula, Not, atoms
from .net import PetriNet, verify_one_safe
from .structure import flow_graph, min_vertex_cover


@dataclass
class ProductGraph:
    kind: str                   # 'finite' or 'buchi'
    nodes: tuple
    edges: tuple                # (src, label, dst); label BOTTOM or interface
    initial: tuple
    accepting: frozenset
    exhaustion: dict = field(default_factory=dict)   # node -> frozenset (finite)
    interfaces: tuple = ()

    def graph(self) -> LabelledDigraph:
        return LabelledDigraph(nodes=self.nodes, edges=self.edges)


def product(eca: EdgeConstrainedAutomaton, aut: WordAutomaton) -> ProductGraph:
    """Synchronous product; the automaton reads the letter of the state the
    constrained component leaves.  Only nodes reachable from the initial
    pairs are materialized."""
    if not aut.atoms <= eca.special.special:
        raise AlphabetMismatch(
            f"automaton atoms {sorted(aut.atoms - eca.special.special)} "
            "are outside the special set"
        )
    kind = "finite" if aut.kind == "nfa" else "buchi"
    initial = tuple(
        (eca.initial, q) for q in sorted(aut.initial, key=str)
    )
    nodes = set(initial)
    edges = set()
    queue = deque(initial)
    while queue:
        node = queue.popleft()
        p1, q = node
        letter = p1 & aut.atoms
        aut_steps = aut.step(q, letter)
        if not aut_steps:
            continue
        for label, p2 in eca.successors(p1):
            for q2 in aut_steps:
                nxt = (p2, q2)
                edges.add((node, label, nxt))
                if nxt not in nodes:
                    nodes.add(nxt)
                    queue.append(nxt)
    node_order = {n: i for i, n in enumerate(sorted(nodes, key=_node_key))}
    ordered = tuple(sorted(nodes, key=_node_key))
    ordered_edges = tuple(sorted(
        edges, key=lambda e: (node_order[e[0]], str(e[1]), node_order[e[2]])))
    if kind == "finite":
        accepting = frozenset(
            (p1, q) for (p1, q) in nodes
            if p1 in eca.final_states
            and aut.step(q, p1 & aut.atoms) & aut.accepting
        )
        exhaustion = {
            node: eca.exhaustion_trigger(node[0]) for node in ordered
        }
    else:
        accepting = frozenset((p1, q) for (p1, q) in nodes if q in aut.accepting)
        exhaustion = {}
    return ProductGraph(kind=kind, nodes=ordered, edges=ordered_edges,
                        initial=initial, accepting=accepting,
                        exhaustion=exhaustion,
                        interfaces=tuple(eca.special.interface_values))


def _node_key(node):
    return str(node)


def accepting_path_exists_finite(prod: ProductGraph, u, dump=None) -> bool:
    """Is there an accepting path in the finite-kind product?

    Tries every (initial, accepting) endpoint pair with a connected flow
    query; a pair with identical endpoints is first settled by the empty
    path when the exhaustion obligations vanish, then by the cycle variant.
    """
    if prod.kind != "finite":
        raise ValueError("finite-kind product expected")
    graph = prod.graph()
    reach = _forward(prod)
    targets = [n for n in prod.nodes if n in prod.accepting and n in reach]
    for q0 in prod.initial:
        for qe in targets:
            obligations = prod.exhaustion.get(qe, frozenset())
            if q0 == qe and all(u.get(lb, 0) == 0 for lb in obligations):
                return True
            mu = connected_path_flow(graph, q0, qe, u,
                                     exhaustion=obligations, dump=dump)
            if mu is not None:
                return True
    return False


def _forward(prod):
    adj = {}
    for src, _, dst in prod.edges:
        adj.setdefault(src, []).append(dst)
    seen = set(prod.initial)
    queue = deque(prod.initial)
    while queue:
        node = queue.popleft()
        for nxt in adj.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def _lasso_sccs(prod):
    """Nodes of nontrivial bottom-edge SCCs that contain an accepting node,
    grouped per SCC."""
    adj = {n: [] for n in prod.nodes}
    for src, label, dst in prod.edges:
        if label is BOTTOM:
            adj[src].append(dst)
    sccs = tarjan_sccs(list(prod.nodes), adj)
    result = []
    for scc in sccs:
        members = set(scc)
        nontrivial = len(scc) > 1 or any(n in adj[n] for n in scc)
        if nontrivial and members & prod.accepting:
            result.append(members)
    return result


def accepting_lasso_exists(prod: ProductGraph, u, dump=None) -> bool:
    """Is there an accepting path in the Buchi-kind product?

    Within a bottom-edge SCC every node reaches every other for free, so
    one feasibility query per qualifying SCC suffices.
    """
    if prod.kind != "buchi":
        raise ValueError("buchi-kind product expected")
    sccs = _lasso_sccs(prod)
    if not sccs:
        return False
    order = {n: i for i, n in enumerate(prod.nodes)}
    graph = prod.graph()
    for members in sccs:
        if any(q0 in members for q0 in prod.initial):
            return True
    for q0 in prod.initial:
        for members in sccs:
            rep = min(members, key=order.get)
            mu = connected_path_flow(graph, q0, rep, u, dump=dump)
            if mu is not None:
                return True
    return False


def budget_graph_check(prod: ProductGraph, u, state_limit=10**7) -> bool:
    """Independent decision: breadth-first search over (node, usage vector)
    states; exact on both product kinds."""
    labels = sorted(set(prod.interfaces)
                    | {lb for _, lb, _ in prod.edges if lb is not BOTTOM},
                    key=str)
    space = len(prod.nodes) or 1
    for lb in labels:
        space *= u.get(lb, 0) + 1
    if space > state_limit:
        raise BudgetSpaceLimit(
            f"budget state space {space} exceeds limit {state_limit}"
        )
    lindex = {lb: i for i, lb in enumerate(labels)}
    if prod.kind == "buchi":
        targets = set().union(*_lasso_sccs(prod)) if _lasso_sccs(prod) else set()

        def done(node, usage):
            return node in targets
    else:
        def done(node, usage):
            if node not in prod.accepting:
                return False
            trig = prod.exhaustion.get(node, frozenset())
            return all(usage[lindex[lb]] == u.get(lb, 0) for lb in trig)

    out = {}
    for i, (src, lb, dst) in enumerate(prod.edges):
        out.setdefault(src, []).append((lb, dst))
    zero = tuple([0] * len(labels))
    start = [(q0, zero) for q0 in prod.initial]
    if any(done(q0, zero) for q0, _ in start):
        return True
    seen = set(start)
    queue = deque(start)
    while queue:
        node, usage = queue.popleft()
        for lb, dst in out.get(node, ()):
            if lb is BOTTOM:
                usage2 = usage
            else:
                k = lindex[lb]
                if usage[k] >= u.get(lb, 0):
                    continue
                usage2 = usage[:k] + (usage[k] + 1,) + usage[k + 1:]
            nxt = (dst, usage2)
            if nxt in seen:
                continue
            seen.add(nxt)
            if done(dst, usage2):
                return True
            queue.append(nxt)
    return False


@dataclass
class FptVerdict:
    holds: bool
    cover: frozenset
    special: frozenset
    eca_states: int
    finite_violation: bool
    lasso_violation: bool


def fpt_model_check(net: PetriNet, m0, formula: Formula | None = None,
                    nfa: WordAutomaton | None = None,
                    buchi: WordAutomaton | None = None,
                    cover=None, verify_safety=False,
                    safety_limit=10**6, dump=None) -> FptVerdict:
    """The parameterized checker: special set, constrained automaton, two
    products, and connected-flow feasibility.

    ``nfa``/``buchi`` describe the *violating* finite and infinite words;
    when a formula is given they are derived from its negation.  One-safety
    is assumed unless ``verify_safety`` requests the explicit sweep.
    """
    if formula is not None:
        extra = atoms(formula) - set(net.places)
        if extra:
            raise AlphabetMismatch(
                f"formula atoms {sorted(extra)} are not places of the net"
            )
        nfa = ltl_to_nfa(Not(formula))
        buchi = ltl_to_buchi(Not(formula))
    if nfa is None or buchi is None:
        raise ValueError("need a formula or both violation automata")
    if verify_safety and not verify_one_safe(net, m0, node_limit=safety_limit):
        raise OneSafetyViolation("<unknown>", "<unknown>", frozenset(m0))
    if cover is None:
        cover = min_vertex_cover(flow_graph(net), len(net.places))
    formula_places = nfa.atoms | buchi.atoms
    special = special_places(net, m0, cover, formula_places)
    eca = build_eca(net, special, m0)
    u = special.budgets
    prod_fin = product(eca, nfa)
    finite_bad = accepting_path_exists_finite(prod_fin, u, dump=dump)
    lasso_bad = False
    if not finite_bad:
        prod_buc = product(eca, buchi)
        lasso_bad = accepting_lasso_exists(prod_buc, u, dump=dump)
    return FptVerdict(holds=not (finite_bad or lasso_bad),
                      cover=frozenset(cover), special=special.special,
                      eca_states=len(eca), finite_violation=finite_bad,
                      lasso_violation=lasso_bad)
