"""Explicit-state model checking: the oracle engine.

A net is a model of a formula iff every maximal run satisfies it.  This
engine materializes the reachability graph and checks two products:

* reach graph x finite-word automaton for the negated formula; a violation
  is a path ending in a deadlock whose word the automaton accepts, and
* reach graph x Buchi automaton for the negated formula; a violation is a
  reachable cycle through an automaton-accepting product node.

In both products the automaton lags one letter behind: a product node
(M, q) reads the letter of M while moving to the next marking.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automata import WordAutomaton, ltl_to_buchi, ltl_to_nfa
from .errors import AlphabetMismatch
from .ltl import Formula, Not, atoms
from .net import DEFAULT_NODE_LIMIT, PetriNet, reachability_graph


@dataclass
class Counterexample:
    """A maximal run violating the formula: a finite deadlocking run, or a
    lasso (prefix + loop) describing an infinite run."""

    kind: str              # 'finite' or 'lasso'
    markings: list
    loop: list | None = None

    def describe(self):
        def fmt(m):
            return "{" + " ".join(sorted(m)) + "}"
        lines = [f"run[{i}]: {fmt(m)}" for i, m in enumerate(self.markings)]
        if self.loop is not None:
            lines += [f"loop[{i}]: {fmt(m)}" for i, m in enumerate(self.loop)]
        return lines


@dataclass
class Verdict:
    holds: bool
    counterexample: Counterexample | None = None


def _check_atoms(net, aut):
    extra = aut.atoms - set(net.places)
    if extra:
        raise AlphabetMismatch(
            f"automaton atoms {sorted(extra)} are not places of the net"
        )


def _finite_violation(graph, aut: WordAutomaton):
    """Search for a deadlocking run accepted by the finite-word automaton."""
    atoms_ = aut.atoms

    def bad(node):
        m, q = node
        if m not in graph.deadlocks:
            return False
        return bool(aut.step(q, m & atoms_) & aut.accepting)

    start = [(graph.initial, q) for q in sorted(aut.initial, key=str)]
    parent = {node: None for node in start}
    queue = deque(start)
    for node in start:
        if bad(node):
            return [graph.initial]
    while queue:
        node = queue.popleft()
        m, q = node
        letter = m & atoms_
        for _, m2 in graph.succ[m]:
            for q2 in aut.step(q, letter):
                nxt = (m2, q2)
                if nxt in parent:
                    continue
                parent[nxt] = node
                if bad(nxt):
                    run = [m2]
                    cur = node
                    while cur is not None:
                        run.append(cur[0])
                        cur = parent[cur]
                    run.reverse()
                    return run
                queue.append(nxt)
    return None


def _product_graph(graph, aut):
    start = [(graph.initial, q) for q in sorted(aut.initial, key=str)]
    adj = {}
    seen = set(start)
    queue = deque(start)
    while queue:
        node = queue.popleft()
        m, q = node
        letter = m & aut.atoms
        out = []
        for _, m2 in graph.succ[m]:
            for q2 in aut.step(q, letter):
                nxt = (m2, q2)
                out.append(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        adj[node] = out
    return start, adj


def tarjan_sccs(nodes, adj):
    """Iterative Tarjan; returns SCCs as lists in discovery order."""
    index = {}
    low = {}
    onstack = set()
    stack = []
    sccs = []
    counter = [0]

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(adj.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        onstack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter[0]
                    counter[0] += 1
                    stack.append(nxt)
                    onstack.add(nxt)
                    work.append((nxt, iter(adj.get(nxt, ()))))
                    advanced = True
                    break
                if nxt in onstack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                scc = []
                while True:
                    w = stack.pop()
                    onstack.discard(w)
                    scc.append(w)
                    if w == node:
                        break
                sccs.append(scc)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return sccs


def _lasso_violation(graph, aut: WordAutomaton):
    """Search for an infinite run accepted by the Buchi automaton."""
    start, adj = _product_graph(graph, aut)
    sccs = tarjan_sccs(list(adj), adj)
    target_scc = None
    for scc in sccs:
        members = set(scc)
        nontrivial = len(scc) > 1 or any(
            node in adj.get(node, ()) for node in scc
        )
        if not nontrivial:
            continue
        if any(q in aut.accepting for _, q in scc):
            target_scc = members
            break
    if target_scc is None:
        return None
    # prefix: initial -> some accepting node of the SCC (excluded; it heads
    # the loop), loop: goal -> goal inside the SCC, at least one step
    goal = sorted((n for n in target_scc if n[1] in aut.accepting), key=str)[0]
    prefix = _bfs_path(start, adj, goal)[:-1]
    loop = _bfs_cycle(goal, adj, target_scc)
    return [m for m, _ in prefix], [m for m, _ in loop]


def _bfs_path(start, adj, goal):
    parent = {node: None for node in start}
    if goal in parent:
        return [goal]
    queue = deque(start)
    while queue:
        node = queue.popleft()
        for nxt in adj.get(node, ()):
            if nxt in parent:
                continue
            parent[nxt] = node
            if nxt == goal:
                path = [nxt]
                cur = node
                while cur is not None:
                    path.append(cur)
                    cur = parent[cur]
                path.reverse()
                return path
            queue.append(nxt)
    raise AssertionError("goal not reachable")


def _bfs_cycle(node, adj, members):
    """Shortest cycle node -> ... -> node inside ``members``, returned as
    the marking sequence starting at ``node`` (one entry for a self-loop)."""
    parent = {}
    queue = deque()
    for nxt in adj.get(node, ()):
        if nxt in members and nxt not in parent:
            parent[nxt] = None
            queue.append(nxt)
    found = False
    while queue:
        cur = queue.popleft()
        if cur == node:
            found = True
            break
        for nxt in adj.get(cur, ()):
            if nxt in members and nxt not in parent:
                parent[nxt] = cur
                queue.append(nxt)
    if not found:
        raise AssertionError("no cycle through SCC node")
    rev = []
    cur = parent[node]
    while cur is not None:
        rev.append(cur)
        cur = parent[cur]
    rev.reverse()
    return [node] + rev


def explicit_model_check(net: PetriNet, m0, formula: Formula | None = None,
                         nfa: WordAutomaton | None = None,
                         buchi: WordAutomaton | None = None,
                         node_limit=DEFAULT_NODE_LIMIT) -> Verdict:
    """Check the net against a formula, or against a pair of automata that
    accept the finite / infinite violating words."""
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
    _check_atoms(net, nfa)
    _check_atoms(net, buchi)
    graph = reachability_graph(net, m0, node_limit=node_limit)
    run = _finite_violation(graph, nfa)
    if run is not None:
        return Verdict(False, Counterexample("finite", run))
    lasso = _lasso_violation(graph, buchi)
    if lasso is not None:
        prefix, loop = lasso
        return Verdict(False, Counterexample("lasso", prefix, loop))
    return Verdict(True)
