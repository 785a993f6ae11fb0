"""Seeded random instance generators for cross-validation suites.

Everything takes a ``random.Random`` so suites are reproducible; nets are
rejection-sampled until they verify 1-safe (and, for the oracle-facing
generators, until their reachable space fits the oracle budget).
"""

from __future__ import annotations

import random

from . import ltl
from .errors import LimitExceeded
from .ilp import BOTTOM, LabelledDigraph
from .net import PetriNet, verify_one_safe
from .reductions import CspInstance, PwSatInstance


def random_net(rng: random.Random, max_places=8, max_transitions=10,
               node_limit=200000) -> tuple:
    """A random verified-1-safe net with a nonempty initial marking."""
    while True:
        nplaces = rng.randint(2, max_places)
        ntrans = rng.randint(1, max_transitions)
        places = [f"p{i}" for i in range(nplaces)]
        pre, post = {}, {}
        for j in range(ntrans):
            ins = rng.sample(places, rng.randint(1, min(2, nplaces)))
            outs = rng.sample(places, rng.randint(0, min(2, nplaces)))
            pre[f"t{j}"] = frozenset(ins)
            post[f"t{j}"] = frozenset(outs)
        net = PetriNet(places, sorted(pre), pre, post)
        m0 = frozenset(p for p in places if rng.random() < 0.5)
        if not m0:
            m0 = frozenset((rng.choice(places),))
        try:
            if verify_one_safe(net, m0, node_limit=node_limit):
                return net, m0
        except LimitExceeded:
            continue


def random_formula(rng: random.Random, atom_names, depth=3) -> ltl.Formula:
    atom_names = sorted(atom_names)

    def leaf():
        roll = rng.random()
        if roll < 0.70 and atom_names:
            return ltl.Atom(rng.choice(atom_names))
        if roll < 0.80:
            return ltl.End()
        if roll < 0.90:
            return ltl.TRUE
        return ltl.FALSE

    def build(d):
        if d == 0:
            return leaf()
        op = rng.choice(("not", "and", "or", "implies", "next",
                         "until", "release", "eventually", "always", "leaf"))
        if op == "leaf":
            return leaf()
        if op == "not":
            return ltl.Not(build(d - 1))
        if op == "next":
            return ltl.Next(build(d - 1))
        if op == "eventually":
            return ltl.Eventually(build(d - 1))
        if op == "always":
            return ltl.Always(build(d - 1))
        left, right = build(d - 1), build(d - 1)
        if op == "and":
            return ltl.And(left, right)
        if op == "or":
            return ltl.Or(left, right)
        if op == "implies":
            return ltl.Implies(left, right)
        if op == "until":
            return ltl.Until(left, right)
        return ltl.Release(left, right)

    return build(depth)


def random_prop_formula(rng: random.Random, nvars=8, size=8) -> ltl.Formula:
    """Propositional formula over q1..q{nvars} (no temporal operators)."""
    names = [f"q{i}" for i in range(1, nvars + 1)]

    def build(budget):
        if budget <= 1:
            return ltl.Atom(rng.choice(names))
        op = rng.choice(("not", "and", "or", "implies"))
        if op == "not":
            return ltl.Not(build(budget - 1))
        split = rng.randint(1, budget - 1)
        left = build(split)
        right = build(budget - split)
        if op == "and":
            return ltl.And(left, right)
        if op == "or":
            return ltl.Or(left, right)
        return ltl.Implies(left, right)

    return build(size)


def random_ppwsat(rng: random.Random, max_vars=8, max_clauses=6,
                  max_parts=3) -> PwSatInstance:
    nvars = rng.randint(1, max_vars)
    k = rng.randint(1, min(max_parts, nvars))
    part = {v: rng.randint(1, k) for v in range(1, nvars + 1)}
    for r in range(1, k + 1):
        if r not in part.values():
            part[rng.randint(1, nvars)] = r
    sizes = {r: sum(1 for v in part.values() if v == r) for r in range(1, k + 1)}
    tg = {r: rng.randint(0, sizes[r]) for r in range(1, k + 1) if sizes[r]}
    nclauses = rng.randint(0, max_clauses)
    clauses = []
    for _ in range(nclauses):
        width = rng.randint(1, min(3, nvars))
        vs = rng.sample(range(1, nvars + 1), width)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return PwSatInstance(nvars=nvars, clauses=clauses, part=part, tg=tg)


def random_csp(rng: random.Random, max_vars=5, max_dom=3,
               max_constraints=3) -> CspInstance:
    nvars = rng.randint(1, max_vars)
    dom = rng.randint(1, max_dom)
    nconstraints = rng.randint(1, max_constraints)
    constraints = []
    covered = set()
    for _ in range(nconstraints):
        arity = rng.randint(1, min(2, nvars))
        vs = tuple(rng.sample(range(1, nvars + 1), arity))
        covered.update(vs)
        universe = [
            tuple(rng.randint(1, dom) for _ in vs)
            for _ in range(rng.randint(0, dom ** arity))
        ]
        constraints.append((vs, sorted(set(universe))))
    for v in range(1, nvars + 1):
        if v not in covered:
            admissible = sorted({(rng.randint(1, dom),)
                                 for _ in range(rng.randint(1, dom))})
            constraints.append(((v,), admissible))
    return CspInstance(nvars=nvars, dom=dom, constraints=constraints)


def random_product_graph(rng: random.Random, max_nodes=40, max_budget=3,
                         kind="finite"):
    """A synthetic product graph plus a budget map, for cross-validating
    the feasibility route against the budget-vector search."""
    from .fptcheck import ProductGraph

    nnodes = rng.randint(2, max_nodes)
    nodes = tuple(f"n{i}" for i in range(nnodes))
    labels = [BOTTOM, "ia", "ib"]
    nedges = rng.randint(1, min(3 * nnodes, 90))
    edges = set()
    for _ in range(nedges):
        src = rng.choice(nodes)
        dst = rng.choice(nodes)
        edges.add((src, rng.choice(labels), dst))
    edges = tuple(sorted(edges, key=lambda e: (e[0], str(e[1]), e[2])))
    budgets = {"ia": rng.randint(0, max_budget), "ib": rng.randint(0, max_budget)}
    initial = tuple(rng.sample(nodes, rng.randint(1, 2)))
    accepting = frozenset(rng.sample(nodes, rng.randint(0, max(1, nnodes // 4))))
    exhaustion = {}
    if kind == "finite":
        for node in accepting:
            trig = [lb for lb in ("ia", "ib") if rng.random() < 0.4]
            exhaustion[node] = frozenset(trig)
    return ProductGraph(kind=kind, nodes=nodes, edges=edges, initial=initial,
                        accepting=accepting, exhaustion=exhaustion,
                        interfaces=("ia", "ib")), budgets
