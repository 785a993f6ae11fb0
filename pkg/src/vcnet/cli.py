"""Command-line front end.

Exit codes: 0 holds/success, 1 property fails, 2 input error,
3 engine disagreement.  Reports are line-oriented ``key: value`` text.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from . import __name__ as _pkg  # noqa: F401  (keeps relative imports obvious)
from .automata import parse_automaton
from .eca import special_places
from .errors import VcnetError
from .explicit import explicit_model_check
from .fptcheck import fpt_model_check
from .ltl import parse_ltl, to_text
from .net import (
    DEFAULT_NODE_LIMIT, format_net, is_coverable, is_reachable, parse_net,
    reachability_graph,
)
from .reductions import (
    brute_force_csp, brute_force_ppwsat, build_reduction_decomposition,
    csp_to_net, format_pebbling, net_to_pebbling, parse_csp, parse_pebbling,
    parse_ppwsat, pebbling_reachable, sat_to_net,
)
from .structure import (
    benefit_depth, flow_graph, format_decomposition, interface_set,
    interfaces, is_vertex_cover, min_vertex_cover, neighbourhoods,
)

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_ERROR = 2
EXIT_DISAGREE = 3


def _emit(key, value):
    print(f"{key}: {value}")


def _read(path):
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_cover(path):
    tokens = []
    for raw in _read(path).splitlines():
        tokens += raw.split("#", 1)[0].split()
    return frozenset(tokens)


def cmd_check(args) -> int:
    doc = parse_net(_read(args.net))
    net, m0 = doc.net, doc.initial
    formula = nfa = buchi = None
    if args.ltl:
        formula = parse_ltl(args.ltl)
        _emit("formula", to_text(formula))
    elif args.nfa and args.buchi:
        nfa = parse_automaton(_read(args.nfa), "nfa")
        buchi = parse_automaton(_read(args.buchi), "buchi")
        _emit("nfa-states", len(nfa))
        _emit("buchi-states", len(buchi))
    else:
        print("error: need --ltl or both --nfa and --buchi", file=sys.stderr)
        return EXIT_ERROR
    cover = _load_cover(args.cover) if args.cover else None
    if cover is not None and not is_vertex_cover(flow_graph(net), cover):
        print("error: supplied cover is not a vertex cover", file=sys.stderr)
        return EXIT_ERROR
    _emit("net", doc.name)
    _emit("engine", args.engine)
    dump = sys.stderr if args.dump_ilp else None
    results = {}
    if args.engine in ("fpt", "both"):
        t0 = time.perf_counter()
        verdict = fpt_model_check(net, m0, formula=formula, nfa=nfa,
                                  buchi=buchi, cover=cover, dump=dump)
        results["fpt"] = verdict.holds
        _emit("fpt-verdict", "holds" if verdict.holds else "fails")
        _emit("fpt-cover", " ".join(sorted(verdict.cover)))
        _emit("fpt-eca-states", verdict.eca_states)
        _emit("fpt-seconds", f"{time.perf_counter() - t0:.3f}")
    if args.engine in ("explicit", "both"):
        t0 = time.perf_counter()
        verdict = explicit_model_check(net, m0, formula=formula, nfa=nfa,
                                       buchi=buchi, node_limit=args.limit)
        results["explicit"] = verdict.holds
        _emit("explicit-verdict", "holds" if verdict.holds else "fails")
        _emit("explicit-seconds", f"{time.perf_counter() - t0:.3f}")
        if verdict.counterexample is not None:
            _emit("counterexample", verdict.counterexample.kind)
            for line in verdict.counterexample.describe():
                print(line)
    if len(results) == 2 and results["fpt"] != results["explicit"]:
        _emit("verdict", "engine-disagreement")
        return EXIT_DISAGREE
    holds = next(iter(results.values()))
    _emit("verdict", "holds" if holds else "fails")
    return EXIT_HOLDS if holds else EXIT_FAILS


def cmd_params(args) -> int:
    doc = parse_net(_read(args.net))
    net = doc.net
    g = flow_graph(net)
    if args.cover:
        cover = _load_cover(args.cover)
        if not is_vertex_cover(g, cover):
            print("error: supplied cover is not a vertex cover", file=sys.stderr)
            return EXIT_ERROR
    else:
        cover = min_vertex_cover(g, len(net.places))
    table = neighbourhoods(net, cover)
    _, iface_map = interfaces(net, cover, table)
    _emit("net", doc.name)
    _emit("places", len(net.places))
    _emit("transitions", len(net.transitions))
    _emit("flow-edges", len(g.edges) + len(g.self_loops))
    _emit("cover-size", len(cover))
    _emit("cover", " ".join(sorted(cover)))
    _emit("neighbourhoods", len(table))
    _emit("interfaces", len(interface_set(iface_map)))
    _emit("benefit-depth", benefit_depth(net))
    return EXIT_HOLDS


def cmd_oracle(args) -> int:
    doc = parse_net(_read(args.net))
    graph = reachability_graph(doc.net, doc.initial, node_limit=args.limit)
    _emit("net", doc.name)
    _emit("reachable-markings", len(graph.nodes))
    _emit("edges", len(graph.edges))
    _emit("deadlocks", len(graph.deadlocks))
    if doc.target is not None:
        _emit("target", " ".join(sorted(doc.target)))
        _emit("target-reachable",
              is_reachable(doc.net, doc.initial, doc.target, node_limit=args.limit))
        _emit("target-coverable",
              is_coverable(doc.net, doc.initial, doc.target, node_limit=args.limit))
    return EXIT_HOLDS


def cmd_reduce(args) -> int:
    text = _read(args.infile)
    if args.kind == "ppwsat":
        inst = parse_ppwsat(text)
        net, m0, target = sat_to_net(inst)
        out = format_net(net, m0, target=target)
        decomposition = build_reduction_decomposition(inst, net)
        _emit("places", len(net.places))
        _emit("transitions", len(net.transitions))
        _emit("decomposition-width", decomposition.width())
        if args.decomposition_out:
            with open(args.decomposition_out, "w", encoding="utf-8") as handle:
                handle.write(format_decomposition(decomposition))
    elif args.kind == "csp":
        inst = parse_csp(text)
        net, m0, target = csp_to_net(inst)
        out = format_net(net, m0, target=target)
        _emit("places", len(net.places))
        _emit("transitions", len(net.transitions))
        _emit("benefit-depth", benefit_depth(net))
    else:  # pebbling
        doc = parse_net(text)
        goal = args.goal
        if goal is None:
            if doc.target is None or len(doc.target) != 1:
                print("error: need --goal or a single-place target line",
                      file=sys.stderr)
                return EXIT_ERROR
            goal = next(iter(doc.target))
        inst = net_to_pebbling(doc.net, doc.initial, goal)
        out = format_pebbling(inst)
        _emit("red", len(inst.red))
        _emit("blue", len(inst.blue))
    with open(args.output, "w", encoding="utf-8") as handle:
        handle.write(out)
    _emit("written", args.output)
    return EXIT_HOLDS


def cmd_simulate(args) -> int:
    inst = parse_pebbling(_read(args.infile))
    reachable, moves = pebbling_reachable(inst, state_limit=args.limit)
    _emit("red", len(inst.red))
    _emit("blue", len(inst.blue))
    _emit("finish-reachable", reachable)
    if reachable:
        _emit("moves", " ".join(moves))
    return EXIT_HOLDS if reachable else EXIT_FAILS


def cmd_fuzz(args) -> int:
    from .randgen import (
        random_csp, random_formula, random_net, random_ppwsat,
    )

    rng = random.Random(args.seed)
    failures = 0
    for trial in range(args.count):
        if args.kind == "nets":
            net, m0 = random_net(rng, max_places=6, max_transitions=8)
            names = rng.sample(net.places, min(len(net.places), 2))
            formula = random_formula(rng, names, depth=2)
            ok = (fpt_model_check(net, m0, formula).holds
                  == explicit_model_check(net, m0, formula).holds)
        elif args.kind == "ppwsat":
            inst = random_ppwsat(rng, max_vars=5, max_clauses=4)
            net, m0, target = sat_to_net(inst)
            ok = brute_force_ppwsat(inst) == is_reachable(net, m0, target)
        else:  # csp
            inst = random_csp(rng, max_vars=4, max_dom=3)
            net, m0, target = csp_to_net(inst)
            ok = brute_force_csp(inst) == is_reachable(net, m0, target)
        if not ok:
            failures += 1
            _emit("disagreement-at", trial)
    _emit("trials", args.count)
    _emit("failures", failures)
    return EXIT_HOLDS if failures == 0 else EXIT_DISAGREE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vcnet",
        description="Vertex-cover-parameterized model checking for 1-safe "
                    "Petri nets, explicit-state oracles, and hardness "
                    "reduction generators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="model check a net")
    p.add_argument("net")
    p.add_argument("--ltl", help="formula text")
    p.add_argument("--nfa", help="finite-word automaton file for the violating words")
    p.add_argument("--buchi", help="Buchi automaton file for the violating words")
    p.add_argument("--engine", choices=("fpt", "explicit", "both"), default="fpt")
    p.add_argument("--cover", help="file with a vertex cover to use")
    p.add_argument("--limit", type=int, default=DEFAULT_NODE_LIMIT)
    p.add_argument("--dump-ilp", action="store_true",
                   help="dump feasibility systems to stderr")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("params", help="structural parameters of a net")
    p.add_argument("net")
    p.add_argument("--cover", help="file with a vertex cover to use")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("oracle", help="explicit reachability facts")
    p.add_argument("net")
    p.add_argument("--limit", type=int, default=DEFAULT_NODE_LIMIT)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reduce", help="run a hardness construction")
    p.add_argument("kind", choices=("ppwsat", "csp", "pebbling"))
    p.add_argument("infile")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--goal", help="goal place for the pebbling reduction")
    p.add_argument("--decomposition-out",
                   help="also write the constructed path decomposition")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("simulate", help="run the pebbling game")
    p.add_argument("infile")
    p.add_argument("--limit", type=int, default=10**6)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fuzz", help="random cross-validation")
    p.add_argument("kind", choices=("nets", "ppwsat", "csp"))
    p.add_argument("--count", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VcnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
