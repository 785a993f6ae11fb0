"""Flow graphs, vertex covers, neighbourhoods, interfaces, benefit depth,
path decomposition validation."""

import itertools
import random

import pytest

import vcnet
from vcnet.errors import InvalidCover
from vcnet.net import PetriNet
from vcnet.randgen import random_net
from vcnet.samples import chain_net, manufacturing_net
from vcnet.structure import (
    FlowGraph, PathDecomposition, benefit_depth, flow_graph,
    format_decomposition, interface_set, interfaces, is_vertex_cover,
    min_vertex_cover, neighbourhoods, parse_decomposition,
    validate_path_decomposition,
)


def graph(edges, loops=()):
    vertices = sorted({v for e in edges for v in e} | set(loops))
    return FlowGraph(vertices=tuple(vertices),
                     edges=frozenset(frozenset(e) for e in edges),
                     self_loops=frozenset(loops))


def brute_force_min_cover(g):
    vertices = sorted(g.vertices)
    for size in range(len(vertices) + 1):
        for cand in itertools.combinations(vertices, size):
            if is_vertex_cover(g, cand):
                return size
    return None


def test_flow_graph_chain():
    net, _ = chain_net()
    g = flow_graph(net)
    assert g.edges == frozenset({frozenset({"p", "q"})})
    assert not g.self_loops


def test_flow_graph_self_loop():
    net = PetriNet(["p"], ["t"], {"t": {"p"}}, {"t": {"p"}})
    g = flow_graph(net)
    assert g.self_loops == frozenset({"p"})
    assert not g.edges


def test_flow_graph_definition_matches_direct_double_loop():
    rng = random.Random(10)
    for _ in range(200):
        net, _ = random_net(rng, max_places=6, max_transitions=6)
        g = flow_graph(net)
        for p1 in net.places:
            for p2 in net.places:
                if p1 == p2:
                    expected = any(
                        p1 in net.pre[t] and p1 in net.post[t]
                        for t in net.transitions
                    )
                    assert (p1 in g.self_loops) == expected
                else:
                    expected = any(
                        p1 in net.touched(t) and p2 in net.touched(t)
                        for t in net.transitions
                    )
                    assert (frozenset({p1, p2}) in g.edges) == expected


def test_manufacturing_center_covers_everything():
    for dims in ((1, 1, 1), (3, 2, 2), (2, 3, 3)):
        net, _ = manufacturing_net(*dims)
        cover = min_vertex_cover(flow_graph(net), len(net.places))
        assert cover == frozenset({"p1", "p2", "p3", "p4"})


def test_min_cover_triangle():
    g = graph([("a", "b"), ("b", "c"), ("a", "c")])
    assert len(min_vertex_cover(g, 3)) == 2


def test_min_cover_star():
    g = graph([("hub", f"leaf{i}") for i in range(5)])
    assert min_vertex_cover(g, 5) == frozenset({"hub"})


def test_min_cover_budget_exceeded_returns_none():
    g = graph([("a", "b"), ("c", "d")])
    assert min_vertex_cover(g, 1) is None
    assert min_vertex_cover(g, 2) == frozenset({"a", "c"})


def test_min_cover_forces_self_loops():
    g = graph([("a", "b")], loops=("b",))
    assert min_vertex_cover(g, 2) == frozenset({"b"})


def test_min_cover_matches_brute_force():
    rng = random.Random(11)
    for _ in range(120):
        n = rng.randint(2, 9)
        vertices = [f"v{i}" for i in range(n)]
        edges = set()
        for _ in range(rng.randint(0, 2 * n)):
            a, b = rng.sample(vertices, 2)
            edges.add(frozenset((a, b)))
        loops = {v for v in vertices if rng.random() < 0.1}
        g = FlowGraph(vertices=tuple(vertices), edges=frozenset(edges),
                      self_loops=frozenset(loops))
        got = min_vertex_cover(g, n)
        assert got is not None
        assert is_vertex_cover(g, got)
        assert len(got) == brute_force_min_cover(g)


def test_neighbourhood_and_interface_of_manufacturing():
    net, _ = manufacturing_net(3, 2, 2)
    cover = frozenset({"p1", "p2", "p3", "p4"})
    table = neighbourhoods(net, cover)
    assert len(table) == 4  # three pickup stages plus the processing step
    _, iface_map = interfaces(net, cover, table)
    by_iface = {}
    for p, iface in iface_map.items():
        by_iface.setdefault(iface, set()).add(p)
    assert {frozenset(v) for v in by_iface.values()} == {
        frozenset({"raw_a_1", "raw_a_2", "raw_a_3"}),
        frozenset({"raw_b_1", "raw_b_2"}),
        frozenset({"raw_c_1", "raw_c_2"}),
    }


def test_interface_of_isolated_place_is_all_empty():
    net = PetriNet(["a", "b", "lone"], ["t"], {"t": {"a"}}, {"t": {"b"}})
    cover = frozenset({"a"})
    _, iface_map = interfaces(net, cover)
    assert all(not w for w in iface_map["lone"])


def test_invalid_cover_rejected():
    net, _ = chain_net()
    with pytest.raises(InvalidCover):
        neighbourhoods(net, frozenset())


def test_structure_bounds_hold_on_random_nets():
    rng = random.Random(12)
    for _ in range(100):
        net, _ = random_net(rng, max_places=7, max_transitions=8)
        g = flow_graph(net)
        cover = min_vertex_cover(g, len(net.places))
        k = len(cover)
        table = neighbourhoods(net, cover)
        assert len(table) <= 2 ** (2 * k)
        _, iface_map = interfaces(net, cover, table)
        assert len(interface_set(iface_map)) <= 4 ** (2 ** (2 * k))
        # non-cover places are pairwise non-adjacent
        outside = set(net.places) - cover
        for e in g.edges:
            assert not e <= outside
        for t in net.transitions:
            assert len(net.touched(t) - cover) <= 1


def test_benefit_depth_chain():
    net, _ = chain_net()
    assert benefit_depth(net) == 2


def test_benefit_depth_isolated_place():
    net = PetriNet(["lone"], [], {}, {})
    assert benefit_depth(net) == 1


def test_validate_single_edge_decomposition():
    g = graph([("p", "q")])
    rep = validate_path_decomposition(
        g, PathDecomposition(bags=(frozenset({"p", "q"}),)))
    assert rep.ok and rep.width == 1


def test_validate_uncovered_edge():
    g = graph([("p", "q")])
    rep = validate_path_decomposition(
        g, PathDecomposition(bags=(frozenset({"p"}), frozenset({"q"}))))
    assert not rep.ok
    assert rep.violation == "edge-uncovered"
    assert rep.witness == ("p", "q")


def test_validate_missing_vertex():
    g = graph([("p", "q")])
    rep = validate_path_decomposition(g, PathDecomposition(bags=(frozenset({"p", "q"}), )))
    assert rep.ok
    g2 = FlowGraph(vertices=("p", "q", "r"), edges=g.edges, self_loops=frozenset())
    rep2 = validate_path_decomposition(g2, PathDecomposition(bags=(frozenset({"p", "q"}),)))
    assert not rep2.ok and rep2.violation == "vertex-missing" and rep2.witness == "r"


def test_validate_gap():
    g = graph([("p", "q"), ("q", "r")])
    bags = (frozenset({"p", "q"}), frozenset({"r", "q"}), frozenset({"p"}))
    rep = validate_path_decomposition(g, PathDecomposition(bags=bags))
    assert not rep.ok and rep.violation == "vertex-gap" and rep.witness == "p"


def test_decomposition_format_round_trip():
    d = PathDecomposition(bags=(frozenset({"a", "b"}), frozenset({"b", "c"})))
    assert parse_decomposition(format_decomposition(d)) == d
