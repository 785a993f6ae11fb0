"""Net data model, firing semantics, exploration, text format."""

import random

import pytest

import vcnet
from vcnet.errors import LimitExceeded, NetParseError, NotEnabled, OneSafetyViolation
from vcnet.net import PetriNet, parse_net, safe_and_reachable
from vcnet.samples import chain_net, manufacturing_net
from vcnet.randgen import random_net


def test_parse_smallest_net():
    doc = parse_net("place p marked\nplace q\ntrans t pre p post q\n")
    assert doc.net.places == ("p", "q")
    assert doc.net.pre["t"] == frozenset({"p"})
    assert doc.net.post["t"] == frozenset({"q"})
    assert doc.initial == frozenset({"p"})


def test_parse_manufacturing_document():
    net, m0 = manufacturing_net(1, 1, 1)
    doc = parse_net(vcnet.format_net(net, m0))
    assert len(doc.net.places) == 7
    groups = {t.rsplit("_", 1)[0] if t != "t1" else "t1"
              for t in doc.net.transitions}
    assert groups == {"pick_a", "pick_b", "pick_c", "t1"}


def test_parse_undeclared_place_is_an_error():
    with pytest.raises(NetParseError) as err:
        parse_net("place p\ntrans t pre zz\n")
    assert "zz" in str(err.value)


def test_parse_duplicate_identifier():
    with pytest.raises(NetParseError):
        parse_net("place p\nplace p\n")


def test_parse_reports_line_numbers():
    with pytest.raises(NetParseError) as err:
        parse_net("place p\n\nbogus q\n")
    assert err.value.line == 3


def test_enabled_chain():
    net, m0 = chain_net()
    assert vcnet.enabled(net, m0) == ["t"]
    assert vcnet.enabled(net, frozenset({"q"})) == []


def test_enabled_manufacturing_initially_only_first_pickup():
    net, m0 = manufacturing_net(1, 1, 1)
    assert vcnet.enabled(net, m0) == ["pick_a_1"]


def test_fire_chain():
    net, m0 = chain_net()
    assert vcnet.fire(net, m0, "t") == frozenset({"q"})
    with pytest.raises(NotEnabled):
        vcnet.fire(net, frozenset({"q"}), "t")


def test_fire_detects_token_stacking():
    net = PetriNet(["p", "q"], ["t"], {"t": {"p"}}, {"t": {"p", "q"}})
    with pytest.raises(OneSafetyViolation) as err:
        vcnet.fire(net, frozenset({"p", "q"}), "t")
    assert err.value.place == "q"


def test_reachability_graph_chain():
    net, m0 = chain_net()
    g = vcnet.reachability_graph(net, m0)
    assert len(g.nodes) == 2
    assert len(g.edges) == 1
    assert g.deadlocks == frozenset({frozenset({"q"})})


def test_reachability_graph_manufacturing_regression():
    # pinned from the first run of this oracle on msys(1,1,1)
    net, m0 = manufacturing_net(1, 1, 1)
    g = vcnet.reachability_graph(net, m0)
    assert len(g.nodes) == 5
    assert len(g.edges) == 4
    assert len(g.deadlocks) == 1


def test_reachability_graph_node_limit():
    net, m0 = chain_net()
    with pytest.raises(LimitExceeded) as err:
        vcnet.reachability_graph(net, m0, node_limit=1)
    assert err.value.explored == 1


def test_reachability_graph_edges_agree_with_firing():
    rng = random.Random(1)
    for _ in range(50):
        net, m0 = random_net(rng, max_places=6, max_transitions=6)
        g = vcnet.reachability_graph(net, m0)
        for m, t, m2 in g.edges:
            assert vcnet.fire(net, m, t) == m2
        for m in g.deadlocks:
            assert vcnet.enabled(net, m) == []


def test_node_order_is_lexicographic():
    rng = random.Random(2)
    net, m0 = random_net(rng, max_places=6, max_transitions=6)
    g = vcnet.reachability_graph(net, m0)
    keys = [tuple(sorted(m)) for m in g.nodes]
    assert keys == sorted(keys)


def test_reach_and_cover_chain():
    net, m0 = chain_net()
    assert vcnet.is_reachable(net, m0, frozenset({"q"}))
    assert vcnet.is_coverable(net, m0, frozenset({"q"}))
    assert not vcnet.is_reachable(net, m0, frozenset({"p", "q"}))
    assert not vcnet.is_coverable(net, m0, frozenset({"p", "q"}))


def test_reachable_implies_coverable():
    rng = random.Random(3)
    for _ in range(60):
        net, m0 = random_net(rng, max_places=6, max_transitions=6)
        g = vcnet.reachability_graph(net, m0)
        target = g.nodes[rng.randrange(len(g.nodes))]
        if vcnet.is_reachable(net, m0, target):
            assert vcnet.is_coverable(net, m0, target)


def test_verify_one_safe():
    net = PetriNet(["p", "q"], ["t"], {"t": {"p"}}, {"t": {"p", "q"}})
    assert not vcnet.verify_one_safe(net, frozenset({"p", "q"}))
    assert vcnet.verify_one_safe(*chain_net())


def test_safe_and_reachable_combined_sweep():
    net, m0 = chain_net()
    assert safe_and_reachable(net, m0, frozenset({"q"})) == (True, True)
    assert safe_and_reachable(net, m0, frozenset({"p", "q"})) == (True, False)


def test_same_interface_exclusion_assertion_is_quiet_on_safe_nets():
    # while one place of an interface class is marked, nothing may add a
    # token to the class; holds on every verified 1-safe net
    rng = random.Random(4)
    for _ in range(30):
        net, m0 = random_net(rng, max_places=6, max_transitions=6)
        cover = vcnet.min_vertex_cover(vcnet.flow_graph(net), len(net.places))
        _, iface_map = vcnet.interfaces(net, cover)
        classes = {}
        for p, iface in iface_map.items():
            classes.setdefault(iface, set()).add(p)
        vcnet.reachability_graph(net, m0, interface_classes=list(classes.values()))


def test_format_parse_round_trip():
    rng = random.Random(5)
    for _ in range(25):
        net, m0 = random_net(rng, max_places=6, max_transitions=6)
        target = frozenset(rng.sample(net.places, 2))
        doc = parse_net(vcnet.format_net(net, m0, target=target))
        assert doc.net.places == net.places
        assert doc.net.transitions == net.transitions
        assert all(doc.net.pre[t] == net.pre[t] for t in net.transitions)
        assert all(doc.net.post[t] == net.post[t] for t in net.transitions)
        assert doc.initial == m0
        assert doc.target == target
