"""Small ready-made nets used in demos and tests."""

from __future__ import annotations

from .net import PetriNet


def manufacturing_net(a: int, b: int, c: int):
    """A processing loop p1 -> p2 -> p3 -> p4 -> p1 whose first three steps
    each consume one unit of a raw material stock (a, b and c units).  The
    central loop is a size-4 vertex cover of the flow graph no matter how
    large the stocks are.

    Returns (net, initial marking).
    """
    if min(a, b, c) < 1:
        raise ValueError("stock sizes must be at least 1")
    places = ["p1", "p2", "p3", "p4"]
    places += [f"raw_a_{i}" for i in range(1, a + 1)]
    places += [f"raw_b_{i}" for i in range(1, b + 1)]
    places += [f"raw_c_{i}" for i in range(1, c + 1)]
    pre, post = {}, {}
    for i in range(1, a + 1):
        pre[f"pick_a_{i}"] = frozenset(("p1", f"raw_a_{i}"))
        post[f"pick_a_{i}"] = frozenset(("p2",))
    for i in range(1, b + 1):
        pre[f"pick_b_{i}"] = frozenset(("p2", f"raw_b_{i}"))
        post[f"pick_b_{i}"] = frozenset(("p3",))
    for i in range(1, c + 1):
        pre[f"pick_c_{i}"] = frozenset(("p3", f"raw_c_{i}"))
        post[f"pick_c_{i}"] = frozenset(("p4",))
    pre["t1"] = frozenset(("p4",))
    post["t1"] = frozenset(("p1",))
    net = PetriNet(places, sorted(pre), pre, post, name=f"msys_{a}_{b}_{c}")
    m0 = frozenset(p for p in places if p != "p2" and p != "p3" and p != "p4")
    return net, m0


def chain_net():
    """The two-place net with a single transition p -> q."""
    net = PetriNet(["p", "q"], ["t"], {"t": {"p"}}, {"t": {"q"}}, name="chain")
    return net, frozenset(("p",))
