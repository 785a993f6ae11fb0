"""1-safe Petri nets: data model, firing semantics, explicit exploration.

Markings are frozensets of place names (a place holds one token iff it is a
member).  Exploration works on integer bitmasks internally; one bit per place
in sorted place order.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

from .errors import LimitExceeded, NetParseError, NotEnabled, OneSafetyViolation

DEFAULT_NODE_LIMIT = 10**6

_ID_RE = re.compile(r"[A-Za-z0-9_.^\-]+$")

Marking = frozenset


class PetriNet:
    """Immutable net structure: places, transitions and 0/1 incidence.

    ``pre[t]`` / ``post[t]`` are the input / output place sets of ``t``.
    """

    def __init__(self, places, transitions, pre, post, name="net"):
        self.name = name
        self.places = tuple(sorted(places))
        self.transitions = tuple(sorted(transitions))
        if len(set(self.places)) != len(self.places):
            raise NetParseError("duplicate place identifier")
        if len(set(self.transitions)) != len(self.transitions):
            raise NetParseError("duplicate transition identifier")
        self.place_index = {p: i for i, p in enumerate(self.places)}
        self.pre = {t: frozenset(pre.get(t, ())) for t in self.transitions}
        self.post = {t: frozenset(post.get(t, ())) for t in self.transitions}
        for t in self.transitions:
            for p in self.pre[t] | self.post[t]:
                if p not in self.place_index:
                    raise NetParseError(
                        f"transition {t!r} references undeclared place {p!r}"
                    )
        self.pre_mask = {
            t: self.to_mask(self.pre[t]) for t in self.transitions
        }
        self.post_mask = {
            t: self.to_mask(self.post[t]) for t in self.transitions
        }

    def to_mask(self, marking) -> int:
        mask = 0
        for p in marking:
            mask |= 1 << self.place_index[p]
        return mask

    def from_mask(self, mask: int) -> Marking:
        return frozenset(
            p for i, p in enumerate(self.places) if (mask >> i) & 1
        )

    def touched(self, t) -> frozenset:
        """All places connected to ``t`` by an arc in either direction."""
        return self.pre[t] | self.post[t]

    def __repr__(self):
        return (
            f"PetriNet({self.name!r}, |P|={len(self.places)},"
            f" |T|={len(self.transitions)})"
        )


def enabled(net: PetriNet, marking) -> list:
    """Transitions whose input places all carry a token, in sorted order."""
    mask = net.to_mask(marking)
    return [t for t in net.transitions if net.pre_mask[t] & mask == net.pre_mask[t]]


def fire(net: PetriNet, marking, t) -> Marking:
    """Fire ``t``: remove input tokens, add output tokens.

    Raises NotEnabled when an input place is empty and OneSafetyViolation
    when an output place (that is not also an input) already holds a token.
    """
    mask = net.to_mask(marking)
    nxt = _fire_mask(net, mask, t, marking)
    return net.from_mask(nxt)


def _fire_mask(net: PetriNet, mask: int, t, marking_for_error=None) -> int:
    pre = net.pre_mask[t]
    post = net.post_mask[t]
    if mask & pre != pre:
        raise NotEnabled(f"transition {t!r} is not enabled")
    clash = mask & (post & ~pre)
    if clash:
        place = net.places[clash.bit_length() - 1]
        if marking_for_error is None:
            marking_for_error = net.from_mask(mask)
        raise OneSafetyViolation(place, t, marking_for_error)
    return (mask & ~pre) | post


@dataclass
class ReachGraph:
    """Explicit reachability graph of a 1-safe net.

    ``nodes`` is sorted lexicographically by marking; ``succ`` maps a
    marking to its (transition, successor) list in transition order.
    """

    net: PetriNet
    initial: Marking
    nodes: list
    edges: list
    deadlocks: frozenset
    succ: dict = field(repr=False)

    def __len__(self):
        return len(self.nodes)


def _explore(net, m0_mask, node_limit, want_edges, find_mask=None, cover=False,
             interface_classes=None, stop_on_find=True):
    """Shared BFS core.  Returns (visited, succ_by_mask, deadlocks, found).

    ``find_mask`` looks for a target marking (exact, or covered when
    ``cover`` is set); with ``stop_on_find`` the sweep ends there.
    ``interface_classes`` enables the same-interface exclusion assertion:
    while a class member is marked, no enabled transition may add a token
    to any member of that class.
    """
    rules = [(t, net.pre_mask[t], net.post_mask[t],
              net.post_mask[t] & ~net.pre_mask[t])
             for t in net.transitions]
    class_masks = None
    if interface_classes is not None:
        class_masks = [net.to_mask(c) for c in interface_classes]

    if find_mask is None:
        def matches(mask):
            return False
    elif cover:
        def matches(mask):
            return mask & find_mask == find_mask
    else:
        def matches(mask):
            return mask == find_mask

    visited = {m0_mask}
    succ = {} if want_edges else None
    deadlocks = []
    found = matches(m0_mask)
    if found and stop_on_find:
        return visited, succ, deadlocks, True
    queue = deque([m0_mask])
    while queue:
        mask = queue.popleft()
        out = []
        adds_mask = 0
        for t, pre, post, fresh in rules:
            if mask & pre != pre:
                continue
            clash = mask & fresh
            if clash:
                place = net.places[clash.bit_length() - 1]
                raise OneSafetyViolation(place, t, net.from_mask(mask))
            if class_masks is not None:
                adds_mask |= fresh
            nxt = (mask & ~pre) | post
            out.append((t, nxt))
            if nxt not in visited:
                if len(visited) >= node_limit:
                    raise LimitExceeded(
                        f"reachability exploration exceeded {node_limit} markings",
                        explored=len(visited),
                    )
                visited.add(nxt)
                queue.append(nxt)
                if not found and matches(nxt):
                    found = True
                    if stop_on_find:
                        return visited, succ, deadlocks, True
        if class_masks is not None and adds_mask:
            for cmask in class_masks:
                if mask & cmask and adds_mask & cmask:
                    place = net.from_mask(adds_mask & cmask)
                    raise AssertionError(
                        "interface exclusion violated: token can be added to "
                        f"{sorted(place)} while the class is occupied"
                    )
        if not out:
            deadlocks.append(mask)
        if want_edges:
            succ[mask] = out
    return visited, succ, deadlocks, found


def reachability_graph(net: PetriNet, m0, node_limit=DEFAULT_NODE_LIMIT,
                       interface_classes=None) -> ReachGraph:
    """BFS closure of ``m0`` under firing, with deadlock set.

    Node order is lexicographic by marking so counterexamples and pinned
    regression values stay stable across runs.
    """
    m0_mask = net.to_mask(m0)
    visited, succ_masks, dead_masks, _ = _explore(
        net, m0_mask, node_limit, want_edges=True,
        interface_classes=interface_classes,
    )
    decode = {mask: net.from_mask(mask) for mask in visited}
    nodes = sorted(decode.values(), key=lambda m: tuple(sorted(m)))
    succ = {
        decode[mask]: [(t, decode[nxt]) for t, nxt in out]
        for mask, out in succ_masks.items()
    }
    edges = [
        (m, t, m2)
        for m in nodes
        for t, m2 in succ[m]
    ]
    deadlocks = frozenset(decode[mask] for mask in dead_masks)
    return ReachGraph(net=net, initial=frozenset(m0), nodes=nodes,
                      edges=edges, deadlocks=deadlocks, succ=succ)


def is_reachable(net: PetriNet, m0, target, node_limit=DEFAULT_NODE_LIMIT) -> bool:
    """Is the exact marking ``target`` reachable from ``m0``?"""
    _, _, _, found = _explore(
        net, net.to_mask(m0), node_limit, want_edges=False,
        find_mask=net.to_mask(target),
    )
    return found


def is_coverable(net: PetriNet, m0, target, node_limit=DEFAULT_NODE_LIMIT) -> bool:
    """Is some marking pointwise above ``target`` reachable from ``m0``?"""
    _, _, _, found = _explore(
        net, net.to_mask(m0), node_limit, want_edges=False,
        find_mask=net.to_mask(target), cover=True,
    )
    return found


def verify_one_safe(net: PetriNet, m0, node_limit=DEFAULT_NODE_LIMIT) -> bool:
    """Explore the full reachable space; False iff a firing would unsafely
    stack two tokens.  LimitExceeded propagates."""
    try:
        _explore(net, net.to_mask(m0), node_limit, want_edges=False)
    except OneSafetyViolation:
        return False
    return True


def safe_and_reachable(net: PetriNet, m0, target, node_limit=DEFAULT_NODE_LIMIT):
    """One full sweep answering both questions: (verified 1-safe from m0,
    exact target marking reachable).  LimitExceeded propagates."""
    try:
        _, _, _, found = _explore(
            net, net.to_mask(m0), node_limit, want_edges=False,
            find_mask=net.to_mask(target), stop_on_find=False,
        )
    except OneSafetyViolation:
        return False, False
    return True, found


# ---------------------------------------------------------------------------
# Net text format
#
#   net <name>
#   place <id> [marked]
#   trans <id> [pre <id>*] [post <id>*]
#   target <id>*
#
# '#' starts a comment; identifiers match [A-Za-z0-9_.^-]+.
# ---------------------------------------------------------------------------

@dataclass
class NetDocument:
    name: str
    net: PetriNet
    initial: Marking
    target: Marking | None


def _check_id(token, lineno):
    if not _ID_RE.match(token) or token in ("pre", "post"):
        raise NetParseError(f"invalid identifier {token!r}", lineno)
    return token


def parse_net(text: str) -> NetDocument:
    name = "net"
    places = []
    marked = set()
    transitions = []
    pre = {}
    post = {}
    target = None
    seen_places = set()
    seen_trans = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head, rest = tokens[0], tokens[1:]
        if head == "net":
            if len(rest) != 1:
                raise NetParseError("expected: net <name>", lineno)
            name = rest[0]
        elif head == "place":
            if not rest or len(rest) > 2 or (len(rest) == 2 and rest[1] != "marked"):
                raise NetParseError("expected: place <id> [marked]", lineno)
            pid = _check_id(rest[0], lineno)
            if pid in seen_places:
                raise NetParseError(f"duplicate place {pid!r}", lineno)
            seen_places.add(pid)
            places.append(pid)
            if len(rest) == 2:
                marked.add(pid)
        elif head == "trans":
            if not rest:
                raise NetParseError("expected: trans <id> [pre ...] [post ...]", lineno)
            tid = _check_id(rest[0], lineno)
            if tid in seen_trans:
                raise NetParseError(f"duplicate transition {tid!r}", lineno)
            seen_trans.add(tid)
            transitions.append(tid)
            pre_ids, post_ids = [], []
            bucket = None
            for token in rest[1:]:
                if token == "pre":
                    bucket = pre_ids
                elif token == "post":
                    bucket = post_ids
                elif bucket is None:
                    raise NetParseError(
                        f"unexpected token {token!r} before pre/post", lineno
                    )
                else:
                    bucket.append(_check_id(token, lineno))
            for pid in pre_ids + post_ids:
                if pid not in seen_places:
                    raise NetParseError(
                        f"arc references undeclared place {pid!r}", lineno
                    )
            pre[tid] = frozenset(pre_ids)
            post[tid] = frozenset(post_ids)
        elif head == "target":
            for pid in rest:
                if _check_id(pid, lineno) not in seen_places:
                    raise NetParseError(
                        f"target references undeclared place {pid!r}", lineno
                    )
            target = (target or frozenset()) | frozenset(rest)
        else:
            raise NetParseError(f"unknown directive {head!r}", lineno)
    net = PetriNet(places, transitions, pre, post, name=name)
    return NetDocument(name=name, net=net, initial=frozenset(marked), target=target)


def format_net(net: PetriNet, initial, target=None, name=None) -> str:
    """Render a net back into the text format; round-trips with parse_net."""
    lines = [f"net {name or net.name}"]
    for p in net.places:
        lines.append(f"place {p} marked" if p in initial else f"place {p}")
    for t in net.transitions:
        parts = [f"trans {t}"]
        if net.pre[t]:
            parts.append("pre " + " ".join(sorted(net.pre[t])))
        if net.post[t]:
            parts.append("post " + " ".join(sorted(net.post[t])))
        lines.append(" ".join(parts))
    if target is not None:
        lines.append("target " + " ".join(sorted(target)))
    return "\n".join(lines) + "\n"
