"""Structural parameters of a net: flow graph, vertex cover, transition
neighbourhoods, place interfaces, benefit depth, path decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidCover
from .net import PetriNet


@dataclass(frozen=True)
class FlowGraph:
    """Undirected graph on places: an edge joins two places that touch a
    common transition; a self-loop marks a place that is both input and
    output of some transition."""

    vertices: tuple
    edges: frozenset       # frozensets of size 2
    self_loops: frozenset  # vertices

    def neighbours(self, v):
        out = set()
        for e in self.edges:
            if v in e:
                out.update(e - {v})
        return out


def flow_graph(net: PetriNet) -> FlowGraph:
    edges = set()
    loops = set()
    for t in net.transitions:
        touched = sorted(net.touched(t))
        for i, p in enumerate(touched):
            for q in touched[i + 1:]:
                edges.add(frozenset((p, q)))
        for p in net.pre[t] & net.post[t]:
            loops.add(p)
    return FlowGraph(vertices=net.places, edges=frozenset(edges),
                     self_loops=frozenset(loops))


def is_vertex_cover(g: FlowGraph, cover) -> bool:
    cover = set(cover)
    if not g.self_loops <= cover:
        return False
    return all(e & cover for e in g.edges)


def min_vertex_cover(g: FlowGraph, budget) -> frozenset | None:
    """Exact minimum vertex cover via a bounded search tree.

    Self-loop vertices are forced into every cover.  Returns None when the
    minimum exceeds ``budget``.  Among minimum covers the lexicographically
    least one found is returned, so results are deterministic.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    forced = set(g.self_loops)
    open_edges = [tuple(sorted(e)) for e in g.edges
                  if len(e) == 2 and not (e & forced)]

    best: list = [None]

    def adjacency(edges):
        adj = {}
        for a, b in edges:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        return adj

    def search(edges, chosen):
        if best[0] is not None and len(chosen) > len(best[0]):
            return
        if not edges:
            cand = tuple(sorted(chosen))
            if best[0] is None or len(cand) < len(best[0]) or (
                    len(cand) == len(best[0]) and cand < best[0]):
                best[0] = cand
            return
        adj = adjacency(edges)
        # degree-1 simplification: take the neighbour of a pendant vertex
        # (for an isolated edge, the lexicographically smaller endpoint)
        for v in sorted(adj):
            if len(adj[v]) == 1:
                u = next(iter(adj[v]))
                if len(adj[u]) == 1:
                    u = min(u, v)
                search([e for e in edges if u not in e], chosen | {u})
                return
        v = max(sorted(adj), key=lambda x: len(adj[x]))
        search([e for e in edges if v not in e], chosen | {v})
        search([e for e in edges if not (set(e) & adj[v])], chosen | adj[v])

    search(open_edges, frozenset(forced))
    if best[0] is None or len(best[0]) > budget:
        return None
    return frozenset(best[0])


@dataclass(frozen=True)
class NeighbourhoodTable:
    """Transition classes relative to a cover: class j is the pair
    (inputs in cover, outputs in cover) shared by all its members."""

    classes: tuple                # of (frozenset, frozenset)
    assignment: dict              # transition -> class index

    def __len__(self):
        return len(self.classes)


def _require_cover(net, cover):
    g = flow_graph(net)
    if not is_vertex_cover(g, cover):
        raise InvalidCover(
            f"{sorted(cover)} is not a vertex cover of the flow graph"
        )


def neighbourhoods(net: PetriNet, cover) -> NeighbourhoodTable:
    _require_cover(net, cover)
    cover = frozenset(cover)
    pairs = {}
    for t in net.transitions:
        pairs[t] = (net.pre[t] & cover, net.post[t] & cover)
    classes = sorted(
        set(pairs.values()),
        key=lambda pr: (tuple(sorted(pr[0])), tuple(sorted(pr[1]))),
    )
    index = {pr: i for i, pr in enumerate(classes)}
    assignment = {t: index[pr] for t, pr in pairs.items()}
    assert len(classes) <= 4 ** len(cover)
    return NeighbourhoodTable(classes=tuple(classes), assignment=assignment)


# An interface maps each neighbourhood class index to the subset of {-1, +1}
# of token effects that class' transitions can have on the owning place.
Interface = tuple


def interfaces(net: PetriNet, cover, table: NeighbourhoodTable | None = None):
    """Interface of every place outside the cover.

    Returns (table, {place: interface}).  A transition touching two
    non-cover places would contradict the cover being valid, which is
    asserted here because the whole special-place machinery relies on it.
    """
    cover = frozenset(cover)
    if table is None:
        table = neighbourhoods(net, cover)
    else:
        _require_cover(net, cover)
    for t in net.transitions:
        outside = net.touched(t) - cover
        assert len(outside) <= 1, (
            f"transition {t!r} touches two non-cover places {sorted(outside)}"
        )
    result = {}
    nclasses = len(table.classes)
    for p in net.places:
        if p in cover:
            continue
        effect = [set() for _ in range(nclasses)]
        for t in net.transitions:
            w = int(p in net.post[t]) - int(p in net.pre[t])
            if w != 0:
                effect[table.assignment[t]].add(w)
        result[p] = tuple(frozenset(w) for w in effect)
    return table, result


def interface_set(iface_map) -> frozenset:
    """Distinct interface values occurring in an interface map."""
    return frozenset(iface_map.values())


def benefit_depth(net: PetriNet) -> int:
    """Largest output-closure |ben(p)| over all places.

    ben(p) is the least place set containing p and closed under: outputs of
    output transitions of members are members.
    """
    if not net.places:
        return 0
    # one-step successor relation: p -> outputs of transitions consuming p
    step = {p: set() for p in net.places}
    for t in net.transitions:
        for p in net.pre[t]:
            step[p].update(net.post[t])
    best = 0
    for p in net.places:
        seen = {p}
        frontier = [p]
        while frontier:
            q = frontier.pop()
            for r in step[q]:
                if r not in seen:
                    seen.add(r)
                    frontier.append(r)
        best = max(best, len(seen))
    return best


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple  # of frozensets, in path order

    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


@dataclass(frozen=True)
class DecompositionReport:
    ok: bool
    width: int | None
    violation: str | None = None
    witness: object = None


def validate_path_decomposition(g: FlowGraph, d: PathDecomposition) -> DecompositionReport:
    """Check the decomposition conditions in order: every vertex occurs,
    occurrences are contiguous, every edge lies inside some bag."""
    bags = [frozenset(b) for b in d.bags]
    occur = {}
    for i, bag in enumerate(bags):
        for v in bag:
            occur.setdefault(v, []).append(i)
    for v in sorted(g.vertices):
        if v not in occur:
            return DecompositionReport(False, None, "vertex-missing", v)
    for v in sorted(occur):
        idx = occur[v]
        if idx[-1] - idx[0] + 1 != len(idx):
            return DecompositionReport(False, None, "vertex-gap", v)
    for e in sorted(g.edges, key=sorted):
        if not any(e <= bag for bag in bags):
            return DecompositionReport(False, None, "edge-uncovered", tuple(sorted(e)))
    for v in sorted(g.self_loops):
        if v not in occur:
            return DecompositionReport(False, None, "edge-uncovered", (v, v))
    width = max((len(b) for b in bags), default=0) - 1
    return DecompositionReport(True, width)


def parse_decomposition(text: str) -> PathDecomposition:
    """Parse ``bag <id>*`` lines in path order."""
    bags = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] != "bag":
            from .errors import NetParseError
            raise NetParseError(f"unknown directive {tokens[0]!r}", lineno)
        bags.append(frozenset(tokens[1:]))
    return PathDecomposition(bags=tuple(bags))


def format_decomposition(d: PathDecomposition) -> str:
    return "".join("bag " + " ".join(sorted(b)) + "\n" for b in d.bags)
