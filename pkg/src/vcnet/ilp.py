"""Integer linear feasibility over bounded nonnegative variables, and the
path-flow queries built on it.

``feasible`` is a depth-first branch and bound with interval propagation:
variables range over [0, ub]; rows are sparse integer constraints.  It is
exact and deterministic (most-constrained variable first, ascending values).

``connected_path_flow`` decides whether a labelled multigraph admits a walk
from q to q' whose edge multiplicities satisfy flow conservation, per-label
budget caps, and per-label exhaustion equalities, and whose positive support
is connected.  Connectivity is enforced by lazy big-M cuts; if the cuts do
not settle within 100 rounds (or the solver hits its node cap) an exact
search over (node, budget-vector) states takes over.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import BudgetSpaceLimit, LimitExceeded

BOTTOM = None  # label of unconstrained edges

_REL = ("<=", "=", ">=")


@dataclass
class LinearSystem:
    upper: list                     # per-variable inclusive upper bound
    rows: list = field(default_factory=list)  # (coeffs: dict, rel, rhs)

    def add_row(self, coeffs, rel, rhs):
        if rel not in _REL:
            raise ValueError(f"bad relation {rel!r}")
        self.rows.append(({j: int(c) for j, c in coeffs.items() if c}, rel, int(rhs)))

    def check(self, assignment) -> bool:
        for coeffs, rel, rhs in self.rows:
            lhs = sum(c * assignment[j] for j, c in coeffs.items())
            if rel == "<=" and lhs > rhs:
                return False
            if rel == ">=" and lhs < rhs:
                return False
            if rel == "=" and lhs != rhs:
                return False
        return True

    def dump(self) -> str:
        lines = [f"vars {len(self.upper)}"]
        lines += [f"  0 <= x{j} <= {ub}" for j, ub in enumerate(self.upper)]
        for coeffs, rel, rhs in self.rows:
            terms = " + ".join(
                f"{c}*x{j}" for j, c in sorted(coeffs.items())
            ) or "0"
            lines.append(f"  {terms} {rel} {rhs}")
        return "\n".join(lines) + "\n"


def _propagate(rows, rows_by_var, lo, hi, dirty):
    """Interval tightening to a fixpoint.  Returns False on wipeout."""
    queue = deque(dirty)
    queued = set(dirty)
    while queue:
        r = queue.popleft()
        queued.discard(r)
        coeffs, rel, rhs = rows[r]
        min_l = 0
        max_l = 0
        for j, c in coeffs.items():
            if c > 0:
                min_l += c * lo[j]
                max_l += c * hi[j]
            else:
                min_l += c * hi[j]
                max_l += c * lo[j]
        if rel in ("<=", "=") and min_l > rhs:
            return False
        if rel in (">=", "=") and max_l < rhs:
            return False
        for j, c in coeffs.items():
            if c > 0:
                base_min = min_l - c * lo[j]
                base_max = max_l - c * hi[j]
            else:
                base_min = min_l - c * hi[j]
                base_max = max_l - c * lo[j]
            new_lo, new_hi = lo[j], hi[j]
            if rel in ("<=", "="):
                room = rhs - base_min       # c * x_j <= room
                if c > 0:
                    new_hi = min(new_hi, room // c)
                else:
                    new_lo = max(new_lo, -((-room) // c))
            if rel in (">=", "="):
                need = rhs - base_max       # c * x_j >= need
                if c > 0:
                    new_lo = max(new_lo, -((-need) // c))
                else:
                    new_hi = min(new_hi, need // c)
            if new_lo > new_hi:
                return False
            if new_lo != lo[j] or new_hi != hi[j]:
                lo[j], hi[j] = new_lo, new_hi
                for r2 in rows_by_var[j]:
                    if r2 not in queued:
                        queued.add(r2)
                        queue.append(r2)
    return True


def feasible(sys: LinearSystem, node_limit=None):
    """A satisfying integer assignment within bounds, or None.

    Branches on the unfixed variable with the smallest domain, ascending
    values, so the answer is deterministic.  When ``node_limit`` is given a
    LimitExceeded is raised once that many search nodes were expanded.
    """
    n = len(sys.upper)
    rows = sys.rows
    rows_by_var = [[] for _ in range(n)]
    for r, (coeffs, _, _) in enumerate(rows):
        for j in coeffs:
            rows_by_var[j].append(r)
    lo = [0] * n
    hi = [int(u) for u in sys.upper]
    if any(u < 0 for u in hi):
        return None
    if not _propagate(rows, rows_by_var, lo, hi, range(len(rows))):
        return None
    nodes = [0]

    def solve(lo, hi):
        nodes[0] += 1
        if node_limit is not None and nodes[0] > node_limit:
            raise LimitExceeded("ILP search node limit hit", explored=nodes[0])
        pick = -1
        width = None
        for j in range(n):
            w = hi[j] - lo[j]
            if w > 0 and (width is None or w < width):
                pick, width = j, w
        if pick < 0:
            assignment = lo[:]
            return assignment if sys.check(assignment) else None
        for v in range(lo[pick], hi[pick] + 1):
            lo2 = lo[:]
            hi2 = hi[:]
            lo2[pick] = hi2[pick] = v
            if _propagate(rows, rows_by_var, lo2, hi2, rows_by_var[pick]):
                result = solve(lo2, hi2)
                if result is not None:
                    return result
        return None

    return solve(lo, hi)


# ---------------------------------------------------------------------------
# Labelled multigraphs and path flows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabelledDigraph:
    """Directed multigraph; parallel edges and self-loops allowed.  Edge
    labels are either BOTTOM (unconstrained) or a budget key."""

    nodes: tuple
    edges: tuple  # (src, label, dst)

    def out_edges(self):
        out = {v: [] for v in self.nodes}
        for i, (src, _, _) in enumerate(self.edges):
            out[src].append(i)
        return out

    def in_edges(self):
        inc = {v: [] for v in self.nodes}
        for i, (_, _, dst) in enumerate(self.edges):
            inc[dst].append(i)
        return inc


def _reachable(graph, sources, forward=True):
    adj = {v: [] for v in graph.nodes}
    for src, _, dst in graph.edges:
        if forward:
            adj[src].append(dst)
        else:
            adj[dst].append(src)
    seen = set(sources)
    queue = deque(sources)
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def budget_walk_search(graph: LabelledDigraph, q, qp, budgets,
                       exhaustion=frozenset(), state_limit=10**7):
    """Exact search over (node, usage-vector) states.

    Returns a witness walk (list of edge indices) from q to qp respecting
    all budgets, with usage exactly equal to the budget for every label in
    ``exhaustion``; None when no such walk exists.  For q == qp the empty
    walk counts when it meets the exhaustion obligations; otherwise a
    nonempty closed walk is searched.
    """
    labels = sorted({lb for _, lb, _ in graph.edges if lb is not BOTTOM}
                    | set(exhaustion), key=str)
    lindex = {lb: i for i, lb in enumerate(labels)}
    space = len(graph.nodes)
    for lb in labels:
        space *= budgets.get(lb, 0) + 1
    if space > state_limit:
        raise BudgetSpaceLimit(
            f"budget search space {space} exceeds limit {state_limit}"
        )

    def done(node, usage):
        if node != qp:
            return False
        return all(usage[lindex[lb]] == budgets.get(lb, 0) for lb in exhaustion)

    out = graph.out_edges()
    zero = tuple([0] * len(labels))
    start = (q, zero)
    if done(q, zero):
        return []
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        node, usage = state
        for i in out[node]:
            _, lb, dst = graph.edges[i]
            if lb is BOTTOM:
                usage2 = usage
            else:
                k = lindex[lb]
                if usage[k] >= budgets.get(lb, 0):
                    continue
                usage2 = usage[:k] + (usage[k] + 1,) + usage[k + 1:]
            nxt = (dst, usage2)
            if nxt in parent:
                continue
            parent[nxt] = (state, i)
            if done(dst, usage2):
                walk = []
                cur = nxt
                while parent[cur] is not None:
                    prev, edge = parent[cur]
                    walk.append(edge)
                    cur = prev
                walk.reverse()
                return walk
            queue.append(nxt)
    return None


def _support_components(graph, mu):
    """Connected components of the undirected graph induced by positive
    edges; returns a list of (node set, edge index set)."""
    adj = {}
    for i, count in mu.items():
        if count <= 0:
            continue
        src, _, dst = graph.edges[i]
        adj.setdefault(src, []).append((dst, i))
        adj.setdefault(dst, []).append((src, i))
    seen = set()
    comps = []
    for v in adj:
        if v in seen:
            continue
        nodes = {v}
        edges = set()
        queue = deque([v])
        seen.add(v)
        while queue:
            cur = queue.popleft()
            for w, i in adj[cur]:
                edges.add(i)
                if w not in seen:
                    seen.add(w)
                    nodes.add(w)
                    queue.append(w)
        comps.append((nodes, edges))
    return comps


def connected_path_flow(graph: LabelledDigraph, q, qp, budgets,
                        exhaustion=frozenset(), max_cuts=100,
                        solver_node_limit=200000, dump=None):
    """Multiplicity map for a budget-respecting walk from q to qp, or None.

    The returned map satisfies flow conservation (path form for q != qp,
    cycle form with at least one departure from q otherwise), the budget
    caps, the exhaustion equalities, and has connected support touching q;
    by the path-construction lemma such a map is realizable as an actual
    walk (see ``reconstruct_walk``).
    """
    if q not in graph.nodes or qp not in graph.nodes:
        raise ValueError("endpoints must be graph nodes")
    # edges with an exhausted zero budget can never be used
    usable = [
        i for i, (_, lb, _) in enumerate(graph.edges)
        if lb is BOTTOM or budgets.get(lb, 0) > 0
    ]
    for lb in exhaustion:
        if budgets.get(lb, 0) > 0 and not any(
                graph.edges[i][1] == lb for i in usable):
            return None
    fwd = _reachable(graph, [q], forward=True)
    bwd = _reachable(graph, [qp], forward=False)
    keep = fwd & bwd
    if q not in keep or qp not in keep:
        return None
    idx = [i for i in usable
           if graph.edges[i][0] in keep and graph.edges[i][2] in keep]
    # no interface edges anywhere and no pending equalities: plain reachability
    pending = [lb for lb in exhaustion if budgets.get(lb, 0) > 0]
    if not pending and all(graph.edges[i][1] is BOTTOM for i in idx):
        walk = budget_walk_search(
            LabelledDigraph(tuple(keep), tuple(graph.edges[i] for i in idx)),
            q, qp, {})
        if walk is None:
            return None
        return _walk_to_mu(walk, idx)

    total_budget = sum(budgets.get(lb, 0) for lb in
                       {graph.edges[i][1] for i in idx} - {BOTTOM})
    bottom_cap = (total_budget + 1) * max(len(keep), 1)
    upper = []
    for i in idx:
        lb = graph.edges[i][1]
        upper.append(bottom_cap if lb is BOTTOM else budgets[lb])
    sys = LinearSystem(upper=upper)
    var = {i: j for j, i in enumerate(idx)}
    out_vars = {v: [] for v in keep}
    in_vars = {v: [] for v in keep}
    for i in idx:
        src, _, dst = graph.edges[i]
        out_vars[src].append(var[i])
        in_vars[dst].append(var[i])

    def flow_row(node, excess):
        coeffs = {}
        for j in out_vars[node]:
            coeffs[j] = coeffs.get(j, 0) + 1
        for j in in_vars[node]:
            coeffs[j] = coeffs.get(j, 0) - 1
        sys.add_row(coeffs, "=", excess)

    if q != qp:
        flow_row(q, 1)
        for node in keep:
            if node not in (q, qp):
                flow_row(node, 0)
        coeffs = {}
        for j in in_vars[qp]:
            coeffs[j] = coeffs.get(j, 0) + 1
        for j in out_vars[qp]:
            coeffs[j] = coeffs.get(j, 0) - 1
        sys.add_row(coeffs, "=", 1)
    else:
        for node in keep:
            flow_row(node, 0)
        sys.add_row({j: 1 for j in out_vars[q]}, ">=", 1)

    by_label = {}
    for i in idx:
        lb = graph.edges[i][1]
        if lb is not BOTTOM:
            by_label.setdefault(lb, []).append(var[i])
    for lb, cols in sorted(by_label.items(), key=lambda kv: str(kv[0])):
        sys.add_row({j: 1 for j in cols}, "<=", budgets[lb])
    for lb in sorted(pending, key=str):
        cols = by_label.get(lb, [])
        sys.add_row({j: 1 for j in cols}, "=", budgets[lb])

    big_m = (max(upper, default=1) or 1) * max(len(idx), 1)
    for _ in range(max_cuts):
        if dump is not None:
            dump.write(sys.dump())
        try:
            solution = feasible(sys, node_limit=solver_node_limit)
        except LimitExceeded:
            break
        if solution is None:
            return None
        mu = {i: solution[var[i]] for i in idx if solution[var[i]] > 0}
        comps = _support_components(graph, mu)
        stray = [c for c in comps if q not in c[0]]
        if not stray:
            return mu
        # lazy connectivity cut: flow inside a stray component forces an
        # entering edge into it
        nodes_w, _ = stray[0]
        inside = [var[i] for i in idx
                  if graph.edges[i][0] in nodes_w and graph.edges[i][2] in nodes_w]
        entering = [var[i] for i in idx
                    if graph.edges[i][2] in nodes_w and graph.edges[i][0] not in nodes_w]
        coeffs = {j: big_m for j in entering}
        for j in inside:
            coeffs[j] = coeffs.get(j, 0) - 1
        sys.add_row(coeffs, ">=", 0)
    # cuts did not settle: fall back to the exact budget search
    walk = budget_walk_search(
        LabelledDigraph(tuple(keep), tuple(graph.edges[i] for i in idx)),
        q, qp, budgets, frozenset(pending))
    if walk is None:
        return None
    return _walk_to_mu(walk, idx)


def _walk_to_mu(walk, idx):
    mu = {}
    for local in walk:
        i = idx[local]
        mu[i] = mu.get(i, 0) + 1
    return mu


def reconstruct_walk(graph: LabelledDigraph, mu, q, qp):
    """Euler-style realization of a multiplicity map as an edge walk.

    Hierholzer's algorithm on the multigraph that contains each edge as
    many times as its multiplicity; raises if the map is not realizable as
    a single walk from q to qp.
    """
    out = {}
    total = 0
    for i, c in mu.items():
        if c <= 0:
            continue
        src, _, _ = graph.edges[i]
        out.setdefault(src, []).extend([i] * c)
        total += c
    for v in out:
        out[v].sort(reverse=True)
    path = []       # edge indices, reversed at the end
    stack = [(q, None)]
    while stack:
        v, via = stack[-1]
        if out.get(v):
            i = out[v].pop()
            stack.append((graph.edges[i][2], i))
        else:
            stack.pop()
            if via is not None:
                path.append(via)
    path.reverse()
    if len(path) != total:
        raise ValueError("multiplicities do not form a connected walk")
    node = q
    for i in path:
        src, _, dst = graph.edges[i]
        if src != node:
            raise ValueError("walk reconstruction mismatch")
        node = dst
    if node != qp:
        raise ValueError("walk does not end at the requested node")
    return path
