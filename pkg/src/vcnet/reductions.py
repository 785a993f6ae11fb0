"""Executable hardness constructions and their brute-force oracles.

Each construction returns a net plus markings; correctness is enforced by
oracle-equivalence tests rather than assumed, since the diagrams behind the
wiring leave room for interpretation (read arcs on clause checks, cleanup
transitions with empty postsets, a global check that leaves the scheduler
token alone).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .errors import LimitExceeded, NetParseError, SizeLimit
from .ltl import Atom, Formula, atoms as formula_atoms
from .net import PetriNet
from .structure import PathDecomposition

BRUTE_FORCE_VAR_LIMIT = 20


# ---------------------------------------------------------------------------
# Partitioned weighted satisfiability
# ---------------------------------------------------------------------------

@dataclass
class PwSatInstance:
    """CNF over variables 1..nvars with a partition into k parts and an
    exact per-part count of variables to set true.  Clauses are tuples of
    signed variable indices."""

    nvars: int
    clauses: list
    part: dict                   # var -> part index (1..k)
    tg: dict                     # part index -> target count
    decomposition: list | None = None   # primal-graph bags (sets of vars)

    def __post_init__(self):
        for clause in self.clauses:
            for lit in clause:
                v = abs(lit)
                if not 1 <= v <= self.nvars:
                    raise NetParseError(f"literal {lit} out of range")
        for v in range(1, self.nvars + 1):
            if v not in self.part:
                raise NetParseError(f"variable {v} has no part")
        self.k = max(self.part.values(), default=0)
        for r in range(1, self.k + 1):
            size = sum(1 for v in self.part.values() if v == r)
            target = self.tg.get(r, 0)
            if not 0 <= target <= size:
                raise NetParseError(
                    f"part {r} target {target} outside 0..{size}"
                )

    def part_sizes(self):
        sizes = {r: 0 for r in range(1, self.k + 1)}
        for v in range(1, self.nvars + 1):
            sizes[self.part[v]] += 1
        return sizes

    def primal_edges(self):
        edges = set()
        for clause in self.clauses:
            vs = sorted({abs(lit) for lit in clause})
            for i, a in enumerate(vs):
                for b in vs[i + 1:]:
                    edges.add((a, b))
        return edges


def brute_force_ppwsat(inst: PwSatInstance) -> bool:
    if inst.nvars > BRUTE_FORCE_VAR_LIMIT:
        raise SizeLimit(f"{inst.nvars} variables exceed the oracle limit")
    sizes = inst.part_sizes()
    for bits in itertools.product((False, True), repeat=inst.nvars):
        counts = {r: 0 for r in sizes}
        for v, val in enumerate(bits, start=1):
            if val:
                counts[inst.part[v]] += 1
        if any(counts[r] != inst.tg.get(r, 0) for r in sizes):
            continue
        ok = True
        for clause in inst.clauses:
            if not any((lit > 0) == bits[abs(lit) - 1] for lit in clause):
                ok = False
                break
        if ok:
            return True
    return False


def primal_decomposition(inst: PwSatInstance):
    """The instance's primal-graph path decomposition: the supplied one, or
    an optimal one computed by subset dynamic programming (vertex
    separation) when the instance is small enough."""
    if inst.decomposition is not None:
        bags = [frozenset(b) for b in inst.decomposition]
    else:
        if inst.nvars > 15:
            raise SizeLimit(
                "no decomposition supplied and too many variables to search"
            )
        bags = _optimal_primal_decomposition(inst.nvars, inst.primal_edges())
    return bags or [frozenset()]


def clause_order(inst: PwSatInstance, primal) -> list:
    """Clauses sorted by the first bag containing their whole clique, ties
    by input position; returns clause indices (0-based)."""

    def first_bag(clause):
        vs = {abs(lit) for lit in clause}
        for i, bag in enumerate(primal):
            if vs <= bag:
                return i
        raise NetParseError("clause clique not inside any decomposition bag")

    return sorted(range(len(inst.clauses)),
                  key=lambda j: (first_bag(inst.clauses[j]), j))


def sat_to_net(inst: PwSatInstance):
    """The satisfiability net: assign each variable via a scheduler token,
    count true/false assignments per part on shift chains, walk a clause
    token across read-arc checks, then collect everything into the goal.

    Clause chain positions follow the path-decomposition ordering of
    clauses, which the width bound of the companion decomposition needs.
    Returns (net, initial marking, target marking); the target is the exact
    marking with tokens on the scheduler place and the goal only.
    """
    sizes = inst.part_sizes()
    primal = primal_decomposition(inst)
    ordered = [inst.clauses[j] for j in clause_order(inst, primal)]
    m = len(ordered)
    places = ["s", "g"]
    places += [f"q{i}" for i in range(1, inst.nvars + 1)]
    places += [f"x{i}" for i in range(1, inst.nvars + 1)]
    places += [f"xb{i}" for i in range(1, inst.nvars + 1)]
    for r in range(1, inst.k + 1):
        places += [f"tup{r}", f"fup{r}"]
        places += [f"tu{r}_{z}" for z in range(inst.tg.get(r, 0) + 1)]
        places += [f"fl{r}_{z}" for z in range(sizes[r] - inst.tg.get(r, 0) + 1)]
    places += [f"c{j}" for j in range(1, m + 2)]

    pre = {}
    post = {}

    def add(t, ins, outs):
        pre[t] = frozenset(ins)
        post[t] = frozenset(outs)

    for i in range(1, inst.nvars + 1):
        r = inst.part[i]
        add(f"t{i}", [f"q{i}", "s"], [f"x{i}", f"tup{r}"])
        add(f"f{i}", [f"q{i}", "s"], [f"xb{i}", f"fup{r}"])
        add(f"td{i}", [f"x{i}"], [])
        add(f"fd{i}", [f"xb{i}"], [])
    for r in range(1, inst.k + 1):
        for z in range(1, inst.tg.get(r, 0) + 1):
            add(f"tc{r}_{z}", [f"tup{r}", f"tu{r}_{z - 1}"], [f"tu{r}_{z}", "s"])
        for z in range(1, sizes[r] - inst.tg.get(r, 0) + 1):
            add(f"fc{r}_{z}", [f"fup{r}", f"fl{r}_{z - 1}"], [f"fl{r}_{z}", "s"])
    for j, clause in enumerate(ordered, start=1):
        for lit in clause:
            lp = f"x{lit}" if lit > 0 else f"xb{-lit}"
            add(f"cl{j}_{lp}", [f"c{j}", lp], [f"c{j + 1}", lp])
    chain_ends = [f"tu{r}_{inst.tg.get(r, 0)}" for r in range(1, inst.k + 1)]
    chain_ends += [
        f"fl{r}_{sizes[r] - inst.tg.get(r, 0)}" for r in range(1, inst.k + 1)
    ]
    add("check", [f"c{m + 1}"] + chain_ends, ["g"])

    trans = sorted(pre)
    net = PetriNet(places, trans, pre, post, name="ppwsat")
    initial = frozenset(
        [f"q{i}" for i in range(1, inst.nvars + 1)]
        + ["s", "c1"]
        + [f"tu{r}_0" for r in range(1, inst.k + 1)]
        + [f"fl{r}_0" for r in range(1, inst.k + 1)]
    )
    target = frozenset(["s", "g"])
    return net, initial, target


# Pathwidth of a graph equals its vertex separation number; for small
# instances we get an optimal layout by subset dynamic programming and read
# the bags off the ordering.

def _optimal_primal_decomposition(nvars, edges):
    vertices = list(range(1, nvars + 1))
    n = len(vertices)
    nbr = {v: set() for v in vertices}
    for a, b in edges:
        nbr[a].add(b)
        nbr[b].add(a)
    if n == 0:
        return []
    index = {v: i for i, v in enumerate(vertices)}
    full = (1 << n) - 1
    nbr_mask = [0] * n
    for v in vertices:
        for w in nbr[v]:
            nbr_mask[index[v]] |= 1 << index[w]

    def boundary(mask):
        count = 0
        outside = full & ~mask
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            if nbr_mask[i] & outside:
                count += 1
            m ^= low
        return count

    cost = {0: 0}
    choice = {}
    for mask in range(1, full + 1):
        bnd = boundary(mask)
        best = None
        best_v = None
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            prev = cost[mask ^ low]
            if best is None or prev < best:
                best = prev
                best_v = i
            m ^= low
        cost[mask] = max(best, bnd)
        choice[mask] = best_v
    order = []
    mask = full
    while mask:
        i = choice[mask]
        order.append(vertices[i])
        mask ^= 1 << i
    order.reverse()
    # bag i holds v_i plus every earlier vertex with a neighbour at >= i
    pos = {v: i for i, v in enumerate(order)}
    bags = []
    for i, v in enumerate(order):
        bag = {v}
        for w in order[:i]:
            if any(pos[x] >= i for x in nbr[w]):
                bag.add(w)
        bags.append(frozenset(bag))
    return bags


def build_reduction_decomposition(inst: PwSatInstance, net: PetriNet) -> PathDecomposition:
    """Path decomposition of the satisfiability net's flow graph, following
    the augmentation scheme: substitute variable triples into the primal
    bags, thread clause places through augmented bags, and append one chain
    of bags per counting ladder.  Width is at most 3*pw + 4*k + 7 for a
    primal decomposition of width pw."""
    primal = primal_decomposition(inst)
    ordered = [inst.clauses[j] for j in clause_order(inst, primal)]
    sizes = inst.part_sizes()
    m = len(ordered)
    p1 = {"s", "g", f"c{m + 1}"}
    for r in range(1, inst.k + 1):
        p1.update((f"tup{r}", f"fup{r}"))
        p1.add(f"tu{r}_{inst.tg.get(r, 0)}")
        p1.add(f"fl{r}_{sizes[r] - inst.tg.get(r, 0)}")

    base = []
    for bag in primal:
        out = set(p1)
        for v in bag:
            out.update((f"q{v}", f"x{v}", f"xb{v}"))
        base.append(out)

    # chain position j gets an augmented copy of the first non-augmented
    # bag holding its clique, inserted immediately to its left
    timeline = [(bag, None) for bag in base]
    for j, clause in enumerate(ordered, start=1):
        vs = {abs(lit) for lit in clause}
        for pos, (bag, tag) in enumerate(timeline):
            if tag is None and all(f"q{v}" in bag for v in vs):
                timeline.insert(pos, (set(bag) | {f"c{j}"}, j))
                break
        else:
            raise AssertionError("augmentation bag vanished")
    # carry c_j through non-augmented bags up to the next augmented bag
    current = None
    for bag, tag in timeline:
        if tag is not None:
            current = tag
        elif current is not None:
            bag.add(f"c{current}")
    # every bag holding c_j also holds its successor place
    for bag, _ in timeline:
        present = [j for j in range(1, m + 1) if f"c{j}" in bag]
        for j in present:
            bag.add(f"c{j + 1}")
    bags = [frozenset(bag) for bag, _ in timeline]
    # counting ladders, one appended run per part
    for r in range(1, inst.k + 1):
        for z in range(1, inst.tg.get(r, 0) + 1):
            bags.append(frozenset({f"tu{r}_{z - 1}", f"tu{r}_{z}"} | p1))
        for z in range(1, sizes[r] - inst.tg.get(r, 0) + 1):
            bags.append(frozenset({f"fl{r}_{z - 1}", f"fl{r}_{z}"} | p1))
    return PathDecomposition(bags=tuple(bags))


# ---------------------------------------------------------------------------
# Constraint satisfaction
# ---------------------------------------------------------------------------

@dataclass
class CspInstance:
    """Variables 1..nvars over domain 1..dom; each constraint is a variable
    tuple plus its admissible value tuples.  Every variable must occur in at
    least one constraint."""

    nvars: int
    dom: int
    constraints: list            # (vars tuple, [value tuples])

    def __post_init__(self):
        seen = set()
        for vs, tuples in self.constraints:
            for v in vs:
                if not 1 <= v <= self.nvars:
                    raise NetParseError(f"constraint variable {v} out of range")
                seen.add(v)
            for values in tuples:
                if len(values) != len(vs):
                    raise NetParseError("tuple arity mismatch")
                for d in values:
                    if not 1 <= d <= self.dom:
                        raise NetParseError(f"domain value {d} out of range")
        missing = set(range(1, self.nvars + 1)) - seen
        if missing:
            raise NetParseError(
                f"variables {sorted(missing)} occur in no constraint"
            )

    def degree(self):
        counts = {v: 0 for v in range(1, self.nvars + 1)}
        for vs, _ in self.constraints:
            for v in set(vs):
                counts[v] += 1
        return max(counts.values(), default=0)


def brute_force_csp(inst: CspInstance) -> bool:
    if inst.nvars > BRUTE_FORCE_VAR_LIMIT:
        raise SizeLimit(f"{inst.nvars} variables exceed the oracle limit")
    for values in itertools.product(range(1, inst.dom + 1), repeat=inst.nvars):
        ok = True
        for vs, tuples in inst.constraints:
            got = tuple(values[v - 1] for v in vs)
            if got not in tuples:
                ok = False
                break
        if ok:
            return True
    return False


def csp_to_net(inst: CspInstance):
    """Assignment transitions spray per-constraint copies of the chosen
    value; admissible-tuple checks collect them into constraint tokens; a
    global check collects those into the goal.  Removal transitions drain
    leftover copies so the exact goal marking is reachable."""
    places = ["g"]
    places += [f"q{i}" for i in range(1, inst.nvars + 1)]
    places += [f"c{j}" for j in range(1, len(inst.constraints) + 1)]
    occurs = {i: [] for i in range(1, inst.nvars + 1)}
    for j, (vs, _) in enumerate(inst.constraints, start=1):
        for v in set(vs):
            occurs[v].append(j)
    for i in range(1, inst.nvars + 1):
        for j in occurs[i]:
            for d in range(1, inst.dom + 1):
                places.append(f"qv{i}_{j}_{d}")

    pre = {}
    post = {}

    def add(t, ins, outs):
        pre[t] = frozenset(ins)
        post[t] = frozenset(outs)

    for i in range(1, inst.nvars + 1):
        for d in range(1, inst.dom + 1):
            add(f"t{i}_{d}", [f"q{i}"],
                [f"qv{i}_{j}_{d}" for j in occurs[i]])
            for j in occurs[i]:
                add(f"rm{i}_{j}_{d}", [f"qv{i}_{j}_{d}"], [])
    for j, (vs, tuples) in enumerate(inst.constraints, start=1):
        for idx, values in enumerate(tuples):
            ins = {f"qv{v}_{j}_{d}" for v, d in zip(vs, values)}
            add(f"chk{j}_{idx}", sorted(ins), [f"c{j}"])
    add("check", [f"c{j}" for j in range(1, len(inst.constraints) + 1)], ["g"])

    trans = sorted(pre)
    net = PetriNet(places, trans, pre, post, name="csp")
    initial = frozenset(f"q{i}" for i in range(1, inst.nvars + 1))
    target = frozenset(["g"])
    return net, initial, target


# ---------------------------------------------------------------------------
# Signed digraph pebbling
# ---------------------------------------------------------------------------

@dataclass
class PebblingInstance:
    """Bipartite signed pebbling game.  Red vertices hold pebbles; an
    enabled blue vertex resets its outgoing plus-arcs to pebbled and its
    outgoing minus-arcs to unpebbled."""

    red: tuple
    blue: tuple
    aplus: frozenset             # (src, dst) arcs
    aminus: frozenset

    def __post_init__(self):
        red = set(self.red)
        blue = set(self.blue)
        if red & blue:
            raise NetParseError("red and blue vertex sets overlap")
        for src, dst in self.aplus | self.aminus:
            if not ((src in red and dst in blue) or (src in blue and dst in red)):
                raise NetParseError(f"arc {src!r}->{dst!r} is not red<->blue")
        if self.aplus & self.aminus:
            raise NetParseError("an arc occurs with both signs")


def net_to_pebbling(net: PetriNet, m0, goal) -> PebblingInstance:
    """Places become red, transitions blue; consumed inputs turn into
    minus-arcs back onto the place.  A kickoff vertex pebbles the initial
    marking exactly once; a finishing vertex fires off the goal place and
    pebbles the whole board."""
    if goal not in net.place_index:
        raise NetParseError(f"goal {goal!r} is not a place")
    red = net.places
    blue = tuple(sorted(net.transitions)) + ("b1", "b2")
    aplus = set()
    aminus = set()
    for t in net.transitions:
        for p in net.pre[t]:
            aplus.add((p, t))
            if p not in net.post[t]:
                aminus.add((t, p))
        for p in net.post[t]:
            if p not in net.pre[t]:
                aplus.add((t, p))
    for p in sorted(m0):
        aplus.add(("b1", p))
    for p in red:
        aminus.add((p, "b1"))
    aplus.add((goal, "b2"))
    for p in red:
        aplus.add(("b2", p))
    return PebblingInstance(red=red, blue=blue,
                            aplus=frozenset(aplus), aminus=frozenset(aminus))


def pebbling_reachable(inst: PebblingInstance, state_limit=10**6):
    """Can the all-red-pebbled state be reached from the empty board?

    Returns (reachable, move sequence or None).
    """
    red_index = {p: i for i, p in enumerate(inst.red)}
    full = (1 << len(inst.red)) - 1
    plus_in = {b: [] for b in inst.blue}
    minus_in = {b: [] for b in inst.blue}
    plus_out = {b: 0 for b in inst.blue}
    minus_out = {b: 0 for b in inst.blue}
    for src, dst in inst.aplus:
        if dst in plus_in:
            plus_in[dst].append(src)
        else:
            plus_out[src] |= 1 << red_index[dst]
    for src, dst in inst.aminus:
        if dst in minus_in:
            minus_in[dst].append(src)
        else:
            minus_out[src] |= 1 << red_index[dst]
    plus_need = {b: sum(1 << red_index[p] for p in plus_in[b]) for b in inst.blue}
    minus_avoid = {b: sum(1 << red_index[p] for p in minus_in[b]) for b in inst.blue}

    start = 0
    if start == full:
        return True, []
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for b in inst.blue:
            if state & plus_need[b] != plus_need[b]:
                continue
            if state & minus_avoid[b]:
                continue
            nxt = (state | plus_out[b]) & ~minus_out[b]
            if nxt in parent:
                continue
            if len(parent) >= state_limit:
                raise LimitExceeded(
                    f"pebbling exploration exceeded {state_limit} states"
                )
            parent[nxt] = (state, b)
            if nxt == full:
                moves = []
                cur = nxt
                while parent[cur] is not None:
                    prev, move = parent[cur]
                    moves.append(move)
                    cur = prev
                moves.reverse()
                return True, moves
            queue.append(nxt)
    return False, None


def parse_pebbling(text: str) -> PebblingInstance:
    red, blue = [], []
    aplus, aminus = set(), set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head, rest = tokens[0], tokens[1:]
        if head == "red":
            red += rest
        elif head == "blue":
            blue += rest
        elif head == "arc+":
            if len(rest) != 2:
                raise NetParseError("expected: arc+ <src> <dst>", lineno)
            aplus.add((rest[0], rest[1]))
        elif head == "arc-":
            if len(rest) != 2:
                raise NetParseError("expected: arc- <src> <dst>", lineno)
            aminus.add((rest[0], rest[1]))
        else:
            raise NetParseError(f"unknown directive {head!r}", lineno)
    return PebblingInstance(red=tuple(sorted(red)), blue=tuple(sorted(blue)),
                            aplus=frozenset(aplus), aminus=frozenset(aminus))


def format_pebbling(inst: PebblingInstance) -> str:
    lines = []
    if inst.red:
        lines.append("red " + " ".join(sorted(inst.red)))
    if inst.blue:
        lines.append("blue " + " ".join(sorted(inst.blue)))
    for src, dst in sorted(inst.aplus):
        lines.append(f"arc+ {src} {dst}")
    for src, dst in sorted(inst.aminus):
        lines.append(f"arc- {src} {dst}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Propositional formula gadget
# ---------------------------------------------------------------------------

def formula_gadget_net(formula: Formula):
    """Net whose reachable markings realize every assignment of the formula
    variables: all variables start true, a switch-off transition per
    variable consumes the control token, and a tick/tock pair keeps every
    maximal run infinite.  Its flow graph has minimum vertex cover
    {g1, g2}."""
    names = sorted(formula_atoms(formula))
    if {"g1", "g2"} & set(names):
        raise ValueError("formula variables g1/g2 collide with gadget places")
    places = names + ["g1", "g2"]
    pre, post = {}, {}
    for q in names:
        pre[f"off_{q}"] = frozenset((q, "g1"))
        post[f"off_{q}"] = frozenset(("g2",))
    pre["tick"] = frozenset(("g1",))
    post["tick"] = frozenset(("g2",))
    pre["tock"] = frozenset(("g2",))
    post["tock"] = frozenset(("g1",))
    net = PetriNet(places, sorted(pre), pre, post, name="gadget")
    m0 = frozenset(names + ["g1"])
    return net, m0


# ---------------------------------------------------------------------------
# Instance text formats
# ---------------------------------------------------------------------------

def parse_ppwsat(text: str) -> PwSatInstance:
    """DIMACS-like clauses (terminated by 0) plus part/tg directives and
    optional primal decomposition bags."""
    clauses = []
    part = {}
    tg = {}
    bags = []
    nvars = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("c "):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            continue
        if tokens[0] == "part":
            if len(tokens) != 3:
                raise NetParseError("expected: part <var> <index>", lineno)
            part[int(tokens[1])] = int(tokens[2])
        elif tokens[0] == "tg":
            if len(tokens) != 3:
                raise NetParseError("expected: tg <index> <count>", lineno)
            tg[int(tokens[1])] = int(tokens[2])
        elif tokens[0] == "bag":
            bags.append(frozenset(int(x) for x in tokens[1:]))
        else:
            try:
                lits = [int(x) for x in tokens]
            except ValueError:
                raise NetParseError(f"unparsable line {line!r}", lineno) from None
            if lits and lits[-1] == 0:
                lits = lits[:-1]
            if not lits:
                raise NetParseError("empty clause", lineno)
            clauses.append(tuple(lits))
            nvars = max(nvars, max(abs(x) for x in lits))
    nvars = max([nvars] + list(part.keys()) + [0])
    for v in range(1, nvars + 1):
        part.setdefault(v, 1)
    return PwSatInstance(nvars=nvars, clauses=clauses, part=part, tg=tg,
                         decomposition=bags or None)


def format_ppwsat(inst: PwSatInstance) -> str:
    lines = [f"p cnf {inst.nvars} {len(inst.clauses)}"]
    for clause in inst.clauses:
        lines.append(" ".join(str(x) for x in clause) + " 0")
    for v in sorted(inst.part):
        lines.append(f"part {v} {inst.part[v]}")
    for r in sorted(inst.tg):
        lines.append(f"tg {r} {inst.tg[r]}")
    if inst.decomposition:
        for bag in inst.decomposition:
            lines.append("bag " + " ".join(str(v) for v in sorted(bag)))
    return "\n".join(lines) + "\n"


def parse_csp(text: str) -> CspInstance:
    """``var <id>`` / ``dom <k>`` / ``con <vars> : <tuple>;<tuple>...``
    lines; variables are renumbered in declaration order."""
    names = []
    dom = None
    raw_cons = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "var":
            names += tokens[1:]
        elif tokens[0] == "dom":
            if len(tokens) != 2:
                raise NetParseError("expected: dom <k>", lineno)
            dom = int(tokens[1])
        elif tokens[0] == "con":
            body = line[len("con"):]
            if ":" not in body:
                raise NetParseError("expected: con <vars> : <tuples>", lineno)
            head, tail = body.split(":", 1)
            vs = head.split()
            tuples = []
            for chunk in tail.split(";"):
                chunk = chunk.strip()
                if not chunk:
                    continue
                tuples.append(tuple(int(x) for x in chunk.split()))
            raw_cons.append((vs, tuples, lineno))
        else:
            raise NetParseError(f"unknown directive {tokens[0]!r}", lineno)
    if dom is None:
        raise NetParseError("missing dom directive")
    index = {name: i + 1 for i, name in enumerate(names)}
    constraints = []
    for vs, tuples, lineno in raw_cons:
        try:
            constraints.append((tuple(index[v] for v in vs), tuples))
        except KeyError as exc:
            raise NetParseError(f"undeclared variable {exc.args[0]!r}", lineno)
    return CspInstance(nvars=len(names), dom=dom, constraints=constraints)


def format_csp(inst: CspInstance) -> str:
    lines = [f"var v{i}" for i in range(1, inst.nvars + 1)]
    lines.append(f"dom {inst.dom}")
    for vs, tuples in inst.constraints:
        head = " ".join(f"v{v}" for v in vs)
        body = "; ".join(" ".join(str(d) for d in values) for values in tuples)
        lines.append(f"con {head} : {body}")
    return "\n".join(lines) + "\n"
