"""Special places and the edge-constrained automaton.

The special set collects the vertex cover, the formula places, and one
designated place per interface that still has places to spare.  The
automaton tracks markings restricted to the special set: a step is either
unconstrained (the firing touches special places only) or labelled with the
interface of the single non-special place it consumes a token from; each
interface label carries a global usage budget equal to the number of
initially marked non-special places of that interface.

Because every transition touches at most one place outside the cover, both
the final-state predicate and the exhaustion trigger collapse to conditions
on the special restriction alone, which is what makes the automaton
computable without enumerating markings.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import StructuralViolation
from .net import PetriNet
from .structure import NeighbourhoodTable, interfaces

BOTTOM = None


@dataclass
class SpecialSet:
    special: frozenset
    cover: frozenset
    formula_places: frozenset
    designated: dict            # interface -> place
    budgets: dict               # interface -> initial tokens outside S
    interface_of: dict          # non-cover place -> interface
    outside: dict               # interface -> places outside S, sorted
    table: NeighbourhoodTable = field(repr=False)

    @property
    def interface_values(self):
        return sorted(set(self.interface_of.values()))


def special_places(net: PetriNet, m0, cover, formula_places) -> SpecialSet:
    """The special set, designated places, and interface budgets."""
    cover = frozenset(cover)
    formula_places = frozenset(formula_places)
    unknown = formula_places - set(net.places)
    if unknown:
        raise ValueError(f"formula places {sorted(unknown)} not in the net")
    table, iface_map = interfaces(net, cover)
    groups = {}
    for p, iface in iface_map.items():
        groups.setdefault(iface, []).append(p)
    designated = {}
    for iface, members in sorted(groups.items()):
        free = sorted(set(members) - formula_places)
        if free:
            designated[iface] = free[0]
    special = cover | formula_places | frozenset(designated.values())
    outside = {}
    budgets = {}
    m0 = frozenset(m0)
    for iface, members in sorted(groups.items()):
        rest = tuple(sorted(set(members) - special))
        outside[iface] = rest
        budgets[iface] = sum(1 for p in rest if p in m0)
    return SpecialSet(special=special, cover=cover,
                      formula_places=formula_places, designated=designated,
                      budgets=budgets, interface_of=iface_map,
                      outside=outside, table=table)


class EdgeConstrainedAutomaton:
    """States are subsets of the special set reachable from the initial
    restriction; edges carry BOTTOM or an interface label."""

    def __init__(self, net: PetriNet, special: SpecialSet, initial):
        self.net = net
        self.special = special
        self.initial = frozenset(initial) & special.special
        s = special.special
        self._all_special = []      # (pre, post) both inside S
        self._consumers = []        # (pre & S, post, label)
        self._special_pres = []     # pre sets of transitions not consuming outside
        for t in net.transitions:
            outs = net.touched(t) - s
            if len(outs) > 1:
                raise StructuralViolation(
                    f"transition {t!r} touches several non-special places "
                    f"{sorted(outs)}"
                )
            if not outs:
                self._all_special.append((net.pre[t], net.post[t]))
                self._special_pres.append(net.pre[t])
                continue
            p = next(iter(outs))
            assert p not in special.cover
            if p in net.pre[t] and p in net.post[t]:
                raise StructuralViolation(
                    f"non-cover place {p!r} is input and output of {t!r}"
                )
            if p in net.pre[t]:
                label = special.interface_of[p]
                self._consumers.append((net.pre[t] & s, net.post[t], label))
            else:
                # produces into a non-special place: contributes no edge
                self._special_pres.append(net.pre[t])
        self._all_special = sorted(self._all_special, key=_pair_key)
        self._consumers = sorted(
            self._consumers, key=lambda c: (_pair_key(c[:2]), c[2]))
        self._succ_cache = {}
        self.states, self.edges = self._materialize()
        self.final_states = frozenset(
            st for st in self.states if self.is_final(st))

    def successors(self, state):
        """Deduplicated (label, next-state) pairs; computed from the net so
        arbitrary states, not only reachable ones, can be queried."""
        state = frozenset(state)
        cached = self._succ_cache.get(state)
        if cached is not None:
            return cached
        out = set()
        for pre, post in self._all_special:
            if pre <= state and not ((post - pre) & state):
                out.add((BOTTOM, (state - pre) | post))
        for pre_s, post, label in self._consumers:
            if pre_s <= state and not ((post - pre_s) & state):
                out.add((label, (state - pre_s) | post))
        result = tuple(sorted(out, key=lambda e: (str(e[0]), sorted(e[1]))))
        self._succ_cache[state] = result
        return result

    def has_edge(self, src, label, dst):
        return any(lb == label and nxt == frozenset(dst)
                   for lb, nxt in self.successors(src))

    def is_final(self, state):
        """No transition with all inputs special is enabled on the
        restriction: only outside-consuming transitions could fire."""
        state = frozenset(state)
        return not any(pre <= state for pre in self._special_pres)

    def exhaustion_trigger(self, state):
        """Interfaces for which some marking over this restriction enables
        a transition consuming a token outside the special set."""
        state = frozenset(state)
        out = set()
        for pre_s, _, label in self._consumers:
            if pre_s <= state:
                out.add(label)
        return frozenset(out)

    def _materialize(self):
        states = {self.initial}
        edges = []
        queue = deque([self.initial])
        while queue:
            st = queue.popleft()
            for label, nxt in self.successors(st):
                edges.append((st, label, nxt))
                if nxt not in states:
                    states.add(nxt)
                    queue.append(nxt)
        ordered = sorted(states, key=sorted)
        return ordered, edges

    def __len__(self):
        return len(self.states)


def _pair_key(pair):
    return (tuple(sorted(pair[0])), tuple(sorted(pair[1])))


def build_eca(net: PetriNet, special: SpecialSet, m0) -> EdgeConstrainedAutomaton:
    return EdgeConstrainedAutomaton(net, special, m0)


def valid_run_check(eca: EdgeConstrainedAutomaton, word, labels) -> bool:
    """The three conditions of a valid run: every step is an automaton edge,
    no interface label exceeds its budget, and a finite word must end in a
    final state with every triggered interface fully exhausted."""
    word = [frozenset(w) for w in word]
    if not word:
        return False
    if len(labels) != len(word) - 1:
        raise ValueError("need one label per step")
    for j in range(1, len(word)):
        if not eca.has_edge(word[j - 1], labels[j - 1], word[j]):
            return False
    counts = {}
    for lb in labels:
        if lb is not BOTTOM:
            counts[lb] = counts.get(lb, 0) + 1
    for lb, n in counts.items():
        if n > eca.special.budgets.get(lb, 0):
            return False
    last = word[-1]
    if not eca.is_final(last):
        return False
    for lb in eca.exhaustion_trigger(last):
        if counts.get(lb, 0) != eca.special.budgets.get(lb, 0):
            return False
    return True


def normalize_run(net: PetriNet, special: SpecialSet, markings, transitions):
    """Rewrite a maximal finite run so its restriction to the special set is
    a valid automaton run, per the run construction argument: once all
    places of an interface are empty, reroute later activity on that
    interface's non-special places through the designated place.

    Returns (word, labels) of the rewritten run.
    """
    markings = [frozenset(m) for m in markings]
    s = special.special
    iface_of = special.interface_of
    members = {}
    for p, iface in iface_of.items():
        members.setdefault(iface, set()).add(p)
    first_empty = {}
    for iface, group in members.items():
        for i, m in enumerate(markings):
            if not (m & group):
                first_empty[iface] = i
                break

    def replacement(t, p, iface):
        w = 1 if p in net.post[t] else -1
        target = special.designated[iface]
        for t2 in net.transitions:
            if special.table.assignment[t2] != special.table.assignment[t]:
                continue
            w2 = int(target in net.post[t2]) - int(target in net.pre[t2])
            if w2 == w:
                return t2
        raise AssertionError(
            f"no same-neighbourhood replacement for {t!r} on {target!r}"
        )

    rewritten = []
    for j, t in enumerate(transitions):
        outs = net.touched(t) - s
        if outs:
            p = next(iter(outs))
            iface = iface_of[p]
            cut = first_empty.get(iface)
            if cut is not None and j >= cut:
                t = replacement(t, p, iface)
        rewritten.append(t)

    from .net import fire

    run = [markings[0]]
    labels = []
    for t in rewritten:
        outs = net.touched(t) - s
        if not outs:
            labels.append(BOTTOM)
        else:
            p = next(iter(outs))
            assert p in net.pre[t], (
                f"rewritten run still adds tokens outside the special set via {t!r}"
            )
            labels.append(iface_of[p])
        run.append(fire(net, run[-1], t))
    word = [m & s for m in run]
    return word, labels


def lift_word(net: PetriNet, m0, special: SpecialSet, word):
    """A maximal finite run whose special restrictions match ``word``, or
    None.  The search walks real markings position by position and demands
    a deadlock at the end."""
    word = [frozenset(w) for w in word]
    m0 = frozenset(m0)
    s = special.special
    if m0 & s != word[0]:
        return None
    start = net.to_mask(m0)
    s_mask = net.to_mask(s)
    word_masks = [net.to_mask(w) for w in word]
    last = len(word) - 1
    seen = {(0, start)}
    parent = {(0, start): None}
    queue = deque([(0, start)])
    goal = None
    while queue and goal is None:
        pos, mask = queue.popleft()
        if pos == last:
            if not any(mask & net.pre_mask[t] == net.pre_mask[t]
                       for t in net.transitions):
                goal = (pos, mask)
            continue
        for t in net.transitions:
            pre = net.pre_mask[t]
            if mask & pre != pre:
                continue
            post = net.post_mask[t]
            if mask & (post & ~pre):
                continue
            nxt = (mask & ~pre) | post
            if nxt & s_mask != word_masks[pos + 1]:
                continue
            key = (pos + 1, nxt)
            if key not in seen:
                seen.add(key)
                parent[key] = (pos, mask)
                queue.append(key)
    if goal is None:
        return None
    path = []
    cur = goal
    while cur is not None:
        path.append(net.from_mask(cur[1]))
        cur = parent[cur]
    path.reverse()
    return path
