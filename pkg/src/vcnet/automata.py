"""Word automata over subsets of atom sets, and LTL translations.

A finite-word automaton (kind ``nfa``) accepts a word of r+1 letters through
a run of r+2 states whose last state is accepting.  A Buchi automaton (kind
``buchi``) accepts an infinite word iff some run visits accepting states
infinitely often.

The LTL translations use obligation expansion: a state is the set of
formulas that must hold on the remaining word.  For finite words an
obligation is strong (a next position must exist) or weak; a state is
accepting iff it carries no strong obligation.  For infinite words, states
additionally carry the set of pending Until promises; a state is accepting
iff that set is empty.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import NetParseError
from . import ltl
from .ltl import (
    Always, And, Atom, Const, End, Eventually, Formula, Implies, Next, Not,
    Or, Release, Until, WeakNext, nnf,
)


@dataclass
class WordAutomaton:
    kind: str                 # 'nfa' or 'buchi'
    atoms: frozenset
    states: tuple
    initial: frozenset
    accepting: frozenset
    transitions: dict = field(repr=False)  # (state, letter) -> frozenset

    def step(self, state, letter) -> frozenset:
        return self.transitions.get((state, frozenset(letter)), frozenset())

    def letters(self):
        atoms = sorted(self.atoms)
        for mask in range(1 << len(atoms)):
            yield frozenset(a for i, a in enumerate(atoms) if (mask >> i) & 1)

    def __len__(self):
        return len(self.states)


def nfa_accepts(aut: WordAutomaton, word) -> bool:
    """Finite-word acceptance; the run is one state longer than the word."""
    current = set(aut.initial)
    for letter in word:
        letter = frozenset(letter) & aut.atoms
        current = {q2 for q in current for q2 in aut.step(q, letter)}
        if not current:
            return False
    return bool(current & aut.accepting)


def buchi_accepts_lasso(aut: WordAutomaton, prefix, loop) -> bool:
    """Does the automaton accept ``prefix . loop^omega``?"""
    if not loop:
        raise ValueError("empty loop")
    word = [frozenset(x) & aut.atoms for x in list(prefix) + list(loop)]
    n = len(word)
    succ_pos = list(range(1, n)) + [len(prefix)]
    start = {(0, q) for q in aut.initial}
    seen = set(start)
    queue = deque(start)
    adj = {}
    while queue:
        i, q = queue.popleft()
        nxt = [(succ_pos[i], q2) for q2 in aut.step(q, word[i])]
        adj[(i, q)] = nxt
        for node in nxt:
            if node not in seen:
                seen.add(node)
                queue.append(node)
    # accepted iff some reachable accepting node lies on a cycle
    for node in seen:
        i, q = node
        if q not in aut.accepting:
            continue
        frontier = list(adj.get(node, ()))
        visited = set(frontier)
        while frontier:
            cur = frontier.pop()
            if cur == node:
                return True
            for node2 in adj.get(cur, ()):
                if node2 not in visited:
                    visited.add(node2)
                    frontier.append(node2)
    return False


# ---------------------------------------------------------------------------
# Obligation expansion
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _is_propositional(f: Formula) -> bool:
    match f:
        case Atom() | Const():
            return True
        case End() | Next() | WeakNext() | Until() | Release() | Eventually() | Always():
            return False
        case Not(g):
            return _is_propositional(g)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return _is_propositional(l) and _is_propositional(r)
    raise TypeError(f"not a formula: {f!r}")


@lru_cache(maxsize=None)
def _eval_prop(f: Formula, letter: frozenset) -> bool:
    match f:
        case Atom(name):
            return name in letter
        case Const(v):
            return v
        case Not(g):
            return not _eval_prop(g, letter)
        case And(l, r):
            return _eval_prop(l, letter) and _eval_prop(r, letter)
        case Or(l, r):
            return _eval_prop(l, letter) or _eval_prop(r, letter)
        case Implies(l, r):
            return (not _eval_prop(l, letter)) or _eval_prop(r, letter)
    raise TypeError(f"not propositional: {f!r}")


def _expand(now, letter, finite):
    """All ways to satisfy the obligation set ``now`` at a position reading
    ``letter``.

    Yields (next_obligations, deferred_untils) pairs.  For finite words the
    next obligations are (formula, strong) pairs; for infinite words they
    are bare formulas.  ``deferred_untils`` is only meaningful for the
    infinite case (Buchi promise bookkeeping).
    """
    results = set()

    def go(stack, done, nxt, deferred):
        while stack:
            f = stack[-1]
            stack = stack[:-1]
            if f in done:
                continue
            done = done | {f}
            if _is_propositional(f):
                if not _eval_prop(f, letter):
                    return
                continue
            match f:
                case End():
                    f = WeakNext(Const(False))
                case Not(End()):
                    f = Next(Const(True))
            match f:
                case Next(g):
                    nxt = nxt | {(g, True)} if finite else nxt | {g}
                case WeakNext(g):
                    nxt = nxt | {(g, False)} if finite else nxt | {g}
                case And(l, r):
                    stack = stack + (l, r)
                case Or(l, r):
                    go(stack + (l,), done, nxt, deferred)
                    stack = stack + (r,)
                case Implies(l, r):
                    go(stack + (Not(l),), done, nxt, deferred)
                    stack = stack + (r,)
                case Not(g):
                    # non-propositional negation: push the NNF
                    stack = stack + (nnf(f, infinite=not finite),)
                case Until(l, r):
                    defer = nxt | ({(f, True)} if finite else {f})
                    go(stack + (l,), done, defer, deferred | {f})
                    stack = stack + (r,)
                case Release(l, r):
                    defer = nxt | ({(f, False)} if finite else {f})
                    go(stack + (r,), done, defer, deferred)
                    stack = stack + (r, l)
                case Eventually(g):
                    stack = stack + (Until(Const(True), g),)
                case Always(g):
                    stack = stack + (Release(Const(False), g),)
                case _:
                    raise TypeError(f"not a formula: {f!r}")
        results.add((frozenset(nxt), frozenset(deferred)))

    go(tuple(now), frozenset(), frozenset(), frozenset())
    return results


def _normalize_finite(pairs):
    """Drop weak duplicates of obligations that also occur strong."""
    strong = {f for f, s in pairs if s}
    return frozenset((f, s) for f, s in pairs if s or f not in strong)


def ltl_to_nfa(formula: Formula) -> WordAutomaton:
    """Finite-word automaton accepting exactly the models of ``formula``."""
    univ = ltl.atoms(formula)
    root = nnf(formula)
    init = frozenset(((root, True),))
    letters = [frozenset(s) for s in _subsets(sorted(univ))]
    transitions = {}
    states = {init}
    queue = deque([init])
    while queue:
        state = queue.popleft()
        now = tuple(f for f, _ in state)
        for letter in letters:
            succ = set()
            for nxt, _ in _expand(now, letter, finite=True):
                succ.add(_normalize_finite(nxt))
            transitions[(state, letter)] = frozenset(succ)
            for s2 in succ:
                if s2 not in states:
                    states.add(s2)
                    queue.append(s2)
    accepting = frozenset(s for s in states if not any(strong for _, strong in s))
    return WordAutomaton(kind="nfa", atoms=univ, states=tuple(states),
                         initial=frozenset((init,)), accepting=accepting,
                         transitions=transitions)


def ltl_to_buchi(formula: Formula) -> WordAutomaton:
    """Buchi automaton accepting exactly the infinite-word models.

    States are (obligations, pending Until promises); a state is accepting
    iff no promise is pending.  When the pending set empties it restarts
    with the promises deferred on the incoming step, which realises the
    usual counter-free degeneralization.
    """
    univ = ltl.atoms(formula)
    root = nnf(formula, infinite=True)
    init = (frozenset((root,)), frozenset())
    letters = [frozenset(s) for s in _subsets(sorted(univ))]
    transitions = {}
    states = {init}
    queue = deque([init])
    while queue:
        state = queue.popleft()
        obligations, pending = state
        for letter in letters:
            succ = set()
            for nxt, deferred in _expand(tuple(obligations), letter, finite=False):
                if pending:
                    new_pending = (pending & deferred)
                else:
                    new_pending = deferred
                new_pending = new_pending & nxt
                succ.add((nxt, new_pending))
            transitions[(state, letter)] = frozenset(succ)
            for s2 in succ:
                if s2 not in states:
                    states.add(s2)
                    queue.append(s2)
    accepting = frozenset(s for s in states if not s[1])
    return WordAutomaton(kind="buchi", atoms=univ, states=tuple(states),
                         initial=frozenset((init,)), accepting=accepting,
                         transitions=transitions)


def determinize(aut: WordAutomaton) -> WordAutomaton:
    """Subset construction for finite-word automata."""
    if aut.kind != "nfa":
        raise ValueError("determinize expects a finite-word automaton")
    init = frozenset(aut.initial)
    letters = list(aut.letters())
    transitions = {}
    states = {init}
    queue = deque([init])
    while queue:
        state = queue.popleft()
        for letter in letters:
            nxt = frozenset(q2 for q in state for q2 in aut.step(q, letter))
            transitions[(state, letter)] = frozenset((nxt,))
            if nxt not in states:
                states.add(nxt)
                queue.append(nxt)
    accepting = frozenset(s for s in states if s & aut.accepting)
    return WordAutomaton(kind="nfa", atoms=aut.atoms, states=tuple(states),
                         initial=frozenset((init,)), accepting=accepting,
                         transitions=transitions)


def _subsets(items):
    items = list(items)
    for mask in range(1 << len(items)):
        yield [x for i, x in enumerate(items) if (mask >> i) & 1]


# ---------------------------------------------------------------------------
# Automaton text format
#
#   atoms <id>*                 (optional; default: union of edge letters)
#   state <id> [init] [acc]
#   edge <src> {<id>*} <dst>
# ---------------------------------------------------------------------------

def parse_automaton(text: str, kind: str) -> WordAutomaton:
    states = []
    initial = set()
    accepting = set()
    edges = []
    declared_atoms = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head, rest = tokens[0], tokens[1:]
        if head == "atoms":
            declared_atoms = frozenset(rest)
        elif head == "state":
            if not rest:
                raise NetParseError("expected: state <id> [init] [acc]", lineno)
            sid = rest[0]
            if sid in states:
                raise NetParseError(f"duplicate state {sid!r}", lineno)
            states.append(sid)
            for flag in rest[1:]:
                if flag == "init":
                    initial.add(sid)
                elif flag == "acc":
                    accepting.add(sid)
                else:
                    raise NetParseError(f"unknown state flag {flag!r}", lineno)
        elif head == "edge":
            body = " ".join(rest)
            if "{" not in body or "}" not in body:
                raise NetParseError("expected: edge <src> {<id>*} <dst>", lineno)
            srcpart, after = body.split("{", 1)
            letterpart, dstpart = after.split("}", 1)
            src = srcpart.strip()
            dst = dstpart.strip()
            letter = frozenset(letterpart.split())
            if not src or not dst or " " in src or " " in dst:
                raise NetParseError("expected: edge <src> {<id>*} <dst>", lineno)
            edges.append((src, letter, dst))
        else:
            raise NetParseError(f"unknown directive {head!r}", lineno)
    known = set(states)
    for src, letter, dst in edges:
        for sid in (src, dst):
            if sid not in known:
                raise NetParseError(f"edge references undeclared state {sid!r}")
    atoms = declared_atoms
    if atoms is None:
        atoms = frozenset(a for _, letter, _ in edges for a in letter)
    transitions = {}
    for src, letter, dst in edges:
        if not letter <= atoms:
            raise NetParseError(
                f"edge letter {sorted(letter)} uses atoms outside {sorted(atoms)}"
            )
        key = (src, letter)
        transitions[key] = transitions.get(key, frozenset()) | {dst}
    return WordAutomaton(kind=kind, atoms=atoms, states=tuple(states),
                         initial=frozenset(initial), accepting=frozenset(accepting),
                         transitions=transitions)


def format_automaton(aut: WordAutomaton) -> str:
    lines = ["atoms " + " ".join(sorted(aut.atoms))]
    for s in aut.states:
        flags = ""
        if s in aut.initial:
            flags += " init"
        if s in aut.accepting:
            flags += " acc"
        lines.append(f"state {s}{flags}")
    for (src, letter), dsts in sorted(
            aut.transitions.items(), key=lambda kv: (str(kv[0][0]), sorted(kv[0][1]))):
        for dst in sorted(dsts, key=str):
            lines.append(f"edge {src} {{{' '.join(sorted(letter))}}} {dst}")
    return "\n".join(lines) + "\n"
