"""LTL formulas: AST, parser, negation, and a direct evaluator.

The evaluator is the semantic reference for the automaton translations: it
works on finite words and on ultimately periodic (lasso) words given as a
prefix plus a nonempty loop.  Letters are frozensets of atom names.

Finite-word semantics: ``X`` is false at the last position, ``end`` is true
only at the last position, and an Until needs its witness inside the word.
On infinite words ``end`` is everywhere false.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormulaParseError


class Formula:
    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class End(Formula):
    """Holds exactly at the last position of a finite run."""


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class WeakNext(Formula):
    """Internal: like Next but true at the last position."""

    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


TRUE = Const(True)
FALSE = Const(False)


def atoms(formula: Formula) -> frozenset:
    match formula:
        case Atom(name):
            return frozenset((name,))
        case Const() | End():
            return frozenset()
        case Not(f) | Next(f) | WeakNext(f) | Eventually(f) | Always(f):
            return atoms(f)
        case And(l, r) | Or(l, r) | Implies(l, r) | Until(l, r) | Release(l, r):
            return atoms(l) | atoms(r)
    raise TypeError(f"not a formula: {formula!r}")


def formula_size(formula: Formula) -> int:
    match formula:
        case Atom() | Const() | End():
            return 1
        case Not(f) | Next(f) | WeakNext(f) | Eventually(f) | Always(f):
            return 1 + formula_size(f)
        case And(l, r) | Or(l, r) | Implies(l, r) | Until(l, r) | Release(l, r):
            return 1 + formula_size(l) + formula_size(r)
    raise TypeError(f"not a formula: {formula!r}")


def to_text(formula: Formula) -> str:
    match formula:
        case Atom(name):
            return name
        case Const(v):
            return "true" if v else "false"
        case End():
            return "end"
        case Not(f):
            return f"!({to_text(f)})"
        case And(l, r):
            return f"({to_text(l)} & {to_text(r)})"
        case Or(l, r):
            return f"({to_text(l)} | {to_text(r)})"
        case Implies(l, r):
            return f"({to_text(l)} -> {to_text(r)})"
        case Next(f):
            return f"X ({to_text(f)})"
        case WeakNext(f):
            return f"WX ({to_text(f)})"
        case Until(l, r):
            return f"({to_text(l)} U {to_text(r)})"
        case Release(l, r):
            return f"({to_text(l)} R {to_text(r)})"
        case Eventually(f):
            return f"F ({to_text(f)})"
        case Always(f):
            return f"G ({to_text(f)})"
    raise TypeError(f"not a formula: {formula!r}")


# ---------------------------------------------------------------------------
# Parser.  Precedence (loosest first): ->, |, &, U/R, unary (! X F G), atoms.
# Binary operators are right-associative.
# ---------------------------------------------------------------------------

_UNARY = {"!": Not, "X": Next, "F": Eventually, "G": Always}


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.tokens = []
        i = 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
            elif text.startswith("->", i):
                self.tokens.append(("->", i))
                i += 2
            elif c in "()!&|":
                self.tokens.append((c, i))
                i += 1
            else:
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] in "_.^-"):
                    if text.startswith("->", j):
                        break
                    j += 1
                if j == i:
                    raise FormulaParseError(f"unexpected character {c!r}", i)
                self.tokens.append((text[i:j], i))
                i = j
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def next(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def here(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return len(self.text)


def parse_ltl(text: str) -> Formula:
    ts = _Tokens(text)
    formula = _parse_implies(ts)
    if ts.peek() is not None:
        raise FormulaParseError(f"unexpected token {ts.peek()!r}", ts.here())
    return formula


def _parse_implies(ts):
    left = _parse_or(ts)
    if ts.peek() == "->":
        ts.next()
        return Implies(left, _parse_implies(ts))
    return left


def _parse_or(ts):
    left = _parse_and(ts)
    if ts.peek() == "|":
        ts.next()
        return Or(left, _parse_or(ts))
    return left


def _parse_and(ts):
    left = _parse_temporal(ts)
    if ts.peek() == "&":
        ts.next()
        return And(left, _parse_and(ts))
    return left


def _parse_temporal(ts):
    left = _parse_unary(ts)
    if ts.peek() == "U":
        ts.next()
        return Until(left, _parse_temporal(ts))
    if ts.peek() == "R":
        ts.next()
        return Release(left, _parse_temporal(ts))
    return left


def _parse_unary(ts):
    token = ts.peek()
    if token in _UNARY:
        ts.next()
        return _UNARY[token](_parse_unary(ts))
    return _parse_atom(ts)


def _parse_atom(ts):
    token = ts.peek()
    if token is None:
        raise FormulaParseError("unexpected end of formula", ts.here())
    if token == "(":
        ts.next()
        inner = _parse_implies(ts)
        if ts.peek() != ")":
            raise FormulaParseError("expected ')'", ts.here())
        ts.next()
        return inner
    if token in (")", "&", "|", "->", "U", "R"):
        raise FormulaParseError(f"unexpected token {token!r}", ts.here())
    ts.next()
    if token == "true":
        return TRUE
    if token == "false":
        return FALSE
    if token == "end":
        return End()
    return Atom(token)


# ---------------------------------------------------------------------------
# Negation normal form.  `end` unfolds to WeakNext(false) so the automaton
# constructions never see it; on infinite words it is rewritten to false.
# ---------------------------------------------------------------------------

def nnf(formula: Formula, infinite: bool = False) -> Formula:
    return _nnf(formula, False, infinite)


def _nnf(f, neg, infinite):
    match f:
        case Atom():
            return Not(f) if neg else f
        case Const(v):
            return Const(v != neg)
        case End():
            if infinite:
                return Const(neg)
            return Next(TRUE) if neg else WeakNext(FALSE)
        case Not(g):
            return _nnf(g, not neg, infinite)
        case And(l, r):
            op = Or if neg else And
            return op(_nnf(l, neg, infinite), _nnf(r, neg, infinite))
        case Or(l, r):
            op = And if neg else Or
            return op(_nnf(l, neg, infinite), _nnf(r, neg, infinite))
        case Implies(l, r):
            if neg:
                return And(_nnf(l, False, infinite), _nnf(r, True, infinite))
            return Or(_nnf(l, True, infinite), _nnf(r, False, infinite))
        case Next(g):
            inner = _nnf(g, neg, infinite)
            if infinite:
                return Next(inner)
            return WeakNext(inner) if neg else Next(inner)
        case WeakNext(g):
            inner = _nnf(g, neg, infinite)
            if infinite:
                return Next(inner)
            return Next(inner) if neg else WeakNext(inner)
        case Until(l, r):
            op = Release if neg else Until
            return op(_nnf(l, neg, infinite), _nnf(r, neg, infinite))
        case Release(l, r):
            op = Until if neg else Release
            return op(_nnf(l, neg, infinite), _nnf(r, neg, infinite))
        case Eventually(g):
            if neg:
                return Release(FALSE, _nnf(g, True, infinite))
            return Until(TRUE, _nnf(g, False, infinite))
        case Always(g):
            if neg:
                return Until(TRUE, _nnf(g, True, infinite))
            return Release(FALSE, _nnf(g, False, infinite))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Direct evaluation: the reference semantics.
# ---------------------------------------------------------------------------

def eval_ltl(formula: Formula, run, loop=None) -> bool:
    """Satisfaction at position 0.

    ``run`` is a finite word (list of letters).  When ``loop`` is given the
    word is the infinite run ``run . loop^omega``; the loop must be nonempty.
    """
    if loop is None:
        if not run:
            raise ValueError("empty run")
        return _eval_finite(formula, [frozenset(x) for x in run], 0)
    if not loop:
        raise ValueError("empty loop")
    word = [frozenset(x) for x in run] + [frozenset(x) for x in loop]
    return _eval_lasso(formula, word, len(run))[0]


def _eval_finite(f, word, i):
    last = len(word) - 1
    match f:
        case Atom(name):
            return name in word[i]
        case Const(v):
            return v
        case End():
            return i == last
        case Not(g):
            return not _eval_finite(g, word, i)
        case And(l, r):
            return _eval_finite(l, word, i) and _eval_finite(r, word, i)
        case Or(l, r):
            return _eval_finite(l, word, i) or _eval_finite(r, word, i)
        case Implies(l, r):
            return (not _eval_finite(l, word, i)) or _eval_finite(r, word, i)
        case Next(g):
            return i < last and _eval_finite(g, word, i + 1)
        case WeakNext(g):
            return i == last or _eval_finite(g, word, i + 1)
        case Until(l, r):
            for j in range(i, len(word)):
                if _eval_finite(r, word, j):
                    return True
                if not _eval_finite(l, word, j):
                    return False
            return False
        case Release(l, r):
            for j in range(i, len(word)):
                if not _eval_finite(r, word, j):
                    return False
                if _eval_finite(l, word, j):
                    return True
            return True
        case Eventually(g):
            return any(_eval_finite(g, word, j) for j in range(i, len(word)))
        case Always(g):
            return all(_eval_finite(g, word, j) for j in range(i, len(word)))
    raise TypeError(f"not a formula: {f!r}")


def _eval_lasso(f, word, loop_start):
    """Vector of truth values over the lasso positions, by fixpoint."""
    n = len(word)
    succ = list(range(1, n)) + [loop_start]

    match f:
        case Atom(name):
            return [name in letter for letter in word]
        case Const(v):
            return [v] * n
        case End():
            return [False] * n
        case Not(g):
            return [not x for x in _eval_lasso(g, word, loop_start)]
        case And(l, r):
            a = _eval_lasso(l, word, loop_start)
            b = _eval_lasso(r, word, loop_start)
            return [x and y for x, y in zip(a, b)]
        case Or(l, r):
            a = _eval_lasso(l, word, loop_start)
            b = _eval_lasso(r, word, loop_start)
            return [x or y for x, y in zip(a, b)]
        case Implies(l, r):
            a = _eval_lasso(l, word, loop_start)
            b = _eval_lasso(r, word, loop_start)
            return [(not x) or y for x, y in zip(a, b)]
        case Next(g) | WeakNext(g):
            sub = _eval_lasso(g, word, loop_start)
            return [sub[succ[i]] for i in range(n)]
        case Until(l, r):
            a = _eval_lasso(l, word, loop_start)
            b = _eval_lasso(r, word, loop_start)
            val = b[:]  # least fixpoint of  val = b | (a & val . succ)
            changed = True
            while changed:
                changed = False
                for i in range(n - 1, -1, -1):
                    new = b[i] or (a[i] and val[succ[i]])
                    if new != val[i]:
                        val[i] = new
                        changed = True
            return val
        case Release(l, r):
            a = _eval_lasso(l, word, loop_start)
            b = _eval_lasso(r, word, loop_start)
            val = b[:]  # greatest fixpoint of  val = b & (a | val . succ)
            changed = True
            while changed:
                changed = False
                for i in range(n - 1, -1, -1):
                    new = b[i] and (a[i] or val[succ[i]])
                    if new != val[i]:
                        val[i] = new
                        changed = True
            return val
        case Eventually(g):
            return _eval_lasso(Until(TRUE, g), word, loop_start)
        case Always(g):
            return _eval_lasso(Release(FALSE, g), word, loop_start)
    raise TypeError(f"not a formula: {f!r}")
