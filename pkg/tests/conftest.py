"""Shared helpers for the test suite."""

import itertools

import vcnet
from vcnet.eca import BOTTOM
from vcnet.net import PetriNet


def maximal_runs(net, m0, max_steps):
    """All maximal finite runs with at most ``max_steps`` firings, as
    (markings, transitions) pairs.  Runs that are still live at the step
    bound are dropped."""
    out = []

    def rec(markings, trans):
        en = vcnet.enabled(net, markings[-1])
        if not en:
            out.append((list(markings), list(trans)))
            return
        if len(trans) >= max_steps:
            return
        for t in en:
            m2 = vcnet.fire(net, markings[-1], t)
            markings.append(m2)
            trans.append(t)
            rec(markings, trans)
            markings.pop()
            trans.pop()

    rec([frozenset(m0)], [])
    return out


def lemma4_word_lift_check(net, m0, special, eca, max_steps):
    """Verify that every valid automaton word of at most ``max_steps``
    steps starting at the initial restriction lifts to a maximal real run.

    Words are explored modulo (state, budget usage, compatible marking
    set), which determines both the validity and the liftability of every
    extension, so the check is exact.  Returns the number of valid word
    classes seen; raises AssertionError on a counterexample.
    """
    labels = sorted(special.budgets, key=str)
    lidx = {lb: i for i, lb in enumerate(labels)}
    s = special.special

    def compatible_next(markings, target):
        out = set()
        for m in markings:
            for t in vcnet.enabled(net, m):
                m2 = vcnet.fire(net, m, t)
                if m2 & s == target:
                    out.add(m2)
        return frozenset(out)

    if frozenset(m0) & s != eca.initial:
        raise AssertionError("initial restriction mismatch")
    start = (eca.initial, tuple([0] * len(labels)), frozenset([frozenset(m0)]))
    seen = {start}
    stack = [(start, 0)]
    valid_classes = 0
    while stack:
        (state, usage, marks), depth = stack.pop()
        if eca.is_final(state):
            trig = eca.exhaustion_trigger(state)
            if all(usage[lidx[lb]] == special.budgets.get(lb, 0) for lb in trig):
                valid_classes += 1
                assert any(not vcnet.enabled(net, m) for m in marks), (
                    "valid word of length %d does not lift to a maximal run"
                    % depth
                )
        if depth >= max_steps:
            continue
        for lb, nxt in eca.successors(state):
            if lb is BOTTOM:
                usage2 = usage
            else:
                k = lidx[lb]
                if usage[k] >= special.budgets.get(lb, 0):
                    continue
                usage2 = usage[:k] + (usage[k] + 1,) + usage[k + 1:]
            marks2 = compatible_next(marks, nxt)
            key = (nxt, usage2, marks2)
            if key not in seen:
                seen.add(key)
                stack.append((key, depth + 1))
    return valid_classes


def with_padding(net, m0):
    """The same net with two extra places outside any formula, toggled by
    duplicated transitions, so corresponding runs differ on the padding
    while projecting identically to the original places."""
    places = list(net.places) + ["zpad_a", "zpad_b"]
    pre, post = {}, {}
    for t in net.transitions:
        pre[f"{t}__a"] = net.pre[t] | {"zpad_a"}
        post[f"{t}__a"] = net.post[t] | {"zpad_b"}
        pre[f"{t}__b"] = net.pre[t] | {"zpad_b"}
        post[f"{t}__b"] = net.post[t] | {"zpad_a"}
    padded = PetriNet(places, sorted(pre), pre, post, name=net.name + "_pad")
    return padded, frozenset(m0) | {"zpad_a"}


def all_letters(atoms):
    atoms = sorted(atoms)
    return [frozenset(c)
            for r in range(len(atoms) + 1)
            for c in itertools.combinations(atoms, r)]
