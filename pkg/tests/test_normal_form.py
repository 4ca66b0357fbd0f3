"""Normal forms against a truth-table reading.

A valuation gives every exit a set of priorities after which Player 0 still
wins; such sets are up-closed in the parity order, so each is a threshold.
A normal form is the monotone function "some clause has all its literals
satisfied".
"""
import itertools
import random

from hypothesis import given, strategies as st

from opg.normal_form import (
    BOT, TOP, NormalForm, canonicalize, nf_join, nf_meet, nf_priority, nf_rename,
    nf_substitute, nf_to_expr, nf_var, priority_leq, rank,
)
from opg.oracle.generate import random_nf

from conftest import EXITS, nfs

M = 6
RANKED = sorted(range(M + 1), key=rank)
# threshold i: exactly the priorities at position >= i in the parity order
THRESHOLDS = range(len(RANKED) + 1)
VALUATIONS = [dict(zip(EXITS, ts)) for ts in itertools.product(THRESHOLDS, repeat=len(EXITS))]


def holds(val, x, p):
    return RANKED.index(p) >= val[x]


def evaluate(nf, val, shift=0):
    return any(all(holds(val, x, max(p, shift)) for x, p in c) for c in nf.clauses)


def table(nf):
    return tuple(evaluate(nf, v) for v in VALUATIONS)


def test_parity_order():
    assert RANKED == [5, 3, 1, 0, 2, 4, 6]
    assert priority_leq(3, 1) and priority_leq(1, 0) and priority_leq(0, 2)
    assert not priority_leq(2, 1)


@given(nfs(), nfs())
def test_join_and_meet_are_or_and_and(a, b):
    assert table(nf_join(a, b)) == tuple(x or y for x, y in zip(table(a), table(b)))
    assert table(nf_meet(a, b)) == tuple(x and y for x, y in zip(table(a), table(b)))


@given(nfs(), nfs())
def test_canonical_forms_are_unique(a, b):
    assert (a == b) == (table(a) == table(b))


@given(nfs())
def test_canonicalize_is_idempotent_and_an_antichain(a):
    assert canonicalize(a.clauses) == a
    for c, d in itertools.permutations(a.clauses, 2):
        assert not set(c) <= set(d)


@given(nfs(), nfs(), nfs())
def test_lattice_laws(a, b, c):
    assert nf_join(a, b) == nf_join(b, a) and nf_meet(a, b) == nf_meet(b, a)
    assert nf_join(a, nf_join(b, c)) == nf_join(nf_join(a, b), c)
    assert nf_meet(a, nf_meet(b, c)) == nf_meet(nf_meet(a, b), c)
    assert nf_join(a, a) == a == nf_meet(a, a)
    assert nf_join(a, nf_meet(a, b)) == a == nf_meet(a, nf_join(a, b))
    assert nf_meet(a, nf_join(b, c)) == nf_join(nf_meet(a, b), nf_meet(a, c))
    assert nf_join(a, BOT) == a == nf_meet(a, TOP)
    assert nf_join(a, TOP) == TOP and nf_meet(a, BOT) == BOT


@given(nfs(), st.integers(0, M), st.integers(0, M))
def test_priority_action(a, k, l):
    assert nf_priority(0, a) == a
    assert nf_priority(k, nf_priority(l, a)) == nf_priority(max(k, l), a)
    assert nf_priority(k, TOP) == TOP and nf_priority(k, BOT) == BOT
    assert tuple(evaluate(a, v, k) for v in VALUATIONS) == table(nf_priority(k, a))


@given(nfs(), nfs(), st.integers(0, M))
def test_priority_distributes(a, b, k):
    assert nf_priority(k, nf_join(a, b)) == nf_join(nf_priority(k, a), nf_priority(k, b))
    assert nf_priority(k, nf_meet(a, b)) == nf_meet(nf_priority(k, a), nf_priority(k, b))


@given(nfs(), nfs(exits=["x2", "x3"]))
def test_substitution_semantics(a, b):
    sub = nf_substitute(a, "x1", b)
    for v in VALUATIONS:
        # x1 holds after priority p iff b holds with every priority raised to p
        ok_after = {p for p in range(M + 1) if evaluate(b, v, p)}
        inner = dict(v)
        inner["x1"] = min((RANKED.index(p) for p in ok_after
                           if all(q in ok_after for q in RANKED[RANKED.index(p):])),
                          default=len(RANKED))
        assert evaluate(sub, v) == evaluate(a, inner)


def test_small_cases():
    x1, x2 = nf_var("x1"), nf_var("x2")
    assert str(nf_join(x1, nf_meet(x1, x2))) == "{x1:0}"
    assert str(nf_meet(nf_priority(3, x1), nf_priority(1, x1))) == "{x1:3}"
    assert str(nf_join(nf_priority(3, x1), nf_priority(1, x1))) == "{x1:1}"
    assert TOP.to_json() == {"clauses": [[]]} and BOT.to_json() == {"clauses": []}


@given(nfs())
def test_json_and_term_round_trip(a):
    from opg.fixpoint import normalize
    assert NormalForm.from_json(a.to_json()) == a
    assert normalize(nf_to_expr(a)) == a


def test_rename_merges_literals():
    a = canonicalize([frozenset([("x1", 2), ("x2", 1)])])
    assert nf_rename(a, {"x2": "x1"}) == canonicalize([frozenset([("x1", 1)])])


def test_random_nf_is_seeded():
    assert random_nf(random.Random(4), EXITS) == random_nf(random.Random(4), EXITS)
