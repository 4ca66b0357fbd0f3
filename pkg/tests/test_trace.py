import random
from dataclasses import replace

import pytest
from hypothesis import given

from opg.expr import parse_expr
from opg.fixpoint import Derivation, derive_game, normalize
from opg.normal_form import nf_to_expr
from opg.oracle.generate import random_closed_game, random_game, random_guarded_body
from opg.trace import ELIMINATION_RULES, RULES, RewriteStep, RewriteTrace, replay

from conftest import exprs, seeds


def traced(text):
    t = parse_expr(text)
    tr = RewriteTrace()
    return t, tr, normalize(t, tr)


def test_rules_of_a_small_derivation():
    _, tr, nf = traced("<2> (x /\\ <1> y)")
    assert tr.rules() == ["D3"]
    assert str(nf) == "{x:2, y:2}"
    _, tr, _ = traced("mu y . x0 \\/ (x1 /\\ <2> y)")
    assert tr.rules() == ["E"]


@given(exprs())
def test_every_trace_replays(t):
    tr = RewriteTrace()
    nf = normalize(t, tr)
    assert replay(t, tr, nf_to_expr(nf)).ok
    assert all(s.rule in RULES for s in tr)


@given(seeds)
def test_guarded_terms_replay(s):
    t = parse_expr(f"mu z . {random_guarded_body(random.Random(s), 3, 'z', ['x1', 'x2'])}")
    tr = RewriteTrace()
    nf = normalize(t, tr)
    assert replay(t, tr, nf_to_expr(nf)).ok
    assert any(st.rule in ELIMINATION_RULES for st in tr)


def test_tampered_traces_fail():
    t, tr, nf = traced("mu y . x0 \\/ (x1 /\\ <3> (x2 \\/ y))")
    good = replay(t, tr, nf_to_expr(nf))
    assert good.ok
    # wrong contractum
    bad = RewriteTrace([replace(tr.steps[-1], contractum=parse_expr("x0 \\/ x1"))])
    assert not replay(t, RewriteTrace(tr.steps[:-1] + bad.steps), nf_to_expr(nf)).ok
    # dropped step
    assert not replay(t, RewriteTrace(tr.steps[1:]), nf_to_expr(nf)).ok
    # wrong path
    moved = RewriteTrace(tr.steps[:-1] + [replace(tr.steps[-1], path=(0,))])
    assert not replay(t, moved, nf_to_expr(nf)).ok
    # an elimination that leaves the bound variable free
    t2, tr2, nf2 = traced("mu y . <1> y")
    leak = RewriteTrace([replace(tr2.steps[0], contractum=parse_expr("y"))])
    assert not replay(t2, leak, None).ok


def test_unknown_rule_rejected():
    with pytest.raises(ValueError):
        RewriteTrace().append(RewriteStep("Z9", parse_expr("x"), parse_expr("x")))


def test_jsonl_round_trip():
    t, tr, nf = traced("mu y . x0 \\/ (<1> y /\\ x1)")
    back = RewriteTrace.from_jsonl(tr.to_jsonl())
    assert back.steps == tr.steps
    assert replay(t, back, nf_to_expr(nf)).ok


@given(seeds)
def test_system_traces_replay_and_serialise(s):
    g = random_closed_game(random.Random(s).randint(1, 10), 6, 0.4, seed=s)
    d = derive_game(g)
    assert d.replay().ok
    assert Derivation.from_jsonl(d.to_jsonl()).replay().ok


def test_tampered_system_trace_fails():
    g = random_game(6, 6, 0.5, entries=2, exits=2, seed=5)
    d = derive_game(g)
    steps = d.traces[0].steps
    i = next(i for i, st in enumerate(steps) if st.rule == "SUBST")
    broken = steps[:i] + [replace(steps[i], contractum=parse_expr("top"))] + steps[i + 1:]
    d2 = Derivation(d.method, d.nfs, d.initial, [RewriteTrace(broken)], d.entry_vars)
    assert not d2.replay().ok


def test_expr_route_derivation():
    g = random_game(5, 6, 0.4, entries=2, exits=2, seed=2)
    d = derive_game(g, method="expr")
    assert d.replay().ok
    assert Derivation.from_jsonl(d.to_jsonl()).nfs == d.nfs
