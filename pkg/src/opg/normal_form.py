"""Canonical normal forms: antichains of clauses over (exit, priority) outcomes.

A clause is the set of outcomes Player 1 can still force once Player 0 has
fixed a strategy; a normal form is the set of clauses Player 0 can choose
between.  ``BOT`` has no clause (Player 0 has no safe strategy) and ``TOP``
has the empty clause (a strategy that never lets the play leave).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from opg.errors import PreconditionError, ResourceGuardError
from opg.expr import (
    BOT as EBOT, TOP as ETOP, Bot, Expr, Join, Meet, Mu, Pri, Top, Var, join_all, meet_all,
)

Outcome = tuple  # (exit name, priority)
Clause = frozenset


def rank(k: int) -> int:
    return k if k % 2 == 0 else -k


def priority_leq(k: int, k2: int) -> bool:
    """``k`` is no better for Player 0 than ``k2``: ...5, 3, 1, 0, 2, 4, ..."""
    return rank(k) <= rank(k2)


def worst_priority(ks: Iterable[int]) -> int:
    return min(ks, key=rank)


@dataclass(frozen=True)
class NormalForm:
    clauses: frozenset

    def __post_init__(self):
        object.__setattr__(self, "clauses", frozenset(self.clauses))

    @property
    def is_top(self) -> bool:
        return frozenset() in self.clauses

    @property
    def is_bot(self) -> bool:
        return not self.clauses

    @property
    def exits(self) -> frozenset:
        return frozenset(o for c in self.clauses for o, _ in c)

    def sorted_clauses(self) -> list[list[tuple[str, int]]]:
        return sorted(sorted(c) for c in self.clauses)

    def to_json(self) -> dict:
        return {"clauses": [[[o, p] for o, p in c] for c in self.sorted_clauses()]}

    @classmethod
    def from_json(cls, data) -> "NormalForm":
        return canonicalize(frozenset((o, int(p)) for o, p in c) for c in data["clauses"])

    def __str__(self):
        if self.is_bot:
            return "bot"
        if self.is_top:
            return "top"
        return " | ".join(
            "{" + ", ".join(f"{o}:{p}" for o, p in c) + "}" for c in self.sorted_clauses())

    def __len__(self):
        return len(self.clauses)


BOT = NormalForm(frozenset())
TOP = NormalForm(frozenset([frozenset()]))

MAX_CLAUSES = 200_000


def _normalize_clause(c) -> dict:
    best: dict = {}
    for o, p in c:
        q = best.get(o)
        if q is None or rank(p) < rank(q):
            best[o] = p
    return best


def _dominates(y: dict, x: dict) -> bool:
    # y is at least as good for Player 0 as x
    for o, q in y.items():
        p = x.get(o)
        if p is None or rank(p) > rank(q):
            return False
    return True


def canonicalize(clauses: Iterable, max_clauses: int = MAX_CLAUSES) -> NormalForm:
    """Keep the worst priority per exit, then drop every clause that another
    clause dominates (fewer exits, each with a priority at least as good)."""
    dicts = {}
    for c in clauses:
        d = _normalize_clause(c)
        if not d:
            return TOP
        key = frozenset(d.items())
        dicts[key] = d
    if len(dicts) > max_clauses:
        raise ResourceGuardError(f"normal form exceeded {max_clauses} clauses")
    order = sorted(dicts.items(),
                   key=lambda kv: (len(kv[1]), -sum(rank(p) for p in kv[1].values())))
    kept: list = []
    for key, d in order:
        if not any(_dominates(y, d) for _, y in kept):
            kept.append((key, d))
    return NormalForm(frozenset(k for k, _ in kept))


def nf_var(x: str) -> NormalForm:
    return NormalForm(frozenset([frozenset([(x, 0)])]))


def nf_join(a: NormalForm, b: NormalForm) -> NormalForm:
    if a.is_bot or b.is_top:
        return b
    if b.is_bot or a.is_top:
        return a
    return canonicalize(a.clauses | b.clauses)


def nf_meet(a: NormalForm, b: NormalForm, max_clauses: int = MAX_CLAUSES) -> NormalForm:
    if a.is_top or b.is_bot:
        return b
    if b.is_top or a.is_bot:
        return a
    if len(a.clauses) * len(b.clauses) > 50 * max_clauses:
        raise ResourceGuardError(
            f"meet of {len(a.clauses)} x {len(b.clauses)} clauses exceeds the guard")
    return canonicalize((c | d for c in a.clauses for d in b.clauses), max_clauses)


def nf_join_all(items: Iterable[NormalForm]) -> NormalForm:
    out = BOT
    for a in items:
        out = nf_join(out, a)
    return out


def nf_meet_all(items: Iterable[NormalForm]) -> NormalForm:
    out = TOP
    for a in items:
        out = nf_meet(out, a)
    return out


def nf_priority(k: int, a: NormalForm) -> NormalForm:
    if k == 0 or a.is_top or a.is_bot:
        return a
    return canonicalize(frozenset((o, max(k, p)) for o, p in c) for c in a.clauses)


def nf_substitute(a: NormalForm, x: str, b: NormalForm,
                  max_clauses: int = MAX_CLAUSES) -> NormalForm:
    """Plug ``b`` into every occurrence of the exit ``x`` in ``a``."""
    out = []
    cache = {}
    for c in a.clauses:
        hits = [p for o, p in c if o == x]
        if not hits:
            out.append(c)
            continue
        rest = NormalForm(frozenset([frozenset((o, p) for o, p in c if o != x)]))
        part = TOP if not rest.clauses or rest.is_top else rest
        for p in hits:
            if p not in cache:
                cache[p] = nf_priority(p, b)
            part = nf_meet(part, cache[p], max_clauses)
        out.extend(part.clauses)
    return canonicalize(out, max_clauses)


def nf_equal(a: NormalForm, b: NormalForm) -> bool:
    return a.clauses == b.clauses


def nf_rename(a: NormalForm, mapping: dict) -> NormalForm:
    return canonicalize(frozenset((mapping.get(o, o), p) for o, p in c) for c in a.clauses)


def nf_to_expr(a: NormalForm) -> Expr:
    """The term ``\\/_C /\\_{(o,p) in C} <p> o`` (``<0>`` omitted)."""
    if a.is_bot:
        return EBOT
    if a.is_top:
        return ETOP
    terms = []
    for c in a.sorted_clauses():
        lits = [Var(o) if p == 0 else Pri(p, Var(o)) for o, p in c]
        terms.append(meet_all(lits))
    return join_all(terms)


def is_nf_term(t: Expr) -> bool:
    return t == nf_to_expr(evaluate_nf_term(t)) if _nf_shaped(t) else False


def _nf_shaped(t: Expr) -> bool:
    if isinstance(t, (Bot, Top)):
        return True

    def lit(u):
        return isinstance(u, Var) or (isinstance(u, Pri) and isinstance(u.body, Var))

    def clause(u):
        while isinstance(u, Meet):
            if not lit(u.left):
                return False
            u = u.right
        return lit(u)

    while isinstance(t, Join):
        if not clause(t.left):
            return False
        t = t.right
    return clause(t)


def evaluate_nf_term(t: Expr) -> NormalForm:
    """Read a term already in normal-form shape back as a NormalForm."""
    if isinstance(t, Bot):
        return BOT
    if isinstance(t, Top):
        return TOP
    clauses = []
    while isinstance(t, Join):
        clauses.append(t.left)
        t = t.right
    clauses.append(t)
    out = []
    for c in clauses:
        lits = []
        while isinstance(c, Meet):
            lits.append(c.left)
            c = c.right
        lits.append(c)
        out.append([(u.name, 0) if isinstance(u, Var) else (u.body.name, u.k) for u in lits])
    return canonicalize(frozenset(c) for c in out)


# ---------------------------------------------------------------------------
# acyclic normalisation with rule labels

def _single_literal(a: NormalForm) -> bool:
    return len(a.clauses) == 1 and len(next(iter(a.clauses))) == 1


def pri_rule(k: int, a: NormalForm) -> str:
    if k == 0:
        return "C4"
    if a.is_bot:
        return "D2"
    if a.is_top:
        return "D4"
    if _single_literal(a):
        return "C3"
    if len(a.clauses) == 1:
        return "D3"
    return "D1"


def join_rule(a: NormalForm, b: NormalForm) -> str:
    if a.is_bot or b.is_bot:
        return "B6"
    if a.is_top or b.is_top:
        return "B21"
    return "B4"


def meet_rule(a: NormalForm, b: NormalForm) -> str:
    if a.is_top or b.is_top:
        return "B9"
    if a.is_bot or b.is_bot:
        return "B23"
    if len(a.clauses) > 1 or len(b.clauses) > 1:
        return "B22"
    return "B7"


def local_step(node: Expr, kids: list[NormalForm],
               max_clauses: int = MAX_CLAUSES) -> tuple[NormalForm, str | None]:
    """One constructor of an acyclic term applied to normalised children."""
    if isinstance(node, Var):
        return nf_var(node.name), None
    if isinstance(node, Bot):
        return BOT, None
    if isinstance(node, Top):
        return TOP, None
    if isinstance(node, Pri):
        return nf_priority(node.k, kids[0]), pri_rule(node.k, kids[0])
    if isinstance(node, Join):
        return nf_join(kids[0], kids[1]), join_rule(kids[0], kids[1])
    if isinstance(node, Meet):
        return nf_meet(kids[0], kids[1], max_clauses), meet_rule(kids[0], kids[1])
    raise PreconditionError(f"no local rule for {type(node).__name__}")


def normalize_acyclic(t: Expr, trace=None) -> NormalForm:
    """Normal form of a binder-free term, recording steps into ``trace``."""
    if any(isinstance(u, Mu) for u in _walk(t)):
        raise PreconditionError("normalize_acyclic: term contains a mu binder")
    from opg.fixpoint import normalize
    return normalize(t, trace)


def _walk(t: Expr):
    seen = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if id(u) in seen:
            continue
        seen.add(id(u))
        yield u
        stack.extend(u.children())
