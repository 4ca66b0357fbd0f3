"""Fixpoint elimination and the full normalisation pipeline.

``mu x . t`` is the game obtained by feeding exit ``x`` of ``t`` back into its
entry.  Once ``t`` is in normal form every clause holds at most one pair
``(x, p)``, so a play alternates between Player 0 picking a clause and
Player 1 either leaving through one of its other outcomes or looping back
with transit priority ``p``.  The only memory that matters is the largest
priority seen so far, which is what the elimination below tracks.
"""
from __future__ import annotations

import itertools
import json
import sys
from dataclasses import dataclass
from functools import lru_cache

from opg.config import DEFAULT_CONFIG, RunConfig
from opg.errors import ParseError, PreconditionError, ResourceGuardError
from opg.expr import (
    BOT as EBOT, TOP as ETOP, Expr, ExprSystem, Mu, Pri, Var, exit_var, game_to_exprs,
    join_all, meet_all, parse_expr, position_var, print_expr, substitute,
)
from opg.game import EXIT, PLAYER0, PLAYER1, OpenParityGame, reachable_positions, validate
from opg.normal_form import (
    TOP, NormalForm, canonicalize, local_step, nf_meet,
    nf_priority, nf_rename, nf_substitute, nf_to_expr, nf_var, rank,
)
from opg.oracle.zielonka import zielonka_regions
from opg.trace import ReplayResult, RewriteStep, RewriteTrace, replay, replay_system

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def split_loops(x: str, body: NormalForm):
    """Clauses without ``x``, and ``(rest, p)`` for each clause holding ``(x, p)``."""
    plain, loops = [], []
    for c in body.clauses:
        p = None
        for o, q in c:
            if o == x:
                p = q
        if p is None:
            plain.append(c)
        else:
            loops.append((frozenset(pr for pr in c if pr[0] != x), p))
    return plain, loops


def eliminate_mu(x: str, body: NormalForm,
                 config: RunConfig = DEFAULT_CONFIG) -> tuple[NormalForm, str]:
    """Normal form of ``mu x . body`` and the rule that justifies it."""
    plain, loops = split_loops(x, body)
    if not loops:
        return body, "F2"
    if len(loops) == 1:
        # x0 \/ (x1 /\ <p> x): looping is harmless for an even p and fatal
        # for an odd one
        rest, p = loops[0]
        extra = [rest] if p % 2 == 0 else []
        return canonicalize(plain + extra, config.max_clauses), "E"

    @lru_cache(maxsize=None)
    def value(m: int) -> NormalForm:
        # Player 0 to pick a clause, largest priority so far m
        out = [nf_priority(m, NormalForm(frozenset([c]))) for c in plain]
        for rest, p in loops:
            here = nf_priority(m, NormalForm(frozenset([rest])) if rest else TOP)
            if p <= m:
                if p % 2 == 0:
                    out.append(here)
            else:
                out.append(nf_meet(here, value(p), config.max_clauses))
        return canonicalize((c for a in out for c in a.clauses), config.max_clauses)

    return value(0), "LOOP-SOLVE"


# ---------------------------------------------------------------------------
# the arena route: an independent, much slower elimination used as an oracle

@dataclass(frozen=True)
class Arena:
    """Accumulated-max expansion of one loop, for a fixed target clause."""
    owner: dict
    priority: dict
    succ: dict
    start: object


def build_arena(x: str, body: NormalForm, target: dict,
                config: RunConfig = DEFAULT_CONFIG) -> Arena:
    """States ``("start", m)`` for Player 0 and ``("clause", i, m)`` for
    Player 1; looping passes through a ``("transit", i, m)`` state carrying the
    loop priority.  Leaving through ``(o, k)`` is a win for Player 0 iff the
    target clause has ``(o, k')`` with ``k'`` no better than ``k``."""
    clauses = sorted(sorted(c) for c in body.clauses)
    owner, prio, succ = {}, {}, {}
    win, lose = ("win",), ("lose",)
    for t, o_, k in ((win, PLAYER0, 0), (lose, PLAYER0, 1)):
        owner[t], prio[t], succ[t] = o_, k, [t]
    todo = [0]
    seen = {0}
    while todo:
        m = todo.pop()
        s = ("start", m)
        owner[s], prio[s], succ[s] = PLAYER0, 0, []
        for i, c in enumerate(clauses):
            cs = ("clause", i, m)
            owner[cs], prio[cs], succ[cs] = PLAYER1, 0, []
            succ[s].append(cs)
            for o, p in c:
                k = max(m, p)
                if o == x:
                    tr = ("transit", i, m)
                    owner[tr], prio[tr], succ[tr] = PLAYER1, p, [("start", k)]
                    succ[cs].append(tr)
                    if k not in seen:
                        seen.add(k)
                        todo.append(k)
                else:
                    ok = o in target and rank(target[o]) <= rank(k)
                    succ[cs].append(win if ok else lose)
        if len(owner) > config.arena_states:
            raise ResourceGuardError(f"arena exceeded {config.arena_states} states")
    return Arena(owner, prio, succ, ("start", 0))


def arena_winnable(x: str, body: NormalForm, target: dict,
                   config: RunConfig = DEFAULT_CONFIG) -> bool:
    a = build_arena(x, body, target, config)
    w0, _ = zielonka_regions(a.owner, a.priority, a.succ)
    return a.start in w0


def _covers(good: dict, other: dict) -> bool:
    # good is at least as good a clause for Player 0 as other
    for o, q in good.items():
        p = other.get(o)
        if p is None or rank(p) > rank(q):
            return False
    return True


def eliminate_mu_by_arena(x: str, body: NormalForm,
                          config: RunConfig = DEFAULT_CONFIG) -> NormalForm:
    """Enumerate candidate clauses over the reachable outcomes, keep those
    Player 0 can enforce in the arena, and canonicalise."""
    if body.is_top:
        return TOP
    plain, loops = split_loops(x, body)
    if not loops:
        return body
    loop_ps = sorted({p for _, p in loops})
    ms = {0}
    for p in loop_ps:
        ms |= {max(m, p) for m in ms}
    options: dict = {}
    for c in body.clauses:
        for o, p in c:
            if o != x:
                options.setdefault(o, set()).update(max(m, p) for m in ms)
    universe = sum(len(v) for v in options.values())
    if universe > config.antichain_universe:
        raise ResourceGuardError(
            f"outcome universe of {universe} exceeds the guard {config.antichain_universe}")
    exits = sorted(options)
    # best priorities first, so that dominated candidates can be skipped
    choices = [[None] + sorted(options[o], key=rank, reverse=True) for o in exits]
    winners: list[dict] = []
    losers: list[dict] = []
    for combo in itertools.product(*choices):
        cand = {o: k for o, k in zip(exits, combo) if k is not None}
        if any(_covers(w, cand) for w in winners):
            continue
        if any(_covers(cand, l) for l in losers):
            continue
        if arena_winnable(x, body, cand, config):
            winners.append(cand)
        else:
            losers.append(cand)
    return canonicalize(frozenset(w.items()) for w in winners)


# ---------------------------------------------------------------------------
# normalising terms

def normalize(t: Expr, trace: RewriteTrace | None = None,
              config: RunConfig = DEFAULT_CONFIG, target: str | None = None) -> NormalForm:
    """Normal form of ``t``; free variables are the exits.

    Subterms are visited bottom-up and left to right, each distinct subterm
    once.  With ``trace`` given, one step is recorded per node whose
    children-normalised form is not already a normal-form term.
    """
    memo: dict = {}
    fired: set = set()

    def go(u: Expr, path: tuple):
        hit = memo.get(u)
        if hit is not None:
            return hit
        kids = [go(c, path + (j,)) for j, c in enumerate(u.children())]
        if isinstance(u, Mu):
            res, rule = eliminate_mu(u.var, kids[0][0], config)
        else:
            res, rule = local_step(u, [k[0] for k in kids], config.max_clauses)
        term = None
        if trace is not None:
            redex = u.with_children([k[1] for k in kids]) if kids else u
            term = nf_to_expr(res)
            if term != redex and redex not in fired:
                fired.add(redex)
                trace.append(RewriteStep(rule, redex, term, path, target))
        memo[u] = (res, term)
        return memo[u]

    return go(t, ())[0]


def normalize_system(system: ExprSystem, traces: list | None = None,
                     config: RunConfig = DEFAULT_CONFIG) -> list[NormalForm]:
    out = []
    for t in system.components:
        tr = None
        if traces is not None:
            tr = RewriteTrace()
            traces.append(tr)
        out.append(normalize(t, tr, config))
    return out


# ---------------------------------------------------------------------------
# equation systems (Gaussian elimination of mutually recursive loops)

def solve_system(equations: dict[str, NormalForm], config: RunConfig = DEFAULT_CONFIG,
                 trace: RewriteTrace | None = None) -> dict[str, NormalForm]:
    """Solve ``y = f_y(...)`` for every key ``y``; the result mentions only
    variables that are not keys.

    Each round closes one variable with ``eliminate_mu`` and substitutes the
    solution into every equation (open or already solved) that mentions it,
    least-referenced variable first.
    """
    eqs = dict(equations)
    open_vars = set(eqs)
    users: dict = {y: set() for y in eqs}
    for z, nf in eqs.items():
        for o in nf.exits:
            if o in users:
                users[o].add(z)
    solved = {}
    while open_vars:
        y = min(open_vars, key=lambda v: (len(users[v]), v))
        open_vars.discard(y)
        sol, rule = eliminate_mu(y, eqs[y], config)
        if trace is not None:
            trace.append(RewriteStep(rule, Mu(y, nf_to_expr(eqs[y])), nf_to_expr(sol),
                                     (), y))
        solved[y] = sol
        del eqs[y]
        for z in sorted(users.pop(y)):
            table = eqs if z in eqs else solved
            if z == y or y not in table[z].exits:
                continue
            new = nf_substitute(table[z], y, sol, config.max_clauses)
            if trace is not None:
                trace.append(RewriteStep(
                    "SUBST", substitute(nf_to_expr(table[z]), y, nf_to_expr(sol)),
                    nf_to_expr(new), (), z, y))
            table[z] = new
            for o in sol.exits:
                if o in users and o != z:
                    users[o].add(z)
    return solved


def game_equation_terms(game: OpenParityGame, live=None) -> dict[str, Expr]:
    """``y_v = <k>(s1 \\/ ...)`` (or ``/\\`` for Player 1) per position."""
    eqs = {}
    for p in game.positions:
        if live is not None and p.id not in live:
            continue
        kids = [Var(exit_var(t[1]) if t[0] == EXIT else position_var(t[1]))
                for t in game.successors[p.id]]
        body = join_all(kids, EBOT) if p.owner == PLAYER0 else meet_all(kids, ETOP)
        eqs[position_var(p.id)] = Pri(p.priority, body)
    return eqs


@dataclass
class Derivation:
    """Normal forms of a game's entries together with the rewriting behind them.

    ``method="expr"``: one term and one trace per entry.  ``method="system"``:
    one equation per reachable position and a single trace for the system.
    """
    method: str
    nfs: list
    initial: dict
    traces: list
    entry_vars: dict

    def replay(self) -> ReplayResult:
        if self.method == "expr":
            for k, t in self.initial.items():
                res = replay(t, self.traces[k - 1], nf_to_expr(self.nfs[k - 1]))
                if not res.ok:
                    return ReplayResult(False, res.final, f"entry {k}: {res.message}")
            return ReplayResult(True, None)
        expected = {y: nf_to_expr(self.nfs[k - 1]) for k, y in self.entry_vars.items()}
        return replay_system(self.initial, self.traces[0], expected)

    def to_jsonl(self) -> str:
        """A header line, the steps, and a closing line with the normal forms."""
        head = {"method": self.method}
        if self.method == "expr":
            head["terms"] = {str(k): print_expr(t) for k, t in self.initial.items()}
        else:
            head["equations"] = {y: print_expr(t) for y, t in sorted(self.initial.items())}
            head["entries"] = {str(k): y for k, y in self.entry_vars.items()}
        lines = [json.dumps(head, sort_keys=True) + "\n"]
        for i, tr in enumerate(self.traces, start=1):
            for st in tr:
                d = st.to_json()
                if self.method == "expr":
                    d["entry"] = i
                lines.append(json.dumps(d, sort_keys=True) + "\n")
        lines.append(json.dumps({"nfs": [nf.to_json() for nf in self.nfs]}, sort_keys=True) + "\n")
        return "".join(lines)

    @classmethod
    def from_jsonl(cls, text: str) -> "Derivation":
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        if len(rows) < 2 or "method" not in rows[0] or "nfs" not in rows[-1]:
            raise ParseError("not a derivation trace")
        head, steps, tail = rows[0], rows[1:-1], rows[-1]
        nfs = [NormalForm.from_json(d) for d in tail["nfs"]]
        if head["method"] == "expr":
            initial = {int(k): parse_expr(t) for k, t in head["terms"].items()}
            traces = [RewriteTrace() for _ in initial]
            for d in steps:
                traces[d["entry"] - 1].append(RewriteStep.from_json(d))
            return cls("expr", nfs, initial, traces, {})
        initial = {y: parse_expr(t) for y, t in head["equations"].items()}
        tr = RewriteTrace([RewriteStep.from_json(d) for d in steps])
        entry_vars = {int(k): y for k, y in head["entries"].items()}
        return cls("system", nfs, initial, [tr], entry_vars)


def derive_game(game: OpenParityGame, config: RunConfig = DEFAULT_CONFIG,
                method: str = "system", trace: bool = True) -> Derivation:
    problems = validate(game)
    if problems:
        raise PreconditionError("; ".join(problems))
    if method == "expr":
        system = game_to_exprs(game, config)
        traces = [] if trace else None
        nfs = normalize_system(system, traces, config)
        initial = {k: t for k, t in enumerate(system.components, start=1)}
        return Derivation(method, nfs, initial, traces or [], {})
    if method != "system":
        raise ValueError(f"unknown method {method!r}")
    live = reachable_positions(game, game.entry_targets.values())
    terms = game_equation_terms(game, live)
    size = sum(t.tree_size for t in terms.values())
    if size > config.term_nodes:
        raise ResourceGuardError(f"equation system has {size} nodes, guard is {config.term_nodes}")
    tr = RewriteTrace() if trace else None
    eqs = {y: normalize(t, tr, config, y) for y, t in terms.items()}
    sol = solve_system(eqs, config, tr)
    nfs, entry_vars = [], {}
    for k in range(1, game.n_entries + 1):
        t = game.entry_targets[k]
        if t[0] == EXIT:
            nfs.append(nf_var(exit_var(t[1])))
        else:
            entry_vars[k] = position_var(t[1])
            nfs.append(sol[entry_vars[k]])
    return Derivation(method, nfs, terms, [tr] if tr is not None else [], entry_vars)


def normalize_game(game: OpenParityGame, config: RunConfig = DEFAULT_CONFIG,
                   method: str = "system") -> list[NormalForm]:
    """Normal form at every entry.

    ``method="expr"`` unfolds the game into fixpoint terms and normalises
    them; ``method="system"`` (the default, polynomial in the number of
    positions for the unfolding step) solves one equation per position.
    """
    return derive_game(game, config, method, trace=False).nfs


def solve_closed(game: OpenParityGame, config: RunConfig = DEFAULT_CONFIG,
                 method: str = "system") -> dict[int, int]:
    """Winner per entry: Player 0 exactly where the normal form is ``TOP``."""
    if game.n_exits:
        raise PreconditionError("solve_closed needs a game without exits")
    return winners_from_nfs(normalize_game(game, config, method))


def winners_from_nfs(nfs) -> dict[int, int]:
    out = {}
    for k, nf in enumerate(nfs, start=1):
        if not (nf.is_top or nf.is_bot):  # pragma: no cover - determinacy
            raise AssertionError(f"closed entry {k} has non-constant normal form {nf}")
        out[k] = PLAYER0 if nf.is_top else PLAYER1
    return out


# ---------------------------------------------------------------------------
# composing normal forms directly

def nf_compose(a: list[NormalForm], a_dom, a_cod, b: list[NormalForm], b_cod,
               config: RunConfig = DEFAULT_CONFIG) -> list[NormalForm]:
    """Entry normal forms of ``A ; B`` from those of ``A : a_dom -> a_cod``
    and ``B : a_cod -> b_cod``, feeding shared wires through ``solve_system``."""
    m, n, o = a_dom, a_cod, b_cod
    ren_a = {}
    for i in range(1, n[0] + 1):
        ren_a[exit_var(i)] = f"#f{i}"
    for j in range(1, m[1] + 1):
        ren_a[exit_var(n[0] + j)] = exit_var(o[0] + j)
    ren_b = {}
    for i in range(1, o[0] + 1):
        ren_b[exit_var(i)] = exit_var(i)
    for j in range(1, n[1] + 1):
        ren_b[exit_var(o[0] + j)] = f"#b{j}"
    ra = [nf_rename(x, ren_a) for x in a]
    rb = [nf_rename(x, ren_b) for x in b]
    eqs = {}
    for i in range(1, n[0] + 1):
        eqs[f"#f{i}"] = rb[i - 1]
    for j in range(1, n[1] + 1):
        eqs[f"#b{j}"] = ra[m[0] + j - 1]
    sol = solve_system(eqs, config)

    def close(nf):
        for y in sorted(nf.exits):
            if y in sol:
                nf = nf_substitute(nf, y, sol[y])
        return nf

    out = [close(ra[k]) for k in range(m[0])]
    out += [close(rb[n[0] + j]) for j in range(o[1])]
    return out


def nf_tensor(a: list[NormalForm], a_dom, a_cod, b: list[NormalForm], b_dom, b_cod):
    """Entry normal forms of ``A (x) B`` with the grouped index shift."""
    out_fwd = a_cod[0] + b_cod[0]
    ren_a = {exit_var(k): exit_var(k if k <= a_cod[0] else out_fwd + (k - a_cod[0]))
             for k in range(1, a_cod[0] + a_dom[1] + 1)}
    ren_b = {exit_var(k): exit_var(a_cod[0] + k if k <= b_cod[0]
                                   else out_fwd + a_dom[1] + (k - b_cod[0]))
             for k in range(1, b_cod[0] + b_dom[1] + 1)}
    ra = [nf_rename(x, ren_a) for x in a]
    rb = [nf_rename(x, ren_b) for x in b]
    return (ra[:a_dom[0]] + rb[:b_dom[0]] + ra[a_dom[0]:] + rb[b_dom[0]:])
