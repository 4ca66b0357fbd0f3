"""Symbolic game expressions with fixpoints, and translation to and from games.

Grammar (ASCII, with Unicode alternatives)::

    t ::= x | <k> t | t \\/ t | t /\\ t | bot | top | mu x . t

``/\\`` binds tighter than ``\\/``, both associate to the right, ``<k>`` is a
prefix that binds tightest, and the body of ``mu x .`` extends as far to the
right as possible.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, fields
from functools import cached_property

from opg.config import DEFAULT_CONFIG, RunConfig
from opg.errors import ParseError, PreconditionError, ResourceGuardError
from opg.game import (
    EXIT, PLAYER0, PLAYER1, POS, OpenParityGame, Position, entry, exit_, pos, validate,
)


class Expr:
    """Base class of expression nodes.

    Nodes are immutable; the structural hash is cached so that shared
    subterms are cheap to compare and to use as memo keys.
    """

    def _key(self):
        return tuple(getattr(self, f.name) for f in fields(self))

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def children(self) -> tuple["Expr", ...]:
        return ()

    def with_children(self, kids) -> "Expr":
        return self

    @cached_property
    def free_vars(self) -> frozenset[str]:
        out = frozenset()
        for c in self.children():
            out |= c.free_vars
        return out

    @cached_property
    def tree_size(self) -> int:
        return 1 + sum(c.tree_size for c in self.children())

    def __str__(self):
        return print_expr(self)


@dataclass(frozen=True, eq=False)
class Var(Expr):
    name: str

    @cached_property
    def free_vars(self):
        return frozenset((self.name,))


@dataclass(frozen=True, eq=False)
class Pri(Expr):
    k: int
    body: Expr

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return Pri(self.k, kids[0])


@dataclass(frozen=True, eq=False)
class Join(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Join(kids[0], kids[1])


@dataclass(frozen=True, eq=False)
class Meet(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Meet(kids[0], kids[1])


@dataclass(frozen=True, eq=False)
class Bot(Expr):
    pass


@dataclass(frozen=True, eq=False)
class Top(Expr):
    pass


@dataclass(frozen=True, eq=False)
class Mu(Expr):
    var: str
    body: Expr

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return Mu(self.var, kids[0])

    @cached_property
    def free_vars(self):
        return self.body.free_vars - {self.var}


BOT = Bot()
TOP = Top()


def join_all(terms, unit: Expr = BOT) -> Expr:
    terms = list(terms)
    if not terms:
        return unit
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Join(t, out)
    return out


def meet_all(terms, unit: Expr = TOP) -> Expr:
    terms = list(terms)
    if not terms:
        return unit
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Meet(t, out)
    return out


def has_mu(t: Expr) -> bool:
    seen = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Mu):
            return True
        if id(u) in seen:
            continue
        seen.add(id(u))
        stack.extend(u.children())
    return False


def dag_size(t: Expr) -> int:
    """Number of distinct node objects reachable from ``t``."""
    seen = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if id(u) in seen:
            continue
        seen.add(id(u))
        stack.extend(u.children())
    return len(seen)


# ---------------------------------------------------------------------------
# printing and parsing

def print_expr(t: Expr) -> str:
    return _pp(t, 0)


def _pp(t: Expr, ctx: int) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Bot):
        return "bot"
    if isinstance(t, Top):
        return "top"
    if isinstance(t, Pri):
        return f"<{t.k}> " + _pp(t.body, 3)
    if isinstance(t, Meet):
        s = _pp(t.left, 3) + " /\\ " + _pp(t.right, 2)
        return f"({s})" if ctx > 2 else s
    if isinstance(t, Join):
        s = _pp(t.left, 2) + " \\/ " + _pp(t.right, 1)
        return f"({s})" if ctx > 1 else s
    if isinstance(t, Mu):
        s = f"mu {t.var} . " + _pp(t.body, 0)
        return f"({s})" if ctx > 0 else s
    raise TypeError(f"not an expression: {t!r}")


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<join>\\/|∨)
  | (?P<meet>/\\|∧)
  | (?P<pri><\s*\d+\s*>|⟨\s*\d+\s*⟩)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<dot>\.)
  | (?P<bot>⊥)
  | (?P<top>⊤)
  | (?P<mu>μ)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

_KEYWORDS = {"bot", "top", "mu"}


def _tokenize(text: str):
    out = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", pos=i)
        kind = m.lastgroup
        val = m.group()
        if kind == "ident" and val in _KEYWORDS:
            kind = val
        if kind == "pri":
            val = int(val.strip("<>⟨⟩ \t"))
        if kind != "ws":
            out.append((kind, val, i))
        i = m.end()
    out.append(("eof", None, len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self, kind):
        k, v, p = self.toks[self.i]
        if k != kind:
            raise ParseError(f"expected {kind}, found {k if v is None else repr(v)}", pos=p)
        self.i += 1
        return v

    def expr(self):
        if self.peek() == "mu":
            return self.mu()
        return self.join()

    def mu(self):
        self.take("mu")
        x = self.take("ident")
        self.take("dot")
        return Mu(x, self.expr())

    def join(self):
        left = self.meet()
        if self.peek() == "join":
            self.take("join")
            return Join(left, self.mu() if self.peek() == "mu" else self.join())
        return left

    def meet(self):
        left = self.prefix()
        if self.peek() == "meet":
            self.take("meet")
            return Meet(left, self.mu() if self.peek() == "mu" else self.meet())
        return left

    def prefix(self):
        if self.peek() == "pri":
            k = self.take("pri")
            return Pri(k, self.mu() if self.peek() == "mu" else self.prefix())
        return self.atom()

    def atom(self):
        kind, val, p = self.toks[self.i]
        if kind == "ident":
            self.i += 1
            return Var(val)
        if kind == "bot":
            self.i += 1
            return BOT
        if kind == "top":
            self.i += 1
            return TOP
        if kind == "lpar":
            self.i += 1
            t = self.expr()
            self.take("rpar")
            return t
        raise ParseError(f"unexpected {kind if val is None else repr(val)}", pos=p)


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    t = p.expr()
    if p.peek() != "eof":
        _, v, at = p.toks[p.i]
        raise ParseError(f"trailing input {v!r}", pos=at)
    return t


# ---------------------------------------------------------------------------
# binding

def alpha_equal(s: Expr, t: Expr) -> bool:
    def go(a, b, env_a, env_b, depth):
        if type(a) is not type(b):
            return False
        if isinstance(a, Var):
            da, db = env_a.get(a.name), env_b.get(b.name)
            if da is None and db is None:
                return a.name == b.name
            return da == db
        if isinstance(a, Pri):
            return a.k == b.k and go(a.body, b.body, env_a, env_b, depth)
        if isinstance(a, (Join, Meet)):
            return (go(a.left, b.left, env_a, env_b, depth)
                    and go(a.right, b.right, env_a, env_b, depth))
        if isinstance(a, Mu):
            return go(a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1)
        return True

    return go(s, t, {}, {}, 0)


def fresh_name(base: str, avoid) -> str:
    stem = base.rstrip("0123456789_'") or "v"
    for n in itertools.count(1):
        cand = f"{stem}_{n}"
        if cand not in avoid:
            return cand


def substitute(t: Expr, x: str, u: Expr) -> Expr:
    """Capture-avoiding substitution ``t[u/x]``."""
    memo = {}

    def go(s: Expr) -> Expr:
        if x not in s.free_vars:
            return s
        key = id(s)
        if key in memo:
            return memo[key][1]
        if isinstance(s, Var):
            out = u
        elif isinstance(s, Mu):
            if s.var in u.free_vars:
                y = fresh_name(s.var, u.free_vars | s.body.free_vars | {x})
                body = substitute(s.body, s.var, Var(y))
                out = Mu(y, go(body))
            else:
                out = Mu(s.var, go(s.body))
        else:
            out = s.with_children([go(c) for c in s.children()])
        memo[key] = (s, out)
        return out

    return go(t)


def rename_free(t: Expr, mapping: dict[str, str]) -> Expr:
    for old, new in mapping.items():
        if old != new:
            t = substitute(t, old, Var(new))
    return t


# ---------------------------------------------------------------------------
# games <-> expressions

def exit_var(k: int) -> str:
    return f"x{k}"


def position_var(v: int) -> str:
    return f"y{v}"


@dataclass(frozen=True)
class ExprSystem:
    """One expression per entry over a shared list of exit variables."""
    components: tuple[Expr, ...]
    variables: tuple[str, ...]
    max_priority: int = DEFAULT_CONFIG.max_priority

    def __post_init__(self):
        allowed = set(self.variables)
        for i, c in enumerate(self.components):
            extra = c.free_vars - allowed
            if extra:
                raise PreconditionError(
                    f"component {i + 1} has undeclared free variables {sorted(extra)}")


def game_to_exprs(game: OpenParityGame, config: RunConfig = DEFAULT_CONFIG) -> ExprSystem:
    """Unfold each entry of ``game`` into a fixpoint expression.

    Depth-first from the entry: player-0 positions become ``<k>(t1 \\/ ...)``,
    player-1 positions ``<k>(t1 /\\ ...)``, exits become ``x1, x2, ...`` and a
    back edge to a position on the current path becomes that position's
    bound variable.  Positions reached along several paths are duplicated;
    identical unfoldings are shared as one node.
    """
    problems = validate(game)
    if problems:
        raise PreconditionError("; ".join(problems))
    succ = game.successors
    pmap = game.position_map
    memo: dict = {}

    def relevant(v, path):
        # path positions that the unfolding from v can actually hit
        hit = set()
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for t in succ[u]:
                if t[0] != POS:
                    continue
                w = t[1]
                if w in path:
                    hit.add(w)
                elif w not in seen:
                    seen.add(w)
                    stack.append(w)
        return frozenset(hit)

    def build(v, path):
        key = (v, relevant(v, path))
        if key in memo:
            return memo[key]
        inner = path | {v}
        kids = []
        for t in succ[v]:
            if t[0] == EXIT:
                kids.append(Var(exit_var(t[1])))
            elif t[1] in inner:
                kids.append(Var(position_var(t[1])))
            else:
                kids.append(build(t[1], inner))
        p = pmap[v]
        if p.owner == PLAYER0:
            body = join_all(kids, BOT)
        else:
            body = meet_all(kids, TOP)
        term = Pri(p.priority, body)
        if position_var(v) in term.free_vars:
            term = Mu(position_var(v), term)
        memo[key] = term
        if len(memo) > config.term_nodes:
            raise ResourceGuardError(
                f"unfolding exceeded {config.term_nodes} shared subterms")
        return term

    comps = []
    for k in range(1, game.n_entries + 1):
        t = game.entry_targets[k]
        if t[0] == EXIT:
            comps.append(Var(exit_var(t[1])))
        else:
            comps.append(build(t[1], frozenset()))
    variables = tuple(exit_var(k) for k in range(1, game.n_exits + 1))
    return ExprSystem(tuple(comps), variables, game.max_priority)


def expr_to_game(system: ExprSystem) -> OpenParityGame:
    """Build a game with one entry per component and one exit per variable.

    Every free variable gets one merge position (priority 0) wired to its
    exit; a bound variable points at the first position of its binder's body.
    """
    positions: list[Position] = []
    edges: list = []
    placeholders: dict[int, object] = {}
    counter = itertools.count()

    def new_pos(owner, priority):
        i = next(counter)
        positions.append(Position(i, owner, priority))
        return pos(i)

    merges = {}
    for k, x in enumerate(system.variables, start=1):
        m = new_pos(PLAYER1, 0)
        merges[x] = m
        edges.append((m, exit_(k)))

    max_p = system.max_priority

    def compile_(t: Expr, env: dict):
        nonlocal max_p
        if isinstance(t, Var):
            if t.name in env:
                return env[t.name]
            return merges[t.name]
        if isinstance(t, Bot):
            return new_pos(PLAYER0, 0)
        if isinstance(t, Top):
            return new_pos(PLAYER1, 0)
        if isinstance(t, Pri):
            max_p = max(max_p, t.k)
            v = new_pos(PLAYER1, t.k)
            edges.append((v, compile_(t.body, env)))
            return v
        if isinstance(t, (Join, Meet)):
            v = new_pos(PLAYER0 if isinstance(t, Join) else PLAYER1, 0)
            edges.append((v, compile_(t.left, env)))
            edges.append((v, compile_(t.right, env)))
            return v
        if isinstance(t, Mu):
            ph = ("ph", len(placeholders))
            placeholders[ph[1]] = None
            root = compile_(t.body, {**env, t.var: ph})
            placeholders[ph[1]] = root
            return root
        raise TypeError(t)

    roots = [compile_(c, {}) for c in system.components]

    loops = {}

    def resolve(ep):
        seen = []
        while ep[0] == "ph":
            if ep in seen:
                # mu x. x (possibly through several binders): a priority-0 loop
                if seen[0] not in loops:
                    v = new_pos(PLAYER1, 0)
                    edges.append((v, v))
                    for s in seen:
                        loops[s] = v
                return loops[seen[0]]
            if ep in loops:
                return loops[ep]
            seen.append(ep)
            ep = placeholders[ep[1]]
        return ep

    final_edges = []
    for s, t in edges:
        final_edges.append((s, resolve(t)))
    final_edges = [(s, resolve(t)) for s, t in final_edges]
    for k, r in enumerate(roots, start=1):
        final_edges.append((entry(k), resolve(r)))
    return OpenParityGame.build(
        (len(roots), 0), (len(system.variables), 0), positions, final_edges, max_p)
