"""Open parity games as boundary-typed graphs and their composition algebra.

Boundary wiring convention used throughout the package.  A boundary object is
a pair ``(forward, backward)`` counting wires that flow left-to-right and
right-to-left.  For a game ``A : dom -> cod``:

* entries ``1..dom.forward`` come in from the left, entries
  ``dom.forward+1 .. dom.forward+cod.backward`` come in from the right;
* exits ``1..cod.forward`` leave on the right, exits
  ``cod.forward+1 .. cod.forward+dom.backward`` leave on the left.

With this convention the identity game wires entry ``k`` to exit ``k``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from opg.config import DEFAULT_MAX_PRIORITY
from opg.errors import BoundaryMismatchError, InvalidGameError

PLAYER0 = 0
PLAYER1 = 1

POS = "pos"
ENTRY = "entry"
EXIT = "exit"

Endpoint = tuple  # (kind, index)


def pos(i: int) -> Endpoint:
    return (POS, i)


def entry(k: int) -> Endpoint:
    return (ENTRY, k)


def exit_(k: int) -> Endpoint:
    return (EXIT, k)


class Boundary(NamedTuple):
    forward: int = 0
    backward: int = 0

    def __add__(self, other):
        other = Boundary(*other)
        return Boundary(self.forward + other.forward, self.backward + other.backward)


def as_boundary(b) -> Boundary:
    return b if isinstance(b, Boundary) else Boundary(*b)


@dataclass(frozen=True)
class Position:
    id: int
    owner: int
    priority: int
    name: str | None = None


@dataclass(frozen=True)
class OpenParityGame:
    domain: Boundary
    codomain: Boundary
    positions: tuple[Position, ...]
    edges: frozenset
    max_priority: int = DEFAULT_MAX_PRIORITY

    @classmethod
    def build(cls, domain, codomain, positions: Iterable[Position], edges: Iterable,
              max_priority: int = DEFAULT_MAX_PRIORITY) -> "OpenParityGame":
        """Normalising constructor: sorts positions, deduplicates edges."""
        ps = tuple(sorted(positions, key=lambda p: p.id))
        es = frozenset((tuple(s), tuple(t)) for s, t in edges)
        return cls(as_boundary(domain), as_boundary(codomain), ps, es, max_priority)

    @property
    def n_entries(self) -> int:
        return self.domain.forward + self.codomain.backward

    @property
    def n_exits(self) -> int:
        return self.codomain.forward + self.domain.backward

    @cached_property
    def position_map(self) -> dict[int, Position]:
        return {p.id: p for p in self.positions}

    @cached_property
    def successors(self) -> dict[int, tuple[Endpoint, ...]]:
        out: dict[int, list] = {p.id: [] for p in self.positions}
        for s, t in self.edges:
            if s[0] == POS and s[1] in out:
                out[s[1]].append(t)
        return {v: tuple(sorted(ts, key=endpoint_order)) for v, ts in out.items()}

    @cached_property
    def entry_targets(self) -> dict[int, Endpoint]:
        return {s[1]: t for s, t in self.edges if s[0] == ENTRY}

    @cached_property
    def exit_sources(self) -> dict[int, Endpoint]:
        return {t[1]: s for s, t in self.edges if t[0] == EXIT}

    def is_closed(self) -> bool:
        return self.n_exits == 0

    def with_max_priority(self, m: int) -> "OpenParityGame":
        return OpenParityGame(self.domain, self.codomain, self.positions, self.edges, m)


# A closed game is an open one with no exits; its entries are the queried starts.
ClosedParityGame = OpenParityGame


def endpoint_order(ep: Endpoint):
    kind, i = ep
    return ({POS: 0, EXIT: 1, ENTRY: 2}[kind], i)


def validate(game: OpenParityGame) -> list[str]:
    problems = []
    if game.max_priority < 2:
        problems.append(f"max priority {game.max_priority} is below 2")
    for name, b in (("domain", game.domain), ("codomain", game.codomain)):
        if b.forward < 0 or b.backward < 0:
            problems.append(f"{name} {tuple(b)} has a negative component")
    ids = [p.id for p in game.positions]
    if len(set(ids)) != len(ids):
        problems.append("duplicate position ids")
    for p in game.positions:
        if p.owner not in (PLAYER0, PLAYER1):
            problems.append(f"position {p.id} has owner {p.owner!r}")
        if not 0 <= p.priority <= game.max_priority:
            problems.append(
                f"position {p.id} has priority {p.priority} outside 0..{game.max_priority}")
    known = set(ids)
    n_in, n_out = game.n_entries, game.n_exits
    entry_out = defaultdict(int)
    exit_in = defaultdict(int)
    for s, t in sorted(game.edges):
        edge = f"edge {s}->{t}"
        if s[0] == ENTRY:
            if not 1 <= s[1] <= n_in:
                problems.append(f"{edge}: entry {s[1]} outside 1..{n_in}")
            entry_out[s[1]] += 1
        elif s[0] == POS:
            if s[1] not in known:
                problems.append(f"{edge}: unknown source position {s[1]}")
        else:
            problems.append(f"{edge}: source must be an entry or a position")
        if t[0] == EXIT:
            if not 1 <= t[1] <= n_out:
                problems.append(f"{edge}: exit {t[1]} outside 1..{n_out}")
            exit_in[t[1]] += 1
        elif t[0] == POS:
            if t[1] not in known:
                problems.append(f"{edge}: unknown target position {t[1]}")
        else:
            problems.append(f"{edge}: target must be a position or an exit")
    for k in range(1, n_in + 1):
        if entry_out[k] != 1:
            problems.append(f"entry {k} has {entry_out[k]} outgoing edges (expected 1)")
    for k in range(1, n_out + 1):
        if exit_in[k] != 1:
            problems.append(f"exit {k} has {exit_in[k]} incoming edges (expected 1)")
    return problems


def check(game: OpenParityGame) -> OpenParityGame:
    problems = validate(game)
    if problems:
        raise InvalidGameError(problems)
    return game


def _relabel(positions, start: int):
    mapping = {}
    out = []
    for i, p in enumerate(sorted(positions, key=lambda p: p.id)):
        mapping[p.id] = start + i
        out.append(Position(start + i, p.owner, p.priority, p.name))
    return mapping, out


def compose(a: OpenParityGame, b: OpenParityGame) -> OpenParityGame:
    """Sequential composition ``a ; b``, gluing a's right side to b's left side.

    Interface wires become pass-through nodes that are then short-circuited,
    so chains of boundary-to-boundary edges collapse to single edges and
    closed wire loops disappear.
    """
    if tuple(a.codomain) != tuple(b.domain):
        raise BoundaryMismatchError(a.codomain, b.domain)
    m, n, o = a.domain, a.codomain, b.codomain
    amap, apos = _relabel(a.positions, 0)
    bmap, bpos = _relabel(b.positions, len(apos))

    def from_a(ep):
        kind, i = ep
        if kind == POS:
            return pos(amap[i])
        if kind == ENTRY:
            return entry(i) if i <= m.forward else ("bwd", i - m.forward)
        return ("fwd", i) if i <= n.forward else exit_(o.forward + i - n.forward)

    def from_b(ep):
        kind, i = ep
        if kind == POS:
            return pos(bmap[i])
        if kind == ENTRY:
            return ("fwd", i) if i <= n.forward else entry(m.forward + i - n.forward)
        return exit_(i) if i <= o.forward else ("bwd", i - o.forward)

    raw = [(from_a(s), from_a(t)) for s, t in a.edges]
    raw += [(from_b(s), from_b(t)) for s, t in b.edges]
    wire_next = {s: t for s, t in raw if s[0] in ("fwd", "bwd")}
    edges = set()
    for s, t in raw:
        if s[0] in ("fwd", "bwd"):
            continue
        seen = set()
        while t[0] in ("fwd", "bwd"):
            if t in seen or t not in wire_next:
                raise InvalidGameError([f"dangling interface wire {t} in composition"])
            seen.add(t)
            t = wire_next[t]
        edges.add((s, t))
    return OpenParityGame.build(m, o, apos + bpos, edges, max(a.max_priority, b.max_priority))


def tensor(a: OpenParityGame, b: OpenParityGame) -> OpenParityGame:
    """Monoidal product: juxtapose, renumbering b's boundary within each group."""
    ad, ac, bd, bc = a.domain, a.codomain, b.domain, b.codomain
    amap, apos = _relabel(a.positions, 0)
    bmap, bpos = _relabel(b.positions, len(apos))
    left_in = ad.forward + bd.forward
    right_out = ac.forward + bc.forward

    def from_a(ep):
        kind, i = ep
        if kind == POS:
            return pos(amap[i])
        if kind == ENTRY:
            return entry(i if i <= ad.forward else left_in + (i - ad.forward))
        return exit_(i if i <= ac.forward else right_out + (i - ac.forward))

    def from_b(ep):
        kind, i = ep
        if kind == POS:
            return pos(bmap[i])
        if kind == ENTRY:
            if i <= bd.forward:
                return entry(ad.forward + i)
            return entry(left_in + ac.backward + (i - bd.forward))
        if i <= bc.forward:
            return exit_(ac.forward + i)
        return exit_(right_out + ad.backward + (i - bc.forward))

    edges = [(from_a(s), from_a(t)) for s, t in a.edges]
    edges += [(from_b(s), from_b(t)) for s, t in b.edges]
    return OpenParityGame.build(ad + bd, ac + bc, apos + bpos, edges,
                                max(a.max_priority, b.max_priority))


def identity(b=(1, 0), max_priority: int = DEFAULT_MAX_PRIORITY) -> OpenParityGame:
    b = as_boundary(b)
    n = b.forward + b.backward
    return OpenParityGame.build(b, b, (), [(entry(k), exit_(k)) for k in range(1, n + 1)],
                                max_priority)


def empty(max_priority: int = DEFAULT_MAX_PRIORITY) -> OpenParityGame:
    return identity((0, 0), max_priority)


def swap(m=(1, 0), n=(1, 0), max_priority: int = DEFAULT_MAX_PRIORITY) -> OpenParityGame:
    """The symmetry ``m + n -> n + m``."""
    m, n = as_boundary(m), as_boundary(n)
    dom, cod = m + n, n + m
    edges = []
    for k in range(1, m.forward + 1):
        edges.append((entry(k), exit_(n.forward + k)))
    for k in range(1, n.forward + 1):
        edges.append((entry(m.forward + k), exit_(k)))
    # right entries carry n's backward wires first, then m's
    for j in range(1, n.backward + 1):
        edges.append((entry(dom.forward + j), exit_(cod.forward + m.backward + j)))
    for j in range(1, m.backward + 1):
        edges.append((entry(dom.forward + n.backward + j), exit_(cod.forward + j)))
    return OpenParityGame.build(dom, cod, (), edges, max_priority)


def close(a: OpenParityGame, env: OpenParityGame) -> ClosedParityGame:
    """Plug every right-hand exit and entry of ``a`` with ``env``.

    The left entries of ``a`` become the queried entries of the result.
    """
    if a.domain.backward != 0:
        raise BoundaryMismatchError(a.domain, (a.domain.forward, 0), "close (left exits)")
    if tuple(env.codomain) != (0, 0):
        raise BoundaryMismatchError(env.codomain, (0, 0), "close (environment codomain)")
    return compose(a, env)


# Single-node generators of the diagrammatic syntax.

def _single(dom, cod, owner, priority, edges, max_priority=DEFAULT_MAX_PRIORITY):
    return OpenParityGame.build(dom, cod, [Position(0, owner, priority)], edges, max_priority)


def player0(max_priority=DEFAULT_MAX_PRIORITY):
    return _single((1, 0), (2, 0), PLAYER0, 0,
                   [(entry(1), pos(0)), (pos(0), exit_(1)), (pos(0), exit_(2))], max_priority)


def lose0(max_priority=DEFAULT_MAX_PRIORITY):
    return _single((1, 0), (0, 0), PLAYER0, 0, [(entry(1), pos(0))], max_priority)


def player1(max_priority=DEFAULT_MAX_PRIORITY):
    return _single((1, 0), (2, 0), PLAYER1, 0,
                   [(entry(1), pos(0)), (pos(0), exit_(1)), (pos(0), exit_(2))], max_priority)


def lose1(max_priority=DEFAULT_MAX_PRIORITY):
    return _single((1, 0), (0, 0), PLAYER1, 0, [(entry(1), pos(0))], max_priority)


def priority_node(p: int, max_priority=DEFAULT_MAX_PRIORITY):
    return _single((1, 0), (1, 0), PLAYER1, p,
                   [(entry(1), pos(0)), (pos(0), exit_(1))], max(max_priority, p))


def merge(max_priority=DEFAULT_MAX_PRIORITY):
    return _single((2, 0), (1, 0), PLAYER1, 0,
                   [(entry(1), pos(0)), (entry(2), pos(0)), (pos(0), exit_(1))], max_priority)


def start(max_priority=DEFAULT_MAX_PRIORITY):
    return _single((0, 0), (1, 0), PLAYER1, 0, [(pos(0), exit_(1))], max_priority)


def cap(max_priority=DEFAULT_MAX_PRIORITY):
    """Turn a rightward wire back to the left: ``(1, 1) -> (0, 0)``."""
    return OpenParityGame.build((1, 1), (0, 0), (), [(entry(1), exit_(1))], max_priority)


def cup(max_priority=DEFAULT_MAX_PRIORITY):
    """Turn a leftward wire back to the right: ``(0, 0) -> (1, 1)``."""
    return OpenParityGame.build((0, 0), (1, 1), (), [(entry(1), exit_(1))], max_priority)


def seq(*games: OpenParityGame) -> OpenParityGame:
    out = games[0]
    for g in games[1:]:
        out = compose(out, g)
    return out


def par(*games: OpenParityGame) -> OpenParityGame:
    out = games[0]
    for g in games[1:]:
        out = tensor(out, g)
    return out


def closed_game(owner: dict, priority: dict, succ: dict, names: dict | None = None,
                max_priority: int | None = None) -> ClosedParityGame:
    """A plain parity game with every position queried, in ascending id order."""
    ids = sorted(owner)
    names = names or {}
    m = max(max_priority or DEFAULT_MAX_PRIORITY, max(priority.values(), default=0))
    positions = [Position(v, owner[v], priority[v], names.get(v)) for v in ids]
    edges = [(entry(k), pos(v)) for k, v in enumerate(ids, start=1)]
    edges += [(pos(v), pos(w)) for v in ids for w in succ.get(v, ())]
    return OpenParityGame.build((len(ids), 0), (0, 0), positions, edges, m)


def internal_graph(game: OpenParityGame) -> dict[int, list[int]]:
    return {v: [t[1] for t in ts if t[0] == POS] for v, ts in game.successors.items()}


def is_acyclic(game: OpenParityGame) -> bool:
    graph = internal_graph(game)
    state = {}

    def visit(v):
        state[v] = 1
        for w in graph[v]:
            s = state.get(w)
            if s == 1:
                return False
            if s is None and not visit(w):
                return False
        state[v] = 2
        return True

    return all(state.get(v) == 2 or visit(v) for v in graph)


def reachable_positions(game: OpenParityGame, start_eps: Iterable[Endpoint]) -> set[int]:
    seen = set()
    stack = [ep[1] for ep in start_eps if ep[0] == POS]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(t[1] for t in game.successors[v] if t[0] == POS)
    return seen
