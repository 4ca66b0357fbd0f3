"""Classical closed parity game solving: Zielonka's recursive algorithm and a
positional brute-force solver used to cross-check it on tiny games."""
from __future__ import annotations

import itertools

from opg.errors import PreconditionError
from opg.game import EXIT, PLAYER0, PLAYER1, POS, OpenParityGame


def remove_dead_ends(owner: dict, prio: dict, succ: dict):
    """A player stuck at a position loses: turn it into a self-loop whose
    priority makes the opponent win."""
    prio = dict(prio)
    succ = {v: list(ws) for v, ws in succ.items()}
    for v, ws in succ.items():
        if not ws:
            ws.append(v)
            prio[v] = 1 if owner[v] == PLAYER0 else 0
    return prio, succ


def _attractor(player, target, nodes, owner, succ, pred):
    attr = set(target)
    queue = list(target)
    count = {}
    while queue:
        v = queue.pop()
        for u in pred[v]:
            if u in attr or u not in nodes:
                continue
            if owner[u] == player:
                attr.add(u)
                queue.append(u)
            else:
                c = count.get(u)
                if c is None:
                    c = sum(1 for w in succ[u] if w in nodes)
                c -= 1
                count[u] = c
                if c == 0:
                    attr.add(u)
                    queue.append(u)
    return attr


def _solve(nodes, owner, prio, succ, pred):
    if not nodes:
        return set(), set()
    d = max(prio[v] for v in nodes)
    p = d % 2
    top = {v for v in nodes if prio[v] == d}
    a = _attractor(p, top, nodes, owner, succ, pred)
    w = _solve(nodes - a, owner, prio, succ, pred)
    if not w[1 - p]:
        out = [set(), set()]
        out[p] = set(nodes)
        return out[0], out[1]
    b = _attractor(1 - p, w[1 - p], nodes, owner, succ, pred)
    w2 = list(_solve(nodes - b, owner, prio, succ, pred))
    w2[1 - p] = w2[1 - p] | b
    return w2[0], w2[1]


def zielonka_regions(owner: dict, prio: dict, succ: dict) -> tuple[set, set]:
    """Winning regions ``(W0, W1)`` of a plain parity game given as dicts."""
    prio, succ = remove_dead_ends(owner, prio, succ)
    pred = {v: [] for v in owner}
    for v, ws in succ.items():
        for w in ws:
            pred[w].append(v)
    return _solve(frozenset(owner), owner, prio, succ, pred)


def closed_game_dicts(game: OpenParityGame):
    if game.n_exits:
        raise PreconditionError("game has exits; close it first")
    owner = {p.id: p.owner for p in game.positions}
    prio = {p.id: p.priority for p in game.positions}
    succ = {v: [t[1] for t in ts if t[0] == POS] for v, ts in game.successors.items()}
    return owner, prio, succ


def zielonka(game: OpenParityGame) -> dict[int, int]:
    """Winner at every entry of a closed game."""
    owner, prio, succ = closed_game_dicts(game)
    w0, _ = zielonka_regions(owner, prio, succ)
    out = {}
    for k in range(1, game.n_entries + 1):
        t = game.entry_targets[k]
        if t[0] == EXIT:  # pragma: no cover - excluded by the exit check above
            raise PreconditionError("entry wired to an exit")
        out[k] = PLAYER0 if t[1] in w0 else PLAYER1
    return out


def play_winner(owner, prio, s0, s1, v) -> int:
    """Winner of the unique play from ``v`` under positional choices."""
    seen = {}
    path = []
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        nxt = (s0 if owner[v] == PLAYER0 else s1).get(v)
        if nxt is None:
            return PLAYER1 if owner[v] == PLAYER0 else PLAYER0
        v = nxt
    cycle = path[seen[v]:]
    return PLAYER0 if max(prio[u] for u in cycle) % 2 == 0 else PLAYER1


def brute_force_regions(owner: dict, prio: dict, succ: dict) -> tuple[set, set]:
    """Player 0 wins at v iff some positional strategy of theirs beats every
    positional counter-strategy (positional determinacy makes this exact)."""
    nodes = sorted(owner)
    mine = [v for v in nodes if owner[v] == PLAYER0 and succ[v]]
    theirs = [v for v in nodes if owner[v] == PLAYER1 and succ[v]]
    s1_all = [dict(zip(theirs, ch)) for ch in itertools.product(*(succ[v] for v in theirs))]
    w0 = set()
    for ch in itertools.product(*(succ[v] for v in mine)):
        s0 = dict(zip(mine, ch))
        for v in nodes:
            if v in w0:
                continue
            if all(play_winner(owner, prio, s0, s1, v) == PLAYER0 for s1 in s1_all):
                w0.add(v)
    return w0, set(nodes) - w0
