"""Semantics by strategy enumeration.

For every entry, collect the outcome sets Player 0 can guarantee: a strategy
contributes the set of ``(exit, max priority)`` pairs over all plays it
allows, provided none of those plays is lost inside the game.  The sets are
canonicalised only at the very end.
"""
from __future__ import annotations

import itertools
from collections import deque

from opg.errors import PreconditionError, ResourceGuardError
from opg.expr import exit_var
from opg.game import EXIT, PLAYER0, POS, OpenParityGame, is_acyclic, validate
from opg.normal_form import NormalForm, canonicalize


def enumerate_semantics_acyclic(game: OpenParityGame, limit: int = 200_000) -> list[NormalForm]:
    """Literal semantics of an acyclic game.

    Strategies may depend on the whole history, which on an acyclic game is
    the path from the entry; enumerating them subtree by subtree gives, for a
    position reached with largest priority ``m``, every outcome set some
    strategy can produce from there.
    """
    if validate(game):
        raise PreconditionError("invalid game")
    if not is_acyclic(game):
        raise PreconditionError("enumerate_semantics_acyclic needs an acyclic game")
    succ = game.successors
    pmap = game.position_map
    memo: dict = {}

    def options(v: int, m: int) -> frozenset:
        key = (v, m)
        if key in memo:
            return memo[key]
        p = pmap[v]
        m2 = max(m, p.priority)
        branches = []
        for t in succ[v]:
            if t[0] == EXIT:
                branches.append(frozenset([frozenset([(exit_var(t[1]), m2)])]))
            else:
                branches.append(options(t[1], m2))
        if p.owner == PLAYER0:
            # no successor: stuck, so no strategy survives
            out = frozenset().union(*branches) if branches else frozenset()
        else:
            out = frozenset([frozenset()])
            for b in branches:
                out = frozenset(x | y for x in out for y in b)
                if len(out) > limit:
                    raise ResourceGuardError(f"more than {limit} raw outcome sets")
        memo[key] = out
        return out

    result = []
    for k in range(1, game.n_entries + 1):
        t = game.entry_targets[k]
        if t[0] == EXIT:
            result.append(canonicalize([frozenset([(exit_var(t[1]), 0)])]))
        else:
            result.append(canonicalize(options(t[1], 0)))
    return result


def enumerate_semantics_positional(game: OpenParityGame, max_strategies: int = 200_000
                                   ) -> list[NormalForm]:
    """Experimental semantics for games with cycles.

    Player 0 strategies are positional in the pair (position, largest
    priority so far).  For each such strategy the plays are explored over
    those pairs: exits reached give outcomes, a reachable cycle whose largest
    priority is odd, or a stuck Player 0 position, rules the strategy out.
    """
    if validate(game):
        raise PreconditionError("invalid game")
    succ = game.successors
    pmap = game.position_map
    result = []
    for k in range(1, game.n_entries + 1):
        t0 = game.entry_targets[k]
        if t0[0] == EXIT:
            result.append(canonicalize([frozenset([(exit_var(t0[1]), 0)])]))
            continue
        # states reachable under some strategy
        start = (t0[1], pmap[t0[1]].priority)
        states = {start}
        queue = deque([start])
        while queue:
            v, m = queue.popleft()
            for t in succ[v]:
                if t[0] == POS:
                    s = (t[1], max(m, pmap[t[1]].priority))
                    if s not in states:
                        states.add(s)
                        queue.append(s)
        choice_states = sorted(s for s in states if pmap[s[0]].owner == PLAYER0 and succ[s[0]])
        n = 1
        for s in choice_states:
            n *= len(succ[s[0]])
            if n > max_strategies:
                raise ResourceGuardError(f"more than {max_strategies} positional strategies")
        clauses = []
        for combo in itertools.product(*(succ[s[0]] for s in choice_states)):
            sigma = dict(zip(choice_states, combo))
            outcome = _positional_outcomes(start, sigma, succ, pmap)
            if outcome is not None:
                clauses.append(outcome)
        result.append(canonicalize(clauses))
    return result


def _positional_outcomes(start, sigma, succ, pmap):
    graph: dict = {}
    outs = set()
    stack = [start]
    seen = {start}
    while stack:
        s = stack.pop()
        v, m = s
        p = pmap[v]
        if p.owner == PLAYER0:
            if not succ[v]:
                return None
            moves = [sigma[s]]
        else:
            moves = succ[v]
        nxt = []
        for t in moves:
            if t[0] == EXIT:
                outs.add((exit_var(t[1]), m))
            else:
                u = (t[1], max(m, pmap[t[1]].priority))
                nxt.append(u)
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        graph[s] = nxt
    if _has_odd_cycle(graph, pmap):
        return None
    return frozenset(outs)


def _has_odd_cycle(graph, pmap) -> bool:
    """Some cycle whose largest position priority is odd.

    For each odd ``d``: restrict to states whose position has priority at
    most ``d`` and look for a strongly connected piece through a state of
    priority exactly ``d``.
    """
    ds = sorted({pmap[s[0]].priority for s in graph if pmap[s[0]].priority % 2 == 1})
    for d in ds:
        allowed = {s for s in graph if pmap[s[0]].priority <= d}
        for s in allowed:
            if pmap[s[0]].priority != d:
                continue
            # can s reach itself inside allowed?
            stack = [u for u in graph[s] if u in allowed]
            seen = set()
            while stack:
                u = stack.pop()
                if u == s:
                    return True
                if u in seen:
                    continue
                seen.add(u)
                stack.extend(w for w in graph[u] if w in allowed)
    return False
