"""Seeded random games, expressions and normal forms for fuzzing."""
from __future__ import annotations

import itertools
import random

from opg.errors import PreconditionError
from opg.expr import BOT, TOP, Expr, Join, Meet, Mu, Pri, Var
from opg.game import (
    Boundary, OpenParityGame, PLAYER0, PLAYER1, Position, as_boundary, entry, exit_, pos,
)
from opg.normal_form import NormalForm, canonicalize


def random_game(nodes: int, max_priority: int = 6, edge_density: float = 0.3,
                entries: int | None = None, exits: int = 0, seed: int = 0,
                acyclic: bool = False, domain=None, codomain=None,
                direct_wires: float = 0.0) -> OpenParityGame:
    """A random game; ``domain``/``codomain`` override ``entries``/``exits``.

    With ``acyclic`` edges only go from lower to higher ids.  Every position
    gets at least one successor with probability 1 - ``edge_density``/4 so
    that dead ends stay present but rare.
    """
    rng = random.Random(seed)
    if domain is None and codomain is None:
        domain = Boundary(nodes if entries is None else entries, 0)
        codomain = Boundary(exits, 0)
    domain = as_boundary(domain or (0, 0))
    codomain = as_boundary(codomain or (0, 0))
    n_in = domain.forward + codomain.backward
    n_out = codomain.forward + domain.backward
    if nodes == 0 and n_out > n_in:
        raise PreconditionError(f"{n_out} exits cannot be fed by {n_in} entries and no positions")
    positions = [Position(i, rng.choice((PLAYER0, PLAYER1)), rng.randint(0, max_priority))
                 for i in range(nodes)]
    edges = set()
    for u in range(nodes):
        targets = range(u + 1, nodes) if acyclic else range(nodes)
        for v in targets:
            if rng.random() < edge_density:
                edges.add((pos(u), pos(v)))
        if not any(s == pos(u) for s, _ in edges) and rng.random() > edge_density / 4:
            cands = list(range(u + 1, nodes)) if acyclic else list(range(nodes))
            if cands:
                edges.add((pos(u), pos(rng.choice(cands))))
    # exits: each fed by one position, or straight from an unused entry
    free_entries = list(range(1, n_in + 1))
    rng.shuffle(free_entries)
    entry_used = {}
    for o in range(1, n_out + 1):
        direct = nodes == 0 or (free_entries and rng.random() < direct_wires)
        if direct:
            k = free_entries.pop()
            entry_used[k] = exit_(o)
        else:
            edges.add((pos(rng.randrange(nodes)), exit_(o)))
    for k in range(1, n_in + 1):
        target = entry_used.get(k)
        if target is None:
            if nodes == 0:
                raise PreconditionError("entries without positions must be wired to exits")
            target = pos(rng.randrange(nodes))
        edges.add((entry(k), target))
    return OpenParityGame.build(domain, codomain, positions, edges, max_priority)


def random_closed_game(nodes: int, max_priority: int = 6, edge_density: float = 0.3,
                       seed: int = 0) -> OpenParityGame:
    """Every position queried, entry ``k`` at position ``k - 1``."""
    g = random_game(nodes, max_priority, edge_density, entries=0, exits=0, seed=seed)
    edges = set(g.edges) | {(entry(k), pos(k - 1)) for k in range(1, nodes + 1)}
    return OpenParityGame.build((nodes, 0), (0, 0), g.positions, edges, max_priority)


def random_expr(rng: random.Random, depth: int, free: list[str], max_priority: int = 6,
                mu: bool = True, bound: tuple = ()) -> Expr:
    names = list(free) + list(bound)
    if depth <= 0:
        r = rng.random()
        if r < 0.08:
            return BOT
        if r < 0.16:
            return TOP
        if not names:
            return rng.choice((BOT, TOP))
        return Var(rng.choice(names))
    kinds = ["pri", "join", "meet", "leaf"] + (["mu"] if mu else [])
    kind = rng.choice(kinds)
    if kind == "leaf":
        return random_expr(rng, 0, free, max_priority, mu, bound)
    if kind == "pri":
        return Pri(rng.randint(0, max_priority),
                   random_expr(rng, depth - 1, free, max_priority, mu, bound))
    if kind == "mu":
        y = f"y{len(bound)}"
        return Mu(y, random_expr(rng, depth - 1, free, max_priority, mu, bound + (y,)))
    a = random_expr(rng, depth - 1, free, max_priority, mu, bound)
    b = random_expr(rng, depth - 1, free, max_priority, mu, bound)
    return Join(a, b) if kind == "join" else Meet(a, b)


def random_guarded_body(rng: random.Random, depth: int, x: str, free: list[str],
                        max_priority: int = 6) -> Expr:
    """A term in which ``x`` occurs free (so that ``mu x`` binds something)."""
    t = random_expr(rng, depth, free + [x], max_priority, mu=True)
    if x not in t.free_vars:
        t = Join(t, Pri(rng.randint(0, max_priority), Var(x))) if rng.random() < 0.5 \
            else Meet(t, Pri(rng.randint(0, max_priority), Var(x)))
    return t


def random_nf(rng: random.Random, exits: list[str], max_priority: int = 6,
              max_clauses: int = 4, max_width: int = 3) -> NormalForm:
    r = rng.random()
    if r < 0.05:
        return canonicalize([])
    if r < 0.1:
        return canonicalize([frozenset()])
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        width = rng.randint(1, min(max_width, len(exits)))
        chosen = rng.sample(exits, width)
        clauses.append(frozenset((o, rng.randint(0, max_priority)) for o in chosen))
    return canonicalize(clauses)


def compress_priorities(prio: tuple) -> tuple:
    """Smallest priorities with the same order and parities: adjacent used
    values of equal parity merge, and the lowest one keeps its parity."""
    m, cur = {}, None
    for v in sorted(set(prio)):
        if cur is None:
            cur = v % 2
        elif v % 2 != cur % 2:
            cur += 1
        m[v] = cur
    return tuple(m[p] for p in prio)


def enumerate_closed_games(n: int, max_priority: int = 3, stride: int = 1):
    """Every closed game on ``n`` positions with priorities at most
    ``max_priority``, once per isomorphism class and priority compression.

    Yields ``(owner, priority, succ)`` dicts over positions ``0..n-1``.
    Positions may have no successor.  With ``stride`` k only every k-th edge
    relation is tried for each labelling, which gives a deterministic slice.
    """
    labels = [(o, p) for o in (PLAYER0, PLAYER1) for p in range(max_priority + 1)]
    perms = list(itertools.permutations(range(n)))
    for lab in itertools.combinations_with_replacement(labels, n):
        prio = tuple(p for _, p in lab)
        if compress_priorities(prio) != prio:
            continue
        stab = [p for p in perms if p != tuple(range(n))
                and all(lab[p[i]] == lab[i] for i in range(n))]
        for masks in itertools.islice(itertools.product(range(1 << n), repeat=n), 0, None, stride):
            if stab and any(_permute_masks(masks, p) < masks for p in stab):
                continue
            owner = {v: lab[v][0] for v in range(n)}
            yield (owner, {v: lab[v][1] for v in range(n)},
                   {v: [w for w in range(n) if masks[v] >> w & 1] for v in range(n)})


def _permute_masks(masks, p):
    out = [0] * len(masks)
    for i, m in enumerate(masks):
        b = 0
        for j in range(len(masks)):
            if m >> j & 1:
                b |= 1 << p[j]
        out[p[i]] = b
    return tuple(out)
