"""The axiom catalogue as pairs of games, and a randomised soundness harness.

Each axiom is built from the single-node generators with ``seq``/``par``;
an instance plugs random filler games onto its inputs and outputs and draws
random priorities where the axiom has them.  Both sides must then have equal
normal forms, and equal Zielonka winners in random closing contexts.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from opg.config import DEFAULT_CONFIG, RunConfig
from opg.fixpoint import derive_game
from opg.game import (
    PLAYER0, PLAYER1, OpenParityGame, Position, cap, close, cup, empty, entry, exit_,
    identity, lose0, lose1, merge, par, player0, player1, pos, priority_node, seq, start, swap,
    tensor,
)
from opg.oracle.generate import random_game
from opg.oracle.zielonka import zielonka

AXIOM_IDS = ([f"B{i}" for i in range(1, 24)] + [f"C{i}" for i in range(1, 5)]
             + [f"D{i}" for i in range(1, 5)] + ["E-even", "E-odd"])
STRUCTURAL_IDS = ["A1", "A2", "A3"]


def _id(M):
    return identity((1, 0), M)


def _sw(M):
    return swap((1, 0), (1, 0), M)


def loop_game(p: int, M: int) -> OpenParityGame:
    """``mu y . x0 \\/ (x1 /\\ <p> y)`` drawn as a graph: (1,0) -> (2,0)."""
    ps = [Position(0, PLAYER0, 0), Position(1, PLAYER1, 0), Position(2, PLAYER1, p)]
    edges = [(entry(1), pos(0)), (pos(0), exit_(1)), (pos(0), pos(1)),
             (pos(1), exit_(2)), (pos(1), pos(2)), (pos(2), pos(0))]
    return OpenParityGame.build((1, 0), (2, 0), ps, edges, max(M, p))


def axiom_sides(axiom_id: str, rng: random.Random, M: int = 6):
    """Left- and right-hand side of one axiom; priorities drawn from ``rng``."""
    k = rng.randint(0, M)
    l = rng.randint(0, M)
    i0, sw = _id(M), _sw(M)
    p0, p1, l0, l1 = player0(M), player1(M), lose0(M), lose1(M)
    mg, st = merge(M), start(M)
    pk, pl = priority_node(k, M), priority_node(l, M)
    a = axiom_id
    if a == "B1":
        return seq(par(i0, mg), mg), seq(par(mg, i0), mg)
    if a == "B2":
        return seq(sw, mg), mg
    if a == "B3":
        side = rng.random() < 0.5
        return (seq(par(i0, st), mg) if side else seq(par(st, i0), mg)), i0
    if a == "B4":
        return seq(p0, par(p0, i0)), seq(p0, par(i0, p0))
    if a == "B5":
        return seq(p0, sw), p0
    if a == "B6":
        side = rng.random() < 0.5
        return (seq(p0, par(l0, i0)) if side else seq(p0, par(i0, l0))), i0
    if a == "B7":
        return seq(p1, par(p1, i0)), seq(p1, par(i0, p1))
    if a == "B8":
        return seq(p1, sw), p1
    if a == "B9":
        side = rng.random() < 0.5
        return (seq(p1, par(l1, i0)) if side else seq(p1, par(i0, l1))), i0
    if a in ("B10", "B18"):
        pl_ = p0 if a == "B10" else p1
        return (seq(mg, pl_),
                seq(par(pl_, pl_), par(i0, sw, i0), par(mg, mg)))
    if a in ("B11", "B19"):
        lz = l0 if a == "B11" else l1
        return seq(mg, lz), par(lz, lz)
    if a in ("B12", "B13"):
        return seq(st, p0 if a == "B12" else p1), par(st, st)
    if a in ("B14", "B15"):
        return seq(st, l0 if a == "B14" else l1), empty(M)
    if a in ("B16", "B17"):
        return seq(p0 if a == "B16" else p1, mg), i0
    if a in ("B20", "B22"):
        outer, inner = (p0, p1) if a == "B20" else (p1, p0)
        return (seq(outer, par(inner, i0)),
                seq(inner, par(outer, outer), par(i0, sw, i0), par(i0, i0, mg)))
    if a in ("B21", "B23"):
        outer, lz = (p0, l1) if a == "B21" else (p1, l0)
        return seq(outer, par(lz, i0)), seq(lz, st)
    if a == "C1":
        return seq(par(pk, pk), mg), seq(mg, pk)
    if a == "C2":
        return seq(st, pk), st
    if a == "C3":
        return seq(pk, pl), priority_node(max(k, l), M)
    if a == "C4":
        return priority_node(0, M), i0
    if a in ("D1", "D3"):
        pl_ = p0 if a == "D1" else p1
        return seq(pk, pl_), seq(pl_, par(pk, pk))
    if a in ("D2", "D4"):
        lz = l0 if a == "D2" else l1
        return seq(pk, lz), lz
    if a in ("E-even", "E-odd"):
        p = rng.choice([q for q in range(0, M + 1) if q % 2 == (0 if a == "E-even" else 1)])
        rhs = p0 if a == "E-even" else par(i0, st)
        return loop_game(p, M), rhs
    raise KeyError(f"unknown axiom {axiom_id!r}")


def structural_sides(axiom_id: str, M: int = 6):
    """The compact-closed laws: both sides of each are equal as graphs."""
    if axiom_id == "A1":
        return seq(par(_id(M), cup(M)), par(cap(M), _id(M))), _id(M)
    if axiom_id == "A2":
        back = identity((0, 1), M)
        return seq(par(cup(M), back), par(back, cap(M))), back
    if axiom_id == "A3":
        return seq(cup(M), cap(M)), empty(M)
    raise KeyError(axiom_id)


def _filler(rng: random.Random, dom: int, cod: int, M: int, acyclic: bool):
    if dom == 0 and cod == 0:
        return empty(M)
    nodes = rng.randint(0 if cod == dom else 1, 4)
    return random_game(nodes, M, rng.choice((0.2, 0.4)), domain=(dom, 0), codomain=(cod, 0),
                       seed=rng.randrange(2**31), acyclic=acyclic, direct_wires=0.3)


def instantiate(axiom_id: str, rng: random.Random, M: int = 6, acyclic: bool = False):
    """Both sides with random games plugged in front and behind."""
    lhs, rhs = axiom_sides(axiom_id, rng, M)
    dom, cod = lhs.domain.forward, lhs.codomain.forward
    pre = _filler(rng, rng.randint(1, 2) if dom else 0, dom, M, acyclic)
    post = _filler(rng, cod, rng.randint(0, 2) if cod else 0, M, acyclic)
    return seq(pre, lhs, post), seq(pre, rhs, post)


def random_context(game: OpenParityGame, rng: random.Random, M: int = 6) -> OpenParityGame:
    """A random game that plugs every exit of ``game``."""
    n = game.codomain.forward
    if n == 0:
        return empty(M)
    return random_game(rng.randint(1, 4), M, rng.choice((0.2, 0.4)),
                       domain=(n, 0), codomain=(0, 0), seed=rng.randrange(2**31))


@dataclass
class AxiomReport:
    axiom: str
    samples: int
    nf_failures: int = 0
    context_failures: int = 0
    counterexample: dict | None = None
    contexts_checked: int = 0
    replay_failures: int = 0

    @property
    def passed(self) -> bool:
        return not (self.nf_failures or self.context_failures or self.replay_failures)

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom, "samples": self.samples, "passed": self.passed,
            "nf_failures": self.nf_failures, "context_failures": self.context_failures,
            "contexts_checked": self.contexts_checked, "replay_failures": self.replay_failures,
            "counterexample": self.counterexample,
        }


def check_axiom(axiom_id: str, samples: int = 200, seed: int = 0, contexts: int = 20,
                max_priority: int = 6, config: RunConfig = DEFAULT_CONFIG,
                traces: bool = False) -> AxiomReport:
    """With ``traces`` both sides are derived with rewrite traces, which must replay."""
    from opg.formats import game_to_json

    rng = random.Random(f"{axiom_id}/{seed}")
    report = AxiomReport(axiom_id, samples)
    for _ in range(samples):
        lhs, rhs = instantiate(axiom_id, rng, max_priority)
        dl = derive_game(lhs, config, trace=traces)
        dr = derive_game(rhs, config, trace=traces)
        nl, nr = dl.nfs, dr.nfs
        if traces:
            report.replay_failures += (not dl.replay().ok) + (not dr.replay().ok)
        bad = nl != nr
        report.nf_failures += bad
        ctx_bad = False
        envs = [random_context(lhs, rng, max_priority) for _ in range(contexts)]
        # all contexts at once: a disjoint union is solved component-wise
        big_l = close(_power(lhs, contexts), _union(envs))
        big_r = close(_power(rhs, contexts), _union(envs))
        wl, wr = zielonka(big_l), zielonka(big_r)
        report.contexts_checked += contexts
        if wl != wr:
            ctx_bad = True
            report.context_failures += 1
        if (bad or ctx_bad) and report.counterexample is None:
            report.counterexample = {
                "lhs": game_to_json(lhs), "rhs": game_to_json(rhs),
                "lhs_nf": [x.to_json() for x in nl], "rhs_nf": [x.to_json() for x in nr],
            }
    return report


def _power(g: OpenParityGame, n: int) -> OpenParityGame:
    out = g
    for _ in range(n - 1):
        out = tensor(out, g)
    return out


def _union(games):
    return par(*games)
