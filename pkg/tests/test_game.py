import networkx as nx
import pytest
from hypothesis import assume, given, strategies as st

from opg.errors import BoundaryMismatchError, PreconditionError
from opg.fixpoint import normalize_game, solve_closed
from opg.game import (
    PLAYER0, PLAYER1, OpenParityGame, Position, close, closed_game, compose, empty, entry,
    exit_, identity, is_acyclic, lose0, lose1, merge, player0, pos, priority_node, seq, start,
    swap, tensor, validate,
)
from opg.oracle.generate import random_game
from opg.oracle.zielonka import zielonka

from conftest import seeds

bounds = st.tuples(st.integers(0, 2), st.integers(0, 1))


def as_graph(g: OpenParityGame):
    d = nx.DiGraph()
    for p in g.positions:
        d.add_node(("pos", p.id), label=(p.owner, p.priority))
    for k in range(1, g.n_entries + 1):
        d.add_node(("entry", k), label=("entry", k))
    for k in range(1, g.n_exits + 1):
        d.add_node(("exit", k), label=("exit", k))
    d.add_edges_from(g.edges)
    return d


def isomorphic(g, h):
    if (g.domain, g.codomain) != (h.domain, h.codomain):
        return False
    return nx.is_isomorphic(as_graph(g), as_graph(h),
                            node_match=lambda a, b: a["label"] == b["label"])


def rgame(seed, dom, cod, nodes=None):
    n = (seed % 4) if nodes is None else nodes
    try:
        return random_game(n, 6, 0.35, domain=dom, codomain=cod, seed=seed, direct_wires=0.3)
    except PreconditionError:
        assume(False)


def test_generators_are_valid():
    for g in (player0(), lose0(), lose1(), merge(), start(), priority_node(3),
              identity((2, 1)), swap((1, 1), (2, 0)), empty()):
        assert validate(g) == []


def test_invalid_game_reported():
    g = OpenParityGame.build((1, 0), (1, 0), [Position(0, PLAYER0, 9)],
                             [(entry(1), pos(0)), (pos(0), exit_(1)), (pos(0), exit_(1))], 6)
    problems = validate(g)
    assert any("priority" in p for p in problems)


def test_compose_rejects_mismatched_boundaries():
    with pytest.raises(BoundaryMismatchError):
        compose(identity((1, 0)), identity((2, 0)))


@given(seeds, seeds, seeds, bounds, bounds, bounds, bounds)
def test_compose_associative(s1, s2, s3, b0, b1, b2, b3):
    a, b, c = rgame(s1, b0, b1), rgame(s2, b1, b2), rgame(s3, b2, b3)
    assert isomorphic(compose(compose(a, b), c), compose(a, compose(b, c)))


@given(seeds, bounds, bounds)
def test_identity_is_unit(s, b0, b1):
    g = rgame(s, b0, b1)
    assert isomorphic(compose(identity(b0), g), g)
    assert isomorphic(compose(g, identity(b1)), g)


@given(seeds, seeds, seeds, bounds, bounds, bounds, bounds, bounds, bounds)
def test_tensor_associative(s1, s2, s3, d1, c1, d2, c2, d3, c3):
    a, b, c = rgame(s1, d1, c1), rgame(s2, d2, c2), rgame(s3, d3, c3)
    assert isomorphic(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))


@given(seeds, bounds, bounds)
def test_tensor_with_empty(s, d, c):
    g = rgame(s, d, c)
    assert tensor(g, empty(g.max_priority)) == g
    assert isomorphic(tensor(empty(), g), g)


@given(seeds, seeds, seeds, seeds, bounds, bounds, bounds, bounds)
def test_interchange_law(s1, s2, s3, s4, d1, m1, d2, m2):
    # (a ; b) (x) (c ; d) = (a (x) c) ; (b (x) d)
    c1, c2 = (1, 0), (0, 1)
    a, b = rgame(s1, d1, m1), rgame(s2, m1, c1)
    c, d = rgame(s3, d2, m2), rgame(s4, m2, c2)
    assert isomorphic(tensor(compose(a, b), compose(c, d)),
                      compose(tensor(a, c), tensor(b, d)))


@given(bounds, bounds)
def test_swap_is_involutive(m, n):
    assert isomorphic(compose(swap(m, n), swap(n, m)), identity(tuple(a + b for a, b in zip(m, n))))


@given(seeds, seeds, bounds, bounds, bounds, bounds)
def test_swap_naturality(s1, s2, d1, c1, d2, c2):
    a, b = rgame(s1, d1, c1), rgame(s2, d2, c2)
    assert isomorphic(compose(tensor(a, b), swap(c1, c2)), compose(swap(d1, d2), tensor(b, a)))


def square_halves():
    left = OpenParityGame.build(
        (2, 0), (2, 3), [Position(0, PLAYER0, 4, "tl"), Position(1, PLAYER0, 3, "bl")],
        [(entry(1), pos(0)), (entry(2), pos(1)), (pos(0), exit_(1)), (pos(0), pos(1)),
         (pos(1), exit_(2)), (entry(3), pos(0)), (entry(4), pos(1)), (entry(5), pos(0))], 4)
    right = OpenParityGame.build(
        (2, 3), (0, 0), [Position(0, PLAYER1, 1, "tr"), Position(1, PLAYER1, 2, "br")],
        [(entry(1), pos(0)), (entry(2), pos(1)), (pos(0), exit_(1)), (pos(1), exit_(2)),
         (pos(1), exit_(3)), (pos(1), pos(0))], 4)
    return left, right


def test_square_halves_compose_to_square():
    left, right = square_halves()
    g = compose(left, right)
    ref = closed_game({0: 0, 1: 1, 2: 0, 3: 1}, {0: 4, 1: 1, 2: 3, 3: 2},
                      {0: [1, 2], 1: [0], 2: [3], 3: [2, 0, 1]}, max_priority=4)
    # the composite only has entries at tl and bl
    assert solve_closed(g) == {1: PLAYER0, 2: PLAYER1}
    assert solve_closed(g) == {1: solve_closed(ref)[1], 2: solve_closed(ref)[3]}
    assert not is_acyclic(g) and is_acyclic(left) and is_acyclic(right)


@given(seeds, seeds)
def test_close_matches_open_normal_form(s1, s2):
    # closing a game with an environment and solving agrees with Zielonka
    g = rgame(s1, (2, 0), (2, 0), nodes=3)
    env = rgame(s2, (2, 0), (0, 0), nodes=2)
    closed = close(g, env)
    assert closed.n_exits == 0
    assert solve_closed(closed) == zielonka(closed)


def test_random_game_is_deterministic():
    a = random_game(7, 6, 0.3, entries=2, exits=3, seed=11)
    b = random_game(7, 6, 0.3, entries=2, exits=3, seed=11)
    assert a == b and validate(a) == []
    assert random_game(7, 6, 0.3, entries=2, exits=3, seed=12) != a


def test_seq_par_shapes():
    g = seq(player0(), tensor(lose0(), identity()))
    assert (g.domain, g.codomain) == ((1, 0), (1, 0))
    assert normalize_game(g) == normalize_game(identity())


def test_validate_names_the_bad_entry():
    g = OpenParityGame.build((1, 0), (0, 0), [Position(0, PLAYER0, 2), Position(1, PLAYER1, 2)],
                             [(entry(1), pos(0)), (entry(1), pos(1))], 6)
    problems = validate(g)
    assert len(problems) == 1 and "entry 1" in problems[0]


def test_swap_wiring():
    g = swap((2, 0), (1, 0))
    assert set(g.edges) == {(entry(1), exit_(2)), (entry(2), exit_(3)), (entry(3), exit_(1))}


def test_tensor_of_two_positions():
    g = tensor(player0(), lose1())
    assert len(g.positions) == 2
    assert (g.domain, g.codomain) == ((2, 0), (2, 0))


def one_exit_game():
    # the square game entered at tl, with tr choosing between tl and the exit
    ps = [Position(0, PLAYER0, 4), Position(1, PLAYER1, 1), Position(2, PLAYER0, 3),
          Position(3, PLAYER1, 2)]
    edges = [(entry(1), pos(0)), (pos(0), pos(1)), (pos(0), pos(2)), (pos(1), pos(0)),
             (pos(1), exit_(1)), (pos(2), pos(3)), (pos(3), pos(2)), (pos(3), pos(0)),
             (pos(3), pos(1))]
    return OpenParityGame.build((1, 0), (1, 0), ps, edges, 6)


def test_closing_the_one_exit_game():
    g = one_exit_game()
    assert str(normalize_game(g)[0]) == "{x1:4}"
    # a stuck Player 1 position behind the exit
    assert solve_closed(close(g, lose1())) == {1: PLAYER0}
    assert solve_closed(close(g, lose0())) == {1: PLAYER1}


def test_close_of_a_closed_game():
    g = closed_game({0: 0, 1: 1}, {0: 2, 1: 1}, {0: [1], 1: [0]})
    assert close(g, empty()) == g


@given(seeds, seeds)
def test_close_predicted_by_normal_forms(s1, s2):
    from opg.fixpoint import nf_compose, winners_from_nfs
    a = rgame(s1, (2, 0), (2, 1), nodes=1 + s1 % 4)
    env = rgame(s2, (2, 1), (0, 0), nodes=1 + s2 % 3)
    closed = close(a, env)
    predicted = nf_compose(normalize_game(a), a.domain, a.codomain, normalize_game(env),
                           env.codomain)
    assert winners_from_nfs(predicted) == zielonka(closed)
