import json
import random
from dataclasses import replace
from pathlib import Path


from opg.cli import main
from opg.formats import dumps, game_to_json, load_game
from opg.fixpoint import Derivation, derive_game
from opg.game import OpenParityGame, empty, identity, lose0, lose1
from opg.oracle.axioms import AXIOM_IDS, axiom_sides, instantiate

DATA = Path(__file__).resolve().parent.parent / "scripts" / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def write(tmp_path, name, game):
    p = tmp_path / name
    p.write_text(dumps(game_to_json(game)))
    return p


def test_solve_example(capsys):
    code, out = run(capsys, "solve", DATA / "square.pg")
    assert code == 0
    assert out.splitlines() == ["tl: Player 0 (even)", "tr: Player 0 (even)",
                                "bl: Player 1 (odd)", "br: Player 1 (odd)"]
    code, out = run(capsys, "solve", DATA / "square.pg", "--format", "json")
    assert json.loads(out) == {"winners": {"tl": 0, "tr": 0, "bl": 1, "br": 1}}


def test_solve_empty_file(capsys, tmp_path):
    p = tmp_path / "empty.pg"
    p.write_text("")
    assert run(capsys, "solve", p) == (0, "")


def test_solve_is_deterministic(capsys, tmp_path):
    p = tmp_path / "r.pg"
    assert run(capsys, "random", "--nodes", 9, "--seed", 4, "--format", "pgsolver", "-o", p)[0] == 0
    assert run(capsys, "solve", p) == run(capsys, "solve", p)


def test_solve_rejects_open_games(capsys, tmp_path):
    assert run(capsys, "solve", write(tmp_path, "id.json", identity()))[0] == 2


def test_normalize(capsys, tmp_path):
    code, out = run(capsys, "normalize", DATA / "square_open_top.mu")
    assert (code, json.loads(out)) == (0, {"clauses": [[]]})
    code, out = run(capsys, "normalize", "--expr", "mu y . x0 \\/ (x1 /\\ <2> y)")
    assert json.loads(out) == {"clauses": [[["x0", 0]], [["x1", 0]]]}
    code, out = run(capsys, "normalize", write(tmp_path, "id.json", identity()))
    assert out == '{"clauses": [[["x1", 0]]]}\n'


def test_normalize_trace_replays(capsys, tmp_path):
    tr = tmp_path / "t.jsonl"
    run(capsys, "normalize", DATA / "square_left.json", "--trace", tr)
    d = Derivation.from_jsonl(tr.read_text())
    assert d.replay().ok
    assert d.nfs == derive_game(load_game(str(DATA / "square_left.json"))).nfs
    run(capsys, "normalize", DATA / "square_open.mu", "--trace", tr)
    assert Derivation.from_jsonl(tr.read_text()).replay().ok


def test_normalize_oracle_flags(capsys):
    a = run(capsys, "normalize", DATA / "square_left.json")
    assert run(capsys, "normalize", DATA / "square_left.json", "--acyclic") == a
    assert run(capsys, "normalize", DATA / "square_left.json",
               "--experimental-positional") == a
    assert run(capsys, "normalize", DATA / "square_left.json", "--method", "expr") == a


def test_equiv(capsys, tmp_path):
    lhs, rhs = axiom_sides("B20", random.Random(0))
    assert run(capsys, "equiv", write(tmp_path, "l.json", lhs),
               write(tmp_path, "r.json", rhs)) == (0, "equivalent\n")
    code, out = run(capsys, "equiv", write(tmp_path, "top.json", lose1()),
                    write(tmp_path, "bot.json", lose0()))
    assert code == 1 and out.splitlines()[0] == "inequivalent at entry 1"
    assert run(capsys, "equiv", tmp_path / "top.json", tmp_path / "l.json")[0] == 2


def test_equiv_on_rewritten_games(capsys, tmp_path):
    rng = random.Random(0)
    for i in range(200):
        lhs, rhs = instantiate(rng.choice(AXIOM_IDS), rng)
        code, _ = run(capsys, "equiv", write(tmp_path, "a.json", lhs),
                      write(tmp_path, "b.json", rhs))
        assert code == 0, i


def test_compose_square_halves(capsys, tmp_path):
    out = tmp_path / "c.json"
    assert run(capsys, "compose", DATA / "square_left.json", DATA / "square_right.json",
               "-o", out)[0] == 0
    code, text = run(capsys, "solve", out, "--format", "json")
    assert json.loads(text)["winners"] == {"tl": 0, "tr": 0, "bl": 1, "br": 1}


def test_tensor_with_empty(capsys, tmp_path):
    src = DATA / "square_left.json"
    e = write(tmp_path, "e.json", empty(load_game(str(src)).max_priority))
    code, out = run(capsys, "tensor", src, e)
    # the output numbers positions 0, 1, ... in their original order
    g = load_game(str(src))
    ren = {p.id: i for i, p in enumerate(sorted(g.positions, key=lambda p: p.id))}
    fix = lambda ep: ("pos", ren[ep[1]]) if ep[0] == "pos" else ep
    compact = OpenParityGame.build(
        g.domain, g.codomain, [replace(p, id=ren[p.id]) for p in g.positions],
        [(fix(a), fix(b)) for a, b in g.edges], g.max_priority)
    assert code == 0 and out == dumps(game_to_json(compact))


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.pg"
    bad.write_text("0 1 0 5;\n")
    assert run(capsys, "solve", bad)[0] == 2
    assert run(capsys, "solve", tmp_path / "missing.pg")[0] == 2
    assert run(capsys, "normalize", "--expr", "mu y .")[0] == 2


def test_guard_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("OPG_GUARD_BYTES", "3")
    assert run(capsys, "solve", DATA / "square.pg")[0] == 3


def test_selftest_small(capsys):
    code, out = run(capsys, "selftest", "--samples", 3, "--contexts", 2, "--seed", 7)
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert len(report["axioms"]) == len(AXIOM_IDS)


def test_random_is_seeded(capsys):
    a = run(capsys, "random", "--nodes", 5, "--exits", 2, "--entries", 2, "--seed", 1)
    assert a == run(capsys, "random", "--nodes", 5, "--exits", 2, "--entries", 2, "--seed", 1)
    assert json.loads(a[1])["codomain"] == {"out": 2, "in": 0}
