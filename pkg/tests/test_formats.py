import json
import random

import pytest
from hypothesis import given

from opg.errors import InvalidGameError, ParseError
from opg.formats import (
    dumps, game_from_json, game_to_json, load_game, parse_pgsolver, to_dot, write_pgsolver,
)
from opg.oracle.generate import random_closed_game, random_game

from conftest import seeds

EXAMPLE = """parity 3;
start 0;
0 4 0 1,2 "tl";
1 1 1 0 "tr";
2 3 0 3 "bl";
3 2 1 2,0,1 "br";
"""


def test_parse_example():
    g = parse_pgsolver(EXAMPLE)
    assert [p.name for p in g.positions] == ["tl", "tr", "bl", "br"]
    assert g.n_entries == 4 and g.n_exits == 0


@given(seeds)
def test_pgsolver_round_trip(s):
    g = random_closed_game(random.Random(s).randint(0, 9), 7, 0.4, seed=s)
    once = parse_pgsolver(write_pgsolver(g), 7)
    assert parse_pgsolver(write_pgsolver(once), 7) == once == g


def test_pgsolver_details():
    # several declarations on a line, quoted ';' and escaped quotes, no header
    g = parse_pgsolver('0 2 0 1 "a;b"; 1 1 1 0 "say \\"hi\\"";\n')
    assert [p.name for p in g.positions] == ["a;b", 'say "hi"']
    assert parse_pgsolver("") .positions == ()


@pytest.mark.parametrize("text, line", [("0 1 0 1;\n0 2 1 0;", 2), ("parity 1;\nfoo;", 2),
                                        ("0 1 2 0;", 1)])
def test_pgsolver_errors_name_the_line(text, line):
    with pytest.raises(ParseError) as e:
        parse_pgsolver(text)
    assert e.value.line == line


def test_unknown_successor():
    with pytest.raises(ParseError):
        parse_pgsolver("0 1 0 7;")


@given(seeds)
def test_json_round_trip(s):
    g = random_game(random.Random(s).randint(1, 6), 6, 0.3, domain=(2, 1), codomain=(1, 1),
                    seed=s)
    assert game_from_json(json.loads(dumps(game_to_json(g)))) == g


def test_json_validation():
    bad = game_to_json(random_game(3, 6, 0.3, entries=1, exits=1, seed=0))
    bad["positions"][0]["priority"] = 99
    with pytest.raises(InvalidGameError):
        game_from_json(bad)
    with pytest.raises(ParseError):
        game_from_json({"positions": []})


def test_load_game_sniffs_format(tmp_path):
    pg = tmp_path / "g.pg"
    pg.write_text(EXAMPLE)
    js = tmp_path / "g.json"
    js.write_text(dumps(game_to_json(parse_pgsolver(EXAMPLE))))
    assert load_game(str(pg)) == load_game(str(js))
    broken = tmp_path / "b.json"
    broken.write_text("{\n  nope")
    with pytest.raises(ParseError):
        load_game(str(broken))


def test_dot():
    out = to_dot(parse_pgsolver(EXAMPLE))
    assert out.startswith("digraph") and "diamond" in out and "box" in out
    assert "in1 -> v0;" in out


def test_names_with_quotes_round_trip():
    g = parse_pgsolver('0 2 0 0 "say \\"hi\\" \\\\ bye";')
    assert g.positions[0].name == 'say "hi" \\ bye'
    assert parse_pgsolver(write_pgsolver(g)) == g
