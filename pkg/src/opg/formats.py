"""File formats: PGSolver text for closed games, JSON for open games and
normal forms, DOT for pictures."""
from __future__ import annotations

import json
import re

from opg.config import DEFAULT_MAX_PRIORITY
from opg.errors import InvalidGameError, ParseError
from opg.game import (
    ENTRY, EXIT, PLAYER0, POS, OpenParityGame, Position, closed_game, endpoint_order, validate,
)
from opg.normal_form import NormalForm

_PG_LINE = re.compile(
    r'^\s*(\d+)\s+(\d+)\s+([01])\s*((?:\d+\s*(?:,\s*\d+\s*)*)?)\s*(?:"((?:[^"\\]|\\.)*)")?\s*;?\s*$')


def parse_pgsolver(text: str, max_priority: int = DEFAULT_MAX_PRIORITY) -> OpenParityGame:
    """Read a PGSolver file; every node becomes an entry, in ascending id order.

    The ``parity N;`` header is optional and ``start N;`` lines are ignored.
    The priority bound is the larger of ``max_priority`` and the largest
    priority in the file.
    """
    owner, prio, succ, names = {}, {}, {}, {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if re.match(r"^(parity|start)\s+-?\d+\s*;\s*$", line):
            continue
        # several declarations may share a line, separated by ';'
        for part in _split_decls(line):
            m = _PG_LINE.match(part)
            if not m:
                raise ParseError(f"cannot read node declaration {part!r}", line=n)
            v, p, o, ss, name = m.groups()
            v = int(v)
            if v in owner:
                raise ParseError(f"node {v} declared twice", line=n)
            owner[v], prio[v] = int(o), int(p)
            succ[v] = [int(s) for s in ss.replace(" ", "").split(",") if s] if ss else []
            if name is not None:
                names[v] = re.sub(r"\\(.)", r"\1", name)
    for v, ws in succ.items():
        for w in ws:
            if w not in owner:
                raise ParseError(f"node {v} has unknown successor {w}")
    return closed_game(owner, prio, succ, names, max_priority)


def _split_decls(line: str):
    out, cur, quoted = [], [], False
    prev = ""
    for ch in line:
        if ch == '"' and prev != "\\":
            quoted = not quoted
        prev = ch
        if ch == ";" and not quoted:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        out.append("".join(cur))
    return [p for p in out if p.strip()]


def write_pgsolver(game: OpenParityGame) -> str:
    """Write the positions of a closed game (entries are implied)."""
    if game.n_exits:
        raise InvalidGameError(["PGSolver output needs a game without exits"])
    # an empty game gets "parity -1;", which the parser accepts
    lines = [f"parity {max((p.id for p in game.positions), default=-1)};"]
    for p in game.positions:
        ws = [t[1] for t in game.successors[p.id] if t[0] == POS]
        line = f"{p.id} {p.priority} {p.owner} {','.join(map(str, ws))}"
        if p.name is not None:
            line += ' "' + p.name.replace("\\", "\\\\").replace('"', '\\"') + '"'
        lines.append(line + ";")
    return "\n".join(lines) + "\n"


def _ep_to_json(ep):
    return {ep[0]: ep[1]}


def _ep_from_json(d):
    if not isinstance(d, dict) or len(d) != 1:
        raise ParseError(f"bad endpoint {d!r}")
    (kind, idx), = d.items()
    if kind not in (POS, ENTRY, EXIT) or not isinstance(idx, int):
        raise ParseError(f"bad endpoint {d!r}")
    return (kind, idx)


def game_to_json(game: OpenParityGame) -> dict:
    positions = []
    for p in game.positions:
        d = {"id": p.id, "owner": p.owner, "priority": p.priority}
        if p.name is not None:
            d["name"] = p.name
        positions.append(d)
    edges = sorted(game.edges, key=lambda e: (endpoint_order(e[0]), endpoint_order(e[1])))
    return {
        "max_priority": game.max_priority,
        "domain": {"in": game.domain.forward, "out": game.domain.backward},
        "codomain": {"out": game.codomain.forward, "in": game.codomain.backward},
        "positions": positions,
        "edges": [[_ep_to_json(s), _ep_to_json(t)] for s, t in edges],
    }


def game_from_json(data, check: bool = True) -> OpenParityGame:
    try:
        dom = (int(data["domain"]["in"]), int(data["domain"]["out"]))
        cod = (int(data["codomain"]["out"]), int(data["codomain"]["in"]))
        ps = [Position(int(p["id"]), int(p["owner"]), int(p["priority"]), p.get("name"))
              for p in data["positions"]]
        edges = [(_ep_from_json(s), _ep_from_json(t)) for s, t in data["edges"]]
        m = int(data.get("max_priority", DEFAULT_MAX_PRIORITY))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed open-game JSON: {e}") from e
    game = OpenParityGame.build(dom, cod, ps, edges, m)
    if check:
        problems = validate(game)
        if problems:
            raise InvalidGameError(problems)
    return game


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_game(path: str, max_priority: int = DEFAULT_MAX_PRIORITY) -> OpenParityGame:
    """JSON if the file looks like JSON, PGSolver otherwise."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from e
        return game_from_json(data)
    return parse_pgsolver(text, max_priority)


def nfs_to_json(nfs) -> list:
    return [nf.to_json() for nf in nfs]


def nf_from_json(data) -> NormalForm:
    return NormalForm.from_json(data)


def to_dot(game: OpenParityGame, name: str = "game") -> str:
    """Diamonds for Player 0, boxes for Player 1; boundary as point nodes."""
    out = [f"digraph {name} {{", "  rankdir=LR;"]
    for p in game.positions:
        shape = "diamond" if p.owner == PLAYER0 else "box"
        label = f"{p.name}:{p.priority}" if p.name else str(p.priority)
        out.append(f'  v{p.id} [shape={shape}, label="{label}"];')
    for k in range(1, game.n_entries + 1):
        out.append(f'  in{k} [shape=point, xlabel="in {k}"];')
    for k in range(1, game.n_exits + 1):
        out.append(f'  out{k} [shape=point, xlabel="out {k}"];')

    def node(ep):
        return {POS: "v", ENTRY: "in", EXIT: "out"}[ep[0]] + str(ep[1])

    for s, t in sorted(game.edges, key=lambda e: (endpoint_order(e[0]), endpoint_order(e[1]))):
        out.append(f"  {node(s)} -> {node(t)};")
    out.append("}")
    return "\n".join(out) + "\n"
