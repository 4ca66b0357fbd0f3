"""Command-line interface.

    opg solve GAME                 winners of a closed game
    opg normalize GAME|EXPRFILE    normal form per entry
    opg equiv A B                  compare two games (exit 1 if they differ)
    opg compose A B / tensor A B   write the combined game as JSON
    opg random ...                 seeded random game
    opg selftest                   axiom harness and differential suites

Exit codes: 0 ok, 1 inequivalent, 2 bad input, 3 resource guard.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time

from opg.config import DEFAULT_MAX_PRIORITY, RunConfig
from opg.errors import BoundaryMismatchError, OPGError, ResourceGuardError
from opg.expr import parse_expr
from opg.fixpoint import Derivation, derive_game, normalize, winners_from_nfs
from opg.formats import dumps, game_to_json, load_game, to_dot, write_pgsolver
from opg.game import OpenParityGame, compose, is_acyclic, tensor
from opg.normal_form import NormalForm
from opg.trace import RewriteTrace

EXIT_OK, EXIT_INEQUIVALENT, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3
EXPR_SUFFIXES = (".mu", ".expr", ".txt")


def _config(args) -> RunConfig:
    return RunConfig(max_priority=args.max_priority, seed=args.seed,
                     output_format=args.format if args.format in ("text", "json") else "text",
                     trace_path=getattr(args, "trace", None)).with_env_guards()


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _winner_word(w: int) -> str:
    return "Player 0 (even)" if w == 0 else "Player 1 (odd)"


def _entry_labels(game: OpenParityGame) -> dict[int, str]:
    """Entry k is named after the position it points at, when that has a name."""
    out = {}
    for k, t in game.entry_targets.items():
        p = game.position_map.get(t[1]) if t[0] == "pos" else None
        out[k] = p.name if p is not None and p.name else (str(p.id) if p is not None
                                                          else f"entry {k}")
    return out


# ---------------------------------------------------------------------------
# normal forms of files

def _is_expr_file(path: str) -> bool:
    return path.endswith(EXPR_SUFFIXES)


def _game_nfs(game: OpenParityGame, cfg: RunConfig, args) -> tuple[list[NormalForm], str | None]:
    """Normal forms per entry and, if asked for, the trace as JSONL."""
    if getattr(args, "experimental_positional", False):
        from opg.oracle.semantics import enumerate_semantics_positional
        return enumerate_semantics_positional(game), None
    if getattr(args, "acyclic", False):
        if not is_acyclic(game):
            raise OPGError("--acyclic given but the game has a cycle")
        from opg.oracle.semantics import enumerate_semantics_acyclic
        return enumerate_semantics_acyclic(game), None
    want = cfg.trace_path is not None
    d = derive_game(game, cfg, method=args.method, trace=want)
    return d.nfs, (d.to_jsonl() if want else None)


def _expr_nfs(text: str, cfg: RunConfig) -> tuple[list[NormalForm], str]:
    t = parse_expr(text)
    tr = RewriteTrace()
    nf = normalize(t, tr, cfg)
    d = Derivation("expr", [nf], {1: t}, [tr], {})
    return [nf], d.to_jsonl()


def _load_nfs(path: str, cfg: RunConfig, args):
    if _is_expr_file(path):
        with open(path, encoding="utf-8") as fh:
            nfs, tr = _expr_nfs(fh.read(), cfg)
        return None, nfs, tr
    game = load_game(path, cfg.max_priority)
    nfs, tr = _game_nfs(game, cfg, args)
    return game, nfs, tr


def _write_trace(cfg: RunConfig, text: str | None):
    if cfg.trace_path and text is not None:
        with open(cfg.trace_path, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# subcommands

def cmd_solve(args) -> int:
    cfg = _config(args)
    game = load_game(args.path, cfg.max_priority)
    if game.n_exits:
        raise OPGError("solve needs a closed game (no exits); use normalize for open games")
    nfs, tr = _game_nfs(game, cfg, args)
    _write_trace(cfg, tr)
    winners = winners_from_nfs(nfs)
    labels = _entry_labels(game)
    if args.format == "json":
        _emit(dumps({"winners": {labels[k]: w for k, w in winners.items()}}))
    else:
        for k, w in winners.items():
            _emit(f"{labels[k]}: {_winner_word(w)}")
    return EXIT_OK


def cmd_normalize(args) -> int:
    cfg = _config(args)
    if args.expr is not None:
        nfs, tr = _expr_nfs(args.expr, cfg)
    elif args.path is not None:
        _, nfs, tr = _load_nfs(args.path, cfg, args)
    else:
        raise OPGError("normalize needs a file or --expr")
    _write_trace(cfg, tr)
    if args.format == "json":
        _emit(dumps({"entries": [nf.to_json() for nf in nfs]}))
    else:
        for nf in nfs:
            _emit(json.dumps(nf.to_json(), sort_keys=True))
    return EXIT_OK


def cmd_equiv(args) -> int:
    cfg = _config(args)
    ga, na, _ = _load_nfs(args.a, cfg, args)
    gb, nb, _ = _load_nfs(args.b, cfg, args)
    if ga is not None and gb is not None and \
            (ga.domain, ga.codomain) != (gb.domain, gb.codomain):
        raise BoundaryMismatchError(ga.domain + ga.codomain, gb.domain + gb.codomain,
                                    "equivalence check")
    if len(na) != len(nb):
        raise BoundaryMismatchError((len(na),), (len(nb),), "entry count")
    diff = next((k for k, (x, y) in enumerate(zip(na, nb), start=1) if x != y), None)
    if args.format == "json":
        out = {"equivalent": diff is None}
        if diff is not None:
            out.update(entry=diff, a=na[diff - 1].to_json(), b=nb[diff - 1].to_json())
        _emit(dumps(out))
    elif diff is None:
        _emit("equivalent")
    else:
        _emit(f"inequivalent at entry {diff}")
        _emit(f"  A: {na[diff - 1]}")
        _emit(f"  B: {nb[diff - 1]}")
    return EXIT_OK if diff is None else EXIT_INEQUIVALENT


def _write_game(game: OpenParityGame, args):
    if args.format == "dot":
        text = to_dot(game)
    elif args.format == "pgsolver":
        text = write_pgsolver(game)
    else:
        text = dumps(game_to_json(game))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compose(args) -> int:
    cfg = _config(args)
    a, b = load_game(args.a, cfg.max_priority), load_game(args.b, cfg.max_priority)
    _write_game(compose(a, b), args)
    return EXIT_OK


def cmd_tensor(args) -> int:
    cfg = _config(args)
    a, b = load_game(args.a, cfg.max_priority), load_game(args.b, cfg.max_priority)
    _write_game(tensor(a, b), args)
    return EXIT_OK


def cmd_random(args) -> int:
    from opg.oracle.generate import random_closed_game, random_game
    if args.exits == 0 and args.entries is None and not args.acyclic:
        g = random_closed_game(args.nodes, args.max_priority, args.density, args.seed)
    else:
        g = random_game(args.nodes, args.max_priority, args.density, entries=args.entries,
                        exits=args.exits, seed=args.seed, acyclic=args.acyclic)
    _write_game(g, args)
    return EXIT_OK


def cmd_selftest(args) -> int:
    cfg = _config(args)
    report = selftest(args.samples, args.seed, args.contexts, cfg)
    _emit(dumps(report))
    return EXIT_OK if report["passed"] else 1


def selftest(samples: int = 200, seed: int = 0, contexts: int = 20,
             config: RunConfig | None = None) -> dict:
    """Axiom harness plus the differential suites; a JSON-ready report."""
    from opg.oracle.axioms import AXIOM_IDS, check_axiom
    from opg.oracle.generate import random_closed_game, random_game
    from opg.oracle.semantics import enumerate_semantics_acyclic
    from opg.oracle.zielonka import zielonka

    cfg = config or RunConfig()
    out = {"seed": seed, "samples": samples, "axioms": [], "differential": {}}
    t0 = time.perf_counter()
    for a in AXIOM_IDS:
        out["axioms"].append(check_axiom(a, samples, seed, contexts, 6, cfg).to_json())
    rng = random.Random(seed)

    bad = replays = 0
    for _ in range(samples):
        g = random_closed_game(rng.randint(1, 12), 6, rng.choice((0.15, 0.3, 0.5)),
                               rng.randrange(2**31))
        d = derive_game(g, cfg)
        bad += winners_from_nfs(d.nfs) != zielonka(g)
        replays += not d.replay().ok
    out["differential"]["zielonka"] = {"games": samples, "disagreements": bad,
                                       "replay_failures": replays}

    bad = 0
    for _ in range(samples):
        g = random_game(rng.randint(0, 10), 6, rng.choice((0.2, 0.4)),
                        entries=rng.randint(1, 3), exits=rng.randint(1, 4),
                        seed=rng.randrange(2**31), acyclic=True)
        bad += derive_game(g, cfg, trace=False).nfs != enumerate_semantics_acyclic(g)
    out["differential"]["acyclic"] = {"games": samples, "disagreements": bad}

    out["seconds"] = round(time.perf_counter() - t0, 2)
    out["passed"] = (all(r["passed"] for r in out["axioms"])
                     and all(not v["disagreements"] and not v.get("replay_failures")
                             for v in out["differential"].values()))
    return out


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-priority", type=int, default=DEFAULT_MAX_PRIORITY)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", default="text",
                        choices=("text", "json", "pgsolver", "dot"))

    sem = argparse.ArgumentParser(add_help=False)
    sem.add_argument("--trace", metavar="OUT", help="write the rewrite trace as JSONL")
    sem.add_argument("--acyclic", action="store_true",
                     help="use strategy enumeration (acyclic games only)")
    sem.add_argument("--experimental-positional", action="store_true",
                     help="use positional strategy enumeration")
    sem.add_argument("--method", choices=("system", "expr"), default="system",
                     help="equation system (default) or one term per entry")

    p = argparse.ArgumentParser(prog="opg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", parents=[common, sem], help="winners of a closed game")
    s.add_argument("path")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("normalize", parents=[common, sem], help="normal form per entry")
    s.add_argument("path", nargs="?")
    s.add_argument("--expr", help="normalise this expression instead of a file")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("equiv", parents=[common, sem], help="compare two games")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_equiv)

    for name, fn in (("compose", cmd_compose), ("tensor", cmd_tensor)):
        s = sub.add_parser(name, parents=[common], help=f"{name} two open games")
        s.add_argument("a")
        s.add_argument("b")
        s.add_argument("-o", "--output")
        s.set_defaults(func=fn)

    s = sub.add_parser("random", parents=[common], help="seeded random game")
    s.add_argument("--nodes", type=int, default=6)
    s.add_argument("--density", type=float, default=0.3)
    s.add_argument("--entries", type=int)
    s.add_argument("--exits", type=int, default=0)
    s.add_argument("--acyclic", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_random)

    s = sub.add_parser("selftest", parents=[common], help="run the soundness suites")
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--contexts", type=int, default=20)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceGuardError as e:
        print(f"opg: resource guard: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (OPGError, OSError, ValueError) as e:
        print(f"opg: {e}", file=sys.stderr)
        return EXIT_INPUT
