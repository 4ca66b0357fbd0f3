"""Every small closed game: equational solver vs Zielonka vs positional brute force.

    python scripts/exhaustive_small.py --max-nodes 3
    python scripts/exhaustive_small.py --nodes 4 --stride 100
"""
import argparse
import json
import time

from opg.fixpoint import solve_closed
from opg.game import PLAYER0, closed_game
from opg.oracle.generate import enumerate_closed_games
from opg.oracle.zielonka import brute_force_regions, remove_dead_ends, zielonka_regions


def check(owner, prio, succ, max_priority=3):
    """None if all three agree, else a description of the game."""
    g = closed_game(owner, prio, succ, None, max_priority)
    eq = {v for v, w in solve_closed(g).items() if w == PLAYER0}
    eq = {v - 1 for v in eq}
    p, s = remove_dead_ends(owner, prio, succ)
    zl, _ = zielonka_regions(owner, p, s)
    bf, _ = brute_force_regions(owner, prio, succ)
    if eq == zl == bf:
        return None
    return {"owner": owner, "priority": prio, "succ": succ,
            "equational": sorted(eq), "zielonka": sorted(zl), "brute_force": sorted(bf)}


def run(n, stride=1, max_priority=3):
    t0 = time.perf_counter()
    games = bad = 0
    first = None
    for o, p, s in enumerate_closed_games(n, max_priority, stride):
        games += 1
        res = check(o, p, s, max_priority)
        if res is not None:
            bad += 1
            first = first or res
    return {"nodes": n, "stride": stride, "games": games, "disagreements": bad,
            "first_disagreement": first, "seconds": round(time.perf_counter() - t0, 1)}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, help="only this size")
    ap.add_argument("--max-nodes", type=int, default=3)
    ap.add_argument("--max-priority", type=int, default=3)
    ap.add_argument("--stride", type=int, default=1, help="check every k-th game only")
    args = ap.parse_args()
    sizes = [args.nodes] if args.nodes else range(1, args.max_nodes + 1)
    for n in sizes:
        print(json.dumps(run(n, args.stride, args.max_priority)), flush=True)


if __name__ == "__main__":
    main()
