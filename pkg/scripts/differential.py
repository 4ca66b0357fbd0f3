"""Random closed games: equational solver vs Zielonka, with timings per route.

    python scripts/differential.py --games 500 --max-nodes 12
    python scripts/differential.py --games 50 --method expr
"""
import argparse
import json
import random
import statistics
import time

from opg.config import RunConfig
from opg.errors import ResourceGuardError
from opg.fixpoint import derive_game, winners_from_nfs
from opg.oracle.generate import random_closed_game
from opg.oracle.zielonka import zielonka


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--games", type=int, default=500)
    ap.add_argument("--max-nodes", type=int, default=12)
    ap.add_argument("--max-priority", type=int, default=6)
    ap.add_argument("--method", choices=("system", "expr"), default="system")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-replay", action="store_true")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    cfg = RunConfig(max_priority=max(2, args.max_priority))
    times, bad, replay_bad, guarded = [], 0, 0, 0
    worst = (0.0, None)
    for _ in range(args.games):
        seed = rng.randrange(2**31)
        g = random_closed_game(rng.randint(1, args.max_nodes), rng.randint(2, args.max_priority),
                               rng.choice((0.1, 0.25, 0.5, 0.8)), seed)
        t0 = time.perf_counter()
        try:
            d = derive_game(g, cfg, method=args.method, trace=not args.no_replay)
        except ResourceGuardError:
            guarded += 1
            continue
        dt = time.perf_counter() - t0
        times.append(dt)
        worst = max(worst, (dt, seed), key=lambda x: x[0])
        bad += winners_from_nfs(d.nfs) != zielonka(g)
        if not args.no_replay:
            replay_bad += not d.replay().ok
    print(json.dumps({
        "method": args.method, "games": args.games, "disagreements": bad,
        "replay_failures": None if args.no_replay else replay_bad, "guard_hits": guarded,
        "mean_ms": round(1000 * statistics.mean(times), 2) if times else None,
        "max_ms": round(1000 * worst[0], 2), "slowest_seed": worst[1],
    }, indent=2))


if __name__ == "__main__":
    main()
