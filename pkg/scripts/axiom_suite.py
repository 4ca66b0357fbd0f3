"""Run the axiom soundness harness and print a JSON report.

    python scripts/axiom_suite.py --samples 200 --contexts 20
    python scripts/axiom_suite.py --axiom E-odd --samples 1000
"""
import argparse
import json
import time

from opg.oracle.axioms import AXIOM_IDS, STRUCTURAL_IDS, check_axiom, structural_sides


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--axiom", action="append", help="only these (repeatable)")
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--contexts", type=int, default=20)
    ap.add_argument("--max-priority", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--traces", action="store_true", help="also replay every derivation")
    args = ap.parse_args()

    rows = []
    for a in args.axiom or AXIOM_IDS:
        t0 = time.perf_counter()
        r = check_axiom(a, args.samples, args.seed, args.contexts, args.max_priority,
                        traces=args.traces).to_json()
        r["seconds"] = round(time.perf_counter() - t0, 2)
        rows.append(r)
        print(f"{a:>7} {'ok' if r['passed'] else 'FAILED':>6} {r['seconds']:>7.2f} s", flush=True)
    structural = {a: structural_sides(a)[0] == structural_sides(a)[1] for a in STRUCTURAL_IDS}
    print(json.dumps({"axioms": rows, "structural_graph_equal": structural,
                      "passed": all(r["passed"] for r in rows) and all(structural.values())},
                     indent=2))


if __name__ == "__main__":
    main()
