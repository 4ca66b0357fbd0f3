"""Solve the four-position example game three ways and print the derivations.

    python scripts/worked_example.py
"""
from pathlib import Path

from opg.expr import parse_expr, print_expr, substitute
from opg.fixpoint import derive_game, normalize, winners_from_nfs
from opg.formats import load_game
from opg.game import compose
from opg.oracle.zielonka import zielonka
from opg.trace import RewriteTrace

DATA = Path(__file__).resolve().parent / "data"


def show_trace(tr):
    for st in tr:
        where = ".".join(map(str, st.path)) or "root"
        print(f"  {st.rule:>10} at {where:<10} {print_expr(st.redex)}")
        print(f"  {'':>10}    {'':<10} => {print_expr(st.contractum)}")


def main():
    g = load_game(str(DATA / "square.pg"))
    names = {k: g.position_map[t[1]].name for k, t in g.entry_targets.items()}
    print("winners (0 = even player, 1 = odd player)")
    for method in ("system", "expr"):
        w = winners_from_nfs(derive_game(g, method=method, trace=False).nfs)
        print(f"  {method:>8}:", {names[k]: v for k, v in w.items()})
    print(f"  {'zielonka':>8}:", {names[k]: v for k, v in zielonka(g).items()})

    text = (DATA / "square_open.mu").read_text().strip()
    t = parse_expr(text)
    print("\nopen term:", print_expr(t))
    print("normal form:", normalize(t))
    closed = substitute(t, "x1", parse_expr("top"))
    tr = RewriteTrace()
    nf = normalize(closed, tr)
    print("\nwith x1 := top, normal form", nf, "via")
    show_trace(tr)

    left = load_game(str(DATA / "square_left.json"))
    right = load_game(str(DATA / "square_right.json"))
    both = compose(left, right)
    names = {k: both.position_map[t[1]].name for k, t in both.entry_targets.items()}
    w = winners_from_nfs(derive_game(both, trace=False).nfs)
    print("\ncomposite of the two halves:", {names[k]: v for k, v in w.items()})
    for k, n in enumerate(derive_game(left, trace=False).nfs, start=1):
        print(f"  left half, entry {k}: {n}")


if __name__ == "__main__":
    main()
