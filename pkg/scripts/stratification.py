"""Show how declared rank margins change an axiom's status on one fragment.

For each formula axiom, prints the status at every (seed, witness) pair with
seed <= witness <= rank, making fragment-edge failures visible.

    python scripts/stratification.py --rank 3
"""
import argparse

from hfsets import axioms as ax
from hfsets.kernel import Store
from hfsets.semantics import v_fragment

SHORT = {ax.HOLDS: "H", ax.MARGIN: "M", ax.FAILS: "F", ax.LIMIT: "L"}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rank", type=int, default=3)
    args = p.parse_args()
    s = v_fragment(Store(), args.rank)
    n = args.rank
    grid = [(a, b) for b in range(n + 1) for a in range(b + 1)]
    print("axiom".ljust(16), " ".join(f"{a}/{b}" for a, b in grid))
    for name, entry in sorted(ax.CATALOG.items()):
        if entry.kind != "formula":
            continue
        row = [SHORT[ax.check_axiom(s, entry, a, b).status].center(3) for a, b in grid]
        print(name.ljust(16), " ".join(row), f"(declared margin {entry.margin})")
    print("\nH holds, M holds-with-margin, F fails; columns are seed/witness ranks")


if __name__ == "__main__":
    main()
