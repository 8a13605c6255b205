"""Run every theory suite over a fragment and print a status table.

    python scripts/run_suite.py --rank 4 [--json]
"""
import argparse
import json

from hfsets import axioms as ax
from hfsets.kernel import Store
from hfsets.semantics import v_fragment


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rank", type=int, default=4)
    p.add_argument("--json", action="store_true")
    args = p.parse_args()
    store = Store()
    s = v_fragment(store, args.rank)
    table = {t: ax.check_theory(s, t) for t in ax.THEORIES}
    if args.json:
        print(json.dumps({t: [r.to_json(store) for r in rs] for t, rs in table.items()}, indent=1))
        return
    width = max(len(n) for n in ax.CATALOG)
    for theory, reports in table.items():
        print(f"{theory} on {s.name}")
        for r in reports:
            print(f"  {r.axiom:<{width}}  {r.status:<26} seed {r.seed} witness {r.witness_rank}")
        fails = sum(r.status == ax.FAILS for r in reports)
        print(f"  -> {len(reports)} axioms, {fails} failing\n")


if __name__ == "__main__":
    main()
