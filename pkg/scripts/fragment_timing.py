"""Time fragment construction and a few whole-fragment sweeps.

    python scripts/fragment_timing.py [--max-rank 5]
"""
import argparse
import time

from hfsets.kernel import Store
from hfsets.semantics import v_fragment


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-rank", type=int, default=5)
    args = p.parse_args()
    store = Store()
    print(f"{'n':>2} {'|V_n|':>7} {'build s':>8} {'nodes':>7} {'tc sweep s':>10}")
    for n in range(args.max_rank + 1):
        v, dt = timed(lambda: v_fragment(store, n))
        _, tc = timed(lambda: [store.transitive_closure(x) for x in v.carrier])
        print(f"{n:>2} {len(v):>7} {dt:>8.3f} {len(store.ids()):>7} {tc:>10.3f}")


if __name__ == "__main__":
    main()
