"""Tabulate the critical points of phi on a sweep of tau values."""

import argparse
from collections import Counter

import numpy as np

from sidonlab import extremal_family as fam


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=33)
    args = ap.parse_args()

    kinds = Counter()
    print(f"{'tau':>8} {'t':>10} {'phi':>12} {'|grad|':>9}  kind")
    for tau in np.linspace(0, np.pi, args.steps):
        for p in fam.critical_points(tau):
            kinds[p.kind] += 1
            print(f"{tau:8.4f} {p.t:10.6f} {p.value:12.9f} {p.gradient_norm:9.1e}  {p.kind}")
    print()
    for kind, n in sorted(kinds.items()):
        print(f"{kind:>12}: {n}")
    print("special points:")
    for p in fam.special_points():
        print(f"  t={p.t:.6f} tau={p.tau:.6f} phi={p.value:.9f} {p.kind}")


if __name__ == "__main__":
    main()
