"""Certified brackets on the complex Sidon constant for a few small sets."""

import argparse
import json
import time

from sidonlab.duality import SidonConfig, sidon_constant_bracket
from sidonlab.minimax import MinimaxConfig, minimax_optimize
from sidonlab.trigpoly import FrequencySet

SETS = ["0,1", "0,1,2", "0,1,3", "0,1,2,3", "0,1,2,4", "0,1,2,3,4"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("sets", nargs="*", default=SETS)
    ap.add_argument("--starts", type=int, default=16)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    rows = []
    for text in args.sets:
        freqs = FrequencySet.parse(text)
        t0 = time.perf_counter()
        mm = minimax_optimize(freqs, MinimaxConfig(starts=args.starts))
        br = sidon_constant_bracket(freqs, SidonConfig(), minimax_value=mm.value)
        rows.append({"set": text, "lower": br.lower, "upper": br.upper, "minimax": mm.value,
                     "seconds": time.perf_counter() - t0})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'set':>12} {'lower':>12} {'upper':>12} {'width':>10} {'minimax':>10} {'secs':>6}")
    for r in rows:
        print(f"{r['set']:>12} {r['lower']:12.8f} {r['upper']:12.8f} {r['upper'] - r['lower']:10.2e} "
              f"{r['minimax']:10.7f} {r['seconds']:6.1f}")


if __name__ == "__main__":
    main()
