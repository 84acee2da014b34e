"""Heat map of phi(t, tau) with the critical set overlaid. Needs matplotlib."""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sidonlab import extremal_family as fam

MARKERS = {"global-max": "^", "global-min": "v", "local-min": "s", "saddle": "x"}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="phi.png")
    ap.add_argument("--n", type=int, default=301)
    args = ap.parse_args()

    t = np.linspace(-np.pi, np.pi, args.n)
    tau = np.linspace(0, np.pi, args.n)
    T, TAU = np.meshgrid(t, tau)
    Z = fam.phi(T, TAU)

    fig, ax = plt.subplots(figsize=(7, 6))
    im = ax.pcolormesh(T, TAU, Z, shading="auto", cmap="viridis")
    fig.colorbar(im, ax=ax, label="phi")
    seen = set()
    for tv in tau[:: max(1, args.n // 40)]:
        for p in fam.critical_points(tv):
            t0 = (p.t + np.pi) % (2 * np.pi) - np.pi
            label = p.kind if p.kind not in seen else None
            seen.add(p.kind)
            ax.plot(t0, tv, MARKERS.get(p.kind, "o"), color="w", ms=4, label=label)
    for p in fam.special_points():
        for t0 in {p.t, -p.t}:
            label = p.kind if p.kind not in seen else None
            seen.add(p.kind)
            ax.plot((t0 + np.pi) % (2 * np.pi) - np.pi, p.tau, MARKERS.get(p.kind, "o"), color="r", ms=7, label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("tau")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
