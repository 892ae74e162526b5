"""Plot fronts, the two shift curves and the entropy ledger of one scenario file to an image.

Example::

    python scripts/plot_curves.py scenarios/square-pulse.txt --out square-pulse.png
"""

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from shockstab.cli_harness import load_scenario  # noqa: E402
from shockstab.entropy_monitor import stability_report  # noqa: E402
from shockstab.scalar_solver import solve_scenario  # noqa: E402
from shockstab.shift_tracker import track_shift_pair  # noqa: E402


def front_traces(evolution, samples=400):
    """Front positions on a uniform time grid, flattened to scatter coordinates."""
    xs, ts = [], []
    for t, fs in evolution.sample(np.linspace(0.0, evolution.t_end, samples)):
        x = fs.positions(t)
        xs.append(x)
        ts.append(np.full_like(x, t))
    return np.concatenate(xs), np.concatenate(ts)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("scenario")
    p.add_argument("--out", default="curves.png")
    args = p.parse_args(argv)

    spec = load_scenario(args.scenario)
    sc = spec.build()
    ev = solve_scenario(sc)
    sp = track_shift_pair(sc, ev)
    rep = stability_report(sc, ev, sp)
    L = rep.ledger
    t = np.asarray(L.times)

    fig, (ax, bx) = plt.subplots(1, 2, figsize=(11, 4.5))
    fx, ft = front_traces(ev)
    ax.scatter(fx, ft, s=0.2, color="0.7", rasterized=True)
    ax.plot(L.xL, t, label="x_L")
    ax.plot(L.xR, t, "--", label="x_R")
    ax.plot(sc.sigma * t + np.asarray(L.xbar), t, ":", color="k", label="shifted shock")
    ax.set(xlabel="x", ylabel="t", title=f"{spec.name}: fronts and shift curves")
    ax.legend(loc="upper left")

    bx.plot(t, L.E_total, label="E(t)")
    bx.plot(t, L.E_shifted, label="shifted entropy")
    bx.axhline(rep.initial_entropy + rep.tol_E, color="r", lw=0.8, label="E(0) + tol_E")
    bx.set(xlabel="t", title="relative entropy ledger")
    bx.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out} ({'PASS' if rep.passed else 'FAIL'})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
