"""Run the randomized stability suite and write artifacts plus a one-line summary per scenario.

Example::

    python scripts/run_theorem_suite.py --count 25 --seed 0 --out results/theorem
"""

import argparse
import sys

from shockstab.cli_harness import emit_artifacts, run_suite

CHECKS = ("l2_contraction", "shifted_entropy", "non_crossing", "shift_bound", "entropy_monotone")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta-rare", type=float, default=1e-3)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="artifact directory (skipped if omitted)")
    args = p.parse_args(argv)

    res = run_suite("theorem", args.seed, args.count, args.delta_rare, args.workers, emit=args.out is not None)
    print("scenario," + ",".join(CHECKS) + ",wall_s")
    for o in res.outcomes:
        # raw excess over the reference value; negative or zero means the bound holds without slack
        cells = [f"{o.checks[k]['value']:.3e}" for k in CHECKS]
        print(",".join([o.name, *cells, f"{o.wall_time:.2f}"]))
    if args.out:
        emit_artifacts(res, args.out)
    print(f"# {'PASS' if res.passed else 'FAIL'}: {len(res.outcomes)} scenarios, "
          f"{len(res.failures())} failing", file=sys.stderr)
    return 0 if res.passed else 1


if __name__ == "__main__":
    sys.exit(main())
