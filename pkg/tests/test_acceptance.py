"""Acceptance criteria 1-10, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly as ``python tests/test_acceptance.py``.
"""

import sys

import numpy as np
import pytest

import conftest
from shockstab.cli_harness import (
    child_seeds,
    closed_form_oracle,
    gap_suite,
    gradient_suite,
    random_scenario,
    run_suite,
)
from shockstab.convex_calculus import make_pair
from shockstab.scalar_solver import (
    Front,
    PiecewiseConstantProfile,
    RAREFACTION,
    Scenario,
    compare_profiles,
    discretize_initial,
    make_nodes,
    solve_scenario,
    track,
)
from shockstab.shift_tracker import integrate_shift, track_shift_pair, uniqueness_probe

SEED = 0
COUNT = 25
DELTA = 1e-3
RUNTIME_TARGET = 5.0


def record(number, title, ok, detail):
    conftest.ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2} {title}: {detail}")
    return ok


def worst(outcomes, check):
    """Largest ``value - bound`` over outcomes (positive means violated)."""
    return max(o.checks[check]["value"] - o.checks[check]["bound"] for o in outcomes)


@pytest.fixture(scope="module")
def theorem():
    res = run_suite("theorem", seed=SEED, count=COUNT, delta_rare=DELTA, emit=False)
    burgers = [o for o in res.outcomes if o.name.endswith("-burgers")]
    quartic = [o for o in res.outcomes if o.name.endswith("-quartic")]
    assert len(burgers) == len(quartic) == COUNT
    return res, burgers, quartic


@pytest.fixture(scope="module")
def theorem_fine():
    res = run_suite("theorem", seed=SEED, count=COUNT, delta_rare=DELTA / 2, emit=False)
    return [o for o in res.outcomes if o.name.endswith("-burgers")]


@pytest.fixture(scope="module")
def oracle():
    return run_suite("oracle", seed=SEED, count=5, emit=False)


def raw(outcomes, check):
    """Largest observed excess before any tolerance is applied."""
    return max(o.checks[check]["value"] for o in outcomes)


def all_runs(theorem, theorem_fine, oracle):
    stock = [o for o in oracle.outcomes if o.name != "closed-form"]
    return theorem[0].outcomes + theorem_fine + stock


def test_criterion_01_l2_theorem_suite(theorem, theorem_fine):
    _, burgers, _ = theorem
    coarse = worst(burgers, "l2_contraction")
    fine = worst(theorem_fine, "l2_contraction")
    halves = coarse <= 0 or fine <= 0.5 * coarse
    slowest = max(o.wall_time for o in burgers)
    ok = coarse <= 0 and halves and slowest < RUNTIME_TARGET
    assert record(1, "L2 bound, 25 Burgers scenarios",
                  ok, f"worst margin {coarse:.3e} (delta/2: {fine:.3e}), raw excess "
                  f"{raw(burgers, 'l2_contraction'):.2e}, slowest {slowest:.2f}s")


def test_criterion_02_general_entropy(theorem):
    _, _, quartic = theorem
    m = worst(quartic, "shifted_entropy")
    assert record(2, "shifted entropy bound, quartic flux/entropy", m <= 0,
                  f"worst margin {m:.3e}, raw excess {raw(quartic, 'shifted_entropy'):.2e}")


def test_criterion_03_non_crossing(theorem, theorem_fine, oracle):
    runs = all_runs(theorem, theorem_fine, oracle)
    sep = max(o.checks["non_crossing"]["value"] for o in runs)
    assert record(3, "non-crossing", sep <= 1e-9, f"max x_R - x_L {sep:.3e} over {len(runs)} runs")


def test_criterion_04_shift_bound(theorem, theorem_fine, oracle):
    runs = all_runs(theorem, theorem_fine, oracle)
    m = worst(runs, "shift_bound")
    assert record(4, "shift bound (zero tolerance)", m <= 0, f"worst |xbar| - bound {m:.3e}")


def test_criterion_05_entropy_monotone(theorem, theorem_fine, oracle):
    runs = all_runs(theorem, theorem_fine, oracle)
    m = worst(runs, "entropy_monotone")
    assert record(5, "entropy monotonicity", m <= 0,
                  f"worst rise minus tol_E {m:.3e}, raw rise {raw(runs, 'entropy_monotone'):.2e}")


def test_criterion_06_kruzkov():
    pair = make_pair("burgers", "quadratic")
    T, half_width = 10.0, 30.0
    seeds = child_seeds(SEED + 6, 20)
    worst_rise = -np.inf
    for k in range(10):
        a = random_scenario(seeds[2 * k], T=T).build()
        b = random_scenario(seeds[2 * k + 1], T=T).build()
        a, b = (Scenario(pair, 1.0, 0.0, s.perturbation, T, DELTA) for s in (a, b))
        states = np.concatenate([discretize_initial(a).states, discretize_initial(b).states])
        nodes = make_nodes(states, DELTA)
        ea, eb = solve_scenario(a, nodes), solve_scenario(b, nodes)
        speed = float(np.max(np.abs(pair.flux_deriv(states))))
        times = np.linspace(0.0, T, 101)
        d = [compare_profiles(pa, pb, "L1", (-half_width + speed * t, half_width - speed * t))
             for pa, pb, t in zip(ea.snapshots(times), eb.snapshots(times), times)]
        worst_rise = max(worst_rise, float(np.max(np.diff(d))))
    assert record(6, "Kruzkov contraction, 10 pairs", worst_rise <= 1e-8,
                  f"largest increase of cone L1 distance {worst_rise:.3e}")


def test_criterion_07_calculus():
    gap = gap_suite(SEED, 1000)
    grad = gradient_suite(SEED)
    checks = {**gap, **grad}
    bad = [k for k, c in checks.items() if not c["passed"]]
    detail = (f"gap slack {gap['gap_general']['value']:.3e}, linear equality "
              f"{gap['gap_linear_equality']['value']:.3e}, {len(grad)} gradient bounds")
    assert record(7, "calculus suites", not bad, detail + (f", failed {bad}" if bad else "")), bad


def test_criterion_08_closed_form():
    c = closed_form_oracle(SEED)
    e = max(c["closed_form_F"]["value"], c["closed_form_f"]["value"])
    assert record(8, "closed-form oracle, 1e4 points", e <= 1e-9, f"max abs error {e:.3e}")


def test_criterion_09_solver_oracle(oracle):
    stock = [o for o in oracle.outcomes if o.name != "closed-form"]
    keys = ("godunov_l1", "rh_residual", "conservation", "oleinik")
    bad = [(o.name, k) for o in stock for k in keys if not o.checks[k]["passed"]]
    l1 = max(o.checks["godunov_l1"]["value"] / o.checks["godunov_l1"]["bound"] for o in stock)
    rh = max(o.checks["rh_residual"]["value"] for o in stock)
    ok = len(stock) == 5 and not bad
    assert record(9, "solver oracle, 5 stock scenarios", ok,
                  f"L1/bound {l1:.3f}, RH residual {rh:.1e}" + (f", failed {bad}" if bad else "")), bad


def test_criterion_10_filippov():
    pair = make_pair("burgers", "quadratic_half")
    plain = Scenario(pair, 1.0, 0.0, T=10.0)
    curve = integrate_shift(solve_scenario(plain), plain.C_L, 0.0, 0.0)
    t = np.linspace(0.0, 10.0, 1001)
    ride = float(np.max(np.abs(curve.position(t) - plain.sigma * t)))

    pulse = Scenario(pair, 1.0, 0.0, ((-1.0, 0.0, 0.5),), T=10.0)
    ev = solve_scenario(pulse)
    sp = track_shift_pair(pulse, ev)
    spread_ok, spreads = True, []
    for t0, x0, C in ((0.5, float(sp.left.position(0.5)), 0.5), (1.0, -6.0, 0.2), (4.0, 8.0, 0.8)):
        res = uniqueness_probe(ev, t0, x0, C)
        spreads.append(res.spread)
        spread_ok &= res.spread <= 1e-8 * (pulse.T - t0)

    fan = PiecewiseConstantProfile(0.0, 0.0, (Front(0.0, 0.0, 1.0, 0.5, RAREFACTION),))
    flagged = not uniqueness_probe(track(fan, pair, 1.0, DELTA), 0.0, 0.0, 0.5).unique
    ok = ride <= 1e-10 and spread_ok and flagged
    assert record(10, "Filippov probes", ok,
                  f"riding error {ride:.1e}, max spread {max(spreads):.1e}, fan center flagged {flagged}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
