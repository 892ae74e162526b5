import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shockstab.convex_calculus import bounds_on_box, make_pair, normalized_flux
from shockstab.errors import HypothesisViolation
from shockstab.scalar_solver import (
    Front,
    PiecewiseConstantProfile,
    RAREFACTION,
    SHOCK,
    Scenario,
    shock_profile,
    solve_scenario,
    track,
)
from shockstab.shift_tracker import (
    FREE,
    RIDING,
    breakpoint_union,
    filippov_speed,
    inclusion_violation,
    integrate_shift,
    track_shift_pair,
    uniqueness_probe,
)

from strategies import perturbations


# --- speed decisions ---------------------------------------------------------------

def test_speed_at_continuity_point(burgers):
    dec = filippov_speed(burgers, PiecewiseConstantProfile(0.0, 1.0, ()), 0.3, 0.0)
    assert dec.mode == FREE and dec.speed == pytest.approx(2 / 3, abs=1e-15)


def test_speed_trapped_on_shock(burgers):
    prof = shock_profile(1.0, 0.0, pair=burgers)
    dec = filippov_speed(burgers, prof, 0.0, 0.5)
    assert dec.mode == RIDING and dec.speed == 0.5 and dec.front == 0


def test_speed_detaches_left(burgers):
    prof = shock_profile(1.0, 0.9, pair=burgers)
    for tie in ("left", "right"):
        dec = filippov_speed(burgers, prof, 0.0, -5.0, tie=tie)
        assert dec.mode == FREE and dec.speed == pytest.approx(-1.0, abs=1e-15)


def test_speed_detaches_right(burgers):
    prof = shock_profile(1.0, 0.9, pair=burgers)
    dec = filippov_speed(burgers, prof, 0.0, 5.0)
    assert dec.mode == FREE and dec.speed == pytest.approx((2 * 0.9 + 5.0) / 3, abs=1e-15)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-3, 3), st.sampled_from(["left", "right"]))
def test_speed_is_in_filippov_interval(a, b, C, tie):
    pair = make_pair("quartic", "quadratic_half")
    if a == b:
        return
    kind = SHOCK if a > b else RAREFACTION
    prof = PiecewiseConstantProfile(0.0, a, (Front(0.0, a, b, float(pair.rh_speed(a, b)), kind),))
    dec = filippov_speed(pair, prof, 0.0, C, tie=tie)
    fa, fb = normalized_flux(pair, a, C), normalized_flux(pair, b, C)
    assert min(fa, fb) - 1e-12 <= dec.speed <= max(fa, fb) + 1e-12
    if dec.mode == RIDING:
        assert fb <= dec.speed <= fa


def test_free_speeds_increase_with_anchor():
    pair = make_pair("cosh", "quartic_entropy")
    prof = PiecewiseConstantProfile(0.0, 0.4, ())
    speeds = [filippov_speed(pair, prof, 0.0, C).speed for C in np.linspace(-2, 2, 9)]
    assert np.all(np.diff(speeds) > 0)


# --- integration ------------------------------------------------------------------

def test_rides_unperturbed_shock(burgers):
    sc = Scenario(burgers, 1.0, 0.0, T=10.0)
    ev = solve_scenario(sc)
    curve = integrate_shift(ev, sc.C_L, 0.0, 0.0)
    t = np.linspace(0, 10, 101)
    assert np.max(np.abs(curve.position(t) - sc.sigma * t)) <= 1e-10
    assert set(curve.modes) == {RIDING}


def test_constant_field_is_straight_line(burgers):
    ev = track(PiecewiseConstantProfile(0.0, 0.7, ()), burgers, 5.0, 1e-3)
    curve = integrate_shift(ev, -0.2, 1.0, 0.0)
    slope = normalized_flux(burgers, 0.7, -0.2)
    assert curve.positions[-1] == pytest.approx(1.0 + 5.0 * slope, abs=1e-14)
    assert len(curve.speeds) == 1


def test_start_at_horizon(burgers):
    ev = solve_scenario(Scenario(burgers, 1.0, 0.0, T=2.0))
    curve = integrate_shift(ev, 1.0, 1.0, 2.0)
    assert curve.times == [2.0] and curve.positions == [1.0] and curve.speeds == []


def test_zero_perturbation_pair(burgers):
    pair = track_shift_pair(Scenario(burgers, 1.0, 0.0, T=4.0))
    t = np.linspace(0, 4, 9)
    assert np.array_equal(pair.left.position(t), pair.right.position(t))
    assert np.max(np.abs(pair.xbar.position(t))) == 0.0


def test_hypothesis_rejected(burgers):
    with pytest.raises(HypothesisViolation):
        track_shift_pair(Scenario(burgers, 0.0, 1.0))


@pytest.fixture(scope="module")
def square_pulse():
    pair = make_pair("burgers", "quadratic_half")
    sc = Scenario(pair, 1.0, 0.0, ((-1.0, 0.0, 0.5),), T=10.0)
    ev = solve_scenario(sc)
    return sc, ev, track_shift_pair(sc, ev)


def test_square_pulse_non_crossing(square_pulse):
    _, _, sp = square_pulse
    t = breakpoint_union(sp.left, sp.right)
    assert np.all(sp.right.position(t) <= sp.left.position(t) + 1e-9)
    assert sp.max_crossing <= 1e-9


def test_admissible_shifts_between_curves(square_pulse):
    sc, _, sp = square_pulse
    t = breakpoint_union(sp.left, sp.right)
    xl, xr = sp.left.position(t), sp.right.position(t)
    for curve in sp.candidates().values():
        x = curve.position(t) + sc.sigma * t
        assert np.all(xr - 1e-9 <= x) and np.all(x <= xl + 1e-9)


def test_curve_structure(square_pulse):
    sc, ev, sp = square_pulse
    box = bounds_on_box(sc.pair, -2, 2)
    for c in (sp.left, sp.right):
        dt = np.diff(c.times)
        dx = np.diff(c.positions)
        assert np.allclose(dx, np.asarray(c.speeds) * dt, rtol=0, atol=1e-12)
        assert c.max_speed() <= box.lipschitz
        assert np.all(dt > 0)


def test_riding_speed_equals_front_speed(square_pulse):
    _, ev, sp = square_pulse
    for c in (sp.left, sp.right):
        rides = [(0.5 * (c.times[k] + c.times[k + 1]), c.speeds[k], c.front_ids[k])
                 for k in range(len(c.speeds)) if c.modes[k] == RIDING]
        rides.sort()
        times = [r[0] for r in rides]
        for (t, fs), (_, v, fid) in zip(ev.sample(times), rides):
            k = int(np.flatnonzero(fs.ids == fid)[0])
            assert abs(v - fs.speed[k]) <= 1e-12


def test_inclusion_holds(square_pulse):
    _, ev, sp = square_pulse
    rng = np.random.default_rng(0)
    times = rng.uniform(0, 10, 1000)
    for c in (sp.left, sp.right):
        assert inclusion_violation(ev, c, times) <= 1e-9


def test_curve_csv(square_pulse):
    _, _, sp = square_pulse
    text = sp.left.to_csv().splitlines()
    assert text[0] == "time,position,speed,mode"
    assert len(text) == len(sp.left.times) + 1


@settings(max_examples=15)
@given(perturbations(), st.sampled_from([("burgers", "quadratic"), ("quartic", "quartic_entropy"),
                                         ("cosh", "quadratic_half")]))
def test_non_crossing_random(pert, names):
    sc = Scenario(make_pair(*names), 1.0, 0.0, pert, T=6.0)
    sp = track_shift_pair(sc)
    assert sp.max_crossing <= 1e-9
    ev = sp.evolution
    times = np.linspace(0, 6, 200)
    assert inclusion_violation(ev, sp.left, times) <= 1e-9
    assert inclusion_violation(ev, sp.right, times) <= 1e-9


# --- uniqueness probe ----------------------------------------------------------------

def test_probe_smooth_region(burgers):
    ev = solve_scenario(Scenario(burgers, 1.0, 0.0, ((-1.0, 0.0, 0.5),), T=10.0))
    res = uniqueness_probe(ev, 1.0, -6.0, 0.2)
    assert res.spread == 0.0 and res.unique


def test_probe_on_persistent_shock(square_pulse):
    sc, ev, sp = square_pulse
    t0 = 0.5
    x0 = float(sp.left.position(t0))
    res = uniqueness_probe(ev, t0, x0, 0.5)
    assert res.spread <= 1e-8 * (sc.T - t0) and res.unique


def test_probe_flags_fan_center(burgers):
    fan = PiecewiseConstantProfile(0.0, 0.0, (Front(0.0, 0.0, 1.0, 0.5, RAREFACTION),))
    ev = track(fan, burgers, 1.0, 1e-3)
    res = uniqueness_probe(ev, 0.0, 0.0, 0.5)
    assert res.spread > res.threshold and not res.unique
