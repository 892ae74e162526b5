import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shockstab.convex_calculus import (
    ENTROPY_NAMES,
    FLUX_NAMES,
    FluxEntropyPair,
    bounds_on_box,
    make_pair,
    monotone_gap,
    normalized_flux,
    normalized_flux_grad,
    rel_entropy,
    rel_entropy_flux,
)
from shockstab.errors import ConfigurationError, InputError

ALL_PAIRS = [(f, e) for f in FLUX_NAMES for e in ENTROPY_NAMES]
states = st.floats(-3.0, 3.0, allow_nan=False)
pair_names = st.sampled_from(ALL_PAIRS)


def quartic_entropy_only():
    # eta = U^4 (not in the registry; used for one frozen value)
    return FluxEntropyPair(
        lambda u: 0.5 * u * u, lambda u: 1.0 * u, lambda u: np.ones_like(u),
        lambda u: u**4, lambda u: 4 * u**3, lambda u: 12 * u**2, name="burgers/U^4",
    )


# --- frozen values -----------------------------------------------------------

def test_rel_entropy_values(burgers):
    assert rel_entropy(burgers, 3.0, 1.0) == 2.0
    for f, e in ALL_PAIRS:
        assert rel_entropy(make_pair(f, e), 0.7, 0.7) == 0.0
    assert rel_entropy(quartic_entropy_only(), 1.0, 0.0) == 1.0


@pytest.mark.parametrize("method", ["quadrature", "adaptive", "closed"])
def test_rel_entropy_flux_values(burgers, method):
    assert rel_entropy_flux(burgers, 1.0, 0.0, method) == pytest.approx(1 / 3, abs=1e-12)
    assert rel_entropy_flux(burgers, 2.0, 1.0, method) == pytest.approx(5 / 6, abs=1e-12)
    assert rel_entropy_flux(burgers, 0.4, 0.4, method) == 0.0


def test_normalized_flux_values(burgers):
    assert normalized_flux(burgers, 1.0, 0.0) == pytest.approx(2 / 3, abs=1e-13)
    assert normalized_flux(burgers, -1.0, 2.0) == pytest.approx(0.0, abs=1e-13)
    for f, e in ALL_PAIRS:
        p = make_pair(f, e)
        assert normalized_flux(p, 0.8, 0.8) == pytest.approx(float(p.flux_deriv(0.8)), abs=1e-15)


def test_burgers_gradient_is_constant(burgers):
    U = np.linspace(-3, 3, 41)
    C = np.linspace(2.5, -2.5, 41)
    dU, dC = normalized_flux_grad(burgers, U, C)
    assert np.allclose(dU, 2 / 3, atol=1e-12)
    assert np.allclose(dC, 1 / 3, atol=1e-12)


def test_unknown_names_and_closed_form_absence():
    with pytest.raises(InputError):
        make_pair("sine", "quadratic")
    with pytest.raises(InputError):
        make_pair("burgers", "cubic")
    with pytest.raises(InputError):
        rel_entropy_flux(make_pair("cosh", "quadratic"), 1.0, 0.0, method="closed")
    with pytest.raises(InputError):
        normalized_flux(make_pair("burgers", "quadratic"), 1.0, 0.0, method="nope")


def test_bounds_burgers():
    box = bounds_on_box(make_pair("burgers", "quadratic_half"), -2, 2)
    assert (box.eps_A, box.L_A, box.eps_eta, box.L_eta) == (1, 1, 1, 1)
    assert box.eps_fC == pytest.approx(1 / 3)
    assert box.L_fU == 1.0
    assert box.L_fU_sharp == pytest.approx(2 / 3)
    assert box.sup_Aprime == pytest.approx(2 * 1.01)


def test_bounds_quartic_exact_and_margin():
    p = make_pair("quartic", "quadratic_half")
    exact = bounds_on_box(p, -1, 1, margin=0.0)
    assert exact.eps_A == pytest.approx(1.0, abs=1e-12)
    assert exact.L_A == pytest.approx(2.0, abs=1e-12)
    padded = bounds_on_box(p, -1, 1)
    assert padded.eps_A < 1.0 < 2.0 < padded.L_A
    assert padded.eps_A == pytest.approx(0.99)
    assert padded.L_A == pytest.approx(2.01)


def test_bounds_errors():
    with pytest.raises(InputError):
        bounds_on_box(make_pair(), 1.0, 1.0)
    flat = FluxEntropyPair(
        lambda u: u**4, lambda u: 4 * u**3, lambda u: 12 * u**2,
        lambda u: 0.5 * u * u, lambda u: u, lambda u: np.ones_like(u), name="flat",
    )
    with pytest.raises(ConfigurationError):
        bounds_on_box(flat, -1, 1)
    with pytest.raises(ConfigurationError):
        flat.check_convexity(-1, 1)


@pytest.mark.parametrize("flux,entropy", ALL_PAIRS)
def test_box_invariants(flux, entropy):
    box = bounds_on_box(make_pair(flux, entropy), -3, 3)
    assert 0 < box.eps_A <= box.L_A
    assert 0 < box.eps_eta <= box.L_eta
    assert box.eps_fC > 0 and box.L_fU >= box.L_fU_sharp > 0


@pytest.mark.parametrize("flux,entropy", ALL_PAIRS)
def test_derivative_consistency(flux, entropy):
    res = make_pair(flux, entropy).derivative_residuals(-3, 3)
    assert max(res.values()) <= 1e-6


def test_gap_examples():
    gap, bound = monotone_gap((lambda s: 2 * s, lambda s: 2 + 0 * s), (lambda s: s, lambda s: 1 + 0 * s))
    assert gap == pytest.approx(1 / 6, abs=1e-14) and bound == pytest.approx(1 / 6, abs=1e-15)
    a = b = 0.5
    gap, bound = monotone_gap((lambda s: 1 + a * (s - 0.5), lambda s: a + 0 * s),
                              (lambda s: b * s, lambda s: b + 0 * s))
    assert gap == pytest.approx(1 / 48, abs=1e-14) and bound == pytest.approx(1 / 48, abs=1e-15)
    gap, bound = monotone_gap((lambda s: 2 * s, lambda s: 2 + 0 * s),
                              (lambda s: s**3 + s, lambda s: 3 * s**2 + 1))
    assert bound == pytest.approx(1 / 6)
    # int 2s (s^3+s) - int (s^3+s) = 2/5 + 2/3 - 3/4 = 19/60
    assert gap == pytest.approx(19 / 60, abs=1e-12)


def test_gap_preconditions():
    with pytest.raises(InputError):
        monotone_gap((lambda s: 3 * s, lambda s: 3 + 0 * s), (lambda s: s, lambda s: 1 + 0 * s))
    with pytest.raises(InputError):
        monotone_gap((lambda s: 1 + 0 * s, lambda s: 0 * s), (lambda s: s, lambda s: 1 + 0 * s))
    with pytest.raises(InputError):
        monotone_gap((lambda s: 2 * s, lambda s: 2 + 0 * s), (lambda s: -s, lambda s: -1 + 0 * s))


# --- properties ----------------------------------------------------------------

@given(pair_names, states, states)
def test_rel_entropy_nonnegative(names, U, C):
    p = make_pair(*names)
    v = rel_entropy(p, U, C)
    assert v >= 0.0
    if U != C and abs(U - C) > 1e-6:
        assert v > 0.0


@given(pair_names, states, states)
def test_factorization(names, U, C):
    p = make_pair(*names)
    if abs(U - C) < 1e-6 * (1 + abs(C)):
        return
    F = rel_entropy_flux(p, U, C)
    assert abs(F - normalized_flux(p, U, C) * rel_entropy(p, U, C)) <= 1e-9 * (1 + abs(F))


@given(pair_names, states, states)
def test_quadrature_matches_adaptive(names, U, C):
    p = make_pair(*names)
    F = rel_entropy_flux(p, U, C)
    assert F == pytest.approx(rel_entropy_flux(p, U, C, "adaptive"), rel=1e-9, abs=1e-10)


@pytest.mark.parametrize("flux,entropy", ALL_PAIRS)
def test_quadratic_domination(flux, entropy):
    p = make_pair(flux, entropy)
    box = bounds_on_box(p, -3, 3)
    rng = np.random.default_rng(1)
    U, C = rng.uniform(-3, 3, (2, 2000))
    F = rel_entropy_flux(p, U, C)
    assert np.all(np.abs(F) <= 0.5 * box.L_eta * box.sup_Aprime * (U - C) ** 2 + 1e-12)


@pytest.mark.parametrize("flux,entropy", ALL_PAIRS)
def test_diagonal_continuity_first_order(flux, entropy):
    p = make_pair(flux, entropy)
    C = 0.6
    errs = [abs(normalized_flux(p, C + 10.0**-k, C) - float(p.flux_deriv(C))) for k in range(1, 6)]
    assert errs[-1] < 1e-4
    # observed order in h = 10^-k is at least one
    orders = [math.log10(errs[k] / errs[k + 1]) for k in range(len(errs) - 1)]
    assert min(orders) >= 0.9


@pytest.mark.parametrize("flux,entropy", ALL_PAIRS)
def test_gradient_matches_finite_differences(flux, entropy):
    p = make_pair(flux, entropy)
    rng = np.random.default_rng(2)
    U, C = rng.uniform(-2.5, 2.5, (2, 200))
    keep = np.abs(U - C) > 0.1
    U, C = U[keep], C[keep]
    h = 1e-5
    fdU = (normalized_flux(p, U + h, C) - normalized_flux(p, U - h, C)) / (2 * h)
    fdC = (normalized_flux(p, U, C + h) - normalized_flux(p, U, C - h)) / (2 * h)
    dU, dC = normalized_flux_grad(p, U, C)
    assert np.max(np.abs(dU - fdU) / (1e-3 + np.abs(fdU))) <= 1e-5
    assert np.max(np.abs(dC - fdC) / (1e-3 + np.abs(fdC))) <= 1e-5


@pytest.mark.parametrize("flux", FLUX_NAMES)
def test_diagonal_gradient_matches_finite_differences(flux):
    p = make_pair(flux, "quadratic_half")
    for C in (-1.3, 0.0, 0.9):
        h = 1e-4
        fdU = (normalized_flux(p, C + h, C) - normalized_flux(p, C - h, C)) / (2 * h)
        dU, dC = normalized_flux_grad(p, C, C)
        assert dU == pytest.approx(fdU, abs=1e-6)
        fdC = (normalized_flux(p, C, C + h) - normalized_flux(p, C, C - h)) / (2 * h)
        assert dC == pytest.approx(fdC, abs=1e-6)


@pytest.mark.parametrize("flux,entropy", ALL_PAIRS)
def test_gradient_bounds_on_box(flux, entropy):
    p = make_pair(flux, entropy)
    box = bounds_on_box(p, -3, 3)
    rng = np.random.default_rng(3)
    U, C = rng.uniform(-3, 3, (2, 10_000))
    dU, dC = normalized_flux_grad(p, U, C)
    assert np.min(dU) >= -1e-8
    assert np.max(dU) <= box.L_fU + 1e-8
    assert np.min(dC) >= box.eps_fC - 1e-8
    if box.quadratic_entropy:
        assert np.max(dU) <= box.L_fU_sharp + 1e-8


@given(states, states)
def test_closed_form_agreement(U, C):
    p = make_pair("burgers", "quadratic")
    assert rel_entropy_flux(p, U, C) == pytest.approx(rel_entropy_flux(p, U, C, "closed"), abs=1e-9)
    assert normalized_flux(p, U, C) == pytest.approx(normalized_flux(p, U, C, "closed"), abs=1e-9)


@given(pair_names, states, states, st.floats(0.01, 2.0))
def test_f_monotone_in_C(names, U, C, dC):
    p = make_pair(*names)
    assert normalized_flux(p, U, C + dC) > normalized_flux(p, U, C)


@given(st.floats(0.05, 2.0), st.floats(0.05, 2.0), st.floats(-2, 2))
def test_gap_linear_family_equality(a, b, c):
    gap, bound = monotone_gap((lambda s: 1 + a * (s - 0.5), lambda s: a + 0 * s),
                              (lambda s: b * s + c, lambda s: b + 0 * s), a, b)
    assert abs(gap - bound) <= 1e-12
