r"""Relative entropy calculus for a strictly convex flux/entropy pair.

For a flux :math:`A` and entropy :math:`\eta` (both strictly convex) and a
constant state :math:`C`:

* relative entropy   :math:`\eta(U|C) = \eta(U) - \eta(C) - \eta'(C)(U - C)`
* relative flux      :math:`F(U,C) = \int_C^U (\eta'(w) - \eta'(C)) A'(w)\,dw`
* normalized flux    :math:`f(U,C) = F(U,C) / \eta(U|C)`, with :math:`f(C,C) = A'(C)`

All integrals are evaluated on the unit interval after the substitution
``w = C + s (U - C)``.  In that form ``f`` is a weighted mean of ``A'`` with
non-negative weights, which keeps it accurate arbitrarily close to the
diagonal ``U = C`` where the ratio ``F / eta(U|C)`` is a 0/0 form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from shockstab.errors import ConfigurationError, InputError
from shockstab.quadrature import QuadratureError, adaptive_gl, unit_rule

Scalar = Callable[[np.ndarray], np.ndarray]

# |U - C| below DIAGONAL_REL * (1 + |C|) is treated as the diagonal.
DIAGONAL_REL = 1e-6
BOX_SAMPLES = 4097
BOX_MARGIN = 0.01
GAP_GRID = 2049
CONVEX_RTOL = 1e-12

_RULE_START = 24
_RULE_MAX = 384
_RULE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class FluxEntropyPair:
    """Strictly convex flux ``A`` and entropy ``eta`` with two derivatives each.

    Every callable must accept numpy arrays. ``closed_F``/``closed_f`` are
    optional exact formulas used as oracles for the quadrature path.
    """

    flux: Scalar
    flux_deriv: Scalar
    flux_second: Scalar
    entropy: Scalar
    entropy_deriv: Scalar
    entropy_second: Scalar
    name: str = "custom"
    closed_F: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    closed_f: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    @property
    def flux_name(self) -> str:
        return self.name.split("/")[0]

    @property
    def entropy_name(self) -> str:
        return self.name.split("/")[-1]

    def rh_speed(self, left, right):
        """Rankine-Hugoniot speed of the jump ``left -> right`` (``A'`` if equal)."""
        left = np.asarray(left, dtype=float)
        right = np.asarray(right, dtype=float)
        jump = right - left
        safe = np.where(jump == 0.0, 1.0, jump)
        speed = (self.flux(right) - self.flux(left)) / safe
        return np.where(jump == 0.0, self.flux_deriv(left), speed)

    def check_convexity(self, lower: float, upper: float, samples: int = 1025) -> None:
        """Raise :class:`ConfigurationError` unless ``A'' > 0`` and ``eta'' > 0`` on the interval."""
        xs = np.linspace(lower, upper, samples)
        for label, fn in (("flux", self.flux_second), ("entropy", self.entropy_second)):
            vals = np.asarray(fn(xs), dtype=float)
            if not np.all(vals > 0.0):
                bad = xs[np.argmin(vals)]
                raise ConfigurationError(
                    f"{self.name}: {label} second derivative not positive at {bad:.6g}"
                )

    def derivative_residuals(self, lower: float, upper: float, samples: int = 257) -> dict[str, float]:
        """Max relative mismatch between central differences and the stated derivatives."""
        xs = np.linspace(lower, upper, samples)
        out = {}
        chains = {
            "flux'": (self.flux, self.flux_deriv),
            "flux''": (self.flux_deriv, self.flux_second),
            "entropy'": (self.entropy, self.entropy_deriv),
            "entropy''": (self.entropy_deriv, self.entropy_second),
        }
        for label, (fn, dfn) in chains.items():
            h = 1e-5 * (1.0 + np.abs(xs))
            fd = (fn(xs + h) - fn(xs - h)) / (2.0 * h)
            exact = dfn(xs)
            out[label] = float(np.max(np.abs(fd - exact) / (1.0 + np.abs(exact))))
        return out


# --- registry ---------------------------------------------------------------

_FLUXES: dict[str, tuple[Scalar, Scalar, Scalar]] = {
    "burgers": (
        lambda u: 0.5 * u * u,
        lambda u: 1.0 * u,
        lambda u: np.ones_like(np.asarray(u, dtype=float)),
    ),
    "quartic": (
        lambda u: 0.5 * u * u + u**4 / 12.0,
        lambda u: u + u**3 / 3.0,
        lambda u: 1.0 + u * u,
    ),
    "cosh": (np.cosh, np.sinh, np.cosh),
}

_ENTROPIES: dict[str, tuple[Scalar, Scalar, Scalar]] = {
    "quadratic_half": (
        lambda u: 0.5 * u * u,
        lambda u: 1.0 * u,
        lambda u: np.ones_like(np.asarray(u, dtype=float)),
    ),
    "quadratic": (
        lambda u: u * u,
        lambda u: 2.0 * u,
        lambda u: 2.0 * np.ones_like(np.asarray(u, dtype=float)),
    ),
    "quartic_entropy": (
        lambda u: u**4 + u * u,
        lambda u: 4.0 * u**3 + 2.0 * u,
        lambda u: 12.0 * u * u + 2.0,
    ),
}


def _burgers_F(scale):
    # (2U^3 - 3CU^2 + C^3)/6 in factored form: exact zero on the diagonal
    return lambda U, C: scale * (U - C) ** 2 * (2.0 * U + C) / 6.0


def _burgers_f(U, C):
    return (2.0 * U + C) / 3.0


_CLOSED = {
    ("burgers", "quadratic_half"): (_burgers_F(1.0), _burgers_f),
    ("burgers", "quadratic"): (_burgers_F(2.0), _burgers_f),
}

FLUX_NAMES = tuple(_FLUXES)
ENTROPY_NAMES = tuple(_ENTROPIES)

_PAIR_CACHE: dict[tuple[str, str], FluxEntropyPair] = {}


def make_pair(flux: str = "burgers", entropy: str = "quadratic_half") -> FluxEntropyPair:
    """Build a registered pair; unknown names raise :class:`InputError`."""
    key = (flux, entropy)
    if key in _PAIR_CACHE:
        return _PAIR_CACHE[key]
    if flux not in _FLUXES:
        raise InputError(f"unknown flux {flux!r}; choose from {', '.join(FLUX_NAMES)}")
    if entropy not in _ENTROPIES:
        raise InputError(f"unknown entropy {entropy!r}; choose from {', '.join(ENTROPY_NAMES)}")
    closed_F, closed_f = _CLOSED.get(key, (None, None))
    pair = FluxEntropyPair(
        *_FLUXES[flux], *_ENTROPIES[entropy],
        name=f"{flux}/{entropy}", closed_F=closed_F, closed_f=closed_f,
    )
    _PAIR_CACHE[key] = pair
    return pair


# --- pointwise functions ------------------------------------------------------

def rel_entropy(pair: FluxEntropyPair, U, C):
    """``eta(U) - eta(C) - eta'(C) (U - C)``, clipped at zero against round-off."""
    U = np.asarray(U, dtype=float)
    C = np.asarray(C, dtype=float)
    val = pair.entropy(U) - pair.entropy(C) - pair.entropy_deriv(C) * (U - C)
    val = np.maximum(val, 0.0)
    return float(val) if val.ndim == 0 else val


def _unit_moments(pair, U, C, grad):
    """Integrals over s in [0,1] of the weight Phi(w) = eta'(w) - eta'(C) and friends.

    Returns den = int Phi, num = int Phi A'(w), and for ``grad``:
    g1 = int Phi (A'(U) - A'(w)), g2 = int (den - Phi)(A'(w) - A'(C)).
    """
    d = U - C
    etaC = pair.entropy_deriv(C)[..., None]
    apC = pair.flux_deriv(C)[..., None]
    apU = pair.flux_deriv(U)[..., None]

    def compute(n):
        s, w = unit_rule(n)
        W = C[..., None] + d[..., None] * s
        phi = pair.entropy_deriv(W) - etaC
        ap = pair.flux_deriv(W)
        den = phi @ w
        aphi = np.abs(phi)
        aap = np.abs(ap)
        cols = [den, (phi * ap) @ w]
        # scales bound the round-off of each integrand, not just its size
        scales = [aphi @ w, (aphi * aap) @ w]
        if grad:
            cols.append((phi * (apU - ap)) @ w)
            cols.append(((den[..., None] - phi) * (ap - apC)) @ w)
            scales.append((aphi * (np.abs(apU) + aap)) @ w)
            scales.append(((np.abs(den)[..., None] + aphi) * (aap + np.abs(apC))) @ w)
        return np.stack(cols), np.stack(scales)

    n = _RULE_START
    coarse, _ = compute(n)
    while True:
        fine, scale = compute(2 * n)
        if np.all(np.abs(fine - coarse) <= _RULE_RTOL * scale + 1e-300):
            return fine
        if 2 * n >= _RULE_MAX:
            worst = float(np.max(np.abs(fine - coarse)))
            raise QuadratureError(
                f"{pair.name}: Gauss-Legendre rules disagree by {worst:.3e} at order {2 * n}"
            )
        n, coarse = 2 * n, fine


def _as_arrays(U, C):
    U, C = np.broadcast_arrays(np.asarray(U, dtype=float), np.asarray(C, dtype=float))
    return U, C, U.ndim == 0


def _diagonal(U, C):
    return np.abs(U - C) <= DIAGONAL_REL * (1.0 + np.abs(C))


def rel_entropy_flux(pair: FluxEntropyPair, U, C, method: str = "quadrature"):
    """``F(U, C)``.

    ``method`` is ``"quadrature"`` (vectorized Gauss-Legendre pair),
    ``"adaptive"`` (scalar adaptive panels, tolerance 1e-10 abs / 1e-9 rel),
    ``"closed"`` (registered formula) or ``"auto"`` (closed when available).
    """
    if method == "auto":
        method = "closed" if pair.closed_F is not None else "quadrature"
    if method == "closed":
        if pair.closed_F is None:
            raise InputError(f"{pair.name} has no closed-form relative flux")
        U, C, scalar = _as_arrays(U, C)
        out = pair.closed_F(U, C)
        return float(out) if scalar else out
    if method == "adaptive":
        U, C = float(U), float(C)
        etaC = float(pair.entropy_deriv(np.asarray(C)))
        return adaptive_gl(
            lambda w: (pair.entropy_deriv(w) - etaC) * pair.flux_deriv(w),
            C, U, atol=1e-10, rtol=1e-9,
        )
    U, C, scalar = _as_arrays(U, C)
    den_num = _unit_moments(pair, U, C, grad=False)
    out = (U - C) * den_num[1]
    return float(out) if scalar else out


def normalized_flux(pair: FluxEntropyPair, U, C, method: str = "quadrature"):
    """``f(U, C)``; continuous across ``U = C`` where it equals ``A'(C)``.

    Inside the diagonal band the first-order expansion
    ``A'(C) + (2/3) A''(C) (U - C)`` is returned; the linear coefficient is
    independent of the entropy.
    """
    U, C, scalar = _as_arrays(U, C)
    if method == "auto":
        method = "closed" if pair.closed_f is not None else "quadrature"
    if method == "closed":
        if pair.closed_f is None:
            raise InputError(f"{pair.name} has no closed-form normalized flux")
        out = pair.closed_f(U, C)
    elif method == "quadrature":
        den, num = _unit_moments(pair, U, C, grad=False)
        diag = _diagonal(U, C)
        safe = np.where(diag, 1.0, den)
        near = pair.flux_deriv(C) + (2.0 / 3.0) * pair.flux_second(C) * (U - C)
        out = np.where(diag, near, num / safe)
    else:
        raise InputError(f"unknown method {method!r}")
    out = np.asarray(out, dtype=float)
    return float(out) if scalar else out


def normalized_flux_grad(pair: FluxEntropyPair, U, C):
    """``(df/dU, df/dC)``.

    Off the diagonal these are the closed expressions in terms of
    ``phi(U,U,C) = (eta'(U) - eta'(C)) / eta(U|C)``; the brackets
    ``A'(U) - f`` and ``(A(U)-A(C))/(U-C) - f`` are integrated directly so
    neither difference suffers cancellation.  On the diagonal band the limits
    ``(2/3) A''(C)`` and ``(1/3) A''(C)`` are returned.
    """
    U, C, scalar = _as_arrays(U, C)
    den, num, g1, g2 = _unit_moments(pair, U, C, grad=True)
    d = U - C
    diag = _diagonal(U, C)
    safe_den = np.where(diag, 1.0, den)
    safe_d = np.where(diag, 1.0, d)
    phi_uu = (pair.entropy_deriv(U) - pair.entropy_deriv(C)) / (safe_d * safe_den)
    dfdU = phi_uu * g1 / safe_den
    dfdC = -pair.entropy_second(C) * g2 / safe_den**2
    a2 = pair.flux_second(C)
    dfdU = np.where(diag, (2.0 / 3.0) * a2, dfdU)
    dfdC = np.where(diag, a2 / 3.0, dfdC)
    if scalar:
        return float(dfdU), float(dfdC)
    return dfdU, dfdC


# --- bounds -------------------------------------------------------------------

@dataclass(frozen=True)
class BoundsBox:
    """Sampled curvature bounds on the square state box ``[lower, upper]^2``.

    ``eps_fC``/``L_fU`` are the generic lower/upper bounds on ``df/dC`` and
    ``df/dU``.  ``L_fU_sharp`` is the tighter ``(2/3) L_A`` bound available
    when the entropy is quadratic (``eps_eta == L_eta``); otherwise it equals
    ``L_fU``.
    """

    lower: float
    upper: float
    eps_A: float
    L_A: float
    eps_eta: float
    L_eta: float
    eps_fC: float
    L_fU: float
    L_fU_sharp: float
    sup_Aprime: float

    @property
    def quadratic_entropy(self) -> bool:
        return self.eps_eta == self.L_eta

    @property
    def lipschitz(self) -> float:
        """Bound on ``|f|`` over the box (a weighted mean of ``A'`` never exceeds ``sup|A'|``)."""
        return self.sup_Aprime


def chebyshev_points(lower: float, upper: float, n: int = BOX_SAMPLES) -> np.ndarray:
    k = np.arange(n)
    return 0.5 * (lower + upper) + 0.5 * (upper - lower) * np.cos(np.pi * k / (n - 1))


def _padded(vals: np.ndarray, margin: float) -> tuple[float, float]:
    lo, hi = float(np.min(vals)), float(np.max(vals))
    pad = margin * (hi - lo)
    return max(lo - pad, (1.0 - margin) * lo), hi + pad


def bounds_on_box(
    pair: FluxEntropyPair, lower: float, upper: float, margin: float = BOX_MARGIN
) -> BoundsBox:
    """Inf/sup of ``A''``, ``eta''`` and ``|A'|`` on ``[lower, upper]``.

    Extrema come from Chebyshev sampling; a relative ``margin`` of the
    sampled variation widens them (a constant second derivative stays exact).
    """
    if not lower < upper:
        raise InputError(f"empty box: lower={lower!r} must be < upper={upper!r}")
    xs = chebyshev_points(lower, upper)
    a2 = np.asarray(pair.flux_second(xs), dtype=float)
    e2 = np.asarray(pair.entropy_second(xs), dtype=float)
    # a minimum that is round-off relative to the maximum is a flat point, not convexity
    if np.min(a2) <= CONVEX_RTOL * np.max(np.abs(a2)) or np.min(e2) <= CONVEX_RTOL * np.max(np.abs(e2)):
        raise ConfigurationError(f"{pair.name} is not strictly convex on [{lower}, {upper}]")
    eps_A, L_A = _padded(a2, margin)
    eps_eta, L_eta = _padded(e2, margin)
    ap = np.abs(np.asarray(pair.flux_deriv(xs), dtype=float))
    sup_ap = float(np.max(ap)) * (1.0 + margin * (np.ptp(ap) > 0))
    L_fU = L_eta * L_A / eps_eta
    sharp = (2.0 / 3.0) * L_A if eps_eta == L_eta else L_fU
    return BoundsBox(
        lower=float(lower), upper=float(upper),
        eps_A=eps_A, L_A=L_A, eps_eta=eps_eta, L_eta=L_eta,
        eps_fC=eps_A * eps_eta**2 / (3.0 * L_eta**2),
        L_fU=L_fU, L_fU_sharp=sharp, sup_Aprime=sup_ap,
    )


# --- monotone gap inequality --------------------------------------------------

def monotone_gap(
    g: tuple[Scalar, Scalar],
    h: tuple[Scalar, Scalar],
    eps_g: float | None = None,
    eps_h: float | None = None,
) -> tuple[float, float]:
    """Return ``(int g h - int h, eps_g eps_h / 12)`` on ``[0, 1]``.

    ``g`` and ``h`` are ``(value, derivative)`` callables sampled on a uniform
    grid; ``int g`` must be 1 and both derivatives bounded below by a
    positive constant.  When ``eps_g``/``eps_h`` are omitted the grid minima
    of the derivatives are used.
    """
    s = np.linspace(0.0, 1.0, GAP_GRID)
    gv, gd = np.asarray(g[0](s), dtype=float), np.asarray(g[1](s), dtype=float)
    hv, hd = np.asarray(h[0](s), dtype=float), np.asarray(h[1](s), dtype=float)
    mass = simpson(gv, x=s)
    if abs(mass - 1.0) > 1e-8:
        raise InputError(f"int_0^1 g = {mass!r}, expected 1")
    eps_g = float(np.min(gd)) if eps_g is None else eps_g
    eps_h = float(np.min(hd)) if eps_h is None else eps_h
    if eps_g <= 0.0 or np.min(gd) < eps_g:
        raise InputError(f"g' must be bounded below by a positive constant (min {np.min(gd)!r})")
    if eps_h <= 0.0 or np.min(hd) < eps_h:
        raise InputError(f"h' must be bounded below by a positive constant (min {np.min(hd)!r})")
    gap = simpson(gv * hv, x=s) - simpson(hv, x=s)
    return float(gap), eps_g * eps_h / 12.0
