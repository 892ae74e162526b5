"""Adaptive Gauss-Legendre quadrature.

Two entry points: :func:`adaptive_gl` integrates a scalar callable on an
interval by recursive panel bisection, and :func:`fixed_gl_unit` evaluates a
batch of integrands on ``[0, 1]`` with a pair of fixed rules so vectorized
callers can detect the (rare) points that need the adaptive path.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature cannot reach the requested tolerance."""


@lru_cache(maxsize=None)
def unit_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to ``[0, 1]``."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _panel(func, a, b, n):
    s, w = unit_rule(n)
    h = b - a
    vals = np.asarray(func(a + h * s), dtype=float)
    return h * float(np.dot(w, vals)), abs(h) * float(np.dot(w, np.abs(vals)))


def adaptive_gl(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    atol: float = 1e-13,
    rtol: float = 1e-12,
    order: int = 16,
    max_depth: int = 40,
) -> float:
    """Integrate ``func`` over ``[a, b]``.

    Each panel is compared with the sum over its two halves; a panel is
    accepted when the discrepancy is below ``max(atol, rtol * I_abs)`` where
    ``I_abs`` is the integral of ``|func|`` on that panel. ``func`` must accept
    an array of abscissae.
    """
    if a == b:
        return 0.0
    total = 0.0
    whole, whole_abs = _panel(func, a, b, order)
    stack = [(a, b, whole, whole_abs, 0, atol)]
    while stack:
        lo, hi, est, est_abs, depth, tol = stack.pop()
        mid = 0.5 * (lo + hi)
        left, left_abs = _panel(func, lo, mid, order)
        right, right_abs = _panel(func, mid, hi, order)
        refined = left + right
        if abs(refined - est) <= max(tol, rtol * (left_abs + right_abs)):
            total += refined
            continue
        if depth >= max_depth:
            raise QuadratureError(
                f"no convergence on [{lo!r}, {hi!r}] after {depth} bisections "
                f"(discrepancy {abs(refined - est):.3e})"
            )
        stack.append((lo, mid, left, left_abs, depth + 1, 0.5 * tol))
        stack.append((mid, hi, right, right_abs, depth + 1, 0.5 * tol))
    return total


def fixed_gl_unit(values: Callable[[np.ndarray], np.ndarray], n: int) -> np.ndarray:
    """Integrate over ``s in [0, 1]`` with an ``n``-point rule.

    ``values(s)`` receives ``s`` with a trailing axis of length ``n`` and must
    return an array broadcastable against it; the trailing axis is reduced.
    """
    s, w = unit_rule(n)
    return np.asarray(values(s)) @ w
