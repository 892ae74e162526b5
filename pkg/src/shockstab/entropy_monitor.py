"""Relative-entropy functionals along a tracked run and the checks built on them.

All integrals are exact: the field is piecewise constant in ``x`` at every
sampled time, so each functional is a finite sum of ``value * length``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from shockstab.convex_calculus import (
    BoundsBox,
    FluxEntropyPair,
    bounds_on_box,
    chebyshev_points,
    rel_entropy,
)
from shockstab.errors import InputError
from shockstab.scalar_solver import (
    Evolution,
    PiecewiseConstantProfile,
    Scenario,
    discretize_initial,
    solve_scenario,
)
from shockstab.shift_tracker import (
    CROSSING_TOL,
    ShiftCurve,
    ShiftPair,
    breakpoint_union,
    integrate_curves,
    track_shift_pair,
)

UNIFORM_SAMPLES = 200
SANDWICH_RTOL = 1e-12
LEDGER_COLUMNS = ("time", "E_total", "E_inner", "l2_shifted", "xL", "xR", "xbar")


# --- exact piecewise integration ------------------------------------------------

def window_integral(pos: np.ndarray, vals: np.ndarray, a: float, b: float) -> float:
    """``int_a^b`` of the step function with breaks ``pos`` and region values ``vals``.

    ``vals[k]`` is the value left of ``pos[k]``; ``vals[-1]`` holds on the far
    right.  Infinite limits are allowed when the matching tail value is zero.
    """
    if not b > a:
        return 0.0
    pos = np.asarray(pos, dtype=float)
    vals = np.asarray(vals, dtype=float)
    if math.isinf(a) and vals[0] != 0.0:
        raise InputError("far field on the left is not settled (nonzero integrand at -inf)")
    if math.isinf(b) and vals[-1] != 0.0:
        raise InputError("far field on the right is not settled (nonzero integrand at +inf)")
    left = np.concatenate(([a], np.maximum(pos, a)))
    right = np.concatenate((np.minimum(pos, b), [b]))
    length = right - left
    ok = np.isfinite(length) & (length > 0)
    return float(np.dot(vals[ok], length[ok]))


def _split_integral(pos, below, above, xi_lo, xi_hi):
    """``int_{-inf}^{xi_lo} below + int_{xi_hi}^{inf} above``."""
    return (window_integral(pos, below, -math.inf, xi_lo)
            + window_integral(pos, above, xi_hi, math.inf))


def _profile_arrays(profile: PiecewiseConstantProfile):
    return profile.positions, profile.states


def total_relative_entropy(profile: PiecewiseConstantProfile, x_L: float, x_R: float,
                           pair: FluxEntropyPair, C_L: float, C_R: float) -> float:
    """``int_{-inf}^{x_L} eta(U|C_L) + int_{x_R}^{inf} eta(U|C_R)``."""
    pos, st = _profile_arrays(profile)
    return _split_integral(pos, rel_entropy(pair, st, C_L), rel_entropy(pair, st, C_R),
                           float(x_L), float(x_R))


def shifted_relative_entropy(profile: PiecewiseConstantProfile, xi: float, pair: FluxEntropyPair,
                             C_L: float, C_R: float) -> float:
    """``int eta(U | phi(. - xi))`` for the step ``phi = C_L 1_{x<0} + C_R 1_{x>0}``."""
    return total_relative_entropy(profile, xi, xi, pair, C_L, C_R)


def shifted_l2(profile: PiecewiseConstantProfile, xi: float, C_L: float, C_R: float) -> float:
    """``||U - phi(. - xi)||_{L2}``."""
    pos, st = _profile_arrays(profile)
    return math.sqrt(_split_integral(pos, (st - C_L) ** 2, (st - C_R) ** 2, float(xi), float(xi)))


def inner_relative_entropy(profile: PiecewiseConstantProfile, x_L: float, x_R: float,
                           pair: FluxEntropyPair, C: float) -> float:
    """``int_{x_L}^{x_R} eta(U|C)``; zero when ``x_L >= x_R``."""
    pos, st = _profile_arrays(profile)
    return window_integral(pos, rel_entropy(pair, st, C), float(x_L), float(x_R))


# --- constants -----------------------------------------------------------------

def state_radius(scenario: Scenario) -> float:
    """``||U0||_inf + ||phi||_inf``."""
    return discretize_initial(scenario).sup_norm() + max(abs(scenario.C_L), abs(scenario.C_R))


def state_box(scenario: Scenario) -> BoundsBox:
    """Bounds on ``[-R, R]`` with ``R`` from :func:`state_radius`."""
    R = state_radius(scenario)
    return bounds_on_box(scenario.pair, -R, R)


def dissipation_constant(pair: FluxEntropyPair, box: BoundsBox, C_L: float, C_R: float,
                         C: float) -> float:
    """``eps K kappa [eps (C_L - C_R) / (2 L)]^2`` with ``K = min(C_L - C, C - C_R)``.

    ``eps`` bounds ``df/dC`` from below, ``L`` bounds ``df/dU`` from above and
    ``kappa = eps_eta / 2`` bounds ``eta''/2`` from below.
    """
    if not C_R < C < C_L:
        raise InputError(f"anchor C={C} must lie strictly between C_R={C_R} and C_L={C_L}")
    eps = box.eps_fC
    K = min(C_L - C, C - C_R)
    kappa = 0.5 * box.eps_eta
    return eps * K * kappa * (eps * (C_L - C_R) / (2.0 * box.L_fU_sharp)) ** 2


@dataclass(frozen=True)
class ContainmentConstants:
    kappa: float
    M1: float
    M2: float
    lam: float


def kappa_containment(pair: FluxEntropyPair, box: BoundsBox, C: float, lam: float) -> ContainmentConstants:
    """``kappa = 1 + M1 M2 / lambda`` with ``M1 = 2 sup|f|`` and ``M2 = sup eta(.|C)`` on the box."""
    if not lam > 0:
        raise InputError("dissipation constant must be positive")
    M1 = 2.0 * box.lipschitz
    # eta(.|C) is convex, so its sup over an interval sits at an endpoint
    M2 = float(max(rel_entropy(pair, box.lower, C), rel_entropy(pair, box.upper, C)))
    return ContainmentConstants(1.0 + M1 * M2 / lam, M1, M2, lam)


def flux_speed_sup(pair: FluxEntropyPair, radius: float) -> float:
    """``sup{|A'(w)| : |w| <= radius}`` by Chebyshev sampling (endpoints included)."""
    xs = chebyshev_points(-radius, radius)
    return float(np.max(np.abs(pair.flux_deriv(xs))))


def shift_bound_lambda(scenario: Scenario, box: BoundsBox, L_curve: float) -> float:
    """Constant in ``|xbar(t)| <= lambda ||U0 - phi||_{L2} sqrt(t)``.

    ``lambda = [sqrt(2 L_eta / eps_eta (L + |sigma|)) + sqrt(2 (M + L + |sigma|))] / (C_L - C_R)``
    with ``L = L_curve`` and ``M`` the largest characteristic speed over
    ``|w| <= ||U0||_inf + ||phi||_inf``.
    """
    M = flux_speed_sup(scenario.pair, state_radius(scenario))
    s = abs(scenario.sigma)
    first = math.sqrt(2.0 * box.L_eta / box.eps_eta * (L_curve + s))
    second = math.sqrt(2.0 * (M + L_curve + s))
    return (first + second) / (scenario.C_L - scenario.C_R)


def entropy_tolerance(scenario: Scenario, box: BoundsBox) -> float:
    """Discretization slack ``10 delta_rare (1 + T) L_eta ||U0||_inf^2``."""
    u0 = discretize_initial(scenario).sup_norm()
    return 10.0 * scenario.delta_rare * (1.0 + scenario.T) * box.L_eta * u0 * u0


# --- ledger and report ----------------------------------------------------------

@dataclass
class EntropyLedger:
    times: np.ndarray
    E_total: np.ndarray
    E_inner: np.ndarray
    E_shifted: np.ndarray
    l2_shifted: np.ndarray
    xL: np.ndarray
    xR: np.ndarray
    xbar: np.ndarray
    dissipation_set_measure: np.ndarray  # cumulative |S| over separated stretches

    def columns(self) -> dict[str, np.ndarray]:
        """Ledger arrays keyed by their CSV column names."""
        arrays = (self.times, self.E_total, self.E_inner, self.l2_shifted, self.xL, self.xR, self.xbar)
        return dict(zip(LEDGER_COLUMNS, (np.asarray(a) for a in arrays)))

    def to_csv(self) -> str:
        lines = [",".join(LEDGER_COLUMNS)]
        for row in zip(*self.columns().values()):
            lines.append(",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"


@dataclass
class Verdict:
    passed: bool
    worst_margin: float   # max of lhs - rhs; passes when <= tolerance
    worst_time: float
    tolerance: float
    vacuous: bool = False
    detail: str = ""


def _verdict(margins, times, tolerance, vacuous=False, detail="") -> Verdict:
    margins = np.asarray(margins, dtype=float)
    if margins.size == 0:
        return Verdict(True, 0.0, 0.0, tolerance, True, detail)
    k = int(np.argmax(margins))
    worst = float(margins[k])
    return Verdict(bool(worst <= tolerance), worst, float(times[k]), float(tolerance), vacuous, detail)


def _vacuous(tolerance, detail) -> Verdict:
    return Verdict(True, 0.0, 0.0, float(tolerance), True, detail)


def _running_rise(D: np.ndarray) -> np.ndarray:
    """``D[b] - min_{a < b} D[a]`` for each ``b`` (``-inf`` at ``b = 0``)."""
    out = np.full(len(D), -np.inf)
    if len(D) > 1:
        out[1:] = D[1:] - np.minimum.accumulate(D[:-1])
    return out


@dataclass
class SeparationProbe:
    """Curves started a distance ``gap`` apart at ``t0`` and followed while separated."""

    t0: float
    x0: float
    gap: float
    t_separated: float          # last sample of the initial stretch with x_R - x_L > CROSSING_TOL
    t_contained: float          # last sample of the initial stretch with x_R - x_L >= gap
    S_measure: float
    times: np.ndarray
    E_inner: np.ndarray
    separation: np.ndarray
    dissipation: Verdict
    containment: Verdict


@dataclass
class StabilityReport:
    scenario_id: str
    initial_l2: float
    initial_entropy: float
    tol_E: float
    ledger: EntropyLedger
    lambda_dissipation: float
    kappa: float
    lambda_shift: float
    constants: dict[str, float]
    verdicts: dict[str, Verdict]
    max_crossing: float
    event_count: int
    probe: SeparationProbe | None = None

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.verdicts.items() if not v.passed]

    def to_dict(self, include_ledger: bool = True) -> dict:
        out = {
            "scenario_id": self.scenario_id,
            "initial_l2": self.initial_l2,
            "initial_entropy": self.initial_entropy,
            "tol_E": self.tol_E,
            "lambda_dissipation": self.lambda_dissipation,
            "kappa": self.kappa,
            "lambda_shift": self.lambda_shift,
            "constants": dict(self.constants),
            "max_crossing": self.max_crossing,
            "event_count": self.event_count,
            "passed": self.passed,
            "verdicts": {k: asdict(v) for k, v in self.verdicts.items()},
        }
        if self.probe is not None:
            p = self.probe
            out["separation_probe"] = {
                "t0": p.t0, "x0": p.x0, "gap": p.gap, "t_separated": p.t_separated,
                "t_contained": p.t_contained, "S_measure": p.S_measure,
            }
        if include_ledger:
            L = self.ledger
            out["ledger"] = {name: col.tolist() for name, col in L.columns().items()}
        return out

    def to_json(self, include_ledger: bool = True) -> str:
        return json.dumps(self.to_dict(include_ledger), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _sample_times(evolution: Evolution, curves: Sequence[ShiftCurve], t0: float, t1: float,
                  uniform: int) -> np.ndarray:
    ev = evolution.event_times
    parts = [ev[(ev >= t0) & (ev <= t1)], np.linspace(t0, t1, uniform + 1)]
    parts += [np.asarray(c.times) for c in curves]
    times = np.unique(np.concatenate(parts))
    return times[(times >= t0) & (times <= t1)]


class _StateCache:
    """Per-interval arrays of ``eta(state|C)`` and squared deviations."""

    def __init__(self, pair, anchors):
        self.pair = pair
        self.anchors = anchors
        self.key = None
        self.vals: dict = {}

    def get(self, fs):
        st = fs.states()
        key = (len(st), st.tobytes())
        if key != self.key:
            self.key = key
            self.vals = {name: (rel_entropy(self.pair, st, C) if kind == "eta" else (st - C) ** 2)
                         for name, (kind, C) in self.anchors.items()}
        return self.vals


def _inner_series(evolution, left, right, times, C):
    cache = _StateCache(evolution.pair, {"mid": ("eta", C)})
    xl, xr = left.position(times), right.position(times)
    out = np.empty(len(times))
    for k, (t, fs) in enumerate(evolution.sample(times)):
        out[k] = window_integral(fs.positions(t), cache.get(fs)["mid"], xl[k], xr[k])
    return out


def _s_increments(left: ShiftCurve, right: ShiftCurve, times: np.ndarray) -> np.ndarray:
    """Length of ``{x_R' - x_L' >= 0}`` within each ``[times[k], times[k+1]]``."""
    if len(times) < 2:
        return np.zeros(0)
    mid = 0.5 * (times[1:] + times[:-1])
    gain = right.speed_at(mid) - left.speed_at(mid) >= 0.0
    return np.where(gain, np.diff(times), 0.0)


def separation_probe(evolution: Evolution, C_L: float, C_R: float, t0: float, x0: float, gap: float,
                     lam: float, kappa: float, C: float, tol: float,
                     uniform: int = UNIFORM_SAMPLES) -> SeparationProbe:
    """Exercise the dissipation and containment estimates on deliberately separated curves.

    ``x_L`` starts at ``x0`` and ``x_R`` at ``x0 + gap``.  On the stretch where
    ``x_R - x_L`` stays above round-off the inner entropy must satisfy
    ``E_inner(b) - E_inner(a) <= -lam |S_{a,b}| + tol``; on the initial stretch
    where the gap stays at least ``gap`` the separation must not exceed
    ``kappa * gap``.
    """
    if not gap > 0:
        raise InputError("probe gap must be positive")
    left, right = integrate_curves(evolution, [(C_L, x0, t0), (C_R, x0 + gap, t0)])
    times = _sample_times(evolution, [left, right], t0, evolution.t_end, uniform)
    d = right.position(times) - left.position(times)
    # separated stretch: prefix of samples with d above round-off (curves are
    # piecewise linear with breakpoints among the samples, so this holds between them)
    n_sep = int(np.argmax(d <= CROSSING_TOL)) if np.any(d <= CROSSING_TOL) else len(times)
    ts = times[:n_sep]
    E = _inner_series(evolution, left, right, ts, C)
    S = np.concatenate(([0.0], np.cumsum(_s_increments(left, right, ts))))
    diss = _verdict(_running_rise(E + lam * S), ts, tol, vacuous=n_sep < 2,
                    detail="inner entropy drop vs lambda |S| on separated curves")
    n_con = int(np.argmax(d < gap * (1 - 1e-12))) if np.any(d < gap * (1 - 1e-12)) else len(times)
    cont = _verdict(d[:n_con] - kappa * gap, times[:n_con], 1e-9, vacuous=n_con < 2,
                    detail="x_R - x_L <= kappa * gap while the gap persists")
    return SeparationProbe(
        t0=float(t0), x0=float(x0), gap=float(gap),
        t_separated=float(ts[-1]) if n_sep else float(t0),
        t_contained=float(times[n_con - 1]) if n_con else float(t0),
        S_measure=float(S[-1]), times=ts, E_inner=E, separation=d[:n_sep],
        dissipation=diss, containment=cont,
    )


def stability_report(scenario: Scenario, evolution: Evolution | None = None,
                     shift: ShiftPair | None = None, policy: str = "left",
                     uniform: int = UNIFORM_SAMPLES, probe_gap: float | None = None,
                     C: float | None = None) -> StabilityReport:
    """Run (or reuse) the solver and shift pair and check every estimate on a ledger.

    ``probe_gap`` sets the separation of the extra probe started at ``T/2``;
    ``None`` picks ``(C_L - C_R) / 4``, zero disables the probe.
    """
    if evolution is None:
        evolution = solve_scenario(scenario)
    if shift is None:
        shift = track_shift_pair(scenario, evolution, policy=policy)
    pair, C_L, C_R, T = scenario.pair, scenario.C_L, scenario.C_R, scenario.T
    C = 0.5 * (C_L + C_R) if C is None else float(C)
    box = state_box(scenario)
    tol_E = entropy_tolerance(scenario, box)
    lam = dissipation_constant(pair, box, C_L, C_R, C)
    cont = kappa_containment(pair, box, C, lam)
    L_curve = box.lipschitz
    lam_shift = shift_bound_lambda(scenario, box, L_curve)
    initial = discretize_initial(scenario)
    initial_l2 = scenario.perturbation_l2()
    E0 = shifted_relative_entropy(initial, 0.0, pair, C_L, C_R)

    left, right = shift.left, shift.right
    times = _sample_times(evolution, [left, right], evolution.t_start, T, uniform)
    xL, xR = left.position(times), right.position(times)
    cands = shift.candidates()
    xbars = {p: c.position(times) for p, c in cands.items()}
    xbar = shift.xbar.position(times)
    n = len(times)
    E_tot, E_in, E_sh, l2 = (np.empty(n) for _ in range(4))
    sandwich = np.full(n, -np.inf)
    norm_lo, norm_hi = np.empty(n), np.empty(n)
    cache = _StateCache(pair, {"L": ("eta", C_L), "R": ("eta", C_R), "C": ("eta", C),
                               "qL": ("sq", C_L), "qR": ("sq", C_R)})
    for k, (t, fs) in enumerate(evolution.sample(times)):
        pos = fs.positions(t)
        v = cache.get(fs)
        E_tot[k] = _split_integral(pos, v["L"], v["R"], xL[k], xR[k])
        E_in[k] = window_integral(pos, v["C"], xL[k], xR[k])
        xi = xbar[k] + scenario.sigma * t
        E_sh[k] = _split_integral(pos, v["L"], v["R"], xi, xi)
        q = _split_integral(pos, v["qL"], v["qR"], xi, xi)
        l2[k] = math.sqrt(q)
        norm_lo[k] = 0.5 * box.eps_eta * q - E_sh[k]
        norm_hi[k] = E_sh[k] - 0.5 * box.L_eta * q
        for xb in xbars.values():
            xi_c = xb[k] + scenario.sigma * t
            e_c = _split_integral(pos, v["L"], v["R"], xi_c, xi_c)
            sandwich[k] = max(sandwich[k], e_c - E_tot[k])

    sep = xR - xL
    apart = sep > CROSSING_TOL
    separated = apart[1:] & apart[:-1] if n > 1 else np.zeros(0, dtype=bool)
    dS = _s_increments(left, right, times) * separated
    S_cum = np.concatenate(([0.0], np.cumsum(dS)))
    ledger = EntropyLedger(times, E_tot, E_in, E_sh, l2, xL, xR, xbar, S_cum)

    scale = max(E0, 1.0)
    verdicts: dict[str, Verdict] = {}
    verdicts["entropy_bound"] = _verdict(E_tot - E0, times, tol_E, detail="E(t) <= E(0)")
    verdicts["shifted_entropy"] = _verdict(E_sh - E0, times, tol_E,
                                           detail="relative entropy to the shifted shock <= E(0)")
    if box.quadratic_entropy:
        verdicts["l2_contraction"] = _verdict(l2 - initial_l2, times, tol_E,
                                              detail="||U - phi_shifted||_2 <= ||U0 - phi||_2")
    else:
        verdicts["l2_contraction"] = _vacuous(tol_E, "entropy is not quadratic")
    verdicts["non_crossing"] = _verdict(sep, times, CROSSING_TOL, detail="x_R - x_L")
    shift_rhs = lam_shift * initial_l2 * np.sqrt(times - times[0])
    verdicts["shift_bound"] = _verdict(np.abs(xbar) - shift_rhs, times, 0.0,
                                       detail="|xbar| <= lambda_shift ||U0 - phi||_2 sqrt(t)")
    verdicts["entropy_monotone"] = _verdict(
        np.diff(E_tot), times[1:], tol_E, vacuous=n < 2, detail="E(t_{k+1}) - E(t_k)")
    verdicts["sandwich"] = _verdict(sandwich, times, SANDWICH_RTOL * scale,
                                    detail="shifted relative entropy <= E(t) for each admissible shift")
    verdicts["norm_equivalence"] = _verdict(np.maximum(norm_lo, norm_hi), times, SANDWICH_RTOL * scale,
                                            detail="eps_eta/2 ||.||^2 <= int eta(.|phi) <= L_eta/2 ||.||^2")

    # dissipation and containment on the origin-started pair: only meaningful
    # on stretches where the curves are apart, which should never happen
    if np.any(separated):
        D = E_in + lam * S_cum
        rise = np.full(n, -np.inf)
        start = None
        for k in range(n):
            if apart[k]:
                start = k if start is None else start
                seg = D[start:k + 1]
                rise[k] = seg[-1] - np.min(seg)
            else:
                start = None
        verdicts["dissipation"] = _verdict(rise, times, tol_E, detail="origin-started pair separated")
        verdicts["containment"] = _vacuous(1e-9, "containment needs a prescribed initial gap; see probe")
    else:
        verdicts["dissipation"] = _vacuous(tol_E, "curves never separate")
        verdicts["containment"] = _vacuous(1e-9, "curves never separate")

    probe = None
    gap = 0.25 * (C_L - C_R) if probe_gap is None else float(probe_gap)
    if gap > 0 and T > 0:
        t0 = 0.5 * T
        probe = separation_probe(evolution, C_L, C_R, t0, float(left.position(t0)), gap,
                                 lam, cont.kappa, C, tol_E, uniform)
        verdicts["dissipation_probe"] = probe.dissipation
        verdicts["containment_probe"] = probe.containment

    constants = {
        "C": C, "sigma": scenario.sigma, "L_curve": L_curve,
        "M": flux_speed_sup(pair, state_radius(scenario)),
        "M1": cont.M1, "M2": cont.M2, "eps_fC": box.eps_fC, "L_fU": box.L_fU_sharp,
        "eps_eta": box.eps_eta, "L_eta": box.L_eta, "box_radius": box.upper,
    }
    return StabilityReport(
        scenario_id=scenario.name, initial_l2=initial_l2, initial_entropy=E0, tol_E=tol_E,
        ledger=ledger, lambda_dissipation=lam, kappa=cont.kappa, lambda_shift=lam_shift,
        constants=constants, verdicts=verdicts, max_crossing=shift.max_crossing,
        event_count=len(evolution.events), probe=probe,
    )
