"""Filippov curves ``x'(t) in [f(U(x+),C), f(U(x-),C)]`` through a front-tracking field.

Between solver events every front is a straight line and the field is
piecewise constant, so a curve is advanced exactly: it is either free in a
constant region (speed ``f(u, C)``) or rides a front at the front's speed.
What happens when the curve sits on one or more fronts is decided by a
sweep across the fronts at that point (see :func:`_sweep_left`).  The
decision is monotone in ``C``, which is what keeps the ``C_L`` curve weakly
to the right of the ``C_R`` curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from shockstab.convex_calculus import FluxEntropyPair, normalized_flux
from shockstab.errors import CertificationError, InputError, ResourceError
from shockstab.scalar_solver import (
    Evolution,
    FrontSet,
    PiecewiseConstantProfile,
    Scenario,
    solve_scenario,
)

FREE = "free"
RIDING = "riding-shock"
SNAP_TOL = 1e-11
MAX_STEPS = 1_000_000
CROSSING_TOL = 1e-9

Tie = Literal["left", "right"]


@dataclass
class ShiftCurve:
    """Piecewise-linear curve: ``len(times) == len(positions) == len(speeds) + 1``."""

    anchor: float
    times: list[float] = field(default_factory=list)
    positions: list[float] = field(default_factory=list)
    speeds: list[float] = field(default_factory=list)
    modes: list[str] = field(default_factory=list)
    front_ids: list[int] = field(default_factory=list)

    def position(self, t):
        return np.interp(t, self.times, self.positions)

    def segment_index(self, t) -> np.ndarray:
        idx = np.searchsorted(self.times, t, side="right") - 1
        return np.clip(idx, 0, max(len(self.speeds) - 1, 0))

    def speed_at(self, t):
        if not self.speeds:
            return np.zeros_like(np.asarray(t, dtype=float))
        return np.asarray(self.speeds)[self.segment_index(t)]

    def max_speed(self) -> float:
        return float(np.max(np.abs(self.speeds))) if self.speeds else 0.0

    def to_csv(self) -> str:
        """Rows ``time,position,speed,mode``; the last row repeats the final speed."""
        lines = ["time,position,speed,mode"]
        for k, (t, x) in enumerate(zip(self.times, self.positions)):
            j = min(k, len(self.speeds) - 1)
            s = self.speeds[j] if self.speeds else 0.0
            m = self.modes[j] if self.modes else FREE
            lines.append(f"{t!r},{x!r},{s!r},{m}")
        return "\n".join(lines) + "\n"

    def _append(self, t, x, speed, mode, fid):
        if (self.speeds and self.speeds[-1] == speed and self.modes[-1] == mode
                and self.front_ids[-1] == fid):
            self.times[-1] = t
            self.positions[-1] = x
            return
        self.times.append(t)
        self.positions.append(x)
        self.speeds.append(speed)
        self.modes.append(mode)
        self.front_ids.append(fid)


@dataclass
class SpeedDecision:
    speed: float
    mode: str
    front: int | None  # index of the ridden front, if any
    region: int        # constant region the curve moves into when free


def _sweep_left(fvals, speeds, lo, hi):
    """Decide motion at a point covered by fronts ``lo..hi-1``, scanning from the left.

    ``fvals[m]`` is ``f(states[m], C)``.  The curve starts in the region left of
    the group; it stays there if slower than the next front, rides that front
    if the state behind it is too slow to escape, and otherwise crosses.
    """
    m = lo
    while m < hi:
        s = speeds[m]
        if fvals[m] < s:
            return SpeedDecision(float(fvals[m]), FREE, None, m)
        if fvals[m + 1] <= s:
            return SpeedDecision(float(s), RIDING, m, m)
        m += 1
    return SpeedDecision(float(fvals[hi]), FREE, None, hi)


def _sweep_right(fvals, speeds, lo, hi):
    """Mirror of :func:`_sweep_left`; the two differ only at repulsive configurations."""
    m = hi - 1
    while m >= lo:
        s = speeds[m]
        if fvals[m + 1] > s:
            return SpeedDecision(float(fvals[m + 1]), FREE, None, m + 1)
        if fvals[m] >= s:
            return SpeedDecision(float(s), RIDING, m, m)
        m -= 1
    return SpeedDecision(float(fvals[lo]), FREE, None, lo)


class _FCache:
    def __init__(self, pair: FluxEntropyPair, C: float, method: str):
        self.pair, self.C, self.method = pair, float(C), method
        self.memo: dict[float, float] = {}

    def __call__(self, u: float) -> float:
        v = self.memo.get(u)
        if v is None:
            v = normalized_flux(self.pair, u, self.C, method=self.method)
            self.memo[u] = v
        return v

    def many(self, states) -> np.ndarray:
        return np.array([self(float(u)) for u in states])


def _group(pos: np.ndarray, x: float, tol: float) -> tuple[int, int]:
    return (int(np.searchsorted(pos, x - tol, side="left")),
            int(np.searchsorted(pos, x + tol, side="right")))


def decide(pos, speeds, states, fcache, x, tol=SNAP_TOL, tie: Tie = "left") -> SpeedDecision:
    """Filippov-consistent motion of a curve at ``x`` in a field given by arrays."""
    lo, hi = _group(pos, x, tol * (1.0 + abs(x)))
    fvals = {m: fcache(float(states[m])) for m in range(lo, hi + 1)}
    sweep = _sweep_left if tie == "left" else _sweep_right
    return sweep(fvals, speeds, lo, hi)


def filippov_speed(pair: FluxEntropyPair, profile: PiecewiseConstantProfile, x: float, C: float,
                   tie: Tie = "left", method: str = "auto") -> SpeedDecision:
    """Admissible speed of a curve at ``x`` for anchor ``C``.

    At a continuity point this is ``f(U, C)``; at a decreasing jump the curve
    rides with the RH speed when ``f(U(x+),C) <= s <= f(U(x-),C)`` and
    otherwise leaves on the side both relative speeds point to.
    """
    return decide(profile.positions, profile.speeds, profile.states,
                  _FCache(pair, C, method), float(x), tie=tie)


class _CurveRun:
    def __init__(self, pair, C, x0, t0, tie: Tie = "left", tol=SNAP_TOL, method="auto"):
        self.f = _FCache(pair, C, method)
        self.tie = tie
        self.tol = tol
        self.t = float(t0)
        self.x = float(x0)
        self.curve = ShiftCurve(float(C), [self.t], [self.x])
        self.steps = 0

    def advance(self, fs: FrontSet, states: np.ndarray, tb: float) -> None:
        while self.t < tb:
            self.steps += 1
            if self.steps > MAX_STEPS:
                raise ResourceError(f"curve integration exceeded {MAX_STEPS} steps")
            self._step(fs, states, tb)

    def _step(self, fs, states, tb):
        t, x = self.t, self.x
        pos = fs.positions(t)
        n = len(pos)
        tol = self.tol * (1.0 + abs(x))
        lo, hi = _group(pos, x, tol)
        fvals = {m: self.f(float(states[m])) for m in range(lo, hi + 1)}
        sweep = _sweep_left if self.tie == "left" else _sweep_right
        dec = sweep(fvals, fs.speed, lo, hi)
        if dec.mode == RIDING:
            k = dec.front
            x_new = fs.position(k, tb)
            self.curve._append(tb, x_new, dec.speed, RIDING, int(fs.ids[k]))
            self.t, self.x = tb, x_new
            return
        v = dec.speed
        j = dec.region
        dt = math.inf
        target = None
        if j == hi and j < n:
            closing = v - fs.speed[j]
            if closing > 0:
                dt, target = (pos[j] - x) / closing, j
        if j == lo and j - 1 >= 0:
            closing = fs.speed[j - 1] - v
            if closing > 0:
                d = (x - pos[j - 1]) / closing
                if d < dt:
                    dt, target = d, j - 1
        if t + dt < tb:
            t_new = t + dt
            x_new = fs.position(target, t_new)
        else:
            t_new = tb
            x_new = x + v * (tb - t)
        if t_new > t:
            self.curve._append(t_new, x_new, v, FREE, -1)
        self.t, self.x = t_new, x_new


def integrate_curves(evolution: Evolution, starts: Sequence[tuple[float, float, float]],
                     T: float | None = None, tie: Tie | Sequence[Tie] = "left",
                     tol: float | Sequence[float] = SNAP_TOL, method: str = "auto") -> list[ShiftCurve]:
    """Integrate several curves ``(C, x0, t0)`` in one replay of ``evolution``."""
    T = evolution.t_end if T is None else float(T)
    if T > evolution.t_end + 1e-12:
        raise InputError(f"T={T} beyond the evolution end {evolution.t_end}")
    ties = [tie] * len(starts) if isinstance(tie, str) else list(tie)
    tols = [tol] * len(starts) if np.isscalar(tol) else list(tol)
    runs = []
    for (C, x0, t0), tb, tl in zip(starts, ties, tols):
        if t0 < evolution.t_start or t0 > T:
            raise InputError(f"start time {t0} outside [{evolution.t_start}, {T}]")
        runs.append(_CurveRun(evolution.pair, C, x0, t0, tb, tl, method))
    for ta, tb, fs in evolution.replay():
        if ta >= T:
            break
        active = [r for r in runs if r.t < min(tb, T)]
        if not active:
            continue
        states = fs.states()
        for r in active:
            r.advance(fs, states, min(tb, T))
    return [r.curve for r in runs]


def integrate_shift(evolution: Evolution, C: float, x0: float, t0: float, T: float | None = None,
                    tie: Tie = "left", tol: float = SNAP_TOL, method: str = "auto") -> ShiftCurve:
    """One Filippov curve anchored at ``C`` starting from ``(x0, t0)``."""
    return integrate_curves(evolution, [(C, x0, t0)], T, tie, tol, method)[0]


def breakpoint_union(*curves: ShiftCurve) -> np.ndarray:
    return np.unique(np.concatenate([np.asarray(c.times) for c in curves]))


def shift_curve_from(times, positions, anchor=math.nan, mode="derived") -> ShiftCurve:
    times = np.asarray(times, dtype=float)
    positions = np.asarray(positions, dtype=float)
    dt = np.diff(times)
    speeds = np.divide(np.diff(positions), dt, out=np.zeros_like(dt), where=dt > 0)
    n = len(speeds)
    return ShiftCurve(anchor, times.tolist(), positions.tolist(), speeds.tolist(), [mode] * n, [-1] * n)


@dataclass
class ShiftPair:
    left: ShiftCurve
    right: ShiftCurve
    xbar: ShiftCurve
    sigma: float
    policy: str
    max_crossing: float  # max over breakpoints of x_R - x_L
    evolution: Evolution | None = None

    def candidates(self) -> dict[str, ShiftCurve]:
        """The three standard admissible shifts (left anchor, right anchor, midpoint)."""
        return {p: _xbar(self.left, self.right, self.sigma, p) for p in ("left", "right", "midpoint")}


def _xbar(left, right, sigma, policy):
    times = breakpoint_union(left, right)
    xl, xr = left.position(times), right.position(times)
    if policy == "left":
        pos = xl
    elif policy == "right":
        pos = xr
    elif policy == "midpoint":
        pos = 0.5 * (xl + xr)
    else:
        raise InputError(f"unknown shift policy {policy!r}")
    return shift_curve_from(times, pos - sigma * times)


def track_shift_pair(scenario: Scenario, evolution: Evolution | None = None, policy: str = "left",
                     strict: bool = False, method: str = "auto") -> ShiftPair:
    """Integrate ``x_L`` (anchor ``C_L``) and ``x_R`` (anchor ``C_R``) from the origin.

    The maximal crossing ``x_R - x_L`` is always reported; with ``strict`` a
    crossing beyond ``1e-9`` raises :class:`CertificationError`.
    """
    if evolution is None:
        evolution = solve_scenario(scenario)
    left, right = integrate_curves(
        evolution, [(scenario.C_L, 0.0, evolution.t_start), (scenario.C_R, 0.0, evolution.t_start)],
        method=method,
    )
    times = breakpoint_union(left, right)
    crossing = float(np.max(right.position(times) - left.position(times)))
    if strict and crossing > CROSSING_TOL:
        raise CertificationError(f"x_R exceeds x_L by {crossing:.3e}")
    xbar = _xbar(left, right, scenario.sigma, policy)
    return ShiftPair(left, right, xbar, scenario.sigma, policy, crossing, evolution)


@dataclass
class ProbeResult:
    spread: float
    threshold: float
    unique: bool
    terminal: list[float]
    curves: list[ShiftCurve]


def uniqueness_probe(evolution: Evolution, t0: float, x0: float, C: float, n_restarts: int = 4,
                     T: float | None = None) -> ProbeResult:
    """Re-integrate from ``(x0, t0)`` under varied tie-breaking and snapping tolerance.

    Restarts alternate the sweep direction used at points covered by fronts
    and scale the snapping tolerance down by decades.  The two sweeps differ
    only where several Filippov continuations exist, so a positive spread
    flags non-uniqueness of the discrete problem.
    """
    if n_restarts < 2:
        raise InputError("need at least two restarts")
    T = evolution.t_end if T is None else float(T)
    ties = ["left" if k % 2 == 0 else "right" for k in range(n_restarts)]
    tols = [SNAP_TOL * 10.0 ** -(k // 2) for k in range(n_restarts)]
    curves = integrate_curves(evolution, [(C, x0, t0)] * n_restarts, T, ties, tols)
    terminal = [c.positions[-1] for c in curves]
    spread = float(max(terminal) - min(terminal))
    threshold = 1e-8 * (T - t0)
    return ProbeResult(spread, threshold, spread <= threshold, terminal, curves)


def inclusion_violation(evolution: Evolution, curve: ShiftCurve, times: Sequence[float],
                        tol: float = SNAP_TOL, method: str = "auto") -> float:
    """Largest amount by which the curve speed leaves ``[f(U(x+),C), f(U(x-),C)]`` at ``times``."""
    f = _FCache(evolution.pair, curve.anchor, method)
    times = np.sort(np.asarray(times, dtype=float))
    xs = curve.position(times)
    vs = curve.speed_at(times)
    worst = 0.0
    for (t, fs), x, v in zip(evolution.sample(times), xs, vs):
        pos = fs.positions(t)
        lo, hi = _group(pos, x, tol * (1.0 + abs(x)))
        st = fs.states()
        f_minus, f_plus = f(float(st[lo])), f(float(st[hi]))
        worst = max(worst, f_plus - v, v - f_minus)
    return max(worst, 0.0)
