"""Entropy solutions of ``u_t + A(u)_x = 0`` for piecewise-constant data.

The main path is event-driven wavefront tracking.  Rarefactions are split
into steps whose states lie on a fixed node set (a uniform lattice of
spacing ``delta_rare`` merged with every initial state), so the computed
field is the exact entropy solution for the piecewise-linear interpolant of
``A`` through those nodes.  Shock speeds coincide with those of ``A`` itself.
Collisions only ever merge fronts; no new rarefaction steps appear after the
initial resolution.

A first-order Godunov scheme with the exact convex-flux Riemann flux is
provided as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Literal, Sequence

import numpy as np
from scipy.optimize import brentq

from shockstab.convex_calculus import FluxEntropyPair, chebyshev_points
from shockstab.errors import HypothesisViolation, InputError, InternalError, ResourceError

SHOCK = "shock"
RAREFACTION = "rarefaction-step"

ZERO_JUMP = 1e-14
COLLISION_TOL = 1e-12
MAX_EVENTS = 10_000_000


@dataclass(frozen=True)
class Front:
    position: float
    left_state: float
    right_state: float
    speed: float
    kind: str

    def rh_residual(self, pair: FluxEntropyPair) -> float:
        jump = self.right_state - self.left_state
        return abs(self.speed * jump - (pair.flux(self.right_state) - pair.flux(self.left_state)))


def _kind(left: float, right: float) -> str:
    return SHOCK if left > right else RAREFACTION


@dataclass(frozen=True)
class PiecewiseConstantProfile:
    """``U(., time)`` as ordered fronts separating constant states."""

    time: float
    leftmost_state: float
    fronts: tuple[Front, ...]
    C_L: float | None = None
    C_R: float | None = None

    def __post_init__(self):
        pos = self.positions
        if len(pos) > 1 and np.any(np.diff(pos) < 0):
            raise InputError("front positions must be non-decreasing")
        st = self.states
        for k, fr in enumerate(self.fronts):
            if fr.left_state != st[k]:
                raise InputError(f"front {k} left state does not match its neighbour")

    @property
    def positions(self) -> np.ndarray:
        return np.array([f.position for f in self.fronts], dtype=float)

    @property
    def states(self) -> np.ndarray:
        """``states[k]`` is the constant value left of front ``k``; the last entry is the far right."""
        out = [self.leftmost_state]
        out.extend(f.right_state for f in self.fronts)
        # the consistency check in __post_init__ reads left_state against this list
        return np.array(out, dtype=float)

    @property
    def speeds(self) -> np.ndarray:
        return np.array([f.speed for f in self.fronts], dtype=float)

    @property
    def rightmost_state(self) -> float:
        return self.fronts[-1].right_state if self.fronts else self.leftmost_state

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.states)))

    def total_variation(self) -> float:
        return float(np.sum(np.abs(np.diff(self.states))))

    def to_csv(self) -> str:
        """Header ``time,leftmost_state`` then ``position,left_state,right_state,speed,kind`` rows."""
        lines = [f"{self.time!r},{self.leftmost_state!r}"]
        for f in self.fronts:
            lines.append(f"{f.position!r},{f.left_state!r},{f.right_state!r},{f.speed!r},{f.kind}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "PiecewiseConstantProfile":
        rows = [r for r in text.strip().splitlines() if r.strip()]
        t, left = (float(v) for v in rows[0].split(","))
        fronts = []
        for r in rows[1:]:
            p, lft, rgt, s, kind = r.split(",")
            fronts.append(Front(float(p), float(lft), float(rgt), float(s), kind.strip()))
        return cls(t, left, tuple(fronts))


def shock_profile(C_L: float, C_R: float, position: float = 0.0, time: float = 0.0,
                  pair: FluxEntropyPair | None = None) -> PiecewiseConstantProfile:
    """The step ``C_L | C_R`` located at ``position``."""
    speed = float(pair.rh_speed(C_L, C_R)) if pair is not None else math.nan
    front = Front(float(position), float(C_L), float(C_R), speed, _kind(C_L, C_R))
    return PiecewiseConstantProfile(time, float(C_L), (front,), C_L, C_R)


@dataclass(frozen=True)
class Scenario:
    """Riemann data ``C_L > C_R`` plus a compactly supported piecewise-constant perturbation.

    ``perturbation`` holds ``(left, right, delta)`` triples: ``U0 = phi + delta``
    on ``[left, right)``.
    """

    pair: FluxEntropyPair
    C_L: float
    C_R: float
    perturbation: tuple[tuple[float, float, float], ...] = ()
    T: float = 10.0
    delta_rare: float | None = None
    seed: int = 0
    name: str = "scenario"

    def __post_init__(self):
        if not self.C_L > self.C_R:
            raise HypothesisViolation(f"requires C_L > C_R (got C_L={self.C_L}, C_R={self.C_R})")
        pert = tuple((float(a), float(b), float(v)) for a, b, v in self.perturbation)
        object.__setattr__(self, "perturbation", pert)
        prev = -math.inf
        for k, (a, b, v) in enumerate(pert):
            if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(v)):
                raise InputError(f"perturbation interval {k} is not finite")
            if not a < b:
                raise InputError(f"perturbation interval {k}: left {a} must be < right {b}")
            if a < prev:
                raise InputError(f"perturbation interval {k} overlaps or precedes interval {k - 1}")
            prev = b
        if self.T < 0:
            raise InputError("horizon T must be non-negative")
        if self.delta_rare is None:
            object.__setattr__(self, "delta_rare", 1e-3 * (self.C_L - self.C_R))
        if not self.delta_rare > 0:
            raise InputError("delta_rare must be positive")

    @property
    def sigma(self) -> float:
        return float(self.pair.rh_speed(self.C_L, self.C_R))

    def perturbation_l2(self) -> float:
        """``||U0 - phi||_{L2}``, exact for piecewise-constant perturbations."""
        return math.sqrt(sum(v * v * (b - a) for a, b, v in self.perturbation))

    def support(self) -> tuple[float, float]:
        if not self.perturbation:
            return 0.0, 0.0
        return min(0.0, self.perturbation[0][0]), max(0.0, self.perturbation[-1][1])


# --- Riemann problem ----------------------------------------------------------

def make_nodes(states: Sequence[float], delta_rare: float) -> np.ndarray:
    """Uniform lattice of spacing ``delta_rare`` over the state range, merged with ``states``."""
    states = np.unique(np.asarray(states, dtype=float))
    lo, hi = float(states[0]), float(states[-1])
    n = int(math.ceil((hi - lo) / delta_rare - 1e-9))
    lattice = lo + delta_rare * np.arange(n + 1)
    lattice = lattice[lattice < hi]
    merged = np.unique(np.concatenate([lattice, states]))
    # lattice points within a hair of a true state would make near-zero steps
    keep = np.ones(len(merged), dtype=bool)
    exact = set(states.tolist())
    close = 1e-9 * delta_rare
    for k in range(1, len(merged)):
        if merged[k] - merged[k - 1] < close:
            drop = k if merged[k] not in exact else k - 1
            keep[drop] = False
    return merged[keep]


def _fan_states(uL: float, uR: float, delta_rare: float, nodes: np.ndarray | None) -> list[float]:
    if nodes is None:
        inner = []
    else:
        margin = 1e-12 * (1.0 + max(abs(uL), abs(uR)))
        lo = np.searchsorted(nodes, uL + margin, side="left")
        hi = np.searchsorted(nodes, uR - margin, side="right")
        inner = nodes[lo:hi].tolist()
    pts = [uL, *inner, uR]
    out = [uL]
    for a, b in zip(pts[:-1], pts[1:]):
        n = max(1, int(math.ceil((b - a) / delta_rare - 1e-9)))
        out.extend(a + (b - a) * k / n for k in range(1, n))
        out.append(b)
    return out


def solve_riemann(pair: FluxEntropyPair, uL: float, uR: float, delta_rare: float,
                  position: float = 0.0, nodes: np.ndarray | None = None) -> list[Front]:
    """Entropy solution of the Riemann problem ``uL | uR`` as fronts at ``position``.

    ``uL > uR`` gives one shock; ``uL < uR`` a fan of steps no larger than
    ``delta_rare`` (through ``nodes`` when given), each at the RH speed of its
    own small jump.
    """
    if not delta_rare > 0:
        raise InputError("delta_rare must be positive")
    uL, uR = float(uL), float(uR)
    if abs(uL - uR) < ZERO_JUMP:
        return []
    if uL > uR:
        return [Front(float(position), uL, uR, float(pair.rh_speed(uL, uR)), SHOCK)]
    st = np.array(_fan_states(uL, uR, delta_rare, nodes))
    speeds = pair.rh_speed(st[:-1], st[1:])
    return [Front(float(position), float(a), float(b), float(s), RAREFACTION)
            for a, b, s in zip(st[:-1], st[1:], speeds)]


def discretize_initial(scenario: Scenario) -> PiecewiseConstantProfile:
    """``phi + perturbation`` at ``t = 0`` as raw jumps (fans are resolved by :func:`evolve`)."""
    cuts = sorted({0.0, *(a for a, _, _ in scenario.perturbation), *(b for _, b, _ in scenario.perturbation)})

    def value(x):
        base = scenario.C_L if x < 0 else scenario.C_R
        for a, b, v in scenario.perturbation:
            if a <= x < b:
                return base + v
        return base

    vals = [scenario.C_L]
    vals += [value(0.5 * (a + b)) for a, b in zip(cuts[:-1], cuts[1:])]
    vals.append(scenario.C_R)
    fronts = []
    for x, lft, rgt in zip(cuts, vals[:-1], vals[1:]):
        if lft != rgt:
            fronts.append(Front(x, lft, rgt, float(scenario.pair.rh_speed(lft, rgt)), _kind(lft, rgt)))
    return PiecewiseConstantProfile(0.0, scenario.C_L, tuple(fronts), scenario.C_L, scenario.C_R)


# --- front tracking -------------------------------------------------------------

class FrontSet:
    """Mutable ordered set of straight fronts ``x = x0 + speed (t - t0)``."""

    __slots__ = ("ids", "x0", "t0", "speed", "left", "right", "leftmost")

    def __init__(self, leftmost, ids, x0, t0, speed, left, right):
        self.leftmost = float(leftmost)
        self.ids = np.asarray(ids, dtype=np.int64)
        self.x0 = np.asarray(x0, dtype=float)
        self.t0 = np.asarray(t0, dtype=float)
        self.speed = np.asarray(speed, dtype=float)
        self.left = np.asarray(left, dtype=float)
        self.right = np.asarray(right, dtype=float)

    def __len__(self):
        return len(self.ids)

    def copy(self) -> "FrontSet":
        return FrontSet(self.leftmost, self.ids.copy(), self.x0.copy(), self.t0.copy(),
                        self.speed.copy(), self.left.copy(), self.right.copy())

    def positions(self, t: float) -> np.ndarray:
        return self.x0 + self.speed * (t - self.t0)

    def position(self, k: int, t: float) -> float:
        return float(self.x0[k] + self.speed[k] * (t - self.t0[k]))

    def states(self) -> np.ndarray:
        return np.concatenate([[self.leftmost], self.right])

    def apply(self, splices) -> None:
        """Replace index ranges; ``splices`` are ``(start, count, born)`` on the pre-event order."""
        cols = ("ids", "x0", "t0", "speed", "left", "right")
        parts = {c: [] for c in cols}
        cursor = 0
        for start, count, born in splices:
            for c in cols:
                parts[c].append(getattr(self, c)[cursor:start])
                parts[c].append(born[c])
            cursor = start + count
        for c in cols:
            parts[c].append(getattr(self, c)[cursor:])
            setattr(self, c, np.concatenate(parts[c]))

    def snapshot(self, t: float, C_L=None, C_R=None) -> PiecewiseConstantProfile:
        pos = self.positions(t)
        fronts = tuple(
            Front(float(p), float(a), float(b), float(s), _kind(a, b))
            for p, a, b, s in zip(pos, self.left, self.right, self.speed)
        )
        return PiecewiseConstantProfile(float(t), self.leftmost, fronts, C_L, C_R)


def _born(fronts: list[Front], t: float, next_id: int) -> dict[str, np.ndarray]:
    n = len(fronts)
    return {
        "ids": np.arange(next_id, next_id + n, dtype=np.int64),
        "x0": np.array([f.position for f in fronts], dtype=float),
        "t0": np.full(n, float(t)),
        "speed": np.array([f.speed for f in fronts], dtype=float),
        "left": np.array([f.left_state for f in fronts], dtype=float),
        "right": np.array([f.right_state for f in fronts], dtype=float),
    }


@dataclass
class Event:
    time: float
    splices: list  # (start, count, born) against the pre-event order


@dataclass
class Evolution:
    """Immutable record of one front-tracking run.

    ``initial`` is the resolved front set at ``t_start``; replaying the
    ``events`` in order reproduces the field at any time up to ``t_end``.
    """

    pair: FluxEntropyPair
    nodes: np.ndarray
    delta_rare: float
    t_start: float
    t_end: float
    initial: FrontSet
    events: list[Event] = field(default_factory=list)
    C_L: float | None = None
    C_R: float | None = None
    final: PiecewiseConstantProfile | None = None

    @property
    def event_times(self) -> np.ndarray:
        return np.array([e.time for e in self.events], dtype=float)

    def replay(self) -> Iterator[tuple[float, float, FrontSet]]:
        """Yield ``(t_a, t_b, fronts)`` for each inter-event interval.

        The yielded :class:`FrontSet` is updated in place after the consumer
        resumes the generator; copy it if it must outlive the interval.
        """
        fs = self.initial.copy()
        t = self.t_start
        for ev in self.events:
            yield t, ev.time, fs
            fs.apply(ev.splices)
            t = ev.time
        yield t, self.t_end, fs

    def all_fronts(self) -> dict[str, np.ndarray]:
        """Speed and states of every front that ever existed in the run."""
        cols = ("speed", "left", "right")
        parts = {c: [getattr(self.initial, c)] for c in cols}
        for ev in self.events:
            for _, _, born in ev.splices:
                for c in cols:
                    parts[c].append(born[c])
        return {c: np.concatenate(parts[c]) for c in cols}

    def rh_residual(self) -> float:
        """Largest ``|s (u+ - u-) - (A(u+) - A(u-))|`` over :meth:`all_fronts`."""
        fr = self.all_fronts()
        if fr["speed"].size == 0:
            return 0.0
        res = fr["speed"] * (fr["right"] - fr["left"]) - (self.pair.flux(fr["right"]) - self.pair.flux(fr["left"]))
        return float(np.max(np.abs(res)))

    def sample(self, times: Sequence[float]) -> Iterator[tuple[float, FrontSet]]:
        """Yield ``(t, fronts)`` at the given non-decreasing ``times`` (fronts valid at ``t``)."""
        times = list(times)
        k = 0
        for ta, tb, fs in self.replay():
            last = tb == self.t_end
            while k < len(times) and (times[k] < tb or (last and times[k] <= tb)):
                if times[k] < ta - 1e-15:
                    raise InputError("sample times must be non-decreasing and inside the run")
                yield times[k], fs
                k += 1
        if k < len(times):
            raise InputError(f"sample time {times[k]} beyond run end {self.t_end}")

    def snapshots(self, times: Sequence[float]) -> Iterator[PiecewiseConstantProfile]:
        """Profiles at the given non-decreasing ``times``."""
        for t, fs in self.sample(times):
            yield fs.snapshot(t, self.C_L, self.C_R)

    def profile_at(self, t: float) -> PiecewiseConstantProfile:
        return next(self.snapshots([t]))


def _resolve(profile: PiecewiseConstantProfile, pair, delta_rare, nodes, next_id):
    fronts: list[Front] = []
    for fr in profile.fronts:
        fronts.extend(solve_riemann(pair, fr.left_state, fr.right_state, delta_rare, fr.position, nodes))
    born = _born(fronts, profile.time, next_id)
    fs = FrontSet(profile.leftmost_state, born["ids"], born["x0"], born["t0"],
                  born["speed"], born["left"], born["right"])
    return fs, next_id + len(fronts)


def track(profile: PiecewiseConstantProfile, pair: FluxEntropyPair, t_target: float,
          delta_rare: float, nodes: np.ndarray | None = None) -> Evolution:
    """Evolve ``profile`` to ``t_target`` and keep the full event log."""
    t = float(profile.time)
    if t_target < t:
        raise InputError(f"t_target={t_target} precedes profile time {t}")
    if nodes is None:
        nodes = make_nodes(profile.states, delta_rare)
    C_L = profile.C_L if profile.C_L is not None else profile.leftmost_state
    C_R = profile.C_R if profile.C_R is not None else profile.rightmost_state
    if t_target == t:
        fs = FrontSet(profile.leftmost_state, np.arange(len(profile.fronts)), profile.positions,
                      np.full(len(profile.fronts), t), profile.speeds,
                      [f.left_state for f in profile.fronts], [f.right_state for f in profile.fronts])
        return Evolution(pair, nodes, delta_rare, t, t, fs, [], C_L, C_R, profile)

    fs, next_id = _resolve(profile, pair, delta_rare, nodes, 0)
    ev = Evolution(pair, nodes, delta_rare, t, float(t_target), fs.copy(), [], C_L, C_R)
    while True:
        n = len(fs)
        if n < 2:
            break
        pos = fs.positions(t)
        gap = np.diff(pos)
        if gap.min() < -1e-9 * (1.0 + np.abs(pos).max()):
            raise InternalError(f"fronts out of order at t={t} (gap {gap.min():.3e})")
        gap = np.maximum(gap, 0.0)
        closing = fs.speed[:-1] - fs.speed[1:]
        with np.errstate(divide="ignore", invalid="ignore"):
            dt = np.where(closing > 0.0, gap / closing, np.inf)
        dmin = float(dt.min())
        if not t + dmin <= t_target:
            break
        t_new = t + dmin
        hit = np.flatnonzero(dt <= dmin + COLLISION_TOL * (1.0 + t_new))
        splices = []
        states = fs.states()
        pos_new = fs.positions(t_new)
        k = 0
        while k < len(hit):
            i = j = int(hit[k])
            while k + 1 < len(hit) and hit[k + 1] == j + 1:
                k += 1
                j = int(hit[k])
            j += 1  # chain covers fronts i..j
            k += 1
            x = float(np.mean(pos_new[i:j + 1]))
            new = solve_riemann(pair, states[i], states[j + 1], delta_rare, x, nodes)
            splices.append((i, j - i + 1, _born(new, t_new, next_id)))
            next_id += len(new)
        fs.apply(splices)
        ev.events.append(Event(t_new, splices))
        t = t_new
        if len(ev.events) > MAX_EVENTS:
            raise ResourceError(f"more than {MAX_EVENTS} collision events")
    ev.final = fs.snapshot(float(t_target), C_L, C_R)
    return ev


def evolve(profile: PiecewiseConstantProfile, pair: FluxEntropyPair, t_target: float,
           delta_rare: float, nodes: np.ndarray | None = None) -> PiecewiseConstantProfile:
    """Profile at ``t_target``; use :func:`track` when event times are needed."""
    return track(profile, pair, t_target, delta_rare, nodes).final


def solve_scenario(scenario: Scenario, nodes: np.ndarray | None = None) -> Evolution:
    return track(discretize_initial(scenario), scenario.pair, scenario.T, scenario.delta_rare, nodes)


def trace(profile: PiecewiseConstantProfile, x: float, side: Literal["left", "right"]) -> float:
    """One-sided limit ``U(x-)`` (``side="left"``) or ``U(x+)``."""
    pos = profile.positions
    if side == "left":
        k = np.searchsorted(pos, x, side="left")
    elif side == "right":
        k = np.searchsorted(pos, x, side="right")
    else:
        raise InputError(f"side must be 'left' or 'right', not {side!r}")
    return float(profile.states[k])


# --- oracle and norms -----------------------------------------------------------

@dataclass(frozen=True)
class GridProfile:
    """Cell averages on a uniform grid; constant extension outside."""

    edges: np.ndarray
    values: np.ndarray
    time: float


def _steps(obj) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(obj, PiecewiseConstantProfile):
        return obj.positions, obj.states
    if isinstance(obj, GridProfile):
        v = np.asarray(obj.values, dtype=float)
        return np.asarray(obj.edges, dtype=float), np.concatenate([[v[0]], v, [v[-1]]])
    raise InputError(f"cannot compare object of type {type(obj).__name__}")


def _eval_steps(breaks, values, x):
    return values[np.searchsorted(breaks, x, side="right")]


def compare_profiles(a, b, metric: Literal["L1", "L2"] = "L1",
                     window: tuple[float, float] | None = None) -> float:
    """``||a - b||`` over ``window`` by exact integration of two step functions."""
    if window is None:
        raise InputError("a window is required")
    lo, hi = map(float, window)
    if not lo < hi:
        raise InputError(f"empty window [{lo}, {hi}]")
    ba, va = _steps(a)
    bb, vb = _steps(b)
    cuts = np.concatenate([[lo, hi], ba, bb])
    cuts = np.unique(cuts[(cuts >= lo) & (cuts <= hi)])
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    diff = np.abs(_eval_steps(ba, va, mids) - _eval_steps(bb, vb, mids))
    width = np.diff(cuts)
    if metric == "L1":
        return float(np.sum(diff * width))
    if metric == "L2":
        return float(np.sqrt(np.sum(diff**2 * width)))
    raise InputError(f"metric must be L1 or L2, not {metric!r}")


def integrate_profile(profile: PiecewiseConstantProfile, lo: float, hi: float) -> float:
    """``int_lo^hi U dx``."""
    pos = np.clip(profile.positions, lo, hi)
    edges = np.concatenate([[lo], pos, [hi]])
    return float(np.sum(profile.states * np.diff(edges)))


def cell_averages(profile: PiecewiseConstantProfile, edges: np.ndarray) -> np.ndarray:
    pos = profile.positions
    st = profile.states
    cuts = np.unique(np.concatenate([edges, pos[(pos > edges[0]) & (pos < edges[-1])]]))
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    mass = _eval_steps(pos, st, mids) * np.diff(cuts)
    cell = np.searchsorted(edges, mids, side="right") - 1
    return np.bincount(cell, weights=mass, minlength=len(edges) - 1) / np.diff(edges)


def flux_minimizer(pair: FluxEntropyPair) -> float:
    """Argmin of the convex flux (``+-inf`` when ``A`` is monotone)."""
    a, b = -1.0, 1.0
    for _ in range(60):
        da, db = float(pair.flux_deriv(np.asarray(a))), float(pair.flux_deriv(np.asarray(b)))
        if da <= 0.0 <= db:
            return brentq(lambda u: float(pair.flux_deriv(np.asarray(u))), a, b, xtol=1e-15)
        if da > 0.0:
            a *= 2.0
        if db < 0.0:
            b *= 2.0
    return -math.inf if float(pair.flux_deriv(np.asarray(0.0))) > 0 else math.inf


def godunov_flux(pair: FluxEntropyPair, uL: np.ndarray, uR: np.ndarray, u_star: float) -> np.ndarray:
    """Exact Riemann (Godunov) flux for a convex ``A``."""
    lo = np.minimum(uL, uR)
    hi = np.maximum(uL, uR)
    rising = pair.flux(np.clip(u_star, lo, hi))
    falling = np.maximum(pair.flux(uL), pair.flux(uR))
    return np.where(uL <= uR, rising, falling)


def max_wave_speed(pair: FluxEntropyPair, lo: float, hi: float) -> float:
    xs = chebyshev_points(lo, hi, 257) if hi > lo else np.array([lo])
    return float(np.max(np.abs(pair.flux_deriv(xs))))


def godunov_reference(scenario: Scenario, cells: int, cfl: float = 0.5,
                      t: float | None = None) -> GridProfile:
    """First-order Godunov solution at time ``t`` (default ``scenario.T``).

    The domain is padded by the maximal wave speed times ``t`` on each side
    so that boundary effects cannot reach the perturbation support.
    """
    if cells < 16:
        raise InputError("godunov_reference needs at least 16 cells")
    if not 0.0 < cfl <= 0.9:
        raise InputError(f"cfl must lie in (0, 0.9], got {cfl}")
    t_end = scenario.T if t is None else float(t)
    init = discretize_initial(scenario)
    st = init.states
    speed = max(max_wave_speed(scenario.pair, float(st.min()), float(st.max())), 1e-12)
    a, b = scenario.support()
    pad = speed * t_end + 1.0
    edges = np.linspace(a - pad, b + pad, cells + 1)
    dx = edges[1] - edges[0]
    u = cell_averages(init, edges)
    u_star = flux_minimizer(scenario.pair)
    steps = max(1, int(math.ceil(t_end * speed / (cfl * dx))))
    dt = t_end / steps
    lam = dt / dx
    for _ in range(steps):
        ext = np.concatenate([[u[0]], u, [u[-1]]])
        F = godunov_flux(scenario.pair, ext[:-1], ext[1:], u_star)
        u = u - lam * np.diff(F)
    return GridProfile(edges, u, t_end)


def oleinik_ratio(profile: PiecewiseConstantProfile, pair: FluxEntropyPair,
                  delta_rare: float = 0.0) -> float:
    """Largest normalized one-sided increase ``inf A'' * t * (U(y-) - U(x+) - delta_rare) / (y - x)``.

    Pairs ``x < y`` run over front positions; one step of size ``delta_rare``
    is discounted because a single discretized rarefaction step carries its
    whole increase at one point.
    """
    if not profile.time > 0:
        raise InputError("oleinik_ratio needs profile.time > 0")
    pos = profile.positions
    st = profile.states
    if len(pos) < 2 or np.all(np.diff(st) <= 0):
        return 0.0
    lo, hi = float(st.min()), float(st.max())
    alpha = float(np.min(pair.flux_second(chebyshev_points(lo, hi, 257) if hi > lo else np.array([lo]))))
    after = st[1:-1]   # U(x_i+) for i < n-1
    best = 0.0
    for i in range(len(pos) - 1):
        width = pos[i + 1:] - pos[i]
        rise = st[i + 1:-1] - after[i] - delta_rare
        # st[j] is U(x_j-) for j = i+1..n-1
        good = rise > 0
        if not np.any(good):
            continue
        if np.any(good & (width <= 0)):
            return math.inf
        best = max(best, float(np.max(rise[good] / width[good])))
    return best * alpha * profile.time
