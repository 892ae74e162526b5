"""Scenario files, batch suites, artifact emission and the command-line entry point.

Scenario file format (``#`` starts a comment)::

    flux = burgers
    entropy = quadratic
    C_L = 1.0
    C_R = 0.0
    T = 10
    delta_rare = 1e-3        # default 1e-3 * (C_L - C_R)
    godunov_cells = 1024     # optional; enables the Godunov comparison
    seed = 0
    name = square-pulse
    out = results            # default output directory for ``run``
    snapshots = 0, 5, 10     # profile dump times, default 0, T/2, T

    [perturbation]
    # left  right  delta     (U0 = phi + delta on [left, right))
    -1.0    0.0    0.5
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from shockstab.convex_calculus import (
    ENTROPY_NAMES,
    FLUX_NAMES,
    bounds_on_box,
    make_pair,
    monotone_gap,
    normalized_flux,
    normalized_flux_grad,
    rel_entropy_flux,
)
from shockstab.entropy_monitor import stability_report
from shockstab.errors import HypothesisViolation, InputError
from shockstab.scalar_solver import (
    Scenario,
    compare_profiles,
    discretize_initial,
    godunov_reference,
    integrate_profile,
    oleinik_ratio,
    solve_scenario,
)
from shockstab.shift_tracker import track_shift_pair

SUITES = ("theorem", "lemmas", "oracle", "all")
EXIT_OK, EXIT_VERDICT, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

RANDOM_SUPPORT = (-5.0, 5.0)
RANDOM_MAX_INTERVALS = 8
GODUNOV_CELLS = 1024
GODUNOV_CFL = 0.5
LEMMA_GRID_POINTS = 10_000


class ScenarioParseError(InputError):
    """Malformed scenario text; ``line`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class ScenarioHypothesisError(ScenarioParseError, HypothesisViolation):
    pass


@dataclass(frozen=True)
class ScenarioFile:
    """Plain-data scenario description (picklable; names instead of callables)."""

    C_L: float
    C_R: float
    flux: str = "burgers"
    entropy: str = "quadratic_half"
    perturbation: tuple[tuple[float, float, float], ...] = ()
    T: float = 10.0
    delta_rare: float | None = None
    godunov_cells: int | None = None
    seed: int = 0
    name: str = "scenario"
    out: str | None = None
    snapshots: tuple[float, ...] | None = None

    def build(self) -> Scenario:
        return Scenario(make_pair(self.flux, self.entropy), self.C_L, self.C_R, self.perturbation,
                        self.T, self.delta_rare, self.seed, self.name)

    def snapshot_times(self) -> tuple[float, ...]:
        if self.snapshots is not None:
            return self.snapshots
        return (0.0, 0.5 * self.T, self.T)

    def to_text(self) -> str:
        lines = [f"name = {self.name}", f"flux = {self.flux}", f"entropy = {self.entropy}",
                 f"C_L = {self.C_L!r}", f"C_R = {self.C_R!r}", f"T = {self.T!r}", f"seed = {self.seed}"]
        if self.delta_rare is not None:
            lines.append(f"delta_rare = {self.delta_rare!r}")
        if self.godunov_cells is not None:
            lines.append(f"godunov_cells = {self.godunov_cells}")
        if self.out is not None:
            lines.append(f"out = {self.out}")
        if self.snapshots is not None:
            lines.append("snapshots = " + ", ".join(repr(t) for t in self.snapshots))
        lines += ["", "[perturbation]"]
        lines += [f"{a!r} {b!r} {v!r}" for a, b, v in self.perturbation]
        return "\n".join(lines) + "\n"


_KEYS = {
    "flux": str, "entropy": str, "C_L": float, "C_R": float, "T": float,
    "delta_rare": float, "godunov_cells": int, "seed": int, "name": str, "out": str,
    "snapshots": "times",
}


def _convert(kind, raw: str, key: str, line: int):
    try:
        if kind == "times":
            return tuple(float(v) for v in raw.replace(",", " ").split())
        if kind is float:
            val = float(raw)
            if not math.isfinite(val):
                raise ValueError
            return val
        if kind is int:
            return int(raw)
        return raw
    except ValueError:
        raise ScenarioParseError(f"bad value {raw!r} for {key}", line) from None


def parse_scenario(text: str) -> ScenarioFile:
    """Parse and validate scenario text; errors carry the offending line number."""
    values: dict = {}
    where: dict = {}
    rows: list[tuple[int, tuple[float, float, float]]] = []
    section = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if line != "[perturbation]":
                raise ScenarioParseError(f"unknown section {line!r}", n)
            if section == "perturbation":
                raise ScenarioParseError("duplicate [perturbation] section", n)
            section = "perturbation"
            continue
        if section == "perturbation":
            parts = line.replace(",", " ").split()
            if len(parts) != 3:
                raise ScenarioParseError("perturbation rows need 'left right delta'", n)
            try:
                a, b, v = (float(p) for p in parts)
            except ValueError:
                raise ScenarioParseError(f"non-numeric perturbation row {line!r}", n) from None
            if not all(math.isfinite(x) for x in (a, b, v)):
                raise ScenarioParseError("perturbation entries must be finite", n)
            if not a < b:
                raise ScenarioParseError(f"interval [{a}, {b}) is empty", n)
            if rows and a < rows[-1][1][1]:
                raise ScenarioParseError(
                    f"interval [{a}, {b}) overlaps or precedes the previous one (line {rows[-1][0]})", n)
            rows.append((n, (a, b, v)))
            continue
        if "=" not in line:
            raise ScenarioParseError(f"expected 'key = value', got {line!r}", n)
        key, raw_val = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ScenarioParseError(f"unknown key {key!r}", n)
        if key in values:
            raise ScenarioParseError(f"duplicate key {key!r} (first on line {where[key]})", n)
        values[key] = _convert(_KEYS[key], raw_val, key, n)
        where[key] = n

    for key in ("C_L", "C_R"):
        if key not in values:
            raise ScenarioParseError(f"missing required key {key!r}")
    if values.get("flux", "burgers") not in FLUX_NAMES:
        raise ScenarioParseError(f"unknown flux {values['flux']!r}; choose from {FLUX_NAMES}", where["flux"])
    if values.get("entropy", "quadratic_half") not in ENTROPY_NAMES:
        raise ScenarioParseError(f"unknown entropy {values['entropy']!r}; choose from {ENTROPY_NAMES}",
                                 where["entropy"])
    if not values["C_L"] > values["C_R"]:
        raise ScenarioHypothesisError(
            f"requires C_L > C_R (got C_L={values['C_L']}, C_R={values['C_R']})", where["C_R"])
    if values.get("T", 10.0) < 0:
        raise ScenarioParseError("T must be non-negative", where["T"])
    if "delta_rare" in values and not values["delta_rare"] > 0:
        raise ScenarioParseError("delta_rare must be positive", where["delta_rare"])
    if "godunov_cells" in values and values["godunov_cells"] < 16:
        raise ScenarioParseError("godunov_cells must be at least 16", where["godunov_cells"])
    spec = ScenarioFile(perturbation=tuple(r for _, r in rows), **values)
    T = spec.T
    for t in spec.snapshots or ():
        if not 0.0 <= t <= T:
            raise ScenarioParseError(f"snapshot time {t} outside [0, {T}]", where["snapshots"])
    return spec


def load_scenario(path: str | Path) -> ScenarioFile:
    return parse_scenario(Path(path).read_text())


# --- scenario generation -------------------------------------------------------

def random_scenario(seed: int, flux: str = "burgers", entropy: str = "quadratic",
                    C_L: float = 1.0, C_R: float = 0.0, T: float = 10.0,
                    delta_rare: float | None = None, name: str | None = None) -> ScenarioFile:
    """Up to 8 disjoint intervals in [-5, 5] with heights in ``+-(C_L - C_R)/2``."""
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, RANDOM_MAX_INTERVALS + 1))
    while True:
        cuts = np.sort(rng.uniform(*RANDOM_SUPPORT, size=2 * k))
        if np.all(np.diff(cuts) > 0):
            break
    amp = 0.5 * (C_L - C_R)
    heights = rng.uniform(-amp, amp, size=k)
    pert = tuple((float(cuts[2 * i]), float(cuts[2 * i + 1]), float(heights[i])) for i in range(k))
    return ScenarioFile(C_L, C_R, flux, entropy, pert, T, delta_rare, seed=seed,
                        name=name or f"random-{seed}-{flux}-{entropy}")


def child_seeds(seed: int, count: int) -> list[int]:
    """Independent per-scenario seeds derived from one suite seed."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


STOCK: tuple[ScenarioFile, ...] = (
    ScenarioFile(1.0, 0.0, "burgers", "quadratic_half", ((-1.0, 0.0, 0.5),), name="square-pulse"),
    ScenarioFile(1.0, 0.0, "burgers", "quadratic", ((1.0, 2.0, 0.5),), name="bump-ahead"),
    ScenarioFile(1.0, 0.0, "burgers", "quadratic", ((-3.0, -2.0, -0.5), (2.0, 3.0, 0.5)), name="two-sided"),
    ScenarioFile(1.0, 0.0, "quartic", "quartic_entropy", ((-2.0, -1.0, 0.4), (0.5, 1.5, -0.3)),
                 name="quartic-mixed"),
    ScenarioFile(1.0, -0.5, "cosh", "quadratic_half", ((-1.5, -0.5, 0.5), (0.25, 0.75, -0.5)),
                 name="cosh-pulse"),
)


# --- outcomes ------------------------------------------------------------------

@dataclass
class ScenarioOutcome:
    name: str
    suite: str
    passed: bool
    wall_time: float
    checks: dict[str, dict] = field(default_factory=dict)
    artifacts: dict[str, str] = field(default_factory=dict)  # relative file name -> text

    def summary(self) -> dict:
        return {"name": self.name, "suite": self.suite, "passed": self.passed, "checks": self.checks}


@dataclass
class SuiteResult:
    name: str
    seed: int
    count: int
    outcomes: list[ScenarioOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def wall_times(self) -> dict[str, float]:
        return {o.name: o.wall_time for o in self.outcomes}

    def failures(self) -> list[str]:
        return [o.name for o in self.outcomes if not o.passed]


def _check(passed, value, bound, **extra) -> dict:
    return {"passed": bool(passed), "value": float(value), "bound": float(bound), **extra}


def _profile_dumps(evolution, times, prefix) -> dict[str, str]:
    out = {}
    for prof in evolution.snapshots(sorted(times)):
        out[f"{prefix}profile_t{prof.time:.6g}.csv"] = prof.to_csv()
    return out


def run_scenario(spec: ScenarioFile, suite: str = "run", emit: bool = True) -> ScenarioOutcome:
    """Stability report (plus the Godunov check when ``godunov_cells`` is set)."""
    t_start = time.perf_counter()
    scenario = spec.build()
    evolution = solve_scenario(scenario)
    shift = track_shift_pair(scenario, evolution)
    report = stability_report(scenario, evolution, shift)
    checks = {k: {"passed": v.passed, "value": v.worst_margin, "bound": v.tolerance,
                  "time": v.worst_time, "vacuous": v.vacuous}
              for k, v in report.verdicts.items()}
    passed = report.passed
    if spec.godunov_cells:
        oracle = solver_oracle(scenario, evolution, spec.godunov_cells)
        checks.update(oracle)
        passed = passed and all(c["passed"] for c in oracle.values())
    artifacts = {}
    if emit:
        p = f"{spec.name}/"
        artifacts[p + "scenario.txt"] = spec.to_text()
        artifacts[p + "ledger.csv"] = report.ledger.to_csv()
        artifacts[p + "report.json"] = report.to_json(include_ledger=False)
        artifacts[p + "shift_left.csv"] = shift.left.to_csv()
        artifacts[p + "shift_right.csv"] = shift.right.to_csv()
        artifacts.update(_profile_dumps(evolution, spec.snapshot_times(), p))
    return ScenarioOutcome(spec.name, suite, bool(passed), time.perf_counter() - t_start, checks, artifacts)


def solver_oracle(scenario: Scenario, evolution=None, cells: int = GODUNOV_CELLS,
                  cfl: float = GODUNOV_CFL) -> dict[str, dict]:
    """Front tracking against Godunov, plus RH, conservation and Oleinik checks."""
    evolution = solve_scenario(scenario) if evolution is None else evolution
    final = evolution.final
    grid = godunov_reference(scenario, cells, cfl)
    window = (float(grid.edges[0]), float(grid.edges[-1]))
    width = window[1] - window[0]
    l1 = compare_profiles(final, grid, "L1", window)
    rh = evolution.rh_residual()
    pair, T = scenario.pair, scenario.T
    mass0 = integrate_profile(discretize_initial(scenario), *window)
    inflow = T * float(pair.flux(scenario.C_L) - pair.flux(scenario.C_R))
    drift = abs(integrate_profile(final, *window) - mass0 - inflow)
    drift_tol = 1e-10 * max(1.0, abs(mass0))
    ratio = oleinik_ratio(final, pair, scenario.delta_rare) if T > 0 else 0.0
    return {
        "godunov_l1": _check(l1 <= 5 * width / cells, l1, 5 * width / cells),
        "rh_residual": _check(rh <= 1e-12, rh, 1e-12),
        "conservation": _check(drift <= drift_tol, drift, drift_tol),
        "oleinik": _check(ratio <= 1 + 10 * scenario.delta_rare, ratio, 1 + 10 * scenario.delta_rare),
    }


# --- lemma suites --------------------------------------------------------------

def _random_monotone_poly(rng, eps: float, degree: int = 4):
    """``g'(s) = eps + sum c_k s^k`` with ``c_k >= 0``, normalized to ``int_0^1 g = 1``."""
    dcoef = rng.uniform(0.0, 2.0, size=degree)
    dcoef[0] += eps
    deriv = np.polynomial.Polynomial(dcoef)
    g = deriv.integ()
    g = g + (1.0 - (g.integ()(1.0) - g.integ()(0.0)))
    return g, deriv


def gap_suite(seed: int, count: int) -> dict[str, dict]:
    """Gap inequality on random polynomial pairs and exact equality on the linear family."""
    rng = np.random.default_rng(seed)
    worst_gen, worst_lin = math.inf, 0.0
    for _ in range(count):
        eg, eh = rng.uniform(0.05, 2.0, size=2)
        g, dg = _random_monotone_poly(rng, eg)
        h, dh = _random_monotone_poly(rng, eh)
        h = h + rng.uniform(-2, 2)
        gap, bound = monotone_gap((g, dg), (h, dh), eg, eh)
        worst_gen = min(worst_gen, gap - bound)
        a, b, c = rng.uniform(0.01, 2.0), rng.uniform(0.01, 2.0), rng.uniform(-2, 2)
        gap, bound = monotone_gap((lambda s, a=a: 1 + a * (s - 0.5), lambda s, a=a: a + 0 * s),
                                  (lambda s, b=b, c=c: b * s + c, lambda s, b=b: b + 0 * s), a, b)
        worst_lin = max(worst_lin, abs(gap - bound))
    if count == 0:
        worst_gen = 0.0
    return {
        "gap_general": _check(worst_gen >= -1e-10, worst_gen, -1e-10),
        "gap_linear_equality": _check(worst_lin <= 1e-12, worst_lin, 1e-12),
    }


def gradient_suite(seed: int, points: int = LEMMA_GRID_POINTS, lo: float = -3.0,
                   hi: float = 3.0) -> dict[str, dict]:
    """Sampled bounds on ``df/dU`` and ``df/dC`` for every registered pair."""
    rng = np.random.default_rng(seed)
    out = {}
    for fl in FLUX_NAMES:
        for en in ENTROPY_NAMES:
            pair = make_pair(fl, en)
            box = bounds_on_box(pair, lo, hi)
            U = rng.uniform(lo, hi, points)
            C = rng.uniform(lo, hi, points)
            dU, dC = normalized_flux_grad(pair, U, C)
            lo_U = float(np.min(dU)) if points else 0.0
            hi_U = float(np.max(dU) - box.L_fU) if points else -1.0
            lo_C = float(np.min(dC) - box.eps_fC) if points else 0.0
            out[f"grad_U_nonneg[{pair.name}]"] = _check(lo_U >= -1e-8, lo_U, -1e-8)
            out[f"grad_U_upper[{pair.name}]"] = _check(hi_U <= 1e-8, hi_U, 1e-8)
            out[f"grad_C_lower[{pair.name}]"] = _check(lo_C >= -1e-8, lo_C, -1e-8)
    return out


def closed_form_oracle(seed: int, points: int = LEMMA_GRID_POINTS, lo: float = -3.0,
                       hi: float = 3.0) -> dict[str, dict]:
    """Quadrature path against the Burgers closed forms for ``F`` and ``f``."""
    rng = np.random.default_rng(seed)
    pair = make_pair("burgers", "quadratic_half")
    U = rng.uniform(lo, hi, points)
    C = rng.uniform(lo, hi, points)
    eF = float(np.max(np.abs(rel_entropy_flux(pair, U, C) - (2 * U**3 - 3 * C * U**2 + C**3) / 6))) if points else 0.0
    ef = float(np.max(np.abs(normalized_flux(pair, U, C) - (2 * U + C) / 3))) if points else 0.0
    return {"closed_form_F": _check(eF <= 1e-9, eF, 1e-9), "closed_form_f": _check(ef <= 1e-9, ef, 1e-9)}


# --- suites ----------------------------------------------------------------------

def _theorem_specs(seed: int, count: int, delta_rare: float | None) -> list[ScenarioFile]:
    specs = []
    for k, s in enumerate(child_seeds(seed, count)):
        base = random_scenario(s, "burgers", "quadratic", delta_rare=delta_rare,
                               name=f"theorem-{seed}-{k:03d}-burgers")
        specs.append(base)
        specs.append(replace(base, flux="quartic", entropy="quartic_entropy",
                             name=f"theorem-{seed}-{k:03d}-quartic"))
    return specs


def _run_many(specs: Sequence[ScenarioFile], suite: str, workers: int, emit: bool) -> list[ScenarioOutcome]:
    if workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_scenario, specs, [suite] * len(specs), [emit] * len(specs)))
    return [run_scenario(s, suite, emit) for s in specs]


def _lemma_outcome(name, checks, t0, suite) -> ScenarioOutcome:
    passed = all(c["passed"] for c in checks.values())
    art = {f"{name}/checks.json": json.dumps(checks, indent=2, sort_keys=True) + "\n"}
    return ScenarioOutcome(name, suite, passed, time.perf_counter() - t0, checks, art)


def run_suite(name: str, seed: int = 0, count: int = 25, delta_rare: float | None = None,
              workers: int = 1, emit: bool = True) -> SuiteResult:
    """Run one named suite.

    ``theorem`` checks ``count`` random scenarios for each of two flux/entropy
    pairs; ``lemmas`` runs ``count`` random gap pairs and the gradient sweep;
    ``oracle`` compares the stock scenarios (the first ``count``, at most five)
    with Godunov and the closed forms.  Results depend only on the arguments.
    """
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {SUITES}")
    if count < 0:
        raise InputError("count must be non-negative")
    result = SuiteResult(name, seed, count)
    if name in ("theorem", "all"):
        result.outcomes += _run_many(_theorem_specs(seed, count, delta_rare), "theorem", workers, emit)
    if name in ("lemmas", "all") and count > 0:
        t0 = time.perf_counter()
        result.outcomes.append(_lemma_outcome("lemma-gap", gap_suite(seed, count), t0, "lemmas"))
        t0 = time.perf_counter()
        result.outcomes.append(_lemma_outcome("lemma-gradient", gradient_suite(seed), t0, "lemmas"))
    if name in ("oracle", "all") and count > 0:
        specs = [replace(s, godunov_cells=GODUNOV_CELLS, delta_rare=delta_rare) for s in STOCK[:count]]
        result.outcomes += _run_many(specs, "oracle", workers, emit)
        t0 = time.perf_counter()
        result.outcomes.append(_lemma_outcome("closed-form", closed_form_oracle(seed), t0, "oracle"))
    return result


# --- artifacts -------------------------------------------------------------------

def emit_artifacts(result: SuiteResult, directory: str | Path) -> dict[str, str]:
    """Write every artifact under ``directory`` and a ``manifest.json`` of sha256 hashes.

    Wall-clock times are deliberately left out so reruns give identical bytes.
    """
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    files: dict[str, str] = {}
    for o in result.outcomes:
        files.update(o.artifacts)
    if result.outcomes:
        summary = {"suite": result.name, "seed": result.seed, "count": result.count,
                   "passed": result.passed, "outcomes": [o.summary() for o in result.outcomes]}
        files["summary.json"] = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    manifest = {}
    for rel in sorted(files):
        data = files[rel].encode()
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        manifest[rel] = hashlib.sha256(data).hexdigest()
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def format_result(result: SuiteResult, fmt: str) -> str:
    """Per-check table (``csv``) or summary document (``json``)."""
    if fmt == "json":
        return json.dumps({"suite": result.name, "passed": result.passed,
                           "outcomes": [o.summary() for o in result.outcomes]}, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scenario", "check", "passed", "value", "bound"])
    for o in result.outcomes:
        for k, c in o.checks.items():
            w.writerow([o.name, k, int(c["passed"]), repr(c["value"]), repr(c["bound"])])
    return buf.getvalue()


# --- command line -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shockstab", description="Shock stability checks for scalar conservation laws.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--delta-rare", type=float, default=None, help="rarefaction step size")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="stdout summary format")
    common.add_argument("--out", default=None, help="artifact directory")
    common.add_argument("--workers", type=int, default=1)
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", parents=[common], help="check one scenario file")
    r.add_argument("--scenario", required=True)
    s = sub.add_parser("suite", parents=[common], help="run a named suite")
    s.add_argument("--name", choices=SUITES, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=25)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.delta_rare is not None and not args.delta_rare > 0:
            raise InputError("--delta-rare must be positive")
        if args.command == "run":
            spec = load_scenario(args.scenario)
            if args.delta_rare is not None:
                spec = replace(spec, delta_rare=args.delta_rare)
            result = SuiteResult("run", spec.seed, 1, [run_scenario(spec)])
            out = args.out or spec.out
        else:
            result = run_suite(args.name, args.seed, args.count, args.delta_rare, args.workers)
            out = args.out
        if out:
            emit_artifacts(result, out)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # solver/tracker failures and bugs alike
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(format_result(result, args.format))
    for o in result.outcomes:
        print(f"# {o.name}: {'PASS' if o.passed else 'FAIL'} ({o.wall_time:.2f}s)", file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_VERDICT


if __name__ == "__main__":
    sys.exit(main())
