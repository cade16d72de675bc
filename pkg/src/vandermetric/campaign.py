"""Seeded randomized verification campaigns.

Every campaign is a pure function of its configuration: inputs are drawn
from a generator seeded with the campaign seed, trials are indexed in draw
order, and reports are emitted in trial order, so identical configurations
produce byte-identical output streams.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

import numpy as np

from . import batch
from .core import INEQUALITY_RTOL
from .errors import ArgumentError, StepSizeError
from .geometry import (
    CyclicPolygon,
    ngon_check,
    ptolemy_gap,
    quadrilateral_check,
    simplex_equality_ngon,
    triangle_check,
)
from .ode import MatrixFunction, ODEProblem, integrate, verify_estimate

_MAX_RECORDED_FAILURES = 100

CAMPAIGN_OPS = (
    "simplex",
    "extended",
    "equality-family",
    "polygon",
    "multilinear-oracle",
    "sum-identity",
    "w-identity",
    "ode",
)


@dataclass
class CampaignConfig:
    op: str
    metric: str = "vandermonde"
    seed: int = 0
    trials: int = 1000
    tol: float | None = None
    n: int = 4
    m: int = 3
    k: int | None = None  # extended-inequality power; None = all
    q: int = 1  # extra-argument count for the extended identity
    check: str = "triangle"  # polygon campaign variant

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class CampaignResult:
    config: CampaignConfig
    trials: int
    violations: int
    worst: float  # most negative normalized gap (inequalities) or largest normalized identity gap
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def summary(self) -> dict:
        return {
            "record": "summary",
            "config": self.config.to_dict(),
            "trials": self.trials,
            "violations": self.violations,
            "worst": self.worst,
            "pass": self.passed,
        }

    def json_lines(self):
        for f in self.failures:
            yield json.dumps(f, sort_keys=True)
        yield json.dumps(self.summary(), sort_keys=True)

    def csv_rows(self):
        yield ("trial", "lhs", "rhs", "gap")
        for f in self.failures:
            yield (f.get("trial"), f.get("lhs"), f.get("rhs"), f.get("gap"))


def run_campaign(config: CampaignConfig) -> CampaignResult:
    try:
        runner = _RUNNERS[config.op]
    except KeyError:
        raise ArgumentError(
            f"unknown campaign op {config.op!r}; known: {sorted(_RUNNERS)}"
        ) from None
    return runner(config)


def _rng(config: CampaignConfig) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(config.seed))


def _inequality_result(config, lhs, rhs, tol, extra=None) -> CampaignResult:
    """Collect violations of gap >= -tol * scale over per-trial sides."""
    gap = rhs - lhs
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    normalized = gap / scale
    bad = np.flatnonzero(normalized < -tol)
    failures = []
    for t in bad[:_MAX_RECORDED_FAILURES]:
        rec = {
            "record": "violation",
            "trial": int(t),
            "lhs": float(lhs[t]),
            "rhs": float(rhs[t]),
            "gap": float(gap[t]),
            "seed": config.seed,
        }
        if extra is not None:
            rec.update(extra(int(t)))
        failures.append(rec)
    return CampaignResult(
        config=config,
        trials=len(gap),
        violations=int(len(bad)),
        worst=float(np.min(normalized)) if len(normalized) else 0.0,
        failures=failures,
    )


def _identity_result(config, gaps, scales, tol, extra=None) -> CampaignResult:
    normalized = gaps / scales
    bad = np.flatnonzero(normalized > tol)
    failures = []
    for t in bad[:_MAX_RECORDED_FAILURES]:
        rec = {
            "record": "violation",
            "trial": int(t),
            "gap": float(gaps[t]),
            "scale": float(scales[t]),
            "seed": config.seed,
        }
        if extra is not None:
            rec.update(extra(int(t)))
        failures.append(rec)
    return CampaignResult(
        config=config,
        trials=len(gaps),
        violations=int(len(bad)),
        worst=float(np.max(normalized)) if len(normalized) else 0.0,
        failures=failures,
    )


def _complex_sample(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _jsonable_complex(z):
    return [[v.real, v.imag] for v in z]


# ---------------------------------------------------------------------------
# Campaigns


def _simplex_campaign(config: CampaignConfig) -> CampaignResult:
    rng = _rng(config)
    tol = config.tol if config.tol is not None else INEQUALITY_RTOL
    b, n, m = config.trials, config.n, config.m
    if config.metric in ("vandermonde", "root"):
        z = _complex_sample(rng, (b, n))
        y = _complex_sample(rng, (b,))
        metric = batch.dv_batch if config.metric == "vandermonde" else batch.root_batch
        lhs, rhs = batch.simplex_sides_complex(z, y, metric)
        extra = lambda t: {"points": _jsonable_complex(z[t]), "y": [y[t].real, y[t].imag]}
    elif config.metric == "euclidean3":
        x = rng.standard_normal((b, 3, m))
        y = rng.standard_normal((b, m))
        lhs, rhs = batch.simplex_sides_vectors(x, y)
        extra = lambda t: {"points": x[t].tolist(), "y": y[t].tolist()}
    elif config.metric == "generalized":
        x = rng.standard_normal((b, n, m))
        y = rng.standard_normal((b, m))
        lhs, rhs = batch.simplex_sides_generalized(x, y)
        extra = lambda t: {"points": x[t].tolist(), "y": y[t].tolist()}
    else:
        raise ArgumentError(f"simplex campaign does not support metric {config.metric!r}")
    return _inequality_result(config, lhs, rhs, tol, extra)


def _extended_campaign(config: CampaignConfig) -> CampaignResult:
    rng = _rng(config)
    tol = config.tol if config.tol is not None else INEQUALITY_RTOL
    b, n = config.trials, config.n
    z = _complex_sample(rng, (b, n))
    y = _complex_sample(rng, (b,))
    ks = range(n) if config.k is None else [config.k]
    lhs_all, rhs_all = [], []
    for k in ks:
        lhs, rhs = batch.extended_sides_complex(z, y, k)
        lhs_all.append(lhs)
        rhs_all.append(rhs)
    lhs = np.concatenate(lhs_all)
    rhs = np.concatenate(rhs_all)
    ks = list(ks)

    def extra(t):
        k = ks[t // b]
        row = t % b
        return {"k": k, "points": _jsonable_complex(z[row]), "y": [y[row].real, y[row].imag]}

    return _inequality_result(config, lhs, rhs, tol, extra)


def _equality_family_campaign(config: CampaignConfig) -> CampaignResult:
    rng = _rng(config)
    tol = config.tol if config.tol is not None else 1e-10
    b = config.trials
    log_lo, log_hi = np.log(0.01), np.log(100.0)
    q = np.exp(rng.uniform(log_lo, log_hi, size=b))
    s = np.exp(rng.uniform(log_lo, log_hi, size=b))
    z = np.empty((b, 3), dtype=complex)
    z[:, 0] = 1.0
    z[:, 1] = (-1.0 + 1j * np.sqrt(q * (1.0 + s))) / s
    z[:, 2] = (-1.0 - 1j * np.sqrt((1.0 + s) / q)) / s
    lhs, rhs = batch.simplex_sides_complex(z, np.zeros(b, dtype=complex))
    gaps = np.abs(rhs - lhs)
    scales = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    extra = lambda t: {"q": float(q[t]), "s": float(s[t])}
    return _identity_result(config, gaps, scales, tol, extra)


def _random_sorted_angles(rng, b, n, min_gap=1e-6):
    angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=(b, n)), axis=1)
    while True:
        bad = np.flatnonzero(np.min(np.diff(angles, axis=1), axis=1) <= min_gap)
        if len(bad) == 0:
            return angles
        angles[bad] = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=(len(bad), n)), axis=1)


def _polygon_campaign(config: CampaignConfig) -> CampaignResult:
    checks = {
        "triangle": (3, triangle_check),
        "quadrilateral": (4, quadrilateral_check),
        "ptolemy": (4, ptolemy_gap),
        "ngon": (config.n, ngon_check),
        "simplex-equality": (config.n, simplex_equality_ngon),
    }
    try:
        n, checker = checks[config.check]
    except KeyError:
        raise ArgumentError(
            f"unknown polygon check {config.check!r}; known: {sorted(checks)}"
        ) from None
    rng = _rng(config)
    b = config.trials
    angles = _random_sorted_angles(rng, b, n)
    radii = rng.uniform(0.5, 3.0, size=b)
    lhs = np.empty(b)
    rhs = np.empty(b)
    identity = config.check == "ptolemy"
    for t in range(b):
        poly = CyclicPolygon(R=float(radii[t]), angles=tuple(angles[t]))
        if config.tol is not None:
            report = checker(poly, tol=config.tol)
        else:
            report = checker(poly)
        lhs[t] = report.lhs
        rhs[t] = report.rhs
    tol = config.tol if config.tol is not None else (1e-10 if identity else INEQUALITY_RTOL)
    extra = lambda t: {"R": float(radii[t]), "angles": angles[t].tolist()}
    if identity:
        gaps = np.abs(rhs - lhs)
        scales = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
        return _identity_result(config, gaps, scales, tol, extra)
    return _inequality_result(config, lhs, rhs, tol, extra)


def _int_sample(rng, shape, bound):
    return rng.integers(-bound, bound + 1, size=shape)


def _multilinear_oracle_campaign(config: CampaignConfig) -> CampaignResult:
    """Permutation expansion against the product-difference form."""
    rng = _rng(config)
    tol = config.tol if config.tol is not None else 1e-10
    b, n, m = config.trials, config.n, config.m
    points = rng.uniform(-1.0, 1.0, size=(b, n, m))
    er, ei = batch.expansion_batch(points)
    pr, pi = batch.pdf_batch(points)
    lhs = np.concatenate([er, ei], axis=1)
    rhs = np.concatenate([pr, pi], axis=1)
    gaps, scales = batch.max_gap_and_scale(lhs, rhs)
    extra = lambda t: {"points": points[t].tolist()}
    return _identity_result(config, gaps, scales, tol, extra)


def multilinear_oracle_exact(seed: int, trials: int, n: int, m: int, bound: int = 3) -> int:
    """Exact-integer run of the expansion/product oracle; returns the max gap.

    The bound keeps every intermediate int64 product well inside the
    representable range (worst case (bound * n * sqrt(2))^(n(n-1)/2) summed
    over n! permutations).
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    points = _int_sample(rng, (trials, n, m), bound).astype(np.int64)
    er, ei = batch.expansion_batch(points)
    pr, pi = batch.pdf_batch(points)
    return int(
        max(np.max(np.abs(er - pr)), np.max(np.abs(ei - pi)))
    )


def _sum_identity_campaign(config: CampaignConfig) -> CampaignResult:
    rng = _rng(config)
    tol = config.tol if config.tol is not None else 1e-10
    b, n, m = config.trials, config.n, config.m
    points = rng.uniform(-1.0, 1.0, size=(b, n, m))
    y = rng.uniform(-1.0, 1.0, size=(b, m))
    lhs, rhs = batch.sum_identity_sides(points, y)
    gaps, scales = batch.max_gap_and_scale(lhs, rhs)
    extra = lambda t: {"points": points[t].tolist(), "y": y[t].tolist()}
    return _identity_result(config, gaps, scales, tol, extra)


def _w_identity_campaign(config: CampaignConfig) -> CampaignResult:
    rng = _rng(config)
    tol = config.tol if config.tol is not None else 1e-10
    b, n, m, q = config.trials, config.n, config.m, config.q
    if not (1 <= q <= n):
        raise ArgumentError(f"q must be in [1, {n}], got {q}")
    points = rng.uniform(-1.0, 1.0, size=(b, n, m))
    y = rng.uniform(-1.0, 1.0, size=(b, m))
    lhs, rhs = batch.w_identity_sides(points, y, q)
    gaps, scales = batch.max_gap_and_scale(lhs, rhs)
    extra = lambda t: {"points": points[t].tolist(), "y": y[t].tolist(), "q": q}
    return _identity_result(config, gaps, scales, tol, extra)


def random_ode_problem(rng: np.random.Generator, m: int, t_end: float = 2.0,
                       steps: int = 100) -> ODEProblem:
    a0 = rng.uniform(-1.0, 1.0, size=(m, m))
    a1 = rng.uniform(-1.0, 1.0, size=(m, m))
    initials = rng.uniform(-1.0, 1.0, size=(3, m))
    grid = np.linspace(0.0, t_end, steps + 1)
    return ODEProblem(matrix=MatrixFunction.linear(a0, a1), initials=initials, grid=grid)


def _integrate_refining(problem: ODEProblem, max_refinements: int = 3):
    """Integrate, refining the grid when step doubling rejects a step.

    Returns the (possibly refined) problem together with its trajectories,
    since the verification has to run on the grid actually integrated.
    """
    for _ in range(max_refinements):
        try:
            return problem, integrate(problem)
        except StepSizeError as exc:
            steps = exc.suggested_steps or 2 * (len(problem.grid) - 1)
            grid = np.linspace(problem.grid[0], problem.grid[-1], steps + 1)
            problem = ODEProblem(matrix=problem.matrix, initials=problem.initials,
                                 grid=grid, alpha=problem.alpha)
    return problem, integrate(problem)


def _ode_campaign(config: CampaignConfig) -> CampaignResult:
    rng = _rng(config)
    tol = config.tol if config.tol is not None else 1e-6
    dims = [2, 3, 4]
    worst = -np.inf
    violations = 0
    failures = []
    for t in range(config.trials):
        m = dims[t % len(dims)]
        problem = random_ode_problem(rng, m)
        problem, trajectories = _integrate_refining(problem)
        reports = verify_estimate(problem, trajectories, tol=tol)
        for rep in reports:
            if rep.flags.get("near_collision"):
                continue
            margin = rep.lhs / rep.rhs - 1.0 if rep.rhs > 0 else 0.0
            worst = max(worst, margin)
            if not rep.passed:
                violations += 1
                if len(failures) < _MAX_RECORDED_FAILURES:
                    failures.append({
                        "record": "violation",
                        "trial": t,
                        "t": rep.inputs["t"],
                        "lhs": rep.lhs,
                        "rhs": rep.rhs,
                        "gap": rep.gap,
                        "problem": problem.to_dict(),
                        "seed": config.seed,
                    })
    return CampaignResult(
        config=config,
        trials=config.trials,
        violations=violations,
        worst=float(worst),
        failures=failures,
    )


_RUNNERS = {
    "simplex": _simplex_campaign,
    "extended": _extended_campaign,
    "equality-family": _equality_family_campaign,
    "polygon": _polygon_campaign,
    "multilinear-oracle": _multilinear_oracle_campaign,
    "sum-identity": _sum_identity_campaign,
    "w-identity": _w_identity_campaign,
    "ode": _ode_campaign,
}
