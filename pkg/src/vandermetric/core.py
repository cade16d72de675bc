"""Vandermonde n-metrics over the complex plane and Euclidean spaces.

The basic quantity is the product of all pairwise distances of an ordered
point tuple.  This module provides that metric, its overflow-safe log-domain
form, the degree-1 root metric, the Cramer/Lagrange coefficient machinery
behind the simplex inequality, the Euclidean 3-metric, and the standard
combinators (product spaces, componentwise application, weighted L^p
function metrics).

All evaluations multiply pairwise factors in lexicographic pair order of a
canonically sorted copy of the input, so permuting the input points yields
bit-identical results.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ArgumentError, SingularityError

# Relative tolerance for inequality checks; identities use tighter values.
INEQUALITY_RTOL = 1e-9

# Beyond this tuple size (or once a partial product leaves the safe range)
# products are evaluated in the log domain.
_LOG_SWITCH_N = 12
_PRODUCT_FLOOR = 1e-300
_PRODUCT_CEIL = 1e300


def _is_finite_complex(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


def _ckey(z: complex):
    return (z.real, z.imag)


@dataclass(frozen=True)
class PointTuple:
    """Ordered tuple of n >= 2 points, either complex scalars or real vectors.

    Repeated points are legal; they force every metric in this package to
    evaluate to exactly zero.
    """

    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ArgumentError(f"need at least 2 points, got {len(pts)}")
        if isinstance(pts[0], complex):
            if not all(isinstance(p, complex) for p in pts):
                raise ArgumentError("mixed complex and vector points")
            if not all(_is_finite_complex(p) for p in pts):
                raise ArgumentError("non-finite input point")
        else:
            dims = {len(p) for p in pts}
            if len(dims) != 1:
                raise ArgumentError(f"points of mixed dimensions: {sorted(dims)}")
            if next(iter(dims)) < 1:
                raise ArgumentError("ambient dimension must be >= 1")
            for p in pts:
                if not all(math.isfinite(c) for c in p):
                    raise ArgumentError("non-finite input coordinate")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def is_complex(self) -> bool:
        return isinstance(self.points[0], complex)

    @property
    def m(self) -> int:
        return 1 if self.is_complex else len(self.points[0])


def as_point_tuple(obj) -> PointTuple:
    """Coerce a PointTuple, a sequence of scalars, or a sequence of vectors."""
    if isinstance(obj, PointTuple):
        return obj
    pts = list(obj)
    if not pts:
        raise ArgumentError("empty point tuple")
    if isinstance(pts[0], (int, float, complex, np.number)):
        return PointTuple(tuple(complex(p) for p in pts))
    return PointTuple(tuple(tuple(float(c) for c in p) for p in pts))


def _complex_points(obj) -> tuple[complex, ...]:
    t = as_point_tuple(obj)
    if not t.is_complex:
        raise ArgumentError("operation requires complex scalar points")
    return t.points


def _vector_points(obj) -> tuple[tuple[float, ...], ...]:
    t = as_point_tuple(obj)
    if t.is_complex:
        raise ArgumentError("operation requires vector points")
    return t.points


@dataclass(frozen=True)
class MonotoneNorm:
    """Weighted p-norm with p >= 1 and strictly positive weights.

    These are monotone: componentwise domination of absolute values is
    order-preserving, which is exactly what the product and function-space
    constructions require.
    """

    p: float = 2.0
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise ArgumentError(f"p must be >= 1, got {self.p}")
        if self.weights is not None:
            w = tuple(float(x) for x in self.weights)
            if any(x <= 0.0 for x in w):
                raise ArgumentError("weights must be strictly positive")
            object.__setattr__(self, "weights", w)

    def __call__(self, values: Sequence[float]) -> float:
        v = [abs(float(x)) for x in values]
        w = self.weights
        if w is not None:
            if len(w) != len(v):
                raise ArgumentError(f"norm has {len(w)} weights, got {len(v)} values")
        else:
            w = (1.0,) * len(v)
        if math.isinf(self.p):
            return max(wi * vi for wi, vi in zip(w, v))
        if self.p == 1.0:
            return sum(wi * vi for wi, vi in zip(w, v))
        return sum(wi * vi**self.p for wi, vi in zip(w, v)) ** (1.0 / self.p)


def _jsonify(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, PointTuple):
        return [_jsonify(p) for p in obj.points]
    if isinstance(obj, (list, tuple)):
        return [_jsonify(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    return obj


@dataclass
class MetricReport:
    """Outcome of one inequality or identity check.

    gap is rhs - lhs exactly as computed; passed means
    gap >= -tolerance * scale with scale = max(|lhs|, |rhs|, 1).
    """

    operation: str
    inputs: dict
    lhs: float
    rhs: float
    gap: float
    tolerance: float
    passed: bool
    seed: int | None = None
    flags: dict = field(default_factory=dict)

    @property
    def scale(self) -> float:
        return max(abs(self.lhs), abs(self.rhs), 1.0)

    def to_dict(self) -> dict:
        d = {
            "operation": self.operation,
            "inputs": _jsonify(self.inputs),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.seed is not None:
            d["seed"] = self.seed
        if self.flags:
            d.update(_jsonify(self.flags))
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _make_report(operation, inputs, lhs, rhs, tol, seed=None, flags=None) -> MetricReport:
    gap = rhs - lhs
    scale = max(abs(lhs), abs(rhs), 1.0)
    return MetricReport(
        operation=operation,
        inputs=inputs,
        lhs=lhs,
        rhs=rhs,
        gap=gap,
        tolerance=tol,
        passed=bool(gap >= -tol * scale),
        seed=seed,
        flags=flags or {},
    )


# ---------------------------------------------------------------------------
# Vandermonde metric on C


def vandermonde_metric(points) -> float:
    """Product of all pairwise distances |z_i - z_j| of complex scalars.

    Switches to log-domain evaluation for large tuples or once a partial
    product leaves the representable range.
    """
    z = sorted(_complex_points(points), key=_ckey)
    n = len(z)
    if n > _LOG_SWITCH_N:
        return _exp_or_zero(_log_sum(z))
    prod = 1.0
    for j in range(n):
        for i in range(j + 1, n):
            f = abs(z[i] - z[j])
            if f == 0.0:
                return 0.0
            prod *= f
            if not (_PRODUCT_FLOOR <= prod <= _PRODUCT_CEIL):
                return _exp_or_zero(_log_sum(z))
    return prod


def _log_sum(z_sorted) -> float:
    total = 0.0
    n = len(z_sorted)
    for j in range(n):
        for i in range(j + 1, n):
            f = abs(z_sorted[i] - z_sorted[j])
            if f == 0.0:
                return -math.inf
            total += math.log(f)
    return total


def _exp_or_zero(log_value: float) -> float:
    if log_value == -math.inf:
        return 0.0
    try:
        return math.exp(log_value)
    except OverflowError:
        return math.inf


def vandermonde_metric_log(points) -> float:
    """Sum of log|z_i - z_j| over all pairs; -inf when two points coincide."""
    z = sorted(_complex_points(points), key=_ckey)
    return _log_sum(z)


def root_metric(points) -> float:
    """Pairwise-distance product raised to 2/(n(n-1)); homogeneous of degree 1."""
    z = sorted(_complex_points(points), key=_ckey)
    log_value = _log_sum(z)
    if log_value == -math.inf:
        return 0.0
    n = len(z)
    return math.exp(log_value * 2.0 / (n * (n - 1)))


# ---------------------------------------------------------------------------
# Cramer / Lagrange coefficients


def cramer_coefficients(points, y: complex) -> list[complex]:
    """Coefficients a with sum_i a_i z_i^k = y^k for k = 0, ..., n-1.

    Evaluated as Lagrange basis values a_k = prod_{l != k} (z_l - y)/(z_l - z_k),
    never via a dense linear solve: the closed form stays meaningful where a
    Vandermonde system would be hopelessly ill-conditioned.
    """
    z = _complex_points(points)
    y = complex(y)
    n = len(z)
    for j in range(n):
        for i in range(j + 1, n):
            if z[i] == z[j]:
                raise SingularityError(f"coincident points z[{j}] == z[{i}]")
    coeffs = []
    for k in range(n):
        a = complex(1.0)
        for l in range(n):
            if l != k:
                a *= (z[l] - y) / (z[l] - z[k])
        coeffs.append(a)
    return coeffs


def cramer_coefficients_determinant_ratio(points, y: complex) -> list[complex]:
    """Same coefficients as ratios of signed pairwise-difference products.

    a_k = V(z with z_k replaced by y) / V(z).  Kept as an independent
    cross-check of the Lagrange form.
    """
    z = list(_complex_points(points))
    y = complex(y)
    n = len(z)
    v = _signed_product(z)
    if v == 0:
        raise SingularityError("coincident points: zero denominator")
    out = []
    for k in range(n):
        replaced = list(z)
        replaced[k] = y
        out.append(_signed_product(replaced) / v)
    return out


def _signed_product(z: list[complex]) -> complex:
    prod = complex(1.0)
    n = len(z)
    for j in range(n):
        for i in range(j + 1, n):
            prod *= z[i] - z[j]
    return prod


# ---------------------------------------------------------------------------
# Euclidean and product-of-distances metrics on R^m


def euclidean_3metric(x1, x2, x3) -> float:
    """||x1-x2|| ||x1-x3|| ||x2-x3|| with the Euclidean norm."""
    pts = _vector_points([x1, x2, x3])
    return pairwise_product_metric(pts)


def pairwise_product_metric(points) -> float:
    """Product of all pairwise Euclidean distances of vectors in R^m.

    A genuine 3-metric for n = 3; for n >= 4 in dimension >= 3 the simplex
    inequality fails (see geometry.tetrahedron_counterexample).
    """
    pts = sorted(_vector_points(points))
    n = len(pts)
    prod = 1.0
    for j in range(n):
        for i in range(j + 1, n):
            d = math.dist(pts[i], pts[j])
            if d == 0.0:
                return 0.0
            prod *= d
    return prod


def pairwise_root_metric(points) -> float:
    """pairwise_product_metric raised to 2/(n(n-1))."""
    pts = _vector_points(points)
    n = len(pts)
    value = pairwise_product_metric(pts)
    if value == 0.0:
        return 0.0
    return value ** (2.0 / (n * (n - 1)))


def _euclidean3_on_tuple(points) -> float:
    pts = _vector_points(points)
    if len(pts) != 3:
        raise ArgumentError(f"euclidean3 takes exactly 3 points, got {len(pts)}")
    return euclidean_3metric(*pts)


METRICS: dict[str, Callable] = {
    "vandermonde": vandermonde_metric,
    "root": root_metric,
    "euclidean3": _euclidean3_on_tuple,
    "pairwise": pairwise_product_metric,
    "pairwise_root": pairwise_root_metric,
}


def resolve_metric(selector) -> Callable:
    if callable(selector):
        return selector
    try:
        return METRICS[selector]
    except KeyError:
        raise ArgumentError(
            f"unknown metric {selector!r}; known: {sorted(METRICS)}"
        ) from None


def _coerce_like(t: PointTuple, y):
    if t.is_complex:
        if isinstance(y, (list, tuple, np.ndarray)):
            if len(y) != 2:
                raise ArgumentError("complex replacement point needs 2 components")
            return complex(float(y[0]), float(y[1]))
        return complex(y)
    y = tuple(float(c) for c in np.atleast_1d(y))
    if len(y) != t.m:
        raise ArgumentError(f"replacement point has dimension {len(y)}, expected {t.m}")
    return y


# ---------------------------------------------------------------------------
# Simplex and extended inequalities


def simplex_gap(points, y, metric="vandermonde", tol=INEQUALITY_RTOL, seed=None) -> MetricReport:
    """Check d(x) <= sum_i d(x with x_i replaced by y) for the chosen metric."""
    t = as_point_tuple(points)
    y = _coerce_like(t, y)
    d = resolve_metric(metric)
    pts = list(t.points)
    lhs = d(pts)
    rhs = 0.0
    for i in range(t.n):
        replaced = list(pts)
        replaced[i] = y
        rhs += d(replaced)
    name = metric if isinstance(metric, str) else getattr(metric, "__name__", "custom")
    return _make_report(
        "simplex_gap",
        {"points": t, "y": y, "metric": name},
        lhs,
        rhs,
        tol,
        seed=seed,
    )


def extended_inequality_gap(points, y: complex, k: int, tol=INEQUALITY_RTOL, seed=None) -> MetricReport:
    """Check |y|^k d_V(z) <= sum_i |z_i|^k d_V(z with z_i replaced by y).

    k = 0 reduces to the plain simplex inequality.
    """
    z = _complex_points(points)
    y = complex(y)
    n = len(z)
    if not (0 <= k <= n - 1):
        raise ArgumentError(f"k must be in [0, {n - 1}], got {k}")
    lhs = abs(y) ** k * vandermonde_metric(z)
    rhs = 0.0
    for i in range(n):
        replaced = list(z)
        replaced[i] = y
        rhs += abs(z[i]) ** k * vandermonde_metric(replaced)
    return _make_report(
        "extended_inequality_gap",
        {"points": list(z), "y": y, "k": k},
        lhs,
        rhs,
        tol,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Constructions


def product_metric(d_x, d_y, norm: MonotoneNorm, t_x, t_y) -> float:
    """Pseudo n-metric on a product space: monotone norm of the two values."""
    tx = as_point_tuple(t_x)
    ty = as_point_tuple(t_y)
    if tx.n != ty.n:
        raise ArgumentError(f"tuple sizes differ: {tx.n} vs {ty.n}")
    dx = resolve_metric(d_x)
    dy = resolve_metric(d_y)
    values = (dx(list(tx.points)), dy(list(ty.points)))
    if norm.weights is not None and len(norm.weights) != 2:
        raise ArgumentError("product metric needs a 2-dimensional norm")
    return norm(values)


def componentwise_metric(points, norm: MonotoneNorm | None = None) -> float:
    """Monotone norm of the per-coordinate pairwise-distance products.

    Only a pseudo n-metric for k >= 2 coordinates: distinct points may share
    a coordinate value per column and force the value to zero.
    """
    pts = _vector_points(points)
    norm = norm or MonotoneNorm(p=2.0)
    k = len(pts[0])
    values = []
    for c in range(k):
        column = [complex(p[c]) for p in pts]
        values.append(vandermonde_metric(column))
    return norm(values)


def lp_function_metric(samples, weights, p: float) -> float:
    """Discrete-measure L^p pseudo n-metric on sampled functions.

    (sum_g w_g prod_{j<i} |f_i(g) - f_j(g)|^p)^(1/p) over a common finite grid.
    """
    if not (p >= 1.0) or math.isinf(p):
        raise ArgumentError(f"p must be a finite real >= 1, got {p}")
    fs = sorted(tuple(float(v) for v in f) for f in samples)
    if len(fs) < 2:
        raise ArgumentError("need at least 2 sampled functions")
    grid_len = len(fs[0])
    if any(len(f) != grid_len for f in fs):
        raise ArgumentError("sample lists of unequal length")
    w = [float(x) for x in weights]
    if len(w) != grid_len:
        raise ArgumentError("weights length must match grid length")
    if any(x < 0.0 for x in w):
        raise ArgumentError("weights must be nonnegative")
    n = len(fs)
    total = 0.0
    for g in range(grid_len):
        prod = 1.0
        for j in range(n):
            for i in range(j + 1, n):
                prod *= abs(fs[i][g] - fs[j][g]) ** p
        total += w[g] * prod
    return total ** (1.0 / p)
