"""Product measures on the cube with invertible CDFs, inverse-CDF point
mapping, the QMC estimator, and numeric Haar-coefficient oracles."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .dyadic import DyadicPointSet
from .errors import ConfigError, NumericValidationError, WorkGuardError
from .walsh import HaarIndex, haar

_GRID_POINTS = 1000
_BISECT_ITERS = 80
HAAR_GRID_LIMIT = 1 << 24


@dataclass(frozen=True)
class CoordinateMeasure:
    """One coordinate's distribution on [a, b], given by its CDF and inverse."""

    a: float
    b: float
    cdf: Callable[[float], float]
    inv_cdf: Callable[[float], float]
    kind: str

    def __post_init__(self) -> None:
        if not (-math.inf < self.a < self.b < math.inf):
            raise ConfigError("need finite a < b")
        grid = np.linspace(self.a, self.b, _GRID_POINTS)
        vals = np.array([self.cdf(x) for x in grid])
        if abs(vals[0]) > 1e-10 or abs(vals[-1] - 1) > 1e-10:
            raise NumericValidationError("cdf must run from 0 at a to 1 at b")
        if np.any(np.diff(vals) <= 0):
            raise NumericValidationError("cdf must be strictly increasing (no flat segments)")
        back = np.array([self.inv_cdf(v) for v in vals])
        if np.max(np.abs(back - grid)) > 1e-10:
            raise NumericValidationError("inv_cdf does not invert cdf to 1e-10")


def _bisect_inverse(cdf: Callable[[float], float], a: float, b: float) -> Callable[[float], float]:
    tol = (b - a) * 2.0**-52

    def inv(y: float) -> float:
        lo, hi = a, b
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            if hi - lo <= tol:
                break
            if cdf(mid) < y:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    return inv


def builtin_measure(kind: str, **params) -> CoordinateMeasure:
    """Construct a validated builtin measure.

    Kinds: uniform(a, b); linear (density 2x on [0,1]); trunc_exp(rate, a, b);
    table(path) with a two-column "x cdf" file inverted by bisection.
    """
    if kind == "uniform":
        a, b = float(params["a"]), float(params["b"])
        if a >= b:
            raise ConfigError("need a < b")
        width = b - a
        return CoordinateMeasure(
            a, b, lambda x: (x - a) / width, lambda y: a + y * width, "uniform"
        )
    if kind == "linear":
        return CoordinateMeasure(0.0, 1.0, lambda x: x * x, math.sqrt, "linear")
    if kind == "trunc_exp":
        rate = float(params["rate"])
        a, b = float(params["a"]), float(params["b"])
        if rate <= 0:
            raise ConfigError("rate must be positive")
        if a >= b:
            raise ConfigError("need a < b")
        z = 1.0 - math.exp(-rate * (b - a))

        def cdf(x: float) -> float:
            return (1.0 - math.exp(-rate * (x - a))) / z

        def inv_cdf(y: float) -> float:
            return a - math.log1p(-y * z) / rate

        return CoordinateMeasure(a, b, cdf, inv_cdf, "trunc_exp")
    if kind == "table":
        xs, cs = _load_cdf_table(params["path"])
        a, b = float(xs[0]), float(xs[-1])

        def cdf(x: float) -> float:
            return float(np.interp(x, xs, cs))

        return CoordinateMeasure(a, b, cdf, _bisect_inverse(cdf, a, b), "numeric")
    raise ConfigError(f"unknown measure kind {kind!r}")


def _load_cdf_table(path) -> tuple[np.ndarray, np.ndarray]:
    try:
        data = np.loadtxt(path, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read cdf table {path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 2:
        raise ConfigError("cdf table must have two columns and at least two rows")
    xs, cs = data[:, 0], data[:, 1]
    if np.any(np.diff(xs) <= 0) or np.any(np.diff(cs) <= 0):
        raise NumericValidationError("cdf table must be strictly increasing")
    if abs(cs[0]) > 1e-12 or abs(cs[-1] - 1) > 1e-12:
        raise NumericValidationError("cdf table must run from 0 to 1")
    return xs, cs


def measure_from_json(obj) -> CoordinateMeasure:
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj.get("kind")
    if kind == "uniform":
        return builtin_measure("uniform", a=obj["a"], b=obj["b"])
    if kind == "linear":
        return builtin_measure("linear")
    if kind == "trunc_exp":
        return builtin_measure("trunc_exp", rate=obj["rate"], a=obj["a"], b=obj["b"])
    if kind == "table":
        return builtin_measure("table", path=obj["path"])
    raise ConfigError(f"unknown measure kind {kind!r}")


@dataclass(frozen=True)
class Integrand:
    """Real function on the cube; eval accepts an (..., s) array and returns
    the matching leading shape.  derivative_sup maps a nonempty coordinate
    subset u to sup |d^|u| F / dx_u|."""

    eval: Callable[[np.ndarray], np.ndarray]
    derivative_sup: Optional[Callable[[tuple], float]] = None

    def sup_for(self, u: tuple) -> float:
        if self.derivative_sup is None:
            raise ConfigError("integrand has no derivative_sup")
        val = float(self.derivative_sup(tuple(u)))
        if val < 0:
            raise ConfigError("derivative_sup must be nonnegative")
        return val


def builtin_integrand(name: str, cube) -> Integrand:
    """Named integrand registry: constant, linear, product, smooth-exp."""
    s = cube.s
    b = np.array([float(x) for x in cube.b])
    a = np.array([float(x) for x in cube.a])
    absmax = np.maximum(np.abs(a), np.abs(b))
    if name == "constant":
        return Integrand(
            lambda x: np.ones(np.asarray(x).shape[:-1]),
            lambda u: 0.0,
        )
    if name == "linear":
        return Integrand(
            lambda x: np.asarray(x).sum(axis=-1),
            lambda u: 1.0 if len(u) == 1 else 0.0,
        )
    if name == "product":
        def prod_sup(u):
            out = 1.0
            for i in range(1, s + 1):
                if i not in u:
                    out *= float(absmax[i - 1])
            return out
        return Integrand(lambda x: np.asarray(x).prod(axis=-1), prod_sup)
    if name == "smooth-exp":
        return Integrand(
            lambda x: np.exp(np.asarray(x).sum(axis=-1)),
            lambda u: math.exp(float(b.sum())),
        )
    raise ConfigError(f"unknown integrand {name!r}")


def map_points(points: DyadicPointSet, measures: Sequence[CoordinateMeasure]) -> np.ndarray:
    """Apply each coordinate's inverse CDF to the exact dyadic values,
    clamped to [a, b] against floating-point overshoot."""
    if len(measures) != points.s:
        raise ConfigError("dimension mismatch")
    vals = points.values()
    out = np.empty_like(vals)
    for i, mes in enumerate(measures):
        col = np.array([mes.inv_cdf(v) for v in vals[:, i]])
        out[:, i] = np.clip(col, mes.a, mes.b)
    return out


def qmc_estimate(F: Integrand, nodes: np.ndarray) -> float:
    """Equal-weight average with compensated summation."""
    nodes = np.asarray(nodes, dtype=np.float64)
    if nodes.ndim != 2 or nodes.shape[0] < 1:
        raise ConfigError("nodes must be a nonempty N x s matrix")
    vals = np.asarray(F.eval(nodes), dtype=np.float64)
    return math.fsum(vals.tolist()) / nodes.shape[0]


def integration_error(
    F: Integrand,
    measures: Sequence[CoordinateMeasure],
    points: DyadicPointSet,
    reference: float,
) -> float:
    """Signed error: estimate minus the caller-supplied reference value."""
    return qmc_estimate(F, map_points(points, measures)) - reference


def lambda_jm(measure: CoordinateMeasure, j: int, m: int) -> float:
    """Half the inverse-CDF increment over the dyadic interval I_{j,m}."""
    if j < 0 or not 0 <= m < (1 << j):
        raise ConfigError("need 0 <= m < 2^j")
    lo = measure.inv_cdf(m / (1 << j))
    hi = measure.inv_cdf((m + 1) / (1 << j))
    return 0.5 * (hi - lo)


def haar_coeff(
    F: Integrand,
    measures: Sequence[CoordinateMeasure],
    j_u: Sequence[int],
    m_u: Sequence[int],
    u: Sequence[int],
    quad_level: int,
) -> float:
    """Midpoint-rule estimate of the Haar coefficient of F with respect to
    the measure-adapted system.

    The substitution x = inv_cdf(y) turns the coefficient into an integral
    over the unit cube of F(inv_cdf(y)) times a plain Haar product, so no
    density values are needed.  Bias is O(2^-quad_level) for F with bounded
    mixed first derivatives.
    """
    s = len(measures)
    if len(j_u) != len(u) or len(m_u) != len(u):
        raise ConfigError("index vectors and u differ in length")
    if u and quad_level < max(j_u) + 4:
        raise ConfigError("quad_level must be at least max(j) + 4")
    size = 1 << quad_level
    if size**s > HAAR_GRID_LIMIT:
        raise WorkGuardError("quadrature grid too large")
    mids = (np.arange(size) + 0.5) / size
    axes_x = [np.array([mes.inv_cdf(y) for y in mids]) for mes in measures]
    grid = np.stack(np.meshgrid(*axes_x, indexing="ij"), axis=-1)
    vals = np.asarray(F.eval(grid), dtype=np.float64)
    for j, m, i in zip(j_u, m_u, u):
        hv = np.array([haar(HaarIndex(j, m), y) for y in mids])
        shape = [1] * s
        shape[i - 1] = size
        vals = vals * hv.reshape(shape)
    return math.fsum(vals.ravel().tolist()) / size**s


def lemma1_bound(
    F: Integrand,
    measures: Sequence[CoordinateMeasure],
    j_u: Sequence[int],
    m_u: Sequence[int],
    u: Sequence[int],
) -> float:
    """Decay bound 2^(-|j_u|/2) prod lambda_{j_i, m_i} sup|d^|u| F|."""
    if not u:
        raise ConfigError("u must be nonempty")
    bound = 2.0 ** (-sum(j_u) / 2.0) * F.sup_for(tuple(u))
    for j, m, i in zip(j_u, m_u, u):
        bound *= lambda_jm(measures[i - 1], j, m)
    return bound
