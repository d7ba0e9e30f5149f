"""Closed-form evaluators for the worst-case-error bounds and the
tractability-condition weight sums."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .cbc import Cube, GeneralWeights, PODWeights, ProductWeights, WeightScheme, subsets
from .errors import ConfigError

GENERAL_WEIGHT_DIM_LIMIT = 20


def _ld(x: float) -> float:
    return math.log2(x)


@dataclass(frozen=True)
class BoundContext:
    """Shared inputs of the bound evaluators."""

    s: int
    weights: WeightScheme
    cube: Cube
    q: float = 1.0  # exponent with 1/p + 1/q = 1; math.inf allowed
    m: Optional[int] = None
    t_map: Optional[dict] = None

    def __post_init__(self) -> None:
        if self.s < 1 or self.cube.s < self.s:
            raise ConfigError("bad dimension")
        if not (self.q >= 1):
            raise ConfigError("q must be >= 1 (inf allowed)")
        if self.t_map is not None and self.m is not None:
            if any(t > self.m for t in self.t_map.values()):
                raise ConfigError("t_u must not exceed m")

    def sides(self, u) -> float:
        out = 1.0
        for i in u:
            out *= float(self.cube.side(i))
        return out

    def t_of(self, u) -> int:
        if self.t_map is None or tuple(u) not in self.t_map:
            raise ConfigError(f"missing t value for subset {tuple(u)}")
        return self.t_map[tuple(u)]


def _q_combine(terms: list[float], q: float) -> float:
    if math.isinf(q):
        return max(terms)
    return math.fsum(t**q for t in terms) ** (1.0 / q)


def thm1_bound(ctx: BoundContext, E_map: dict) -> float:
    """Worst-case-error bound for a projection-regular 2^m point set from
    the exact projection quantities E(P, u)."""
    if ctx.m is None:
        raise ConfigError("m required")
    terms = []
    for u in subsets(ctx.s):
        if u not in E_map:
            raise ConfigError(f"missing E value for subset {u}")
        base = (1 << len(u)) / (1 << ctx.m) + float(E_map[u])
        terms.append(float(ctx.weights.gamma(u)) * ctx.sides(u) * base)
    return _q_combine(terms, ctx.q)


def net_bound(ctx: BoundContext) -> float:
    """Bound for a digital net with per-projection quality parameters t_u."""
    if ctx.m is None:
        raise ConfigError("m required")
    terms = []
    for u in subsets(ctx.s):
        t = ctx.t_of(u)
        terms.append(
            float(ctx.weights.gamma(u))
            * (1 << (len(u) + t))
            * float(ctx.m) ** len(u)
            * ctx.sides(u)
        )
    return 3.0 / (1 << ctx.m) * _q_combine(terms, ctx.q)


def seq_bound(N: int, ctx: BoundContext) -> float:
    """Bound for the first N points of a digital sequence (natural logs)."""
    if N < 2:
        raise ConfigError("N must be >= 2")
    terms = []
    for u in subsets(ctx.s):
        t = ctx.t_of(u)
        terms.append(
            float(ctx.weights.gamma(u))
            * (1 << t)
            * (3.0 * math.log(N)) ** len(u)
            * ctx.sides(u)
        )
    return (3.0 * math.log(2 * N) / math.log(2)) / N * _q_combine(terms, ctx.q)


def lemma_E_bound(t_u: int, m: int, u_size: int) -> float:
    """E(P, u) <= 2^(|u| + t_u + 1) m^|u| / 2^m."""
    if t_u > m:
        raise ConfigError("t_u must not exceed m")
    return (1 << (u_size + t_u + 1)) * float(m) ** u_size / (1 << m)


def _require_q1(ctx: BoundContext) -> None:
    if ctx.q != 1:
        raise ConfigError("lattice bounds stated for q = 1")


def cbc_bound(ctx: BoundContext) -> float:
    """Guarantee for the constructed lattice rule:
    (1/2^m) sum_u gamma_u (2^|u| + (m/2)^|u|) prod(b_i - a_i)."""
    _require_q1(ctx)
    if ctx.m is None:
        raise ConfigError("m required")
    total = 0.0
    for u in subsets(ctx.s):
        d = len(u)
        total += (
            float(ctx.weights.gamma(u))
            * ((1 << d) + (ctx.m / 2.0) ** d)
            * ctx.sides(u)
        )
    return total / (1 << ctx.m)


def avg_formula(ctx: BoundContext) -> float:
    """Closed form of the enumeration average:
    (1/2^m) sum_u gamma_u (m/2)^|u| prod(b_i - a_i)."""
    _require_q1(ctx)
    if ctx.m is None:
        raise ConfigError("m required")
    total = 0.0
    for u in subsets(ctx.s):
        total += float(ctx.weights.gamma(u)) * (ctx.m / 2.0) ** len(u) * ctx.sides(u)
    return total / (1 << ctx.m)


def tu_bound_nied(u) -> float:
    """Upper bound on 2^(t_u) for projections of the Niederreiter sequence."""
    if not u:
        raise ConfigError("u must be nonempty")
    out = 1.0
    for i in u:
        out *= 4.0 * i * _ld(i + 2)
    return out


def tu_bound_sobol(u, c: float) -> float:
    """Upper bound on t_u for projections of the Sobol' sequence; c is the
    unspecified absolute constant and must be supplied."""
    if not u:
        raise ConfigError("u must be nonempty")
    if c <= 0:
        raise ConfigError("c must be positive")
    out = 0.0
    for i in u:
        out += _ld(i) + _ld(_ld(i + 1)) + _ld(_ld(_ld(i + 3))) + c
    return out


@dataclass(frozen=True)
class WeightSumReport:
    """Partial sums of a tractability-condition series up to s_max."""

    kind: str
    terms: tuple = field(default_factory=tuple)
    partial_sums: tuple = field(default_factory=tuple)
    converged_heuristic: bool = True  # ratio test on the tail terms


def _max_ratio(weights: WeightScheme, i: int) -> float:
    """max over v subset of [i-1] of gamma(v + {i}) / gamma(v)."""
    if isinstance(weights, ProductWeights):
        return float(weights.gammas[i - 1])
    if isinstance(weights, PODWeights):
        # exact division first: Gamma values may be huge integers
        best = max(float(weights.Gammas[t + 1] / weights.Gammas[t]) for t in range(i))
        return float(weights.gammas[i - 1]) * best
    if isinstance(weights, GeneralWeights):
        if i > GENERAL_WEIGHT_DIM_LIMIT:
            raise ConfigError("general weights limited in dimension for weight sums")
        from itertools import combinations

        best = 0.0
        for size in range(i):
            for v in combinations(range(1, i), size):
                best = max(best, float(weights.gamma(tuple(sorted(v + (i,))))) / float(weights.gamma(v)))
        return best
    raise ConfigError("unsupported weight scheme")


def weight_condition_sums(
    kind: str, weights: WeightScheme, cube: Optional[Cube], s_max: int
) -> WeightSumReport:
    """Partial sums of the series whose finiteness drives the tractability
    statements: per-coordinate terms scaled by the worst weight ratio.

    kind "nied" uses i ld(i+2), "sobol" uses i ld(i+1) ld ld(i+3), "poly"
    uses the bare side length.  A cube of None means the unit cube.
    """
    if kind not in ("nied", "sobol", "poly"):
        raise ConfigError(f"unknown kind {kind!r}")
    if s_max < 1:
        raise ConfigError("s_max must be >= 1")
    terms = []
    total = 0.0
    sums = []
    pod_best = 0.0  # running max of Gamma_{t+1} / Gamma_t for POD weights
    for i in range(1, s_max + 1):
        side = float(cube.side(i)) if cube is not None else 1.0
        if isinstance(weights, PODWeights):
            pod_best = max(pod_best, float(weights.Gammas[i] / weights.Gammas[i - 1]))
            ratio = float(weights.gammas[i - 1]) * pod_best
        else:
            ratio = _max_ratio(weights, i)
        if kind == "nied":
            term = i * _ld(i + 2) * side * ratio
        elif kind == "sobol":
            term = i * _ld(i + 1) * _ld(_ld(i + 3)) * side * ratio
        else:
            term = side * ratio
        terms.append(term)
        total += term
        sums.append(total)
    converged = True
    if s_max >= 2 and terms[-2] > 0:
        converged = terms[-1] / terms[-2] < 1.0
    return WeightSumReport(kind, tuple(terms), tuple(sums), converged)


def info_complexity_bound(C: float, delta: float, eps: float) -> int:
    """Ceiling of the information-complexity bound 2 (C / eps)^(1/(1-delta))."""
    if C <= 0:
        raise ConfigError("C must be positive")
    if not 0 < delta < 1:
        raise ConfigError("delta must lie in (0, 1)")
    if not 0 < eps <= 1:
        raise ConfigError("eps must lie in (0, 1]")
    return math.ceil(2.0 * (C / eps) ** (1.0 / (1.0 - delta)))
