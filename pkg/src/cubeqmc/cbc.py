"""The quality criterion B over coordinate weights and cube sides, its fast
kernel-based evaluation, and the component-by-component construction."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import gf2
from .dyadic import DyadicPointSet
from .errors import ConfigError, WorkGuardError
from .lattice import E_dual, PolyLatticeRule, plps, _laurent_table
from .walsh import phi_table

GENERAL_WEIGHT_DIM_LIMIT = 20


class WeightScheme:
    """Coordinate weights gamma_u for nonempty subsets u of [s]; gamma of the
    empty set is 1 by convention."""

    def gamma(self, u: tuple[int, ...]):
        raise NotImplementedError

    @staticmethod
    def from_json(obj) -> "WeightScheme":
        if isinstance(obj, str):
            obj = json.loads(obj)
        kind = obj.get("type")
        if kind == "product":
            return ProductWeights(tuple(obj["gamma"]))
        if kind == "pod":
            return PODWeights(tuple(obj["Gamma"]), tuple(obj["gamma"]))
        if kind == "general":
            entries = {tuple(sorted(e["u"])): e["w"] for e in obj["entries"]}
            return GeneralWeights(entries)
        raise ConfigError(f"unknown weight type {kind!r}")

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ProductWeights(WeightScheme):
    gammas: tuple  # gamma_1, ..., gamma_s

    def __post_init__(self):
        if any(g <= 0 for g in self.gammas):
            raise ConfigError("weights must be strictly positive")

    def gamma(self, u):
        out = self.gammas[u[0] - 1] if u else 1
        for i in u[1:]:
            out = out * self.gammas[i - 1]
        return out if u else 1

    def to_json(self):
        return {"type": "product", "gamma": [float(g) for g in self.gammas]}


@dataclass(frozen=True)
class PODWeights(WeightScheme):
    Gammas: tuple  # Gamma_0, ..., Gamma_s with Gamma_0 = 1
    gammas: tuple

    def __post_init__(self):
        if not self.Gammas or self.Gammas[0] != 1:
            raise ConfigError("Gamma_0 must be 1")
        if any(g <= 0 for g in self.Gammas) or any(g <= 0 for g in self.gammas):
            raise ConfigError("weights must be strictly positive")

    def gamma(self, u):
        out = self.Gammas[len(u)]
        for i in u:
            out = out * self.gammas[i - 1]
        return out

    def to_json(self):
        return {
            "type": "pod",
            "Gamma": [float(g) for g in self.Gammas],
            "gamma": [float(g) for g in self.gammas],
        }


@dataclass(frozen=True)
class GeneralWeights(WeightScheme):
    entries: dict  # map from sorted tuple of coordinates to weight

    def __post_init__(self):
        if any(w <= 0 for w in self.entries.values()):
            raise ConfigError("weights must be strictly positive")

    def gamma(self, u):
        key = tuple(sorted(u))
        if not key:
            return 1
        if key not in self.entries:
            raise ConfigError(f"no weight declared for subset {key}")
        return self.entries[key]

    def to_json(self):
        return {
            "type": "general",
            "entries": [{"u": list(k), "w": float(w)} for k, w in sorted(self.entries.items())],
        }


@dataclass(frozen=True)
class Cube:
    """Finite integration cube [a_1,b_1] x ... x [a_s,b_s]."""

    a: tuple
    b: tuple

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ConfigError("a and b differ in length")
        for ai, bi in zip(self.a, self.b):
            if not (-math.inf < ai < bi < math.inf):
                raise ConfigError("need finite a_i < b_i")

    @classmethod
    def unit(cls, s: int) -> "Cube":
        return cls((0,) * s, (1,) * s)

    @property
    def s(self) -> int:
        return len(self.a)

    def side(self, i: int):
        """Side length b_i - a_i, coordinate 1-based."""
        return self.b[i - 1] - self.a[i - 1]

    @staticmethod
    def from_json(obj) -> "Cube":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return Cube(tuple(obj["a"]), tuple(obj["b"]))

    def to_json(self) -> dict:
        return {"a": [float(x) for x in self.a], "b": [float(x) for x in self.b]}


def subsets(s: int):
    """All nonempty subsets of [s] as sorted tuples of 1-based coordinates."""
    for size in range(1, s + 1):
        yield from combinations(range(1, s + 1), size)


def phi_matrix(points: DyadicPointSet, m: int) -> np.ndarray:
    """Per-point, per-coordinate kernel values from the leading m bits."""
    table = phi_table(m)
    return table[points.leading_bits(m)]


def B_fast(points: DyadicPointSet, m: int, weights: WeightScheme, cube: Cube) -> float:
    """The criterion B from the precomputed kernel table.

    Product weights run in O(sN), POD in O(s^2 N), general weights as an
    explicit subset sum (dimension-limited).
    """
    phi = phi_matrix(points, m).astype(np.float64)
    return B_from_phi(phi, weights, cube)


def B_from_phi(phi: np.ndarray, weights: WeightScheme, cube: Cube) -> float:
    n, s = phi.shape
    if cube.s != s:
        raise ConfigError("cube dimension mismatch")
    sides = np.array([float(cube.side(i)) for i in range(1, s + 1)])
    if isinstance(weights, ProductWeights):
        gam = np.array([float(g) for g in weights.gammas[:s]])
        terms = 1.0 + phi * (gam * sides / 2.0)
        per_point = np.prod(terms, axis=1) - 1.0
        return math.fsum(per_point) / n
    if isinstance(weights, PODWeights):
        w = phi * (np.array([float(g) for g in weights.gammas[:s]]) * sides)
        # elementary symmetric polynomials per point, degree 0..s
        elem = np.zeros((n, s + 1))
        elem[:, 0] = 1.0
        for i in range(s):
            for ell in range(min(i + 1, s), 0, -1):
                elem[:, ell] += w[:, i] * elem[:, ell - 1]
        coeff = np.array([float(weights.Gammas[ell]) / (1 << ell) for ell in range(s + 1)])
        coeff[0] = 0.0
        per_point = elem @ coeff
        return math.fsum(per_point) / n
    if s > GENERAL_WEIGHT_DIM_LIMIT:
        raise ConfigError(
            "general weights are limited to s <= "
            f"{GENERAL_WEIGHT_DIM_LIMIT}; use product or POD weights"
        )
    half = phi * (sides / 2.0)
    acc = np.zeros(n)
    for u in subsets(s):
        prod = np.ones(n)
        for i in u:
            prod *= half[:, i - 1]
        acc += float(weights.gamma(u)) * prod
    return math.fsum(acc) / n


def B_dual(
    rule: PolyLatticeRule,
    weights: WeightScheme,
    cube: Cube,
    work_limit: int | None = None,
    exact: bool = False,
):
    """Slow oracle: B = sum_u gamma_u prod(b_i - a_i) E(P(g,f), u) from the
    exact dual-net E values.  With exact=True, weights and cube entries are
    taken as exact rationals and the result is a Fraction."""
    s = rule.s
    if cube.s != s:
        raise ConfigError("cube dimension mismatch")
    kwargs = {} if work_limit is None else {"work_limit": work_limit}
    total = Fraction(0) if exact else 0.0
    for u in subsets(s):
        e = E_dual(rule, u, **kwargs)
        if e == 0:
            continue
        gamma = weights.gamma(u)
        sides = 1
        for i in u:
            sides *= cube.side(i)
        if exact:
            total += Fraction(gamma) * Fraction(sides) * e
        else:
            total += float(gamma) * float(sides) * float(e)
    return total


def _gf_log_tables(f: int) -> tuple[np.ndarray, np.ndarray]:
    """Discrete log/exp tables of the multiplicative group modulo an
    irreducible f."""
    m = gf2.poly_degree(f)
    q = (1 << m) - 1
    # find a generator of the multiplicative group
    for cand in range(2, 1 << m):
        seen = 1
        val = cand
        order = 1
        while val != 1:
            val = gf2.poly_mulmod(val, cand, f)
            order += 1
            if order > q:
                raise ConfigError("modulus is not irreducible")
        if order == q:
            gen = cand
            break
    else:
        gen = 1  # m == 1: group is trivial
    exp = np.zeros(q, dtype=np.int64)
    log = np.zeros(1 << m, dtype=np.int64)
    val = 1
    for t in range(q):
        exp[t] = val
        log[val] = t
        val = gf2.poly_mulmod(val, gen, f)
    return log, exp


def cbc_construct(
    f: int,
    s: int,
    weights: WeightScheme,
    cube: Cube,
) -> tuple[tuple[int, ...], float]:
    """Greedy coordinate-wise minimization of B over generating vectors.

    Requires an irreducible modulus; ties are broken toward the smallest
    candidate encoding, which makes the result deterministic.
    """
    m = gf2.poly_degree(f)
    if m < 1 or not gf2.is_irreducible(f):
        raise ConfigError("CBC guarantee requires irreducible modulus")
    if s < 1:
        raise ConfigError("dimension must be >= 1")
    if cube.s < s:
        raise ConfigError("cube dimension mismatch")
    n = 1 << m
    table = np.array(_laurent_table(f), dtype=np.int64)
    phi_tab = phi_table(m)
    phi_of = phi_tab[table]  # kernel value of {q/f}_m indexed by q
    log, exp = _gf_log_tables(f)
    q = n - 1
    # phi_of[h * g mod f] for h = 1..2^m-1 in natural order, as a function of
    # log(g): phi_shift[log_h + log_g] with a doubled table to avoid modulo
    a = phi_of[exp]  # indexed by log of the product
    a2 = np.concatenate([a, a])
    log_h = log[1:n]  # log of h in natural order h = 1, ..., 2^m - 1

    def candidate_columns() -> np.ndarray:
        """(2^m, 2^m) matrix: column values phi({h g / f}_m) for each g."""
        cols = np.empty((n, n), dtype=np.int64)
        cols[:, 0] = phi_of[0]  # g = 0: all products vanish
        cols[0, :] = phi_of[0]  # h = 0 row
        for g in range(1, n):
            cols[1:, g] = a2[log_h + log[g]]
        return cols

    all_cols = candidate_columns()
    sides = [float(cube.side(i)) for i in range(1, s + 1)]

    def pick_min(b_vals: np.ndarray) -> int:
        """Smallest encoding among candidates within rounding noise of the
        minimum, so mathematical ties break identically on every path."""
        best = float(np.min(b_vals))
        tol = 1e-12 * max(abs(best), 1e-300)
        return int(np.flatnonzero(b_vals <= best + tol)[0])

    g_star: list[int] = [1]
    if isinstance(weights, ProductWeights):
        gam = [float(g) for g in weights.gammas[:s]]
        prefix = 1.0 + all_cols[:, 1] * (gam[0] * sides[0] / 2.0)
        best_b = float(np.mean(prefix)) - 1.0
        for d in range(2, s + 1):
            scaled = 1.0 + all_cols * (gam[d - 1] * sides[d - 1] / 2.0)
            b_vals = (prefix[:, None] * scaled).mean(axis=0) - 1.0
            g_d = pick_min(b_vals)
            best_b = float(b_vals[g_d])
            g_star.append(g_d)
            prefix = prefix * scaled[:, g_d]
        return tuple(g_star), best_b

    if isinstance(weights, PODWeights):
        gam = [float(g) for g in weights.gammas[:s]]
        coeff = np.array([float(weights.Gammas[ell]) / (1 << ell) for ell in range(s + 1)])
        coeff[0] = 0.0
        elem = np.zeros((n, s + 1))
        elem[:, 0] = 1.0
        w1 = all_cols[:, 1] * (gam[0] * sides[0])
        elem[:, 1] = w1
        best_b = float(np.mean(elem[:, : 2] @ coeff[:2]))
        for d in range(2, s + 1):
            w = all_cols * (gam[d - 1] * sides[d - 1])
            # candidate-wise criterion: mean over points of
            # sum_ell coeff[ell] (elem[ell] + w elem[ell-1])
            tail = elem[:, : d + 1] @ coeff[: d + 1]
            cross = elem[:, : d] @ coeff[1 : d + 1]
            b_vals = (tail[:, None] + w * cross[:, None]).mean(axis=0)
            g_d = pick_min(b_vals)
            best_b = float(b_vals[g_d])
            g_star.append(g_d)
            wd = w[:, g_d]
            for ell in range(min(d, s), 0, -1):
                elem[:, ell] += wd * elem[:, ell - 1]
        return tuple(g_star), best_b

    # general weights: full subset evaluation per candidate
    if s > GENERAL_WEIGHT_DIM_LIMIT:
        raise ConfigError("general weights are limited in dimension; use product or POD")
    phi_cols = [all_cols[:, 1].astype(np.float64)]
    best_b = 0.0
    for d in range(2, s + 1):
        b_vals = np.empty(n)
        for g in range(n):
            phi = np.column_stack(phi_cols + [all_cols[:, g].astype(np.float64)])
            b_vals[g] = B_from_phi(phi, _restrict_weights(weights, d), _restrict_cube(cube, d))
        g_d = pick_min(b_vals)
        best_b = float(b_vals[g_d])
        g_star.append(g_d)
        phi_cols.append(all_cols[:, g_d].astype(np.float64))
    if s == 1:
        phi = np.column_stack(phi_cols)
        best_b = B_from_phi(phi, _restrict_weights(weights, 1), _restrict_cube(cube, 1))
    return tuple(g_star), best_b


def _restrict_weights(weights: WeightScheme, d: int) -> WeightScheme:
    if isinstance(weights, GeneralWeights):
        return GeneralWeights(
            {u: w for u, w in weights.entries.items() if all(i <= d for i in u)}
        )
    return weights


def _restrict_cube(cube: Cube, d: int) -> Cube:
    return Cube(cube.a[:d], cube.b[:d])


def cbc_guarantee_rhs(m: int, s: int, weights: WeightScheme, cube: Cube) -> float:
    """(1/2^m) sum_u gamma_u (m/2)^|u| prod (b_i - a_i): the construction
    guarantee and the enumeration average."""
    total = 0.0
    for u in subsets(s):
        sides = 1.0
        for i in u:
            sides *= float(cube.side(i))
        total += float(weights.gamma(u)) * (m / 2.0) ** len(u) * sides
    return total / (1 << m)


def average_B(
    f: int,
    s: int,
    weights: WeightScheme,
    cube: Cube,
    work_limit_bits: int = 24,
) -> Fraction:
    """Exact enumeration average of B over all generating vectors in G_m^s."""
    m = gf2.poly_degree(f)
    if m < 1 or not gf2.is_irreducible(f):
        raise ConfigError("averaging theorem requires irreducible modulus")
    if s * m > work_limit_bits:
        raise WorkGuardError("enumeration of G_m^s too large")
    total = Fraction(0)
    for encoded in range(1 << (s * m)):
        g = tuple((encoded >> (m * i)) & ((1 << m) - 1) for i in range(s))
        rule = PolyLatticeRule(f, g)
        total += B_dual(rule, weights, cube, exact=True)
    return total / (1 << (s * m))


def markov_fraction(
    f: int,
    s: int,
    weights: WeightScheme,
    cube: Cube,
    c,
    work_limit_bits: int = 24,
) -> tuple[int, Fraction]:
    """Count of generating vectors with B below c times the average, and the
    strict threshold 2^(sm) (1 - 1/c) the count must exceed."""
    if c < 1:
        raise ConfigError("c must be >= 1")
    m = gf2.poly_degree(f)
    if s * m > work_limit_bits:
        raise WorkGuardError("enumeration of G_m^s too large")
    avg = average_B(f, s, weights, cube, work_limit_bits)
    bound = Fraction(c) * avg
    count = 0
    for encoded in range(1 << (s * m)):
        g = tuple((encoded >> (m * i)) & ((1 << m) - 1) for i in range(s))
        rule = PolyLatticeRule(f, g)
        if B_dual(rule, weights, cube, exact=True) <= bound:
            count += 1
    threshold = (1 << (s * m)) * (1 - 1 / Fraction(c))
    return count, threshold
