"""Polynomial lattice point sets, their dual nets, and the exact error
functional E over coordinate projections."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import gf2
from .dyadic import DyadicPointSet
from .errors import ConfigError, WorkGuardError
from .walsh import fwht_inplace, mu, mu_vec, wal_num, bit_reverse

DEFAULT_E_WORK_LIMIT = 1 << 24


@dataclass(frozen=True)
class PolyLatticeRule:
    """Modulus f of degree m and generating vector g with deg(g_i) < m."""

    f: int
    g: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.f == 0:
            raise ConfigError("modulus must be nonzero")
        m = self.m
        for gi in self.g:
            if gf2.poly_degree(gi) >= m:
                raise ConfigError("generating polynomial degree must be < deg(f)")

    @property
    def m(self) -> int:
        return gf2.poly_degree(self.f)

    @property
    def s(self) -> int:
        return len(self.g)

    @classmethod
    def from_hex(cls, f: str, g: str) -> "PolyLatticeRule":
        return cls(gf2.poly_from_hex(f), tuple(gf2.poly_from_hex(t) for t in g.split(",")))

    def to_flags(self) -> str:
        return f"f={gf2.poly_to_hex(self.f)} g=" + ",".join(gf2.poly_to_hex(t) for t in self.g)


@lru_cache(maxsize=32)
def _laurent_table(f: int) -> tuple[int, ...]:
    """Numerators of {q/f}_m for all q with deg(q) < m = deg(f)."""
    m = gf2.poly_degree(f)
    return tuple(gf2.laurent_numerator(q, f, m) for q in range(1 << m))


def plps(rule: PolyLatticeRule) -> DyadicPointSet:
    """The 2^m points ({h g_1 / f}_m, ..., {h g_s / f}_m) over deg(h) < m."""
    m = rule.m
    if m > 32:
        raise ConfigError("m is capped at 32")
    table = _laurent_table(rule.f)
    nums = np.zeros((1 << m, rule.s), dtype=np.uint64)
    for i, gi in enumerate(rule.g):
        nums[:, i] = [table[gf2.poly_mulmod(h, gi, rule.f)] for h in range(1 << m)]
    return DyadicPointSet(nums, m)


def dual_contains(ks: tuple[int, ...], rule: PolyLatticeRule, u: tuple[int, ...]) -> bool:
    """True iff sum_{i in u} k_i g_i = 0 (mod f), identifying integers with
    polynomials digit-wise."""
    acc = 0
    for k, i in zip(ks, u):
        if k >> rule.m:
            raise ConfigError("k out of range for m")
        acc ^= gf2.clmul(k, rule.g[i - 1])
    return gf2.poly_mod(acc, rule.f) == 0


def character_sum(rule: PolyLatticeRule, ks: tuple[int, ...], u: tuple[int, ...]) -> int:
    """Normalized Walsh character sum over the lattice points: 1 if k_u lies
    in the dual net, else 0.  Cross-check oracle for dual_contains."""
    points = plps(rule)
    m = rule.m
    total = 0
    for row in points.numerators:
        sign = 1
        for k, i in zip(ks, u):
            sign *= wal_num(k, int(row[i - 1]), m)
        total += sign
    if total % points.n_points:
        raise AssertionError("character sum is not a multiple of the point count")
    return total // points.n_points


def mu_sum_closed_form(m: int) -> Fraction:
    """sum_{k=1}^{2^m - 1} 2^-mu(k) = m/2."""
    return Fraction(m, 2)


def E_dual(
    rule: PolyLatticeRule,
    u: tuple[int, ...],
    work_limit: int = DEFAULT_E_WORK_LIMIT,
) -> Fraction:
    """Exact E(P(g,f), u) via the dual-net characterization.

    When f is irreducible and some g_i, i in u, is invertible modulo f, one
    coordinate of k is determined by the others, shrinking the enumeration
    from 2^(m|u|) to 2^(m(|u|-1)).
    """
    if not u:
        raise ConfigError("u must be nonempty")
    m = rule.m
    gs = [rule.g[i - 1] for i in u]

    if m >= 1 and gf2.is_irreducible(rule.f):
        # prefer solving for an invertible coordinate
        solve_idx = next((j for j, gi in enumerate(gs) if gi != 0), None)
        if solve_idx is not None:
            return _e_dual_solved(rule.f, gs, solve_idx, m, work_limit)
        # all generators zero: every k is dual
        return mu_sum_closed_form(m) ** len(u)

    if (1 << (m * len(u))) > work_limit:
        raise WorkGuardError(
            "E enumeration too large; compute E from the points via E_walsh"
        )
    total = Fraction(0)
    ks = [1] * len(u)
    f = rule.f
    # odometer over {1, ..., 2^m - 1}^{|u|}
    while True:
        acc = 0
        for k, gi in zip(ks, gs):
            acc ^= gf2.clmul(k, gi)
        if gf2.poly_mod(acc, f) == 0:
            total += Fraction(1, 1 << mu_vec(ks))
        j = 0
        while j < len(ks):
            ks[j] += 1
            if ks[j] < (1 << m):
                break
            ks[j] = 1
            j += 1
        else:
            break
    return total


def _e_dual_solved(
    f: int, gs: list[int], solve_idx: int, m: int, work_limit: int
) -> Fraction:
    others = [g for j, g in enumerate(gs) if j != solve_idx]
    g_inv = gf2.poly_invmod(gs[solve_idx], f)
    if (1 << (m * len(others))) > work_limit:
        raise WorkGuardError("E enumeration too large even after solving")
    # scale = 2^(max possible mu) so the sum accumulates in integers
    mu_max = m * (len(others) + 1)
    total = 0
    if not others:
        return Fraction(0)  # only k = 0 solves k g = 0 when g is invertible
    ks = [1] * len(others)
    while True:
        acc = 0
        for k, gi in zip(ks, others):
            acc ^= gf2.clmul(k, gi)
        k_solved = gf2.poly_mulmod(gf2.poly_mod(acc, f), g_inv, f)
        if k_solved != 0:
            total += 1 << (mu_max - mu_vec(ks) - mu(k_solved))
        j = 0
        while j < len(ks):
            ks[j] += 1
            if ks[j] < (1 << m):
                break
            ks[j] = 1
            j += 1
        else:
            break
    return Fraction(total, 1 << mu_max)


def E_walsh(
    points: DyadicPointSet,
    m: int,
    u: tuple[int, ...],
    work_limit: int = DEFAULT_E_WORK_LIMIT,
) -> Fraction:
    """Exact E(P, u) for an arbitrary 2^m-element point set, from Walsh
    character means computed by an integer Walsh-Hadamard transform of the
    projected point counts."""
    if not u:
        raise ConfigError("u must be nonempty")
    if m == 0:
        return Fraction(0)  # empty index range
    d = len(u)
    size = 1 << m
    if size**d > work_limit:
        raise WorkGuardError("E enumeration too large")
    prefixes = points.leading_bits(m)
    # count points by bit-reversed coordinates so that the plain transform
    # produces sums of wal_k over the points
    rev = np.array([bit_reverse(x, m) for x in range(size)], dtype=np.int64)
    counts = np.zeros((size,) * d, dtype=np.int64)
    idx = tuple(rev[prefixes[:, i - 1]] for i in u)
    np.add.at(counts, idx, 1)
    for axis in range(d):
        fwht_inplace(counts, axis)
    absw = np.abs(counts)
    mu_axis = np.array([k.bit_length() for k in range(size)], dtype=np.int64)
    mu_total = np.zeros((size,) * d, dtype=np.int64)
    for axis in range(d):
        shape = [1] * d
        shape[axis] = size
        mu_total = mu_total + mu_axis.reshape(shape)
    # restrict to k with every component nonzero
    nonzero = np.ones((size,) * d, dtype=bool)
    for axis in range(d):
        sl = [slice(None)] * d
        sl[axis] = 0
        nonzero[tuple(sl)] = False
    mu_max = m * d
    sums = np.zeros(mu_max + 1, dtype=np.int64)
    np.add.at(sums, mu_total[nonzero], absw[nonzero])
    numerator = 0
    for mu_val in range(mu_max + 1):
        numerator += int(sums[mu_val]) << (mu_max - mu_val)
    return Fraction(numerator, 1 << (mu_max + m))
