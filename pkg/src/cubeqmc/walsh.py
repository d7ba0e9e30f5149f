"""Dyadic Walsh and Haar functions, the digit-length function mu, and the
precomputed integer kernel table that drives the fast quality criterion."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .dyadic import DyadicPoint, DyadicPointSet
from .errors import ConfigError


def mu(k: int) -> int:
    """Length of the binary expansion of k; mu(0) = 0."""
    return k.bit_length()


def mu_vec(ks: Iterable[int]) -> int:
    """Componentwise sum of mu over a vector of indices."""
    return sum(k.bit_length() for k in ks)


def bit_reverse(x: int, width: int) -> int:
    """Reverse the low `width` bits of x."""
    r = 0
    for _ in range(width):
        r = (r << 1) | (x & 1)
        x >>= 1
    return r


def wal(k: int, x: DyadicPoint) -> int:
    """The k-th dyadic Walsh function at a dyadic point, exactly +-1.

    wal_k(x) = (-1)^(kappa_0 xi_1 + ... + kappa_{r-1} xi_r) where kappa are
    the binary digits of k and xi the dyadic digits of x.
    """
    r = mu(k)
    if r > x.prec:
        raise ConfigError(f"precision too low for k={k}")
    return wal_num(k, x.num, x.prec)


def wal_num(k: int, num: int, prec: int) -> int:
    """wal_k at the dyadic point num / 2^prec (digits assumed sufficient)."""
    r = k.bit_length()
    if r == 0:
        return 1
    # xi_1..xi_r are the top r digits; kappa_{i-1} pairs with xi_i, so pair
    # the bit-reversed k against the top bits of the numerator.
    top = num >> (prec - r)
    return 1 - 2 * (bin(bit_reverse(k, r) & top).count("1") & 1)


def wal_vector(ks: Sequence[int], point: Sequence[DyadicPoint]) -> int:
    """Multivariate Walsh function: product over coordinates."""
    sign = 1
    for k, x in zip(ks, point):
        sign *= wal(k, x)
    return sign


@dataclass(frozen=True)
class HaarIndex:
    """Index (j, m) of a univariate Haar function; (-1, 0) is the constant."""

    j: int
    m: int

    def __post_init__(self) -> None:
        if self.j < -1:
            raise ConfigError("j must be >= -1")
        if self.j == -1 and self.m != 0:
            raise ConfigError("the constant index is (-1, 0)")
        if self.j >= 0 and not 0 <= self.m < (1 << self.j):
            raise ConfigError("m out of range for level j")


def haar(idx: HaarIndex, x: float) -> float:
    """Univariate Haar function h_{j,m}(x) on [0,1)."""
    if idx.j == -1:
        return 1.0
    j, m = idx.j, idx.m
    lo = m / (1 << j)
    mid = (2 * m + 1) / (1 << (j + 1))
    hi = (m + 1) / (1 << j)
    if lo <= x < mid:
        return math.sqrt(float(1 << j))
    if mid <= x < hi:
        return -math.sqrt(float(1 << j))
    return 0.0


def haar_vector(indices: Sequence[HaarIndex], xs: Sequence[float]) -> float:
    return math.prod(haar(idx, x) for idx, x in zip(indices, xs))


def dyadic_sub(x: DyadicPoint, y: DyadicPoint) -> DyadicPoint:
    """Digit-wise dyadic subtraction; XOR of numerators aligned at the
    larger precision."""
    prec = max(x.prec, y.prec)
    return DyadicPoint((x.num << (prec - x.prec)) ^ (y.num << (prec - y.prec)), prec)


def phi_table(m: int) -> np.ndarray:
    """Integer kernel values at all m-bit points n / 2^m.

    Entry 0 is m; entry n > 0 is i0 - 2 where i0 is the 1-based position of
    the first nonzero dyadic digit of n / 2^m, i.e. m - bitlength(n) - 1.
    Range is {-1, 0, ..., m}.
    """
    if not 1 <= m <= 32:
        raise ConfigError("m must be in [1, 32]")
    n = np.arange(1 << m, dtype=np.int64)
    bl = np.frexp(n.astype(np.float64))[1]  # exact bit length for n < 2^53
    table = (m - bl - 1).astype(np.int32)
    table[0] = m
    return table


def phi_value(num: int, m: int) -> int:
    """Kernel value at the m-bit point num / 2^m."""
    return m if num == 0 else m - num.bit_length() - 1


def walsh_mean(points: DyadicPointSet, ks: Sequence[int], u: Sequence[int]) -> Fraction:
    """Exact mean of the multivariate Walsh function over the projection to u.

    Coordinates in u are 1-based.  Returns the exact rational
    (1/N) * sum_n wal_{k_u}(y_{n,u}).
    """
    if points.n_points == 0:
        raise ConfigError("empty point set")
    if len(ks) != len(u):
        raise ConfigError("index vector and coordinate subset differ in length")
    prec = points.prec
    total = 0
    nums = points.numerators
    for row in nums:
        sign = 1
        for k, i in zip(ks, u):
            sign *= wal_num(k, int(row[i - 1]), prec)
        total += sign
    return Fraction(total, points.n_points)


def fwht_inplace(a: np.ndarray, axis: int) -> None:
    """In-place integer Walsh-Hadamard transform along one axis."""
    n = a.shape[axis]
    h = 1
    a_view = np.moveaxis(a, axis, 0)
    while h < n:
        for start in range(0, n, 2 * h):
            x = a_view[start : start + h].copy()
            y = a_view[start + h : start + 2 * h]
            a_view[start : start + h] = x + y
            a_view[start + h : start + 2 * h] = x - y
        h *= 2
