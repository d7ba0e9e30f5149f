"""Exact arithmetic for polynomials and matrices over the two-element field.

Polynomials are plain Python ints: bit i is the coefficient of x^i, so the
zero polynomial is 0 and every nonzero polynomial is monic by construction.
Degrees are capped below 64 which leaves headroom for carry-less products.
"""
from __future__ import annotations

from .errors import ConfigError

#: Degree of the zero polynomial (acts as -infinity in comparisons
#: against the nonnegative degrees of nonzero polynomials).
DEG_ZERO = -1

_MAX_DEG = 64


def poly_degree(p: int) -> int:
    """Degree of the polynomial, DEG_ZERO for p = 0."""
    return p.bit_length() - 1 if p else DEG_ZERO


def poly_from_hex(text: str) -> int:
    """Parse a polynomial from its hexadecimal bit-mask encoding, e.g. "0x7"."""
    try:
        p = int(text, 16)
    except ValueError:
        raise ConfigError(f"not a hex polynomial: {text!r}") from None
    if p < 0:
        raise ConfigError(f"negative polynomial encoding: {text!r}")
    _check_degree(p)
    return p


def poly_to_hex(p: int) -> str:
    return hex(p)


def poly_to_str(p: int) -> str:
    """Human-readable form such as 'x^2+x+1'."""
    if p == 0:
        return "0"
    terms = []
    for i in range(p.bit_length() - 1, -1, -1):
        if (p >> i) & 1:
            terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
    return "+".join(terms)


def _check_degree(p: int) -> None:
    if poly_degree(p) >= _MAX_DEG:
        raise ConfigError(f"polynomial degree {poly_degree(p)} exceeds cap {_MAX_DEG - 1}")


def clmul(a: int, b: int) -> int:
    """Carry-less product of two polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, f: int) -> int:
    """Remainder of a modulo f."""
    if f == 0:
        raise ConfigError("zero modulus")
    df = poly_degree(f)
    da = poly_degree(a)
    while da >= df:
        a ^= f << (da - df)
        da = poly_degree(a)
    return a


def poly_mulmod(a: int, b: int, f: int) -> int:
    """(a*b) mod f via carry-less multiplication."""
    if f == 0:
        raise ConfigError("zero modulus")
    return poly_mod(clmul(a, b), f)


def poly_gcd(a: int, b: int) -> int:
    """Greatest common divisor; every nonzero polynomial over F_2 is monic."""
    if a == 0 and b == 0:
        raise ConfigError("gcd undefined for two zero polynomials")
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_invmod(a: int, f: int) -> int:
    """Inverse of a modulo f; requires gcd(a, f) = 1."""
    if poly_gcd(a, f) != 1:
        raise ConfigError("element not invertible modulo f")
    # extended Euclid over F_2[x]
    r0, r1 = f, poly_mod(a, f)
    s0, s1 = 0, 1
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ clmul(q, s1)
    return poly_mod(s0, f)


def _poly_divmod(a: int, b: int) -> tuple[int, int]:
    db = poly_degree(b)
    q = 0
    da = poly_degree(a)
    while da >= db:
        q ^= 1 << (da - db)
        a ^= b << (da - db)
        da = poly_degree(a)
    return q, a


def is_irreducible(f: int) -> bool:
    """Deterministic irreducibility test over F_2.

    f is irreducible iff gcd(f, x^(2^i) - x) = 1 for 1 <= i <= deg(f)/2,
    with x^(2^i) computed by repeated squaring modulo f.
    """
    d = poly_degree(f)
    if d < 1:
        raise ConfigError("not a candidate modulus")
    if d == 1:
        return True
    xp = 2  # x
    for _ in range(d // 2):
        xp = poly_mulmod(xp, xp, f)  # x^(2^i)
        if poly_gcd(xp ^ 2, f) != 1:
            return False
    return True


def smallest_irreducible(degree: int) -> int:
    """Irreducible polynomial of the given degree with smallest encoding."""
    if degree < 1:
        raise ConfigError("degree must be positive")
    for p in range(1 << degree, 1 << (degree + 1)):
        if is_irreducible(p):
            return p
    raise AssertionError("unreachable: irreducibles exist in every degree")


def laurent_fraction(g: int, f: int, m: int) -> tuple[int, ...]:
    """First m digits (a_1, ..., a_m) of the Laurent expansion of g/f.

    The truncated value is sum a_k 2^-k.  Computed by polynomial long
    division, one digit per step.  Requires deg(g) < deg(f).
    """
    if f == 0:
        raise ConfigError("zero modulus")
    if poly_degree(g) >= poly_degree(f):
        raise ConfigError("improper fraction: deg(g) >= deg(f)")
    df = poly_degree(f)
    digits = []
    r = g
    for _ in range(m):
        r <<= 1
        if poly_degree(r) == df:
            digits.append(1)
            r ^= f
        else:
            digits.append(0)
    return tuple(digits)


def laurent_numerator(g: int, f: int, m: int) -> int:
    """Numerator of the truncation of g/f at precision m: value = num / 2^m."""
    num = 0
    for a in laurent_fraction(g, f, m):
        num = (num << 1) | a
    return num


def f2_rank(rows: list[int]) -> int:
    """Rank over F_2 of a list of bit-vector rows, by Gaussian elimination."""
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            if lead in pivots:
                row ^= pivots[lead]
            else:
                pivots[lead] = row
                break
    return len(pivots)
