"""Digital nets and digital-sequence prefixes over F_2.

Generating matrices are stored row-wise as ints: bit l of row k is the
entry multiplying digit l of the point index (digit 0 = least significant).
With the identity matrix this yields the van der Corput points.
"""
from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .dyadic import DyadicPointSet
from .errors import ConfigError, WorkGuardError
from .gf2 import f2_rank

DEFAULT_SEQUENCE_PRECISION = 53
DEFAULT_T_WORK_LIMIT = 10**6


@dataclass(frozen=True)
class BitMatrix:
    """Square matrix over F_2 with rows packed into ints."""

    rows: tuple[int, ...]
    size: int

    def __post_init__(self) -> None:
        if len(self.rows) != self.size:
            raise ConfigError("row count does not match declared size")
        for r in self.rows:
            if r >> self.size:
                raise ConfigError("row has bits beyond declared width")

    @classmethod
    def identity(cls, size: int) -> "BitMatrix":
        return cls(tuple(1 << i for i in range(size)), size)

    def is_regular(self) -> bool:
        return f2_rank(list(self.rows)) == self.size

    def is_upper_triangular(self) -> bool:
        """Row k has no entries below the diagonal and a nonzero diagonal."""
        return all(
            (r >> k) & 1 and not (r & ((1 << k) - 1))
            for k, r in enumerate(self.rows)
        )

    def apply(self, digits: int) -> int:
        """Matrix-vector product over F_2; returns output digits packed with
        digit of row k in bit k."""
        out = 0
        for k, row in enumerate(self.rows):
            out |= (bin(row & digits).count("1") & 1) << k
        return out

    def top_left(self, size: int) -> "BitMatrix":
        mask = (1 << size) - 1
        return BitMatrix(tuple(r & mask for r in self.rows[:size]), size)


@dataclass(frozen=True)
class NetDefinition:
    """Generating matrices of a (shifted) digital net or sequence truncation.

    `shift` holds one numerator per coordinate at precision `shift_prec`
    (leading digit in the top bit), applied digit-wise via XOR.
    """

    m: int
    s: int
    matrices: tuple[BitMatrix, ...]
    shift: tuple[int, ...] | None = None
    shift_prec: int | None = None

    def __post_init__(self) -> None:
        if self.s < 1 or self.m < 1:
            raise ConfigError("need m >= 1 and s >= 1")
        if self.m > 64:
            raise ConfigError("m is capped at 64")
        if len(self.matrices) != self.s:
            raise ConfigError("matrix count does not match dimension")
        for c in self.matrices:
            if c.size != self.m:
                raise ConfigError("matrix size mismatch")
        if self.shift is not None:
            if len(self.shift) != self.s:
                raise ConfigError("shift count does not match dimension")
            if self.shift_prec is None or self.shift_prec < self.m:
                raise ConfigError("shift precision must cover the m point digits")


def generate_net(definition: NetDefinition) -> DyadicPointSet:
    """All 2^m points of the (shifted) digital net."""
    m, s = definition.m, definition.s
    if m > 32:
        raise ConfigError("net generation is capped at m = 32")
    prec = definition.shift_prec if definition.shift is not None else m
    nums = np.zeros((1 << m, s), dtype=np.uint64)
    for i, mat in enumerate(definition.matrices):
        col = np.array([_digits_to_numerator(mat.apply(n), m) for n in range(1 << m)],
                       dtype=np.uint64)
        if definition.shift is not None:
            col = (col << np.uint64(prec - m)) ^ np.uint64(definition.shift[i])
        nums[:, i] = col
    return DyadicPointSet(nums, prec)


def _digits_to_numerator(y: int, m: int) -> int:
    """Digits packed as bit k = y_{k+1} -> numerator with y_1 as top bit."""
    num = 0
    for k in range(m):
        num |= ((y >> k) & 1) << (m - 1 - k)
    return num


def _load_direction_numbers() -> dict[int, tuple[int, int, list[int]]]:
    text = (
        importlib.resources.files("cubeqmc.data")
        .joinpath("sobol_directions.txt")
        .read_text()
    )
    table: dict[int, tuple[int, int, list[int]]] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [int(tok) for tok in line.split()]
        d, deg, a, ms = parts[0], parts[1], parts[2], parts[3:]
        if len(ms) != deg:
            raise ConfigError(f"direction-number row for dimension {d} malformed")
        table[d] = (deg, a, ms)
    return table


_DIRECTIONS: dict[int, tuple[int, int, list[int]]] | None = None


def sobol_max_dimension() -> int:
    global _DIRECTIONS
    if _DIRECTIONS is None:
        _DIRECTIONS = _load_direction_numbers()
    return max(_DIRECTIONS) if _DIRECTIONS else 1


def sobol_matrices(s: int, m: int) -> tuple[BitMatrix, ...]:
    """Upper-left m x m generating matrices of the Sobol' sequence.

    Dimension 1 is the identity (van der Corput); higher dimensions come
    from the bundled primitive polynomials and initial direction numbers.
    """
    global _DIRECTIONS
    if _DIRECTIONS is None:
        _DIRECTIONS = _load_direction_numbers()
    if m < 1 or m > 64:
        raise ConfigError("m must be in [1, 64]")
    limit = max(_DIRECTIONS) if _DIRECTIONS else 1
    if s < 1 or s > limit:
        raise ConfigError(f"dimension {s} exceeds bundled direction data (limit {limit})")
    matrices = [BitMatrix.identity(m)]
    for dim in range(2, s + 1):
        deg, a, m_init = _DIRECTIONS[dim]
        mk = list(m_init)
        for k in range(deg, m):
            # m_k = 2 a_1 m_{k-1} ^ ... ^ 2^{deg-1} a_{deg-1} m_{k-deg+1}
            #       ^ 2^deg m_{k-deg} ^ m_{k-deg}
            v = (mk[k - deg] << deg) ^ mk[k - deg]
            for j in range(1, deg):
                if (a >> (deg - 1 - j)) & 1:
                    v ^= mk[k - j] << j
            mk.append(v)
        # column k (0-based) holds the bits of m_{k+1}: entry in row r is
        # bit (k - r) of m_{k+1}; rows are packed with column index as bit.
        rows = []
        for r in range(m):
            row = 0
            for k in range(r, m):
                row |= ((mk[k] >> (k - r)) & 1) << k
            rows.append(row)
        matrices.append(BitMatrix(tuple(rows), m))
    return tuple(matrices)


def save_matrices(definition: NetDefinition, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{definition.m} {definition.s}\n")
        for mat in definition.matrices:
            for row in mat.rows:
                fh.write(" ".join(str((row >> j) & 1) for j in range(definition.m)) + "\n")


def load_matrices(path) -> NetDefinition:
    """Parse the plain-text matrix format: 'm s' header then s blocks of m
    rows of m bits; '#' starts a comment."""
    rows_seen: list[list[int]] = []
    header: tuple[int, int] | None = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if header is None:
                if len(tokens) != 2:
                    raise ConfigError(f"{path}:{lineno}: expected header 'm s'")
                try:
                    m, s = int(tokens[0]), int(tokens[1])
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: non-integer header") from None
                if m < 1 or s < 1:
                    raise ConfigError(f"{path}:{lineno}: m and s must be positive")
                header = (m, s)
                continue
            m, s = header
            if len(rows_seen) >= m * s:
                raise ConfigError(f"{path}:{lineno}: more rows than declared")
            if len(tokens) != m:
                raise ConfigError(f"{path}:{lineno}: expected {m} bits")
            try:
                bits = [int(t) for t in tokens]
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: non-binary digit") from None
            if any(b not in (0, 1) for b in bits):
                raise ConfigError(f"{path}:{lineno}: non-binary digit")
            rows_seen.append(bits)
    if header is None:
        raise ConfigError(f"{path}: missing header")
    m, s = header
    if len(rows_seen) != m * s:
        raise ConfigError(f"{path}: expected {m * s} rows, found {len(rows_seen)}")
    matrices = []
    for i in range(s):
        rows = tuple(
            sum(bit << j for j, bit in enumerate(rows_seen[i * m + k]))
            for k in range(m)
        )
        matrices.append(BitMatrix(rows, m))
    return NetDefinition(m=m, s=s, matrices=tuple(matrices))


def _compositions(total: int, parts: int):
    """Nonnegative integer compositions of `total` into `parts` parts."""
    if parts == 1:
        yield (total,)
        return
    for cut in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cut:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def _count_compositions(total: int, parts: int) -> int:
    from math import comb

    return comb(total + parts - 1, parts - 1)


def exact_t(
    definition: NetDefinition,
    u: tuple[int, ...],
    work_limit: int = DEFAULT_T_WORK_LIMIT,
) -> int:
    """Smallest t such that every leading-row system with row counts summing
    to m - t is linearly independent over F_2, for the projection to u."""
    if not u:
        raise ConfigError("u must be nonempty")
    m = definition.m
    mats = [definition.matrices[i - 1] for i in u]
    for t in range(m + 1):
        if _count_compositions(m - t, len(u)) > work_limit:
            raise WorkGuardError("t-computation too large")
        ok = True
        for d in _compositions(m - t, len(u)):
            if any(di > m for di in d):
                continue
            rows: list[int] = []
            for mat, di in zip(mats, d):
                rows.extend(mat.rows[:di])
            if f2_rank(rows) != m - t:
                ok = False
                break
        if ok:
            return t
    raise AssertionError("unreachable: t = m always satisfies the predicate")


def is_projection_regular(points: DyadicPointSet, m: int) -> bool:
    """True iff every one-dimensional projection hits each dyadic interval
    of length 2^-m exactly once."""
    n = points.n_points
    if n != (1 << m):
        raise ConfigError("point count must be 2^m")
    prefixes = points.leading_bits(m)
    for i in range(points.s):
        if len(set(prefixes[:, i].tolist())) != n:
            return False
    return True


@dataclass(frozen=True)
class PrefixBlock:
    """One digitally shifted net in the decomposition of a sequence prefix."""

    m: int
    start: int  # index of the first point of this block in the prefix
    shifts: tuple[int, ...]  # per-coordinate shift numerators at full precision
    submatrices: tuple[BitMatrix, ...]


@dataclass(frozen=True)
class PrefixDecomposition:
    """Blocks in increasing block-size order; sum of sizes is N."""

    prec: int
    blocks: tuple[PrefixBlock, ...] = field(default_factory=tuple)


def sequence_point(matrices: tuple[BitMatrix, ...], n: int, prec: int) -> tuple[int, ...]:
    """Direct evaluation of sequence point n at the given precision."""
    return tuple(_digits_to_numerator(mat.apply(n), prec) for mat in matrices)


def sequence_prefix(
    definition: NetDefinition, n_points: int
) -> tuple[DyadicPointSet, PrefixDecomposition]:
    """First N points of the digital sequence plus its decomposition into
    digitally shifted nets, one block per set bit of N.

    The generating matrices must be non-singular upper triangular (given at
    the full precision, which bounds the representable index range).
    """
    if n_points < 1:
        raise ConfigError("N must be >= 1")
    prec = definition.m
    if n_points > (1 << prec):
        raise ConfigError("precision too small for N points")
    for mat in definition.matrices:
        if not mat.is_upper_triangular():
            raise ConfigError("sequence mode requires upper triangular matrices")

    nums = np.zeros((n_points, definition.s), dtype=np.uint64)
    for n in range(n_points):
        nums[n] = sequence_point(definition.matrices, n, prec)
    points = DyadicPointSet(nums, prec)

    # Blocks in prefix order consume the set bits of N from the largest
    # down; they are stored sorted by increasing block size with explicit
    # start offsets.
    blocks = []
    base = 0
    for mj in range(prec, -1, -1):
        if not (n_points >> mj) & 1:
            continue
        shifts = tuple(
            _digits_to_numerator(mat.apply(base), prec) for mat in definition.matrices
        )
        submats = tuple(mat.top_left(mj) if mj > 0 else BitMatrix((), 0)
                        for mat in definition.matrices)
        blocks.append(PrefixBlock(m=mj, start=base, shifts=shifts, submatrices=submats))
        base += 1 << mj
    blocks.sort(key=lambda b: b.m)
    return points, PrefixDecomposition(prec=prec, blocks=tuple(blocks))


def regenerate_block(block: PrefixBlock, s: int, prec: int) -> np.ndarray:
    """Points of one block regenerated as a shifted net, as numerators at
    the decomposition precision."""
    size = 1 << block.m
    out = np.zeros((size, s), dtype=np.uint64)
    for i in range(s):
        mat = block.submatrices[i]
        for a in range(size):
            net = _digits_to_numerator(mat.apply(a), block.m) if block.m else 0
            out[a, i] = (net << (prec - block.m)) ^ block.shifts[i]
    return out
