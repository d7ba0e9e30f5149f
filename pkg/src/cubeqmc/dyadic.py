"""Exact dyadic points in [0,1) and point sets stored as integer numerators."""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_BINARY_MAGIC = b"DQPS"
_HEADER = struct.Struct("<4sHHIHxx")  # magic, m, s, N, precision; 16 bytes


@dataclass(frozen=True)
class DyadicPoint:
    """A dyadic rational num / 2^prec in [0,1)."""

    num: int
    prec: int

    def __post_init__(self) -> None:
        if not 0 <= self.prec <= 64:
            raise ConfigError("precision must be in [0, 64]")
        if not 0 <= self.num < (1 << self.prec):
            raise ConfigError("numerator out of range for precision")

    @property
    def value(self) -> float:
        return self.num / (1 << self.prec) if self.prec else 0.0

    @classmethod
    def from_float(cls, x: float, prec: int) -> "DyadicPoint":
        num = round(x * (1 << prec))
        if num * 1.0 != x * (1 << prec):
            raise ConfigError(f"{x} is not dyadic at precision {prec}")
        return cls(num, prec)


class DyadicPointSet:
    """N x s array of dyadic rationals with a shared precision, exact."""

    def __init__(self, numerators, prec: int):
        arr = np.asarray(numerators, dtype=np.uint64)
        if arr.ndim != 2:
            raise ConfigError("numerators must be an N x s array")
        if not 0 <= prec <= 64:
            raise ConfigError("precision must be in [0, 64]")
        if prec < 64 and arr.size and int(arr.max()) >= (1 << prec):
            raise ConfigError("numerator out of range for precision")
        self.numerators = arr
        self.prec = prec

    @property
    def n_points(self) -> int:
        return self.numerators.shape[0]

    @property
    def s(self) -> int:
        return self.numerators.shape[1]

    def values(self) -> np.ndarray:
        """Floating-point coordinates; exact for prec <= 53."""
        return self.numerators.astype(np.float64) / float(1 << self.prec)

    def point(self, n: int) -> tuple[DyadicPoint, ...]:
        return tuple(DyadicPoint(int(v), self.prec) for v in self.numerators[n])

    def leading_bits(self, m: int) -> np.ndarray:
        """Numerators truncated to the leading m bits (values n / 2^m)."""
        if m > self.prec:
            raise ConfigError("requested more leading bits than stored")
        return (self.numerators >> np.uint64(self.prec - m)).astype(np.int64)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DyadicPointSet)
            and self.prec == other.prec
            and np.array_equal(self.numerators, other.numerators)
        )

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            for row in self.values():
                fh.write(",".join(repr(float(v)) for v in row) + "\n")

    def to_binary(self, path, m: int | None = None) -> None:
        """Raw numerators, little-endian uint64, after a 16-byte header."""
        header = _HEADER.pack(
            _BINARY_MAGIC, m if m is not None else 0, self.s, self.n_points, self.prec
        )
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(self.numerators.astype("<u8").tobytes())

    @classmethod
    def from_binary(cls, path) -> "DyadicPointSet":
        with open(path, "rb") as fh:
            raw = fh.read(_HEADER.size)
            if len(raw) < _HEADER.size:
                raise ConfigError("truncated point file header")
            magic, _m, s, n, prec = _HEADER.unpack(raw)
            if magic != _BINARY_MAGIC:
                raise ConfigError("bad magic in point file")
            raw = fh.read(8 * n * s)
            if len(raw) != 8 * n * s:
                raise ConfigError("truncated point data")
            data = np.frombuffer(raw, dtype="<u8")
            return cls(data.reshape(n, s).astype(np.uint64), prec)
