"""Arithmetic in prime fields GF(p).

Scalars are small integers reduced modulo ``p``.  Bulk work (matrices,
vectors) is done on numpy ``int64`` arrays elsewhere; the :class:`Scalar`
type exists for the element-level API and for tests of the field axioms.

GF(2) gets a bit-packed row representation (:func:`pack_gf2`,
:func:`unpack_gf2`) that :mod:`invlattice.exactla` uses for row reduction.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

MAX_MODULUS = 251


class FieldMismatch(ValueError):
    """Operands live in different prime fields."""


class DivisionByZero(ZeroDivisionError):
    pass


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field of integers modulo a prime ``p`` (``2 <= p <= 251``)."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or isinstance(self.p, bool):
            raise TypeError(f"modulus must be an integer, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))
        if not 2 <= self.p <= MAX_MODULUS:
            raise ValueError(f"modulus {self.p} outside [2, {MAX_MODULUS}]")
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def __repr__(self):
        return f"GF({self.p})"

    def __call__(self, value: int) -> Scalar:
        return Scalar(int(value), self)

    def __len__(self):
        return self.p

    def __iter__(self):
        return (Scalar(v, self) for v in range(self.p))

    @cached_property
    def inverse_table(self) -> np.ndarray:
        """``table[a]`` is the inverse of ``a``; ``table[0]`` is 0 and never used."""
        table = np.zeros(self.p, dtype=np.int64)
        for a in range(1, self.p):
            table[a] = pow(a, self.p - 2, self.p)
        table.flags.writeable = False
        return table

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in {self!r}")
        return int(self.inverse_table[a])

    @cached_property
    def primitive_root(self) -> int:
        """Smallest generator of the multiplicative group."""
        if self.p == 2:
            return 1
        order = self.p - 1
        factors = {q for q in range(2, order + 1) if order % q == 0 and is_prime(q)}
        for g in range(2, self.p):
            if all(pow(g, order // q, self.p) != 1 for q in factors):
                return g
        raise AssertionError("unreachable for prime p")

    def reduce(self, values) -> np.ndarray:
        """Return ``values`` as an ``int64`` array reduced into ``[0, p)``."""
        return np.mod(np.asarray(values, dtype=np.int64), self.p)


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    """Cached :class:`PrimeField` constructor."""
    return PrimeField(p)


def as_field(field: PrimeField | int) -> PrimeField:
    return field if isinstance(field, PrimeField) else GF(int(field))


@dataclass(frozen=True)
class Scalar:
    """An element of a :class:`PrimeField`, always fully reduced."""

    value: int
    field: PrimeField

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.field.p)

    def _check(self, other) -> Scalar:
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return Scalar(int(other), self.field)
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Scalar(self.value + other.value, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Scalar(self.value - other.value, self.field)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Scalar(other.value - self.value, self.field)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Scalar(self.value * other.value, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.value, self.field)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        return Scalar(pow(self.value, k, self.field.p), self.field)

    def inv(self) -> Scalar:
        return Scalar(self.field.inv(self.value), self.field)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"


def add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def neg(a: Scalar) -> Scalar:
    return -a


def inv(a: Scalar) -> Scalar:
    return a.inv()


# --- bit-packed GF(2) rows -------------------------------------------------
# Column 0 is the most significant bit, so the leading (pivot) column of a row
# is its highest set bit.

def pack_gf2(rows: np.ndarray) -> list[int]:
    rows = np.asarray(rows)
    if rows.ndim != 2:
        raise ValueError("expected a 2-d array")
    ncols = rows.shape[1]
    if ncols == 0:
        return [0] * rows.shape[0]
    pad = (-ncols) % 8
    packed = np.packbits(np.asarray(rows & 1, dtype=np.uint8), axis=1)
    return [int.from_bytes(r.tobytes(), "big") >> pad for r in packed]


def unpack_gf2(words: list[int], ncols: int) -> np.ndarray:
    out = np.zeros((len(words), ncols), dtype=np.int64)
    if ncols == 0 or not words:
        return out
    nbytes = (ncols + 7) // 8
    pad = (-ncols) % 8
    buf = b"".join((w << pad).to_bytes(nbytes, "big") for w in words)
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8).reshape(len(words), nbytes), axis=1)
    out[:] = bits[:, :ncols]
    return out
