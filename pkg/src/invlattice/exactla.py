"""Exact linear algebra over GF(p) and the canonical :class:`Subspace`.

Vectors are 1-d and matrices 2-d numpy ``int64`` arrays with entries in
``[0, p)``.  Matrices act on column vectors (``M @ v``).  A subspace is stored
as the reduced row echelon form of any spanning set, so two subspaces are
equal exactly when their basis arrays are equal.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

import numpy as np

from .gf import GF, PrimeField, as_field, pack_gf2, unpack_gf2

DEFAULT_VECTOR_CAP = 2**20


class AmbientMismatch(ValueError):
    """Subspaces/vectors/matrices of incompatible dimension or field."""


class EnumerationTooLarge(RuntimeError):
    """A brute-force sweep would exceed its configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: {size} items exceeds cap {cap}")
        self.size = size
        self.cap = cap


class SingularMatrix(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def matrix(field: PrimeField | int, rows, ncols: int | None = None) -> np.ndarray:
    """Build a read-only matrix over ``field`` from nested integer rows."""
    field = as_field(field)
    a = np.asarray(rows, dtype=np.int64)
    if a.size == 0:
        a = a.reshape(0, ncols if ncols is not None else (a.shape[1] if a.ndim == 2 else 0))
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {a.shape}")
    return _frozen(np.mod(a, field.p))


def vector(field: PrimeField | int, entries) -> np.ndarray:
    field = as_field(field)
    a = np.asarray(entries, dtype=np.int64)
    if a.ndim != 1:
        raise ValueError(f"expected a 1-d array, got shape {a.shape}")
    return _frozen(np.mod(a, field.p))


def unit(n: int, i: int) -> np.ndarray:
    """The unit vector with a 1 in (0-based) position ``i``."""
    e = np.zeros(n, dtype=np.int64)
    e[i] = 1
    return _frozen(e)


def identity(n: int) -> np.ndarray:
    return _frozen(np.eye(n, dtype=np.int64))


def matmul(a: np.ndarray, b: np.ndarray, field: PrimeField | int) -> np.ndarray:
    return np.mod(a @ b, as_field(field).p)


def matpow(a: np.ndarray, k: int, field: PrimeField | int) -> np.ndarray:
    p = as_field(field).p
    result = np.eye(a.shape[0], dtype=np.int64)
    base = np.array(a, dtype=np.int64)
    while k:
        if k & 1:
            result = np.mod(result @ base, p)
        base = np.mod(base @ base, p)
        k >>= 1
    return result


# --- row reduction ----------------------------------------------------------

def _rref_gf2(a: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    nrows, ncols = a.shape
    rows = pack_gf2(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        bit = 1 << (ncols - 1 - c)
        for i in range(r, nrows):
            if rows[i] & bit:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        pr = rows[r]
        for j in range(nrows):
            if j != r and rows[j] & bit:
                rows[j] ^= pr
        pivots.append(c)
        r += 1
    return unpack_gf2(rows[:r], ncols), tuple(pivots)


def _rref_generic(a: np.ndarray, field: PrimeField) -> tuple[np.ndarray, tuple[int, ...]]:
    p = field.p
    a = np.mod(np.array(a, dtype=np.int64), p)
    nrows, ncols = a.shape
    inv = field.inverse_table
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        lead = a[r, c]
        if lead != 1:
            a[r] = np.mod(a[r] * inv[lead], p)
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            a[others] = np.mod(a[others] - np.outer(col[others], a[r]), p)
        pivots.append(c)
        r += 1
    return a[:r], tuple(pivots)


def rref_with_pivots(m, field: PrimeField | int, *, generic: bool = False
                     ) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form with zero rows dropped, plus pivot columns.

    Over GF(2) the bit-packed path is used unless ``generic`` is set; both
    paths return identical arrays.
    """
    field = as_field(field)
    a = np.asarray(m, dtype=np.int64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {a.shape}")
    if a.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64), ()
    if field.p == 2 and not generic:
        return _rref_gf2(np.mod(a, 2))
    return _rref_generic(a, field)


def rref(m, field: PrimeField | int, *, generic: bool = False) -> np.ndarray:
    return rref_with_pivots(m, field, generic=generic)[0]


def rank(m, field: PrimeField | int) -> int:
    return len(rref_with_pivots(m, field)[1])


def inverse(m, field: PrimeField | int) -> np.ndarray:
    field = as_field(field)
    a = np.asarray(m, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    r, piv = rref_with_pivots(np.hstack([a, np.eye(n, dtype=np.int64)]), field)
    if piv != tuple(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return r[:n, n:]


def solve(a, b, field: PrimeField | int) -> np.ndarray | None:
    """One solution ``x`` of ``a @ x = b``, or ``None`` if inconsistent."""
    field = as_field(field)
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    ncols = a.shape[1]
    r, piv = rref_with_pivots(np.hstack([a, b]), field)
    if piv and piv[-1] == ncols:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for row, c in enumerate(piv):
        x[c] = r[row, ncols]
    return x


# --- subspaces --------------------------------------------------------------

class Subspace:
    """A subspace of GF(p)^n held in canonical RREF basis form.

    Equality and hashing use the RREF basis, so set-equal subspaces compare
    equal regardless of how they were built.  Instances are immutable.
    """

    __slots__ = ("field", "ambient_dim", "basis", "pivots", "_key")

    def __init__(self, field: PrimeField | int, basis, ambient_dim: int | None = None,
                 *, _pivots: tuple[int, ...] | None = None):
        field = as_field(field)
        b = np.asarray(basis, dtype=np.int64)
        if b.ndim == 1:
            b = b.reshape(0, ambient_dim if ambient_dim is not None else 0) if b.size == 0 \
                else b.reshape(1, -1)
        if ambient_dim is None:
            ambient_dim = b.shape[1]
        elif b.shape[1] != ambient_dim:
            raise AmbientMismatch(f"vectors of length {b.shape[1]} in ambient dim {ambient_dim}")
        if _pivots is None:
            b, _pivots = rref_with_pivots(b, field)
        self.field = field
        self.ambient_dim = int(ambient_dim)
        self.basis = _frozen(np.ascontiguousarray(b))
        self.pivots = tuple(_pivots)
        self._key = (field.p, self.ambient_dim, self.basis.tobytes())

    # constructors
    @classmethod
    def span(cls, field, vectors: Iterable | np.ndarray, ambient_dim: int) -> Subspace:
        rows = np.asarray(list(vectors) if not isinstance(vectors, np.ndarray) else vectors,
                          dtype=np.int64)
        if rows.size == 0:
            rows = rows.reshape(0, ambient_dim)
        return cls(field, rows, ambient_dim)

    @classmethod
    def zero(cls, field, n: int) -> Subspace:
        return cls(field, np.zeros((0, n), dtype=np.int64), n, _pivots=())

    @classmethod
    def full(cls, field, n: int) -> Subspace:
        return cls(field, np.eye(n, dtype=np.int64), n, _pivots=tuple(range(n)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nonpivots(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(c for c in range(self.ambient_dim) if c not in piv)

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def _same_space(self, other: Subspace):
        if self.field != other.field or self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(
                f"{self.field!r}^{self.ambient_dim} vs {other.field!r}^{other.ambient_dim}")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @property
    def sort_key(self) -> tuple:
        """Deterministic total order: dimension, then the RREF entries."""
        return (self.dim, tuple(self.basis.ravel().tolist()))

    def residual(self, v) -> np.ndarray:
        """``v`` minus its projection along the RREF pivots; zero iff ``v`` is in the span."""
        v = np.asarray(v, dtype=np.int64)
        if v.shape[-1] != self.ambient_dim:
            raise AmbientMismatch(f"vector length {v.shape[-1]} vs ambient dim {self.ambient_dim}")
        if self.dim == 0:
            return np.mod(v, self.p)
        return np.mod(v - v[..., list(self.pivots)] @ self.basis, self.p)

    def __contains__(self, v) -> bool:
        return not self.residual(v).any()

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` (assumed to lie in the span) w.r.t. the RREF basis."""
        v = np.asarray(v, dtype=np.int64)
        return np.mod(v[..., list(self.pivots)], self.p)

    def __le__(self, other: Subspace) -> bool:
        self._same_space(other)
        if self.dim > other.dim:
            return False
        return not other.residual(self.basis).any()

    def __lt__(self, other: Subspace) -> bool:
        return self.dim < other.dim and self <= other

    def __ge__(self, other: Subspace) -> bool:
        return other <= self

    def __gt__(self, other: Subspace) -> bool:
        return other < self

    def __add__(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def map(self, m: np.ndarray) -> Subspace:
        """Image of this subspace under the matrix ``m``."""
        m = np.asarray(m, dtype=np.int64)
        if m.shape[1] != self.ambient_dim:
            raise AmbientMismatch(f"{m.shape} matrix applied to dim-{self.ambient_dim} space")
        if self.dim == 0:
            return Subspace.zero(self.field, m.shape[0])
        return Subspace(self.field, np.mod(self.basis @ m.T, self.p), m.shape[0])

    def is_invariant_under(self, m: np.ndarray) -> bool:
        if self.dim == 0:
            return True
        return not self.residual(np.mod(self.basis @ np.asarray(m).T, self.p)).any()

    def rows(self) -> list[list[int]]:
        return self.basis.tolist()

    def __repr__(self):
        if self.dim == 0:
            return f"Subspace(0 in GF({self.p})^{self.ambient_dim})"
        return f"Subspace(GF({self.p})^{self.ambient_dim}, rows={self.rows()})"

    def __iter__(self) -> Iterator[np.ndarray]:
        return enumerate_vectors(self)

    def __len__(self):
        return self.p ** self.dim


def _check_pair(s1: Subspace, s2: Subspace):
    s1._same_space(s2)


def subspace_sum(s1: Subspace, s2: Subspace) -> Subspace:
    _check_pair(s1, s2)
    if s1.dim == 0:
        return s2
    if s2.dim == 0:
        return s1
    return Subspace(s1.field, np.vstack([s1.basis, s2.basis]), s1.ambient_dim)


def zassenhaus(s1: Subspace, s2: Subspace) -> tuple[Subspace, Subspace]:
    """Sum and intersection from one row reduction of ``[[A, A], [B, 0]]``."""
    _check_pair(s1, s2)
    n = s1.ambient_dim
    if s1.dim == 0 or s2.dim == 0:
        return subspace_sum(s1, s2), Subspace.zero(s1.field, n)
    top = np.hstack([s1.basis, s1.basis])
    bottom = np.hstack([s2.basis, np.zeros_like(s2.basis)])
    r, piv = rref_with_pivots(np.vstack([top, bottom]), s1.field)
    split = sum(1 for c in piv if c < n)
    total = Subspace(s1.field, r[:split, :n], n, _pivots=piv[:split])
    meet = Subspace(s1.field, r[split:, n:], n, _pivots=tuple(c - n for c in piv[split:]))
    return total, meet


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    _check_pair(s1, s2)
    if s1 <= s2:
        return s1
    if s2 <= s1:
        return s2
    return zassenhaus(s1, s2)[1]


def contains(s: Subspace, v) -> bool:
    return v in s


def is_subspace_of(s1: Subspace, s2: Subspace) -> bool:
    return s1 <= s2


def kernel(m, field: PrimeField | int) -> Subspace:
    """Null space ``{x : m @ x = 0}``."""
    field = as_field(field)
    m = np.asarray(m, dtype=np.int64)
    ncols = m.shape[1]
    r, piv = rref_with_pivots(m, field)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for row, c in enumerate(free):
        basis[row, c] = 1
        for i, pc in enumerate(piv):
            basis[row, pc] = -r[i, c]
    return Subspace(field, np.mod(basis, field.p), ncols)


def image(m, field: PrimeField | int) -> Subspace:
    """Column space of ``m``."""
    m = np.asarray(m, dtype=np.int64)
    return Subspace(field, m.T, m.shape[0])


def coefficient_rows(p: int, d: int) -> np.ndarray:
    """All ``p**d`` coefficient vectors in lexicographic order."""
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((p,) * d).reshape(d, -1).T
    return grids.astype(np.int64)


def enumerate_vectors(s: Subspace, cap: int = DEFAULT_VECTOR_CAP) -> Iterator[np.ndarray]:
    """Every vector of ``s`` exactly once, lexicographic in RREF coordinates."""
    size = s.p ** s.dim
    if size > cap:
        raise EnumerationTooLarge("vectors of subspace", size, cap)
    p = s.p
    for coeffs in itertools.product(range(p), repeat=s.dim):
        if s.dim == 0:
            yield np.zeros(s.ambient_dim, dtype=np.int64)
        else:
            yield np.mod(np.asarray(coeffs, dtype=np.int64) @ s.basis, p)


def vectors_array(s: Subspace, cap: int = DEFAULT_VECTOR_CAP) -> np.ndarray:
    """Same order as :func:`enumerate_vectors`, as one ``(p**dim, n)`` array."""
    size = s.p ** s.dim
    if size > cap:
        raise EnumerationTooLarge("vectors of subspace", size, cap)
    coeffs = coefficient_rows(s.p, s.dim)
    if s.dim == 0:
        return np.zeros((1, s.ambient_dim), dtype=np.int64)
    return np.mod(coeffs @ s.basis, s.p)


def span_of(field, vectors: Sequence, n: int) -> Subspace:
    return Subspace.span(field, vectors, n)


__all__ = [
    "AmbientMismatch", "EnumerationTooLarge", "SingularMatrix", "Subspace",
    "matrix", "vector", "unit", "identity", "matmul", "matpow",
    "rref", "rref_with_pivots", "rank", "inverse", "solve",
    "subspace_sum", "intersect", "zassenhaus", "contains", "is_subspace_of",
    "kernel", "image", "enumerate_vectors", "vectors_array", "coefficient_rows",
    "span_of", "GF",
]
