"""Structure of a single endomorphism ``f`` of GF(p)^n.

Covers the generalized eigenspace split, Jordan chains of the nilpotent
parts, and the per-vector exponent/height data.  Jordan blocks follow the
lower-shift convention: ``jordan_block(3)`` sends e1 -> e2 -> e3 -> 0.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from .exactla import (AmbientMismatch, Subspace, identity, image, inverse, kernel,
                      rank)
from .gf import PrimeField, as_field


class NonSplitCharPoly(ValueError):
    """The characteristic polynomial has roots outside GF(p)."""


class NotNilpotent(ValueError):
    pass


class NotInvariant(ValueError):
    pass


class _Bottom(enum.Enum):
    BOTTOM = "-inf"

    def __repr__(self):
        return "BOTTOM"

    def __str__(self):
        return "-inf"


#: Height of the zero vector.  Deliberately not an int.
BOTTOM = _Bottom.BOTTOM


class Operator:
    """An endomorphism of GF(p)^n given by a square matrix.

    Powers are cached, as is any derived analysis stored through
    :meth:`cached`; the matrix itself is read-only so the cache never goes
    stale.
    """

    def __init__(self, field: PrimeField | int, matrix):
        self.field = as_field(field)
        m = np.mod(np.array(matrix, dtype=np.int64), self.field.p)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")
        m.flags.writeable = False
        self.matrix = m
        self.n = m.shape[0]
        self._powers = [identity(self.n), m]
        self._cache: dict = {}

    @property
    def p(self) -> int:
        return self.field.p

    def power(self, k: int) -> np.ndarray:
        while len(self._powers) <= k:
            nxt = np.mod(self._powers[-1] @ self.matrix, self.p)
            nxt.flags.writeable = False
            self._powers.append(nxt)
        return self._powers[k]

    def __call__(self, v, k: int = 1) -> np.ndarray:
        """``f^k v`` for a vector, or row-wise for a stack of vectors."""
        v = np.asarray(v, dtype=np.int64)
        return np.mod(v @ self.power(k).T, self.p)

    def cached(self, key, factory: Callable):
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = factory()
            return value

    def shifted(self, lam: int) -> Operator:
        """``f - lam * id``."""
        return Operator(self.field, self.matrix - lam * np.eye(self.n, dtype=np.int64))

    def is_nilpotent(self) -> bool:
        return not self.power(self.n).any()

    def leaves_invariant(self, x: Subspace) -> bool:
        self._check_space(x)
        return x.is_invariant_under(self.matrix)

    def _check_space(self, x: Subspace):
        if x.field != self.field or x.ambient_dim != self.n:
            raise AmbientMismatch(
                f"subspace of {x.field!r}^{x.ambient_dim} vs operator on {self.field!r}^{self.n}")

    def restrict(self, x: Subspace) -> Operator:
        """Matrix of ``f|X`` in the coordinates of the RREF basis of ``X``."""
        self._check_space(x)
        if not x.is_invariant_under(self.matrix):
            raise NotInvariant("subspace is not invariant")
        images = self(x.basis)
        return Operator(self.field, x.coordinates(images).T.reshape(x.dim, x.dim))

    def __eq__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.p, self.matrix.tobytes()))

    def __repr__(self):
        return f"Operator(GF({self.p}), {self.matrix.tolist()})"


# --- constructors -------------------------------------------------------------

def jordan_block(t: int, eigenvalue: int = 0) -> np.ndarray:
    """Lower-shift block: ``e_i -> e_{i+1}``, plus ``eigenvalue`` on the diagonal."""
    b = np.eye(t, k=-1, dtype=np.int64)
    b += eigenvalue * np.eye(t, dtype=np.int64)
    return b


def block_diag(*blocks) -> np.ndarray:
    blocks = [np.atleast_2d(np.asarray(b, dtype=np.int64)) for b in blocks]
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.int64)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def jordan_operator(field: PrimeField | int, exponents: Sequence[int],
                    eigenvalue: int = 0) -> Operator:
    """``diag(N_{t_1}, ..., N_{t_k}) + eigenvalue * id``; ``t = 1`` gives a zero block."""
    return Operator(field, block_diag(*(jordan_block(t, eigenvalue) for t in exponents)))


# --- data types -------------------------------------------------------------

@dataclass(frozen=True)
class JordanStructure:
    """Elementary divisor exponents and a matching generator tuple.

    ``generators[i]`` has exponent ``exponents[i]``, the exponents are
    non-decreasing, and the cyclic subspaces of the generators form a direct
    sum decomposition.  Generators are in the coordinates of the operator they
    were computed for; ``embedding`` (rows = basis vectors) maps those
    coordinates into an ambient space when the operator is a restriction.
    """

    exponents: tuple[int, ...]
    generators: tuple[np.ndarray, ...]
    embedding: np.ndarray | None = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.exponents) != len(self.generators):
            raise ValueError("one generator per exponent required")
        if any(a > b for a, b in zip(self.exponents, self.exponents[1:])):
            raise ValueError(f"exponents {self.exponents} are not non-decreasing")
        gens = []
        for g in self.generators:
            g = np.array(g, dtype=np.int64)
            g.flags.writeable = False
            gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "exponents", tuple(int(t) for t in self.exponents))

    def __eq__(self, other):
        if not isinstance(other, JordanStructure):
            return NotImplemented
        return (self.exponents == other.exponents
                and len(self.generators) == len(other.generators)
                and all(np.array_equal(a, b) for a, b in zip(self.generators, other.generators)))

    def __hash__(self):
        return hash((self.exponents, tuple(g.tobytes() for g in self.generators)))

    @property
    def k(self) -> int:
        return len(self.exponents)

    @property
    def dim(self) -> int:
        return sum(self.exponents)

    def ambient_generators(self, p: int) -> tuple[np.ndarray, ...]:
        if self.embedding is None:
            return self.generators
        return tuple(np.mod(g @ self.embedding, p) for g in self.generators)

    def with_generators(self, generators: Sequence) -> JordanStructure:
        return JordanStructure(self.exponents, tuple(generators), self.embedding)

    def chain_matrix(self, f: Operator) -> np.ndarray:
        """Columns ``f^j u_i`` for ``i = 1..k``, ``j = 0..t_i - 1``."""
        cols = [f(u, j) for u, t in zip(self.generators, self.exponents) for j in range(t)]
        if not cols:
            return np.zeros((f.n, 0), dtype=np.int64)
        return np.stack(cols, axis=1)


@dataclass(frozen=True)
class EigenComponent:
    """A generalized eigenspace together with the nilpotent part of ``f`` on it."""

    eigenvalue: int
    space: Subspace
    nilpotent: Operator

    @property
    def dim(self) -> int:
        return self.space.dim

    def to_local(self, x: Subspace) -> Subspace:
        """Coordinates (w.r.t. the RREF basis of the component) of ``x``, assumed inside it."""
        return Subspace(self.space.field, self.space.coordinates(x.basis), self.dim)

    def to_ambient(self, x: Subspace) -> Subspace:
        return Subspace(self.space.field, np.mod(x.basis @ self.space.basis, self.space.p),
                        self.space.ambient_dim)

    def vector_to_ambient(self, c) -> np.ndarray:
        return np.mod(np.asarray(c, dtype=np.int64) @ self.space.basis, self.space.p)


# --- eigen-decomposition ------------------------------------------------------

def eigenvalues(f: Operator) -> list[tuple[int, int]]:
    """Eigenvalues in GF(p) with algebraic multiplicities.

    Raises :class:`NonSplitCharPoly` if the multiplicities do not add up to n.
    """
    def compute():
        out = []
        for lam in range(f.p):
            shifted = f.shifted(lam)
            if rank(shifted.matrix, f.field) < f.n:
                out.append((lam, kernel(shifted.power(f.n), f.field).dim))
        total = sum(m for _, m in out)
        if total != f.n:
            raise NonSplitCharPoly(
                f"eigenvalues in GF({f.p}) account for {total} of {f.n} dimensions")
        return out
    return list(f.cached("eigenvalues", compute))


def decompose(f: Operator) -> list[EigenComponent]:
    """Generalized eigenspaces ``Ker (f - lam)^n`` with their nilpotent restrictions."""
    def compute():
        comps = []
        for lam, _ in eigenvalues(f):
            shifted = f.shifted(lam)
            space = kernel(shifted.power(f.n), f.field)
            comps.append(EigenComponent(lam, space, shifted.restrict(space)))
        return comps
    return list(f.cached("decompose", compute))


def component_change_of_basis(f: Operator) -> np.ndarray:
    """``P`` whose columns are the component bases, concatenated in eigenvalue order."""
    comps = decompose(f)
    return np.concatenate([c.space.basis for c in comps], axis=0).T


def embed_component_map(f: Operator, index: int, local_map, *, elsewhere: str = "identity"
                        ) -> np.ndarray:
    """Extend a map of component ``index`` (local coordinates) to all of V.

    The other components are sent to themselves by the identity
    (``elsewhere="identity"``) or to zero (``elsewhere="zero"``).
    """
    comps = decompose(f)
    blocks = []
    for i, c in enumerate(comps):
        if i == index:
            blocks.append(np.asarray(local_map, dtype=np.int64))
        elif elsewhere == "identity":
            blocks.append(np.eye(c.dim, dtype=np.int64))
        elif elsewhere == "zero":
            blocks.append(np.zeros((c.dim, c.dim), dtype=np.int64))
        else:
            raise ValueError(f"unknown elsewhere={elsewhere!r}")
    P = component_change_of_basis(f)
    return np.mod(P @ block_diag(*blocks) @ inverse(P, f.field), f.p)


# --- nilpotent structure --------------------------------------------------------

def nilpotency_index(f: Operator) -> int:
    """Smallest ``N`` with ``f^N = 0``."""
    for k in range(f.n + 1):
        if not f.power(k).any():
            return k
    raise NotNilpotent("operator is not nilpotent")


def kernel_chain(f: Operator) -> list[Subspace]:
    """``[Ker f^0, Ker f^1, ..., Ker f^N]`` for nilpotent ``f``."""
    def compute():
        N = nilpotency_index(f)
        return [kernel(f.power(j), f.field) for j in range(N + 1)]
    return f.cached("kernel_chain", compute)


def exponents_from_kernel_dims(dims: Sequence[int]) -> tuple[int, ...]:
    """Block sizes from ``dims[j] = dim Ker A^j`` (``j = 0..N``, ``dims[N]`` = full)."""
    at_least = [dims[j] - dims[j - 1] for j in range(1, len(dims))] + [0]
    out = []
    for j in range(1, len(dims)):
        out.extend([j] * (at_least[j - 1] - at_least[j]))
    return tuple(sorted(out))


def jordan_structure(f_nil: Operator) -> JordanStructure:
    """Deterministic Jordan chains of a nilpotent operator.

    For each exponent ``l`` from the largest down, generators are picked
    greedily from the RREF basis of ``Ker f^l``, keeping those independent of
    ``Ker f^(l-1) + f(Ker f^(l+1))`` and of the picks made so far.
    """
    def compute():
        ks = kernel_chain(f_nil)
        N = len(ks) - 1
        full = Subspace.full(f_nil.field, f_nil.n)
        picked: dict[int, list[np.ndarray]] = {}
        for level in range(N, 0, -1):
            above = ks[level + 1] if level + 1 <= N else full
            span = ks[level - 1] + above.map(f_nil.matrix)
            chosen = []
            for cand in ks[level].basis:
                if cand not in span:
                    chosen.append(cand.copy())
                    span = span + Subspace(f_nil.field, cand.reshape(1, -1), f_nil.n)
            picked[level] = chosen
        exps, gens = [], []
        for level in range(1, N + 1):
            for g in picked.get(level, []):
                exps.append(level)
                gens.append(g)
        js = JordanStructure(tuple(exps), tuple(gens))
        assert js.dim == f_nil.n, "Jordan chains do not fill the space"
        return js
    if not f_nil.is_nilpotent():
        raise NotNilpotent("jordan_structure needs a nilpotent operator")
    return f_nil.cached("jordan_structure", compute)


def exponent(f_nil: Operator, x) -> int:
    """Smallest ``l >= 0`` with ``f^l x = 0``."""
    x = np.asarray(x, dtype=np.int64)
    for l in range(f_nil.n + 1):
        if not f_nil(x, l).any():
            return l
    raise NotNilpotent("vector is not annihilated by any power of f")


def height(f_nil: Operator, x):
    """Largest ``q`` with ``x`` in ``f^q V``; :data:`BOTTOM` for ``x = 0``."""
    x = np.asarray(x, dtype=np.int64)
    if not np.mod(x, f_nil.p).any():
        return BOTTOM
    q = 0
    while q < f_nil.n and x in image(f_nil.power(q + 1), f_nil.field):
        q += 1
    return q


def cyclic_subspace(f: Operator, x) -> Subspace:
    """``<x>_f = span{x, f x, f^2 x, ...}``."""
    x = np.asarray(x, dtype=np.int64)
    rows = [f(x, j) for j in range(f.n)]
    return Subspace.span(f.field, rows, f.n) if rows else Subspace.zero(f.field, 0)


def restriction_structure(f_nil: Operator, x: Subspace) -> JordanStructure:
    """Jordan structure of ``f|X``; generators in X-coordinates, ``embedding = X.basis``."""
    local = f_nil.restrict(x)
    if x.dim == 0:
        return JordanStructure((), (), x.basis)
    js = jordan_structure(local)
    return JordanStructure(js.exponents, js.generators, x.basis)


def quotient_operator(f: Operator, x: Subspace) -> Operator:
    """Induced map on ``V/X``, in coordinates of the non-pivot unit vectors of ``X``."""
    f._check_space(x)
    if not x.is_invariant_under(f.matrix):
        raise NotInvariant("subspace is not invariant")
    comp = list(x.nonpivots)
    if not comp:
        return Operator(f.field, np.zeros((0, 0), dtype=np.int64))
    images = f.matrix[:, comp].T
    reduced = x.residual(images)
    return Operator(f.field, reduced[:, comp].T)


def quotient_structure(f_nil: Operator, x: Subspace) -> tuple[int, ...]:
    """Elementary divisor exponents of the induced operator on ``V/X`` (sorted)."""
    return nilpotent_exponents(quotient_operator(f_nil, x))


def restriction_exponents(f_nil: Operator, x: Subspace) -> tuple[int, ...]:
    """Exponents of ``f|X`` without building Jordan chains."""
    return nilpotent_exponents(f_nil.restrict(x))


def nilpotent_exponents(f_nil: Operator) -> tuple[int, ...]:
    """Block sizes from the ranks of the powers of ``f``."""
    dims = [0]
    j = 0
    while dims[-1] < f_nil.n:
        j += 1
        if j > f_nil.n:
            raise NotNilpotent("operator is not nilpotent")
        dims.append(f_nil.n - rank(f_nil.power(j), f_nil.field))
    return exponents_from_kernel_dims(dims)


def segre_exponents(f_nil: Operator) -> tuple[int, ...]:
    """Exponents from kernel dimensions alone, independent of chain extraction."""
    return exponents_from_kernel_dims([k.dim for k in kernel_chain(f_nil)])
