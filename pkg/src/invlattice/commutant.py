"""The commutant End_f(V) and the automorphism group Aut_f(V).

For a nilpotent ``f`` with generator tuple ``U`` an automorphism is fixed by
where it sends the generators, so automorphisms and generator tuples are two
views of the same set.  This module builds both views, a small generating
set of the group (elementary moves on a generator tuple), and exact counts.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .exactla import (EnumerationTooLarge, SingularMatrix, Subspace, coefficient_rows,
                      inverse, kernel, rank, vectors_array, DEFAULT_VECTOR_CAP)
from .operator import (JordanStructure, NotNilpotent, Operator, exponent,
                       jordan_structure, kernel_chain)


class NotGeneratorTuple(ValueError):
    pass


@dataclass(frozen=True)
class CommutantBasis:
    """Basis of ``{g : g f = f g}`` as a tuple of ``n x n`` matrices."""

    basis: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def combination(self, coeffs, p: int) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if not self.basis:
            raise ValueError("empty commutant")
        return np.mod(np.tensordot(coeffs, np.stack(self.basis), axes=1), p)


def commutant_basis(f: Operator) -> CommutantBasis:
    """Solve ``g f - f g = 0`` in the ``n^2`` entries of ``g`` (row-major)."""
    def compute():
        n = f.n
        eye = np.eye(n, dtype=np.int64)
        system = np.kron(eye, f.matrix.T) - np.kron(f.matrix, eye)
        sol = kernel(system, f.field)
        mats = []
        for row in sol.basis:
            m = row.reshape(n, n).copy()
            m.flags.writeable = False
            mats.append(m)
        return CommutantBasis(tuple(mats))
    return f.cached("commutant_basis", compute)


# --- generator tuples ------------------------------------------------------------

def is_generator_tuple(f_nil: Operator, U: JordanStructure) -> bool:
    if U.dim != f_nil.n:
        return False
    if any(exponent(f_nil, u) != t for u, t in zip(U.generators, U.exponents)):
        return False
    return rank(U.chain_matrix(f_nil), f_nil.field) == f_nil.n


def theta_automorphism(f_nil: Operator, U: JordanStructure, U_tilde: JordanStructure
                       ) -> np.ndarray:
    """The automorphism commuting with ``f`` that sends ``u_i`` to ``u~_i``.

    It maps each chain vector ``f^j u_i`` to ``f^j u~_i``; both tuples must be
    generator tuples with the same exponents.
    """
    if U.exponents != U_tilde.exponents:
        raise NotGeneratorTuple(f"exponents differ: {U.exponents} vs {U_tilde.exponents}")
    for tup in (U, U_tilde):
        if not is_generator_tuple(f_nil, tup):
            raise NotGeneratorTuple("not a generator tuple")
    src = U.chain_matrix(f_nil)
    dst = U_tilde.chain_matrix(f_nil)
    return np.mod(dst @ inverse(src, f_nil.field), f_nil.p)


def apply_to_tuple(alpha: np.ndarray, U: JordanStructure, p: int) -> JordanStructure:
    return U.with_generators([np.mod(alpha @ u, p) for u in U.generators])


def elementary_moves(f_nil: Operator, U: JordanStructure | None = None
                     ) -> list[JordanStructure]:
    """Generator tuples one elementary move away from ``U``.

    Moves: scale ``u_j`` by a primitive root; ``u_j -> u_j + f^l u_j``
    (``l >= 1``); ``u_j -> u_j + f^l u_i`` for ``i != j`` and
    ``l >= max(0, t_i - t_j)``.  The automorphisms realizing these moves
    generate Aut_f(V).
    """
    if U is None:
        U = jordan_structure(f_nil)
    p = f_nil.p
    t = U.exponents
    gens = U.generators
    out = []

    def moved(j, new):
        g = list(gens)
        g[j] = np.mod(new, p)
        return U.with_generators(g)

    if p > 2:
        c = f_nil.field.primitive_root
        for j in range(len(t)):
            out.append(moved(j, c * gens[j]))
    for j in range(len(t)):
        for l in range(1, t[j]):
            out.append(moved(j, gens[j] + f_nil(gens[j], l)))
        for i in range(len(t)):
            if i == j:
                continue
            for l in range(max(0, t[i] - t[j]), t[i]):
                out.append(moved(j, gens[j] + f_nil(gens[i], l)))
    return out


def automorphism_generators(f_nil: Operator) -> list[np.ndarray]:
    """Matrices generating Aut_f(V) for nilpotent ``f`` (cached)."""
    def compute():
        U = jordan_structure(f_nil)
        mats = []
        for moved in elementary_moves(f_nil, U):
            a = theta_automorphism(f_nil, U, moved)
            a.flags.writeable = False
            mats.append(a)
        return mats
    return f_nil.cached("automorphism_generators", compute)


def enumerate_generator_tuples(f_nil: Operator, *, cap_vectors: int = DEFAULT_VECTOR_CAP,
                               max_tuples: int | None = None) -> Iterator[JordanStructure]:
    """Every generator tuple of ``f`` exactly once, in a fixed order.

    Positions are filled from the largest exponent down; candidates for
    position ``j`` run over ``u_j + w`` for ``w`` in ``Ker f^{t_j}`` in
    enumeration order, so the first tuple emitted is
    :func:`jordan_structure` itself.
    """
    if not f_nil.is_nilpotent():
        raise NotNilpotent("generator tuples need a nilpotent operator")
    if f_nil.p ** f_nil.n > cap_vectors:
        raise EnumerationTooLarge("vectors of V", f_nil.p ** f_nil.n, cap_vectors)
    U0 = jordan_structure(f_nil)
    t = U0.exponents
    p = f_nil.p
    if max_tuples is not None:
        total = count_generator_tuples(t, p)
        if total > max_tuples:
            raise EnumerationTooLarge("generator tuples", total, max_tuples)
    ks = kernel_chain(f_nil)

    candidates = []
    for j, (u, tj) in enumerate(zip(U0.generators, t)):
        ws = vectors_array(ks[tj], cap_vectors)
        cands = np.mod(u + ws, p)
        keep = f_nil(cands, tj - 1).any(axis=1)
        cands = cands[keep]
        chains = [np.stack([f_nil(c, l) for l in range(tj)]) for c in cands]
        candidates.append(list(zip(cands, chains)))

    k = len(t)
    chosen: list = [None] * k

    def rec(j: int, span: Subspace):
        if j < 0:
            yield U0.with_generators([c for c in chosen])
            return
        for cand, chain in candidates[j]:
            new = span + Subspace(f_nil.field, chain, f_nil.n)
            if new.dim == span.dim + t[j]:
                chosen[j] = cand
                yield from rec(j - 1, new)

    yield from rec(k - 1, Subspace.zero(f_nil.field, f_nil.n))


# --- counting ----------------------------------------------------------------------

def gl_order(m: int, p: int) -> int:
    out = 1
    for i in range(m):
        out *= p**m - p**i
    return out


def count_generator_tuples(exponents, p: int) -> int:
    """Number of generator tuples for Jordan exponents ``t`` over GF(p).

    Choose the generator of largest exponent ``t_k`` (any vector of exponent
    ``t_k``), pass to the quotient by its cyclic subspace, and lift the
    remaining generators back; each lift has ``p^{t_j}`` choices.
    """
    t = sorted(int(x) for x in exponents)
    total = 1
    while t:
        tk = t[-1]
        size = sum(t)
        low = sum(min(x, tk - 1) for x in t)
        total *= (p**size - p**low) * p**sum(t[:-1])
        t = t[:-1]
    return total


def block_multiplicities(f_nil: Operator) -> dict[int, int]:
    """``{block size: number of blocks}`` from kernel dimensions of powers of ``f``."""
    dims = [k.dim for k in kernel_chain(f_nil)]
    at_least = [dims[j] - dims[j - 1] for j in range(1, len(dims))] + [0]
    return {j: at_least[j - 1] - at_least[j] for j in range(1, len(dims))
            if at_least[j - 1] - at_least[j]}


def count_automorphisms(f_nil: Operator) -> int:
    """``|Aut_f(V)|`` from the commutant dimension and the block multiplicities.

    An endomorphism commuting with ``f`` is invertible iff its action on
    each top layer ``Ker f^j / (Ker f^{j-1} + f Ker f^{j+1})`` is; that map
    onto ``prod_j End(K^{m_j})`` is onto with kernel the radical, giving
    ``p^(d - sum m_j^2) * prod_j |GL(m_j, p)|``.
    """
    d = commutant_basis(f_nil).dim
    mult = block_multiplicities(f_nil)
    p = f_nil.p
    out = p ** (d - sum(m * m for m in mult.values()))
    for m in mult.values():
        out *= gl_order(m, p)
    return out


def enumerate_automorphisms(f: Operator, *, cap: int = 2**16) -> Iterator[np.ndarray]:
    """Invertible members of the commutant, by sweeping all ``p^d`` combinations."""
    cb = commutant_basis(f)
    size = f.p ** cb.dim
    if size > cap:
        raise EnumerationTooLarge("commutant members", size, cap)
    if cb.dim == 0:
        return
    stack = np.stack(cb.basis)
    for coeffs in coefficient_rows(f.p, cb.dim):
        g = np.mod(np.tensordot(coeffs, stack, axes=1), f.p)
        if rank(g, f.field) == f.n:
            yield g


def group_closure(gens: list[np.ndarray], p: int, n: int, *, cap: int = 10**6) -> set[bytes]:
    """All products of ``gens`` (as ``tobytes`` keys), by breadth-first search."""
    start = np.eye(n, dtype=np.int64)
    seen = {start.tobytes()}
    frontier = [start]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = np.mod(g @ a, p)
                key = b.tobytes()
                if key not in seen:
                    seen.add(key)
                    if len(seen) > cap:
                        raise EnumerationTooLarge("group elements", len(seen), cap)
                    nxt.append(b)
        frontier = nxt
    return seen


__all__ = [
    "CommutantBasis", "NotGeneratorTuple", "SingularMatrix", "commutant_basis",
    "is_generator_tuple", "theta_automorphism", "apply_to_tuple", "elementary_moves",
    "automorphism_generators", "enumerate_generator_tuples", "count_generator_tuples",
    "count_automorphisms", "block_multiplicities", "gl_order", "enumerate_automorphisms",
    "group_closure",
]
