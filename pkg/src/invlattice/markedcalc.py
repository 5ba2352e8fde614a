"""Exponent tuples, the subspaces W(r, U) and W(r), and the markedness test.

Everything here concerns a nilpotent operator ``f`` with Jordan exponents
``t_1 <= ... <= t_k``.  ``W(r, U)`` is the direct sum of the cyclic
subspaces generated by ``f^{r_i} u_i``; ``W(r)`` is the sum over ``i`` of
``f^{r_i} V  intersected with  Ker f^{t_i - r_i}``.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .commutant import apply_to_tuple, automorphism_generators, enumerate_generator_tuples
from .exactla import Subspace, image, kernel, DEFAULT_VECTOR_CAP
from .operator import (JordanStructure, NotInvariant, NotNilpotent, Operator,
                       cyclic_subspace, jordan_structure, quotient_structure,
                       restriction_exponents)

DEFAULT_BUDGET = 10**6


class LengthMismatch(ValueError):
    pass


class NotAdmissible(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    """The markedness search ran out of budget; the verdict is unknown."""

    verdict = "unknown"

    def __init__(self, budget: int):
        super().__init__(f"markedness search exceeded {budget} nodes; verdict unknown")
        self.budget = budget


@dataclass(frozen=True)
class ExponentTuple:
    """An integer tuple ``r`` measured against Jordan exponents ``t``."""

    r: tuple[int, ...]
    t: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        object.__setattr__(self, "t", tuple(int(x) for x in self.t))
        if len(self.r) != len(self.t):
            raise LengthMismatch(f"r has length {len(self.r)}, t has length {len(self.t)}")

    @property
    def admissible(self) -> bool:
        return all(0 <= ri <= ti for ri, ti in zip(self.r, self.t))

    @property
    def monotone(self) -> bool:
        """``r`` and ``t - r`` both non-decreasing."""
        d = [ti - ri for ri, ti in zip(self.r, self.t)]
        return (all(a <= b for a, b in zip(self.r, self.r[1:]))
                and all(a <= b for a, b in zip(d, d[1:])))

    @property
    def restriction_exponents(self) -> tuple[int, ...]:
        """Block sizes of ``f`` on ``W(r, U)``: the nonzero ``t_i - r_i``, sorted."""
        return tuple(sorted(ti - ri for ri, ti in zip(self.r, self.t) if ti - ri > 0))

    @property
    def quotient_exponents(self) -> tuple[int, ...]:
        """Block sizes of ``f`` on ``V / W(r, U)``: the nonzero ``r_i``, sorted."""
        return tuple(sorted(ri for ri in self.r if ri > 0))

    def label(self) -> str:
        return "W(" + ",".join(map(str, self.r)) + ")"

    def __iter__(self):
        return iter(self.r)

    def __len__(self):
        return len(self.r)


def as_tuple(r, t: Sequence[int]) -> ExponentTuple:
    if isinstance(r, ExponentTuple):
        if r.t != tuple(t):
            raise LengthMismatch(f"tuple measured against {r.t}, operator has {tuple(t)}")
        return r
    return ExponentTuple(tuple(r), tuple(t))


def is_admissible(r: ExponentTuple) -> bool:
    return r.admissible


def is_monotone(r: ExponentTuple) -> bool:
    return r.monotone


def scaled_tuple(t: Sequence[int], c) -> ExponentTuple:
    """``r_i = floor(c * t_i)`` for a rational ``0 < c < 1``."""
    c = Fraction(c)
    if not 0 < c < 1:
        raise ValueError(f"scale {c} not in (0, 1)")
    return ExponentTuple(tuple(math.floor(c * ti) for ti in t), tuple(t))


def admissible_tuples(t: Sequence[int]) -> Iterator[ExponentTuple]:
    """All admissible tuples for ``t`` in lexicographic order."""
    t = tuple(t)
    for r in itertools.product(*(range(ti + 1) for ti in t)):
        yield ExponentTuple(r, t)


def monotone_tuples(t: Sequence[int]) -> Iterator[ExponentTuple]:
    return (r for r in admissible_tuples(t) if r.monotone)


def _nilpotent(f: Operator):
    if not f.is_nilpotent():
        raise NotNilpotent("operator is not nilpotent")


def build_W_rU(f_nil: Operator, U: JordanStructure, r) -> Subspace:
    """``<f^{r_1} u_1> + ... + <f^{r_k} u_k>``."""
    r = as_tuple(r, U.exponents)
    if not r.admissible:
        raise NotAdmissible(f"{r.r} not admissible for t = {r.t}")
    out = Subspace.zero(f_nil.field, f_nil.n)
    for u, ri, ti in zip(U.generators, r.r, r.t):
        if ri < ti:
            out = out + cyclic_subspace(f_nil, f_nil(u, ri))
    return out


def build_W_r(f_nil: Operator, r) -> Subspace:
    """Sum over ``i`` of ``image(f^{r_i}) & kernel(f^{t_i - r_i})``."""
    _nilpotent(f_nil)
    t = jordan_structure(f_nil).exponents
    r = as_tuple(r, t)
    if not r.admissible:
        raise NotAdmissible(f"{r.r} not admissible for t = {r.t}")
    out = Subspace.zero(f_nil.field, f_nil.n)
    for ri, ti in zip(r.r, r.t):
        term = image(f_nil.power(ri), f_nil.field) & kernel(f_nil.power(ti - ri), f_nil.field)
        out = out + term
    return out


def uniformity_counterexample(f_nil: Operator, U: JordanStructure, r
                              ) -> JordanStructure | None:
    """A generator tuple ``U~`` with ``W(r, U~) != W(r, U)``, or ``None`` if ``r`` is monotone.

    At the first index where ``r`` decreases, ``u_{i+1}`` becomes
    ``u_i + u_{i+1}``; at the first index where ``t - r`` decreases, ``u_i``
    becomes ``u_i + f^{t_{i+1} - t_i} u_{i+1}``.
    """
    r = as_tuple(r, U.exponents)
    t = r.t
    gens = list(U.generators)
    p = f_nil.p
    for i in range(len(t) - 1):
        if r.r[i] > r.r[i + 1]:
            gens[i + 1] = np.mod(gens[i] + gens[i + 1], p)
            return U.with_generators(gens)
    for i in range(len(t) - 1):
        if t[i] - r.r[i] > t[i + 1] - r.r[i + 1]:
            gens[i] = np.mod(gens[i] + f_nil(gens[i + 1], t[i + 1] - t[i]), p)
            return U.with_generators(gens)
    return None


# --- markedness ----------------------------------------------------------------

@dataclass(frozen=True)
class MarkedVerdict:
    """Outcome of :func:`is_marked`; on success ``X = W(r, U)``."""

    marked: bool
    U: JordanStructure | None = None
    r: ExponentTuple | None = None

    def __bool__(self):
        return self.marked


def _orbit(f_nil: Operator, start: Subspace, budget: int) -> dict[Subspace, np.ndarray]:
    """Orbit of ``start`` under Aut_f(V), each member tagged with an automorphism reaching it."""
    orbits = f_nil.cached("marked_orbits", dict)
    if start in orbits:
        return orbits[start]
    gens = automorphism_generators(f_nil)
    p = f_nil.p
    found = {start: np.eye(f_nil.n, dtype=np.int64)}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        alpha = found[s]
        for g in gens:
            s2 = s.map(g)
            if s2 not in found:
                if len(found) >= budget:
                    raise SearchBudgetExceeded(budget)
                found[s2] = np.mod(g @ alpha, p)
                queue.append(s2)
    for s in found:
        orbits[s] = found
    return found


def is_marked(f_nil: Operator, x: Subspace, *, budget: int = DEFAULT_BUDGET) -> MarkedVerdict:
    """Decide whether ``x = W(r, U)`` for some generator tuple ``U`` and admissible ``r``.

    Since ``W(r, alpha U) = alpha W(r, U)``, the subspaces ``W(r, U)`` for a
    fixed ``r`` form one orbit under Aut_f(V).  Candidate ``r`` (in
    lexicographic order) must reproduce the block sizes of ``f`` on ``x`` and
    on ``V/x``; for each one the orbit of ``W(r, U0)`` is searched for ``x``.
    ``budget`` bounds the number of orbit members visited per ``r``.
    """
    _nilpotent(f_nil)
    if not f_nil.leaves_invariant(x):
        raise NotInvariant("subspace is not invariant")
    U0 = jordan_structure(f_nil)
    res = restriction_exponents(f_nil, x)
    quo = quotient_structure(f_nil, x)
    for r in admissible_tuples(U0.exponents):
        if r.restriction_exponents != res or r.quotient_exponents != quo:
            continue
        orbit = _orbit(f_nil, build_W_rU(f_nil, U0, r), budget)
        if x in orbit:
            U = apply_to_tuple(orbit[x], U0, f_nil.p)
            return MarkedVerdict(True, U, r)
    return MarkedVerdict(False)


def is_marked_bruteforce(f_nil: Operator, x: Subspace, *, cap_vectors: int = DEFAULT_VECTOR_CAP,
                         max_tuples: int = 10**5) -> MarkedVerdict:
    """Reference check: try every generator tuple and every admissible ``r``."""
    _nilpotent(f_nil)
    if not f_nil.leaves_invariant(x):
        raise NotInvariant("subspace is not invariant")
    t = jordan_structure(f_nil).exponents
    cands = [r for r in admissible_tuples(t) if sum(ti - ri for ri, ti in zip(r.r, r.t)) == x.dim]
    for U in enumerate_generator_tuples(f_nil, cap_vectors=cap_vectors, max_tuples=max_tuples):
        for r in cands:
            if build_W_rU(f_nil, U, r) == x:
                return MarkedVerdict(True, U, r)
    return MarkedVerdict(False)


__all__ = [
    "DEFAULT_BUDGET", "ExponentTuple", "LengthMismatch", "MarkedVerdict", "NotAdmissible",
    "SearchBudgetExceeded", "admissible_tuples", "as_tuple", "build_W_r", "build_W_rU",
    "is_admissible", "is_marked", "is_marked_bruteforce", "is_monotone", "monotone_tuples",
    "scaled_tuple", "uniformity_counterexample",
]
