"""Invariant / marked / characteristic / hyperinvariant classification.

Predicates take an arbitrary split operator ``f``.  Hyperinvariance is
tested against a basis of the commutant directly.  Characteristic and marked
subspaces are handled one generalized eigenspace at a time: a subspace has
either property iff each of its eigen-components has it for the nilpotent
part of ``f`` on that component.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Sequence

import numpy as np

from .commutant import (CommutantBasis, NotGeneratorTuple, automorphism_generators,
                        commutant_basis, count_automorphisms, count_generator_tuples,
                        enumerate_automorphisms, enumerate_generator_tuples,
                        theta_automorphism)
from .exactla import Subspace, coefficient_rows, EnumerationTooLarge
from .markedcalc import (DEFAULT_BUDGET, MarkedVerdict, SearchBudgetExceeded, build_W_r,
                         monotone_tuples)
from .markedcalc import is_marked as _is_marked_nilpotent
from .operator import (EigenComponent, NotInvariant, Operator, decompose,
                       embed_component_map, jordan_structure)

CHARACTERISTIC_METHODS = ("auto", "hyperinvariant", "group", "enumerate")


class NotADecomposition(ValueError):
    pass


class ComponentSplitFailed(AssertionError):
    """An invariant subspace did not split along the generalized eigenspaces."""


class InconsistentReport(AssertionError):
    pass


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer with an optional witness for the "no" case."""

    holds: bool
    witness: Any = None

    def __bool__(self):
        return self.holds


def _require_invariant(f: Operator, x: Subspace):
    if not f.leaves_invariant(x):
        raise NotInvariant("subspace is not invariant under f")


def is_invariant(f: Operator, x: Subspace) -> bool:
    return f.leaves_invariant(x)


def _escape(x: Subspace, g: np.ndarray):
    """First basis vector ``v`` of ``x`` with ``g v`` outside ``x``, or ``None``."""
    for v in x.basis:
        w = np.mod(g @ v, x.p)
        if w not in x:
            return v
    return None


def is_hyperinvariant(f: Operator, x: Subspace, *, bruteforce: bool = False,
                      cap: int = 2**16) -> Verdict:
    """``g X <= X`` for every ``g`` commuting with ``f``.

    Checking a basis of the commutant suffices by linearity.  With
    ``bruteforce`` every commutant member is tried instead.  On failure the
    witness is ``(g, v)`` with ``v`` in ``X`` and ``g v`` not in ``X``.
    """
    _require_invariant(f, x)
    cb = commutant_basis(f)
    if bruteforce:
        size = f.p ** cb.dim
        if size > cap:
            raise EnumerationTooLarge("commutant members", size, cap)
        members = (cb.combination(c, f.p) for c in coefficient_rows(f.p, cb.dim))
    else:
        members = iter(cb.basis)
    for g in members:
        v = _escape(x, g)
        if v is not None:
            return Verdict(False, (g, v))
    return Verdict(True)


def _component_parts(f: Operator, x: Subspace) -> list[tuple[EigenComponent, Subspace]]:
    parts = [(c, x & c.space) for c in decompose(f)]
    if sum(s.dim for _, s in parts) != x.dim:
        raise ComponentSplitFailed(
            f"components of X have total dimension {sum(s.dim for _, s in parts)}, X has {x.dim}")
    return parts


def _resolve_method(f: Operator, method: str) -> str:
    if method not in CHARACTERISTIC_METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {CHARACTERISTIC_METHODS}")
    if method == "auto":
        return "hyperinvariant" if f.p > 2 else "group"
    return method


def is_characteristic(f: Operator, x: Subspace, *, method: str = "auto",
                      cap: int = 2**16) -> Verdict:
    """``alpha(X) = X`` for every automorphism ``alpha`` commuting with ``f``.

    Methods:

    ``"hyperinvariant"``
        Over fields with more than two elements characteristic and
        hyperinvariant coincide, so this returns :func:`is_hyperinvariant`.
        Only valid for ``p > 2``.
    ``"group"``
        Test a generating set of the automorphism group, built per
        eigen-component from elementary moves of a generator tuple.
    ``"enumerate"``
        Sweep every invertible member of the commutant (capped at ``cap``).
    ``"auto"``
        ``"hyperinvariant"`` for ``p > 2``, ``"group"`` for ``p = 2``.

    The witness on failure is an automorphism ``alpha`` with ``alpha X != X``.
    """
    _require_invariant(f, x)
    method = _resolve_method(f, method)
    if method == "hyperinvariant":
        if f.p == 2:
            raise ValueError("the p > 2 shortcut does not apply over GF(2)")
        if is_hyperinvariant(f, x):
            return Verdict(True)
        return Verdict(False, _automorphism_witness(f, x))
    if method == "enumerate":
        for alpha in enumerate_automorphisms(f, cap=cap):
            if _escape(x, alpha) is not None:
                return Verdict(False, alpha)
        return Verdict(True)
    for idx, (comp, part) in enumerate(_component_parts(f, x)):
        local = comp.to_local(part)
        for a in automorphism_generators(comp.nilpotent):
            if _escape(local, a) is not None:
                return Verdict(False, embed_component_map(f, idx, a, elsewhere="identity"))
    return Verdict(True)


def _automorphism_witness(f: Operator, x: Subspace):
    """An automorphism moving ``x``, found among the group generators; ``None`` if none does."""
    for idx, (comp, part) in enumerate(_component_parts(f, x)):
        local = comp.to_local(part)
        for a in automorphism_generators(comp.nilpotent):
            if _escape(local, a) is not None:
                return embed_component_map(f, idx, a, elsewhere="identity")
    return None


@dataclass(frozen=True)
class ComponentMarking:
    eigenvalue: int
    verdict: MarkedVerdict
    generators: tuple[np.ndarray, ...] = ()


def is_marked(f: Operator, x: Subspace, *, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Markedness for a split operator: every eigen-component must be marked.

    The witness is the list of per-component :class:`ComponentMarking`
    records (generators in ambient coordinates).  Raises
    :class:`~invlattice.markedcalc.SearchBudgetExceeded` if any component's
    search is inconclusive.
    """
    _require_invariant(f, x)
    out = []
    for comp, part in _component_parts(f, x):
        v = _is_marked_nilpotent(comp.nilpotent, comp.to_local(part), budget=budget)
        gens = tuple(comp.vector_to_ambient(u) for u in v.U.generators) if v else ()
        out.append(ComponentMarking(comp.eigenvalue, v, gens))
    return Verdict(all(c.verdict.marked for c in out), out)


def check_distributivity(f: Operator, x: Subspace, parts: Sequence[Subspace]) -> bool:
    """Whether ``X`` is the sum of its intersections with the parts of ``V = V_1 + ... + V_q``."""
    parts = list(parts)
    n = f.n
    if not parts:
        raise NotADecomposition("empty decomposition")
    total = Subspace.zero(f.field, n)
    for part in parts:
        if not f.leaves_invariant(part):
            raise NotADecomposition("a part is not f-invariant")
        total = total + part
    if total.dim != n or sum(v.dim for v in parts) != n:
        raise NotADecomposition("parts do not form a direct sum equal to V")
    pieces = Subspace.zero(f.field, n)
    for part in parts:
        pieces = pieces + (x & part)
    return pieces == x


# --- full report -------------------------------------------------------------------

@dataclass
class ClassificationReport:
    """Flags are ``True``, ``False`` or ``None`` (unknown)."""

    invariant: bool
    marked: bool | None = None
    characteristic: bool | None = None
    hyperinvariant: bool | None = None
    hyperinvariant_witness: tuple[np.ndarray, np.ndarray] | None = None
    characteristic_witness: np.ndarray | None = None
    marked_witness: list[ComponentMarking] | None = None
    hyperinvariant_r: list[tuple[int, tuple[int, ...]]] | None = None
    components: list[dict] = dc_field(default_factory=list)

    def __post_init__(self):
        self.check()

    def check(self):
        if self.hyperinvariant and not (self.characteristic and self.marked):
            raise InconsistentReport(
                "hyperinvariant subspace reported as not characteristic or not marked")
        if not self.invariant and any((self.marked, self.characteristic, self.hyperinvariant)):
            raise InconsistentReport("non-invariant subspace carries a positive flag")

    def flags(self) -> dict[str, bool | None]:
        return {"invariant": self.invariant, "marked": self.marked,
                "characteristic": self.characteristic, "hyperinvariant": self.hyperinvariant}

    def to_dict(self) -> dict:
        out: dict[str, Any] = dict(self.flags())
        w: dict[str, Any] = {}
        if self.hyperinvariant_witness is not None:
            g, v = self.hyperinvariant_witness
            w["hyperinvariant"] = {"endomorphism": np.asarray(g).tolist(),
                                   "vector": np.asarray(v).tolist()}
        if self.characteristic_witness is not None:
            w["characteristic"] = {"automorphism": np.asarray(self.characteristic_witness).tolist()}
        if self.marked_witness is not None and self.marked:
            w["marked"] = [{"eigenvalue": c.eigenvalue, "r": list(c.verdict.r.r),
                            "t": list(c.verdict.r.t),
                            "U": [np.asarray(u).tolist() for u in c.generators]}
                           for c in self.marked_witness]
        if self.hyperinvariant_r is not None:
            w["hyperinvariant_r"] = [{"eigenvalue": lam, "r": list(r)}
                                     for lam, r in self.hyperinvariant_r]
        out["witnesses"] = w
        out["components"] = self.components
        return out


def decompose_and_classify(f: Operator, x: Subspace, *, characteristic_method: str = "auto",
                           budget: int = DEFAULT_BUDGET, cap: int = 2**16
                           ) -> ClassificationReport:
    """Classify ``X`` eigen-component by eigen-component and combine with AND.

    Each component ``X & V_lam`` is classified against the nilpotent part of
    ``f`` on ``V_lam``.  Witnesses are reported in ambient coordinates.
    """
    _require_invariant(f, x)
    parts = _component_parts(f, x)
    method = _resolve_method(f, characteristic_method)

    hyper = char = marked = True
    h_wit = c_wit = None
    m_wit: list[ComponentMarking] = []
    h_r: list[tuple[int, tuple[int, ...]]] = []
    comps = []
    for idx, (comp, part) in enumerate(parts):
        nil = comp.nilpotent
        local = comp.to_local(part)
        hv = is_hyperinvariant(nil, local)
        if hv:
            t = jordan_structure(nil).exponents
            r = next((r.r for r in monotone_tuples(t) if build_W_r(nil, r) == local), None)
            if r is None:
                raise InconsistentReport("hyperinvariant component matches no W(r)")
            h_r.append((comp.eigenvalue, r))
        elif hyper:
            g, v = hv.witness
            h_wit = (embed_component_map(f, idx, g, elsewhere="zero"), comp.vector_to_ambient(v))
        hyper = hyper and hv.holds

        if method == "hyperinvariant":
            cv = Verdict(hv.holds) if hv else Verdict(False, None)
        elif method == "enumerate":
            cv = is_characteristic(nil, local, method="enumerate", cap=cap)
        else:
            cv = is_characteristic(nil, local, method="group")
        if not cv and char:
            if cv.witness is not None:
                c_wit = embed_component_map(f, idx, cv.witness, elsewhere="identity")
            else:
                c_wit = _automorphism_witness(f, comp.to_ambient(local))
        char = char and cv.holds

        try:
            mv = _is_marked_nilpotent(nil, local, budget=budget)
            m_flag: bool | None = mv.marked
        except SearchBudgetExceeded:
            mv, m_flag = MarkedVerdict(False), None
        gens = tuple(comp.vector_to_ambient(u) for u in mv.U.generators) if mv else ()
        m_wit.append(ComponentMarking(comp.eigenvalue, mv, gens))
        if m_flag is None:
            marked = None if marked is not False else False
        elif not m_flag:
            marked = False
        comps.append({"eigenvalue": comp.eigenvalue, "dim_component": comp.dim,
                      "dim_part": part.dim, "hyperinvariant": hv.holds,
                      "characteristic": cv.holds, "marked": m_flag})
    return ClassificationReport(
        invariant=True, marked=marked, characteristic=char, hyperinvariant=hyper,
        hyperinvariant_witness=h_wit, characteristic_witness=c_wit,
        marked_witness=m_wit, hyperinvariant_r=h_r if hyper else None, components=comps)


__all__ = [
    "CHARACTERISTIC_METHODS", "ClassificationReport", "CommutantBasis", "ComponentMarking",
    "ComponentSplitFailed", "InconsistentReport", "NotADecomposition", "NotGeneratorTuple",
    "NotInvariant", "Verdict", "check_distributivity", "commutant_basis", "count_automorphisms",
    "count_generator_tuples", "decompose_and_classify", "enumerate_automorphisms",
    "enumerate_generator_tuples", "is_characteristic", "is_hyperinvariant", "is_invariant",
    "is_marked", "theta_automorphism",
]
