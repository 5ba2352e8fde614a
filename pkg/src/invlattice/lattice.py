"""Lattices of invariant subspaces: enumeration, Hasse diagrams, DOT output."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .classify import is_characteristic, is_hyperinvariant, is_marked
from .exactla import EnumerationTooLarge, Subspace, coefficient_rows, image, kernel
from .markedcalc import build_W_r, monotone_tuples
from .operator import Operator, decompose, jordan_structure, nilpotency_index

DEFAULT_SUBSPACE_CAP = 10**5


def gaussian_binomial(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def count_subspaces(p: int, n: int) -> int:
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def all_subspaces(field, n: int, *, cap: int = DEFAULT_SUBSPACE_CAP) -> list[Subspace]:
    """Every subspace of GF(p)^n, generated directly in RREF (one per pivot pattern and fill)."""
    from .gf import as_field
    field = as_field(field)
    p = field.p
    total = count_subspaces(p, n)
    if total > cap:
        raise EnumerationTooLarge(f"subspaces of GF({p})^{n}", total, cap)
    out = []
    for d in range(n + 1):
        for piv in itertools.combinations(range(n), d):
            pivset = set(piv)
            free = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, n) if c not in pivset]
            base = np.zeros((d, n), dtype=np.int64)
            for i, pc in enumerate(piv):
                base[i, pc] = 1
            for fill in coefficient_rows(p, len(free)):
                b = base.copy()
                for (i, c), v in zip(free, fill):
                    b[i, c] = v
                out.append(Subspace(field, b, n, _pivots=piv))
    return out


def enumerate_invariant_subspaces(f: Operator, *, cap: int = DEFAULT_SUBSPACE_CAP
                                  ) -> list[Subspace]:
    """Brute force: filter all subspaces of V for f-invariance."""
    def compute():
        return [s for s in all_subspaces(f.field, f.n, cap=cap) if s.is_invariant_under(f.matrix)]
    return list(f.cached(("invariant_subspaces", cap), compute))


# --- lattice container -----------------------------------------------------------

def _covering_pairs(elements: Sequence[Subspace]) -> list[tuple[int, int]]:
    m = len(elements)
    below = [[i != j and elements[i] <= elements[j] for j in range(m)] for i in range(m)]
    edges = []
    for i in range(m):
        for j in range(m):
            if below[i][j] and not any(below[i][k] and below[k][j] for k in range(m)):
                edges.append((i, j))
    return edges


@dataclass
class SubspaceLattice:
    """A deduplicated, sorted family of subspaces with tags and its Hasse diagram.

    ``elements`` are sorted by dimension, then RREF entries.  ``labels[i]``
    tags ``elements[i]``.  ``closed`` records whether the family is closed
    under intersection and sum.
    """

    elements: list[Subspace]
    labels: list[list[str]] = dc_field(default_factory=list)
    kind: str = ""
    closed: bool | None = None
    hasse_edges: list[tuple[int, int]] = dc_field(default_factory=list)

    @classmethod
    def build(cls, tagged: Iterable[tuple[Subspace, Sequence[str]]], kind: str = "") -> SubspaceLattice:
        tags: dict[Subspace, list[str]] = {}
        for s, labels in tagged:
            bucket = tags.setdefault(s, [])
            for lab in labels:
                if lab not in bucket:
                    bucket.append(lab)
        elements = sorted(tags, key=lambda s: s.sort_key)
        lat = cls(elements, [tags[s] for s in elements], kind)
        lat.closed = lat.is_closed()
        lat.hasse_edges = hasse(lat)
        return lat

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, s: Subspace):
        return s in set(self.elements)

    def index(self, s: Subspace) -> int:
        return self.elements.index(s)

    def is_closed(self) -> bool:
        members = set(self.elements)
        return all((a & b) in members and (a + b) in members
                   for a, b in itertools.combinations(self.elements, 2))

    def to_dot(self, name: str = "lattice") -> str:
        """Hasse diagram as DOT text; edges point from smaller to larger subspace."""
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
        for i, s in enumerate(self.elements):
            tags = "\\n".join(self.labels[i]) if self.labels and self.labels[i] else \
                ";".join("".join(map(str, row)) for row in s.rows()) or "0"
            lines.append(f'  n{i} [label="dim={s.dim}\\n{tags}"];')
        for i, j in self.hasse_edges:
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "closed": self.closed,
            "elements": [{"dim": s.dim, "rref": s.rows(), "labels": self.labels[i]}
                         for i, s in enumerate(self.elements)],
            "hasse_edges": [list(e) for e in self.hasse_edges],
        }


def hasse(lattice: SubspaceLattice) -> list[tuple[int, int]]:
    """Covering pairs ``(i, j)``: ``elements[i] < elements[j]`` with nothing in between."""
    return _covering_pairs(lattice.elements)


# --- named subspaces ------------------------------------------------------------

def _power_name(j: int) -> str:
    return "f" if j == 1 else f"f^{j}"


def standard_names(f_nil: Operator) -> dict[Subspace, list[str]]:
    """``0``, ``V``, ``f^j V`` and ``V[f^j]`` for ``0 < j < N``."""
    names: dict[Subspace, list[str]] = {}
    n = f_nil.n
    names.setdefault(Subspace.zero(f_nil.field, n), []).append("0")
    names.setdefault(Subspace.full(f_nil.field, n), []).append("V")
    N = nilpotency_index(f_nil)
    for j in range(1, N):
        names.setdefault(image(f_nil.power(j), f_nil.field), []).append(f"{_power_name(j)}V")
    for j in range(1, N):
        names.setdefault(kernel(f_nil.power(j), f_nil.field), []).append(f"V[{_power_name(j)}]")
    return names


def _nilpotent_hinv(f_nil: Operator) -> list[tuple[Subspace, list[str]]]:
    names = standard_names(f_nil)
    t = jordan_structure(f_nil).exponents
    out = []
    for r in monotone_tuples(t):
        w = build_W_r(f_nil, r)
        out.append((w, names.get(w, []) + [r.label()]))
    return out


def enumerate_hinv(f: Operator) -> SubspaceLattice:
    """All hyperinvariant subspaces, as the subspaces ``W(r)`` for monotone ``r``.

    For several eigenvalues every combination of per-component members is
    taken; tags are then prefixed by the eigenvalue.
    """
    comps = decompose(f)
    if len(comps) == 1 and comps[0].eigenvalue == 0:
        return SubspaceLattice.build(_nilpotent_hinv(f), "Hinv")
    per = []
    for c in comps:
        members = []
        for w, labels in _nilpotent_hinv(c.nilpotent):
            members.append((c.to_ambient(w), [f"lam={c.eigenvalue}:{lab}" for lab in labels]))
        per.append(members)
    tagged = []
    for combo in itertools.product(*per):
        total = Subspace.zero(f.field, f.n)
        for s, _ in combo:
            total = total + s
        tagged.append((total, [" + ".join(labels[0] for _, labels in combo)]))
    return SubspaceLattice.build(tagged, "Hinv")


def _tagged(f: Operator, subspaces: Iterable[Subspace]):
    hinv_tags = {s: lab for s, lab in zip(*_hinv_labels(f))}
    return [(s, hinv_tags.get(s, [])) for s in subspaces]


def _hinv_labels(f: Operator):
    lat = enumerate_hinv(f)
    return lat.elements, lat.labels


def enumerate_chinv(f: Operator, *, method: str = "auto",
                    cap: int = DEFAULT_SUBSPACE_CAP) -> SubspaceLattice:
    """Characteristic subspaces, filtered from the brute-force invariant list."""
    members = [s for s in enumerate_invariant_subspaces(f, cap=cap)
               if is_characteristic(f, s, method=method)]
    return SubspaceLattice.build(_tagged(f, members), "Chinv")


def enumerate_marked(f: Operator, *, cap: int = DEFAULT_SUBSPACE_CAP) -> list[Subspace]:
    return [s for s in enumerate_invariant_subspaces(f, cap=cap) if is_marked(f, s)]


def search_characteristic_not_hyperinvariant(f: Operator, *, method: str = "group",
                                             cap: int = DEFAULT_SUBSPACE_CAP) -> list[Subspace]:
    """Invariant subspaces that are characteristic but not hyperinvariant.

    Uses the group test for characteristic subspaces (never the p > 2
    shortcut), so over GF(p) with p > 2 an empty result is an actual check.
    """
    return [s for s in enumerate_invariant_subspaces(f, cap=cap)
            if not is_hyperinvariant(f, s) and is_characteristic(f, s, method=method)]


__all__ = [
    "DEFAULT_SUBSPACE_CAP", "SubspaceLattice", "all_subspaces", "count_subspaces",
    "enumerate_chinv", "enumerate_hinv", "enumerate_invariant_subspaces", "enumerate_marked",
    "gaussian_binomial", "hasse", "search_characteristic_not_hyperinvariant", "standard_names",
]
