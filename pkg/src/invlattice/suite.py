"""Executable property checks behind ``invlattice verify``.

Each property is tallied (pass / fail / skip) over every instance it is
applied to.  Failures keep a JSON-ready witness so a report can say exactly
what went wrong.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Any

import numpy as np

from .classify import (check_distributivity, decompose_and_classify, is_characteristic,
                       is_hyperinvariant)
from .commutant import (apply_to_tuple, automorphism_generators, commutant_basis,
                        count_automorphisms, count_generator_tuples, enumerate_automorphisms,
                        enumerate_generator_tuples)
from .exactla import DEFAULT_VECTOR_CAP, EnumerationTooLarge, Subspace, inverse, kernel, rank
from .gf import as_field
from .lattice import DEFAULT_SUBSPACE_CAP, enumerate_hinv, enumerate_invariant_subspaces
from .markedcalc import (SearchBudgetExceeded, admissible_tuples, build_W_r, build_W_rU,
                         is_marked, is_marked_bruteforce)
from .operator import (Operator, block_diag, cyclic_subspace, decompose, jordan_block,
                       jordan_structure, quotient_structure, restriction_structure)

ENUMERATION_LIMIT = 5000

PROPERTIES = (
    "segre", "decomposition", "aut_count", "hinv_equals_W_r", "hinv_is_char_and_marked",
    "hinv_in_mark_and_chinv", "char_equals_hinv_odd_p", "monotone_equivalence",
    "marked_roundtrip", "distributive", "lattice_closed", "componentwise", "bruteforce",
    "expectation",
)


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, Subspace):
        return x.rows()
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, np.integer):
        return int(x)
    return x


@dataclass
class Tally:
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    witnesses: list = dc_field(default_factory=list)


@dataclass
class SuiteReport:
    tallies: dict[str, Tally] = dc_field(default_factory=lambda: {k: Tally() for k in PROPERTIES})
    instances: int = 0
    max_witnesses: int = 5

    def record(self, prop: str, ok: bool, witness: Any = None, *, instance: str = ""):
        t = self.tallies[prop]
        if ok:
            t.passed += 1
        else:
            t.failed += 1
            if len(t.witnesses) < self.max_witnesses:
                t.witnesses.append({"instance": instance, "witness": _jsonable(witness)})

    def skip(self, prop: str):
        self.tallies[prop].skipped += 1

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.tallies.values())

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "instances": self.instances,
            "properties": {k: {"passed": t.passed, "failed": t.failed, "skipped": t.skipped,
                               "witnesses": t.witnesses}
                           for k, t in self.tallies.items()},
        }

    def lines(self) -> list[str]:
        out = []
        for k, t in self.tallies.items():
            status = "FAIL" if t.failed else "ok"
            out.append(f"{status:4} {k}: {t.passed} passed, {t.failed} failed, {t.skipped} skipped")
            for w in t.witnesses:
                out.append(f"       witness [{w['instance']}]: {w['witness']}")
        out.append(f"{'PASS' if self.ok else 'FAIL'} ({self.instances} instances)")
        return out


# --- random operators ------------------------------------------------------------

def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def random_invertible(p: int, n: int, rng: np.random.Generator) -> np.ndarray:
    field = as_field(p)
    while True:
        m = rng.integers(0, p, size=(n, n))
        if rank(m, field) == n:
            return m


def random_split_operator(p: int, n: int, rng: np.random.Generator) -> Operator:
    """A random conjugate of a random Jordan matrix with eigenvalues in GF(p)."""
    m = int(rng.integers(1, min(p, n) + 1))
    lams = sorted(rng.choice(p, size=m, replace=False).tolist())
    cuts = sorted(rng.choice(np.arange(1, n), size=m - 1, replace=False).tolist()) if m > 1 else []
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [n])]
    blocks = []
    for lam, size in zip(lams, sizes):
        parts = list(_partitions(size))
        for t in parts[int(rng.integers(len(parts)))]:
            blocks.append(jordan_block(t, lam))
    J = block_diag(*blocks)
    P = random_invertible(p, n, rng)
    return Operator(p, np.mod(P @ J @ inverse(P, as_field(p)), p))


# --- property checks -------------------------------------------------------------

def _tuple_orbit_failure(f_nil: Operator, x: Subspace, budget: int):
    """First generator tuple ``U`` with ``X != sum_i (X & <u_i>)``, by walking the tuple orbit."""
    U0 = jordan_structure(f_nil)
    gens = automorphism_generators(f_nil)
    seen = {U0.chain_matrix(f_nil).tobytes()}
    queue = deque([U0])
    while queue:
        U = queue.popleft()
        parts = [cyclic_subspace(f_nil, u) for u in U.generators]
        if not check_distributivity(f_nil, x, parts):
            return U
        for g in gens:
            U2 = apply_to_tuple(g, U, f_nil.p)
            key = U2.chain_matrix(f_nil).tobytes()
            if key not in seen:
                if len(seen) >= budget:
                    raise EnumerationTooLarge("generator tuples in orbit walk", len(seen), budget)
                seen.add(key)
                queue.append(U2)
    return None


def check_nilpotent_component(f_nil: Operator, report: SuiteReport, label: str, *,
                              cap_vectors: int, cap_subspaces: int, force_bruteforce: bool):
    p = f_nil.p
    U0 = jordan_structure(f_nil)
    t = U0.exponents
    k0 = kernel(f_nil.matrix, f_nil.field).dim
    report.record("segre", sum(t) == f_nil.n and len(t) == k0,
                  {"exponents": t, "n": f_nil.n, "dim_kernel": k0}, instance=label)

    aut = count_automorphisms(f_nil)
    tuples = count_generator_tuples(t, p)
    report.record("aut_count", aut == tuples, {"automorphisms": aut, "generator_tuples": tuples},
                  instance=label)
    if p ** commutant_basis(f_nil).dim <= 2**16:
        brute = sum(1 for _ in enumerate_automorphisms(f_nil, cap=2**16))
        report.record("aut_count", brute == tuples,
                      {"enumerated_automorphisms": brute, "generator_tuples": tuples},
                      instance=label)
    else:
        report.skip("aut_count")

    gens = automorphism_generators(f_nil)
    for r in admissible_tuples(t):
        w_u = build_W_rU(f_nil, U0, r)
        uniform = all(w_u.map(g) == w_u for g in gens)
        conds = {
            "uniform": uniform,
            "monotone": r.monotone,
            "equals_W_r": w_u == build_W_r(f_nil, r),
            "characteristic": bool(is_characteristic(f_nil, w_u, method="group")),
            "hyperinvariant": bool(is_hyperinvariant(f_nil, w_u)),
        }
        report.record("monotone_equivalence", len(set(conds.values())) == 1,
                      {"t": t, "r": r.r, **conds}, instance=label)
        rt_ok = (w_u.dim == sum(ti - ri for ri, ti in zip(r.r, t))
                 and restriction_structure(f_nil, w_u).exponents == r.restriction_exponents
                 and quotient_structure(f_nil, w_u) == r.quotient_exponents)
        try:
            rt_ok = rt_ok and is_marked(f_nil, w_u).marked
        except SearchBudgetExceeded:
            report.skip("marked_roundtrip")
            continue
        report.record("marked_roundtrip", rt_ok, {"t": t, "r": r.r}, instance=label)

    try:
        invs = enumerate_invariant_subspaces(f_nil, cap=cap_subspaces)
    except EnumerationTooLarge:
        for prop in ("hinv_equals_W_r", "hinv_is_char_and_marked", "hinv_in_mark_and_chinv",
                     "distributive", "lattice_closed"):
            report.skip(prop)
        return
    hinv = enumerate_hinv(f_nil)
    hyper = [x for x in invs if is_hyperinvariant(f_nil, x)]
    report.record("hinv_equals_W_r", set(hyper) == set(hinv.elements),
                  {"filtered": len(hyper), "from_W_r": len(hinv)}, instance=label)
    report.record("lattice_closed", bool(hinv.closed), {"lattice": "Hinv"}, instance=label)

    hyper_set = set(hyper)
    chinv = []
    for x in invs:
        h = x in hyper_set
        c = is_characteristic(f_nil, x, method="group")
        try:
            m = is_marked(f_nil, x)
        except SearchBudgetExceeded:
            report.skip("hinv_is_char_and_marked")
            continue
        if c:
            chinv.append(x)
        report.record("hinv_is_char_and_marked", h == (c.holds and m.marked),
                      {"subspace": x, "hyperinvariant": h, "characteristic": c.holds,
                       "marked": m.marked}, instance=label)
        if h:
            report.record("hinv_in_mark_and_chinv", c.holds and m.marked,
                          {"subspace": x}, instance=label)
        if p > 2:
            report.record("char_equals_hinv_odd_p", h == c.holds,
                          {"subspace": x, "hyperinvariant": h, "characteristic": c.holds},
                          instance=label)
        if force_bruteforce:
            _bruteforce_checks(f_nil, x, c.holds, m.marked, report, label, cap_vectors)

        cyc = [cyclic_subspace(f_nil, u) for u in U0.generators]
        if h:
            report.record("distributive", check_distributivity(f_nil, x, cyc),
                          {"subspace": x, "generators": U0.generators}, instance=label)
        else:
            try:
                bad = _tuple_orbit_failure(f_nil, x, budget=ENUMERATION_LIMIT)
            except EnumerationTooLarge:
                report.skip("distributive")
                continue
            report.record("distributive", bad is not None, {"subspace": x}, instance=label)

    chinv_set = set(chinv)
    closed = all((a & b) in chinv_set and (a + b) in chinv_set
                 for a, b in itertools.combinations(chinv, 2))
    report.record("lattice_closed", closed, {"lattice": "Chinv"}, instance=label)


def _bruteforce_checks(f_nil, x, char, marked, report, label, cap_vectors):
    if p_commutant_size(f_nil) <= 2**16:
        c = is_characteristic(f_nil, x, method="enumerate", cap=2**16)
        report.record("bruteforce", c.holds == char,
                      {"subspace": x, "group": char, "enumerate": c.holds}, instance=label)
    else:
        report.skip("bruteforce")
    if count_generator_tuples(jordan_structure(f_nil).exponents, f_nil.p) <= ENUMERATION_LIMIT:
        m = is_marked_bruteforce(f_nil, x, cap_vectors=cap_vectors)
        report.record("bruteforce", m.marked == marked,
                      {"subspace": x, "orbit": marked, "bruteforce": m.marked}, instance=label)
    else:
        report.skip("bruteforce")


def p_commutant_size(f: Operator) -> int:
    return f.p ** commutant_basis(f).dim


def check_operator(f: Operator, report: SuiteReport, label: str = "", *,
                   cap_vectors: int = DEFAULT_VECTOR_CAP,
                   cap_subspaces: int = DEFAULT_SUBSPACE_CAP,
                   force_bruteforce: bool = False):
    """Run every property on ``f`` (which must have a split characteristic polynomial)."""
    report.instances += 1
    comps = decompose(f)
    total = Subspace.zero(f.field, f.n)
    for c in comps:
        total = total + c.space
    report.record("decomposition",
                  total.dim == f.n and sum(c.dim for c in comps) == f.n
                  and all(f.leaves_invariant(c.space) for c in comps),
                  {"component_dims": [c.dim for c in comps]}, instance=label)
    for i, c in enumerate(comps):
        check_nilpotent_component(c.nilpotent, report, f"{label}[lam={c.eigenvalue}]",
                                  cap_vectors=cap_vectors, cap_subspaces=cap_subspaces,
                                  force_bruteforce=force_bruteforce)
    if len(comps) > 1:
        _check_componentwise(f, report, label, cap_subspaces)


def _check_componentwise(f: Operator, report: SuiteReport, label: str, cap_subspaces: int):
    """Direct predicates on the composite operator agree with the componentwise report."""
    try:
        invs = enumerate_invariant_subspaces(f, cap=cap_subspaces)
    except EnumerationTooLarge:
        report.skip("componentwise")
        return
    small = p_commutant_size(f) <= 2**12
    for x in invs:
        rep = decompose_and_classify(f, x, characteristic_method="group")
        direct_h = is_hyperinvariant(f, x).holds
        ok = direct_h == rep.hyperinvariant
        wit = {"subspace": x, "direct_hyperinvariant": direct_h, "report": rep.flags()}
        if small:
            direct_c = is_characteristic(f, x, method="enumerate", cap=2**12).holds
            ok = ok and direct_c == rep.characteristic
            wit["direct_characteristic"] = direct_c
        report.record("componentwise", ok, wit, instance=label)


# --- fixtures --------------------------------------------------------------------

FLAG_NAMES = ("invariant", "marked", "characteristic", "hyperinvariant")


def check_expectations(problem, report: SuiteReport, label: str):
    """Compare a problem's ``expect`` block with computed results."""
    f = problem.operator
    expect = problem.expect or {}
    for name, flags in sorted(expect.get("subspaces", {}).items()):
        x = problem.subspaces[name]
        if not f.leaves_invariant(x):
            computed = {"invariant": False, "marked": False, "characteristic": False,
                        "hyperinvariant": False}
            witnesses: dict = {"image_outside": True}
        else:
            rep = decompose_and_classify(f, x)
            computed = rep.flags()
            witnesses = rep.to_dict()["witnesses"]
        for flag, want in sorted(flags.items()):
            got = computed[flag]
            report.record("expectation", got == want,
                          {"subspace": name, "flag": flag, "expected": want, "computed": got,
                           "detail": witnesses.get(flag, witnesses)},
                          instance=label)
    if "exponents" in expect:
        got = {str(c.eigenvalue): list(jordan_structure(c.nilpotent).exponents)
               for c in decompose(f)}
        want = {str(k): list(v) for k, v in expect["exponents"].items()}
        report.record("expectation", got == want, {"expected": want, "computed": got},
                      instance=label)
    if "hinv_size" in expect:
        got = len(enumerate_hinv(f))
        report.record("expectation", got == expect["hinv_size"],
                      {"expected": expect["hinv_size"], "computed": got}, instance=label)
    for item in expect.get("distributive", []):
        x = problem.subspaces[item["subspace"]]
        parts = [problem.subspaces[n] for n in item["parts"]]
        got = check_distributivity(f, x, parts)
        report.record("expectation", got == item["holds"],
                      {"subspace": item["subspace"], "parts": item["parts"],
                       "expected": item["holds"], "computed": got}, instance=label)
    if "W_rU" in expect:
        item = expect["W_rU"]
        U0 = jordan_structure(f)
        ws = {}
        for name in item["tuples"]:
            ws[name] = build_W_rU(f, U0.with_generators(problem.tuples[name]), problem.r)
        got = len(set(ws.values())) > 1
        report.record("expectation", got == item["distinct"],
                      {"r": problem.r, "expected_distinct": item["distinct"],
                       "subspaces": {k: v.rows() for k, v in ws.items()}}, instance=label)
    if "monotone" in expect:
        from .markedcalc import as_tuple
        got = as_tuple(problem.r, jordan_structure(f).exponents).monotone
        report.record("expectation", got == expect["monotone"],
                      {"r": problem.r, "expected": expect["monotone"], "computed": got},
                      instance=label)


def run_problem(problem, report: SuiteReport | None = None, *, label: str = "", **caps
                ) -> SuiteReport:
    report = report or SuiteReport()
    check_operator(problem.operator, report, label, **caps)
    check_expectations(problem, report, label)
    return report


def run_random(p: int, n: int, count: int, seed: int, report: SuiteReport | None = None,
               **caps) -> SuiteReport:
    report = report or SuiteReport()
    rng = np.random.default_rng(seed)
    for i in range(count):
        f = random_split_operator(p, n, rng)
        check_operator(f, report, f"random#{i}", **caps)
    return report


__all__ = [
    "PROPERTIES", "SuiteReport", "Tally", "check_expectations", "check_operator",
    "random_invertible", "random_split_operator", "run_problem", "run_random",
]
