import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invlattice.exactla import Subspace, coefficient_rows, inverse, kernel, rank
from invlattice.gf import GF
from invlattice.operator import (BOTTOM, NonSplitCharPoly, NotInvariant, Operator,
                                 cyclic_subspace, decompose, eigenvalues, exponent, height,
                                 jordan_block, jordan_operator, jordan_structure, kernel_chain,
                                 quotient_structure, restriction_structure, segre_exponents)
from invlattice.suite import random_split_operator

from conftest import span, vec


def test_jordan_block_lower_shift():
    assert jordan_block(3).tolist() == [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
    assert jordan_block(2, 1).tolist() == [[1, 0], [1, 1]]


def test_cyclic_z_gf2_structure(cyclic_z):
    f, _ = cyclic_z
    js = jordan_structure(f)
    assert js.exponents == (1, 3)
    assert [g.tolist() for g in js.generators] == [[1, 0, 0, 0], [0, 1, 0, 0]]


def test_nonmonotone_r_gf2_structure(n2n3):
    js = jordan_structure(n2n3)
    assert js.exponents == (2, 3)
    assert [g.tolist() for g in js.generators] == [[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]]


def test_exponent_and_height(cyclic_z):
    f, _ = cyclic_z
    z = vec(1, 0, 1, 0)
    assert exponent(f, z) == 2
    assert exponent(f, vec(0, 1, 0, 0)) == 3
    assert exponent(f, vec(0, 0, 0, 0)) == 0
    assert height(f, z) == 0
    assert height(f, f(z)) == 2
    assert height(f, vec(0, 0, 0, 0)) is BOTTOM


def test_cyclic_subspace(cyclic_z, n2n3):
    f, z = cyclic_z
    assert cyclic_subspace(f, vec(1, 0, 1, 0)) == z
    assert cyclic_subspace(f, vec(0, 0, 0, 0)).dim == 0
    assert cyclic_subspace(n2n3, vec(0, 0, 1, 0, 0)) == span(2, 5, [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1])


def test_restriction_and_quotient(cyclic_z):
    f, z = cyclic_z
    assert restriction_structure(f, z).exponents == (2,)
    assert quotient_structure(f, z) == (2,)
    ker = span(2, 4, [1, 0, 0, 0], [0, 0, 0, 1])
    assert restriction_structure(f, ker).exponents == (1, 1)
    fv = span(2, 4, [0, 0, 1, 0], [0, 0, 0, 1])
    assert quotient_structure(f, fv) == (1, 1)
    assert quotient_structure(f, Subspace.zero(GF(2), 4)) == (1, 3)
    assert quotient_structure(f, Subspace.full(GF(2), 4)) == ()
    assert restriction_structure(f, Subspace.full(GF(2), 4)).exponents == (1, 3)
    with pytest.raises(NotInvariant):
        restriction_structure(f, span(2, 4, [0, 1, 0, 0]))


def test_nonsplit():
    with pytest.raises(NonSplitCharPoly):
        decompose(Operator(GF(2), [[0, 1], [1, 1]]))


def test_decompose_two_eigenvalues():
    F = GF(3)
    m = np.zeros((4, 4), dtype=np.int64)
    m[:2, :2] = jordan_block(2, 1)
    m[2:, 2:] = jordan_block(2, 2)
    P = np.array([[1, 1, 0, 0], [0, 1, 2, 0], [0, 0, 1, 1], [1, 0, 0, 1]])
    f = Operator(F, np.mod(P @ m @ inverse(P, F), 3))
    assert eigenvalues(f) == [(1, 2), (2, 2)]
    comps = decompose(f)
    assert [jordan_structure(c.nilpotent).exponents for c in comps] == [(2,), (2,)]
    assert (comps[0].space + comps[1].space).dim == 4


def test_kernel_chain_dims(cyclic_z):
    f, _ = cyclic_z
    assert [k.dim for k in kernel_chain(f)] == [0, 2, 3, 4]
    assert segre_exponents(f) == (1, 3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 5), st.integers(0, 10**6))
def test_segre_consistency(p, n, seed):
    f = random_split_operator(p, n, np.random.default_rng(seed))
    comps = decompose(f)
    assert sum(c.dim for c in comps) == n
    for c in comps:
        js = jordan_structure(c.nilpotent)
        assert sum(js.exponents) == c.dim
        assert list(js.exponents) == sorted(js.exponents)
        assert restriction_structure(c.nilpotent, Subspace.full(f.field, c.dim)).exponents == js.exponents
        chain = js.chain_matrix(c.nilpotent)
        assert rank(chain, f.field) == c.dim
        assert js.k == kernel(c.nilpotent.matrix, f.field).dim


@pytest.mark.parametrize("p", [2, 3])
def test_exponent_height_laws_exhaustive(p):
    f = jordan_operator(GF(p), [1, 2])
    for x in coefficient_rows(p, 3):
        e = exponent(f, x)
        assert exponent(f, f(x)) == max(e - 1, 0)
        if e >= 1 and height(f, f(x)) is not BOTTOM:
            assert height(f, f(x)) >= height(f, x) + 1
