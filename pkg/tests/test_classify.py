import numpy as np
import pytest

from invlattice.classify import (ComponentSplitFailed, InconsistentReport, NotADecomposition,
                                 ClassificationReport, check_distributivity,
                                 decompose_and_classify, is_characteristic, is_hyperinvariant,
                                 is_invariant, is_marked)
from invlattice.exactla import Subspace, inverse
from invlattice.gf import GF
from invlattice.lattice import enumerate_invariant_subspaces
from invlattice.operator import NotInvariant, Operator, block_diag, jordan_block, jordan_operator

from conftest import span


def test_cyclic_z_gf2_flags(cyclic_z):
    f, z = cyclic_z
    rep = decompose_and_classify(f, z)
    assert rep.flags() == {"invariant": True, "marked": False, "characteristic": True,
                           "hyperinvariant": False}
    g, v = rep.hyperinvariant_witness
    assert g.tolist() == [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert np.mod(g @ v, 2).tolist() == [1, 0, 0, 0]


def test_zero_map_gf2(zero2):
    x = span(2, 2, [1, 0])
    assert is_marked(zero2, x)
    c = is_characteristic(zero2, x)
    assert not c and c.witness.tolist() == [[1, 0], [1, 1]]


def test_characteristic_methods_agree_on_cyclic_z_gf2(cyclic_z):
    f, z = cyclic_z
    assert is_characteristic(f, z, method="group")
    assert is_characteristic(f, z, method="enumerate")
    with pytest.raises(ValueError):
        is_characteristic(f, z, method="hyperinvariant")


def test_gf3_analog_not_characteristic():
    f = jordan_operator(GF(3), [1, 3])
    z = span(3, 4, [1, 0, 1, 0], [0, 0, 0, 1])
    for method in ("hyperinvariant", "group", "enumerate"):
        v = is_characteristic(f, z, method=method)
        assert not v
        assert v.witness is not None and z.map(v.witness) != z


def test_is_invariant_examples():
    f = jordan_operator(GF(2), [1, 3])
    assert is_invariant(f, span(2, 4, [1, 0, 1, 0], [0, 0, 0, 1]))
    assert not is_invariant(f, span(2, 4, [0, 1, 0, 0]))
    assert is_invariant(f, Subspace.full(GF(2), 4))


def test_hyperinvariant_examples(cyclic_z):
    f, z = cyclic_z
    assert is_hyperinvariant(f, span(2, 4, [0, 0, 1, 0], [0, 0, 0, 1]))
    assert is_hyperinvariant(f, Subspace.full(GF(2), 4))
    with pytest.raises(NotInvariant):
        is_hyperinvariant(f, span(2, 4, [0, 1, 0, 0]))


@pytest.mark.parametrize("p,t", [(2, (1, 3)), (2, (1, 1, 2)), (2, (2, 2)), (3, (1, 2)), (3, (1, 1, 1))])
def test_bruteforce_hyperinvariance_agrees(p, t):
    f = jordan_operator(GF(p), t)
    for x in enumerate_invariant_subspaces(f):
        fast = is_hyperinvariant(f, x).holds
        assert fast == is_hyperinvariant(f, x, bruteforce=True).holds


@pytest.mark.parametrize("p,t", [(2, (1, 3)), (2, (1, 1, 2)), (2, (1, 1, 1)), (3, (1, 2)), (3, (1, 1))])
def test_group_agrees_with_enumeration(p, t):
    f = jordan_operator(GF(p), t)
    for x in enumerate_invariant_subspaces(f):
        assert is_characteristic(f, x, method="group").holds == \
            is_characteristic(f, x, method="enumerate", cap=2**20).holds


def test_distributivity_on_shift_pair(cyclic_z):
    f, z = cyclic_z
    v1 = span(2, 4, [1, 0, 0, 0])
    v2 = span(2, 4, [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1])
    assert not check_distributivity(f, z, [v1, v2])
    assert check_distributivity(f, span(2, 4, [0, 0, 1, 0], [0, 0, 0, 1]), [v1, v2])
    assert check_distributivity(f, z, [Subspace.full(GF(2), 4)])
    with pytest.raises(NotADecomposition):
        check_distributivity(f, z, [v1, v1])
    with pytest.raises(NotADecomposition):
        check_distributivity(f, z, [span(2, 4, [0, 1, 0, 0]), v1])


def _composite():
    """diag(0, N3) plus an eigenvalue-1 block N2 + I over GF(2), conjugated."""
    F = GF(2)
    m = block_diag(jordan_block(1), jordan_block(3), jordan_block(2, 1))
    P = np.eye(6, dtype=np.int64)
    P[0, 5] = P[4, 1] = P[2, 4] = 1
    return Operator(F, np.mod(P @ m @ inverse(P, F), 2)), P


def test_generalized_eigenspace_is_hyperinvariant():
    f, P = _composite()
    v1 = span(2, 6, *np.mod(P[:, 4:].T, 2).tolist())
    assert f.leaves_invariant(v1)
    assert is_hyperinvariant(f, v1)
    assert decompose_and_classify(f, v1).hyperinvariant


def test_componentwise_flags_match_direct():
    f, P = _composite()
    for x in enumerate_invariant_subspaces(f):
        rep = decompose_and_classify(f, x)
        assert rep.hyperinvariant == is_hyperinvariant(f, x).holds
        assert rep.characteristic == is_characteristic(f, x, method="enumerate", cap=2**16).holds
        assert rep.marked == is_marked(f, x).holds


def test_composite_with_cyclic_z_gf2_part():
    f, P = _composite()
    z = span(2, 6, *np.mod(np.array([[1, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0]]) @ P.T, 2).tolist())
    fv2 = span(2, 6, *np.mod(np.array([[0, 0, 0, 0, 0, 1]]) @ P.T, 2).tolist())
    rep = decompose_and_classify(f, z + fv2)
    assert rep.flags() == {"invariant": True, "marked": False, "characteristic": True,
                           "hyperinvariant": False}
    g, v = rep.hyperinvariant_witness
    assert np.mod(g @ v, 2) not in (z + fv2)
    assert np.array_equal(np.mod(g @ f.matrix, 2), np.mod(f.matrix @ g, 2))


def test_report_consistency_enforced():
    with pytest.raises(InconsistentReport):
        ClassificationReport(invariant=True, marked=False, characteristic=True, hyperinvariant=True)


def test_report_json(cyclic_z):
    f, z = cyclic_z
    d = decompose_and_classify(f, z).to_dict()
    assert d["witnesses"]["hyperinvariant"]["vector"] == [1, 0, 1, 0]
