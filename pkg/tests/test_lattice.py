import numpy as np
import pytest

from invlattice.classify import is_hyperinvariant, is_marked
from invlattice.exactla import EnumerationTooLarge, Subspace, image, kernel
from invlattice.gf import GF
from invlattice.lattice import (SubspaceLattice, all_subspaces, count_subspaces,
                                enumerate_chinv, enumerate_hinv, enumerate_invariant_subspaces,
                                enumerate_marked, gaussian_binomial, hasse,
                                search_characteristic_not_hyperinvariant)
from invlattice.operator import Operator, jordan_operator

from conftest import span


def test_subspace_counts():
    assert [gaussian_binomial(4, k, 2) for k in range(5)] == [1, 15, 35, 15, 1]
    assert count_subspaces(2, 4) == 67
    subs = all_subspaces(GF(2), 4)
    assert len(subs) == 67 and len(set(subs)) == 67
    assert len(set(all_subspaces(GF(3), 3))) == count_subspaces(3, 3) == 28
    with pytest.raises(EnumerationTooLarge):
        all_subspaces(GF(2), 8, cap=1000)


def test_invariant_subspaces_small():
    zero = Operator(GF(2), np.zeros((4, 4), dtype=np.int64))
    assert len(enumerate_invariant_subspaces(zero)) == 67
    n2 = jordan_operator(GF(2), [2])
    assert enumerate_invariant_subspaces(n2) == [Subspace.zero(GF(2), 2), span(2, 2, [0, 1]),
                                                 Subspace.full(GF(2), 2)]


def test_hinv_cyclic_z_gf2(cyclic_z):
    f, z = cyclic_z
    lat = enumerate_hinv(f)
    F = GF(2)
    expected = {Subspace.zero(F, 4), image(f.power(1), F), image(f.power(2), F),
                kernel(f.power(1), F), kernel(f.power(2), F), Subspace.full(F, 4)}
    assert set(lat.elements) == expected and len(lat) == 6
    assert lat.closed
    assert len(lat.hasse_edges) == 6
    assert lat.labels[lat.index(image(f.power(1), F))] == ["fV", "W(1,1)"]


def test_hinv_small_cases(zero2):
    assert len(enumerate_hinv(zero2)) == 2
    assert len(enumerate_hinv(zero2).hasse_edges) == 1
    chain = enumerate_hinv(jordan_operator(GF(2), [4]))
    assert [x.dim for x in chain] == [0, 1, 2, 3, 4]
    assert len(chain.hasse_edges) == 4


@pytest.mark.parametrize("p,t", [(2, (1, 3)), (2, (1, 1, 2)), (2, (2, 2)), (3, (1, 2)), (2, (1, 2, 2))])
def test_hinv_matches_filter(p, t):
    f = jordan_operator(GF(p), t)
    filtered = {x for x in enumerate_invariant_subspaces(f) if is_hyperinvariant(f, x)}
    assert filtered == set(enumerate_hinv(f).elements)


def test_chinv_gf2_strictly_larger(cyclic_z):
    f, z = cyclic_z
    hinv = set(enumerate_hinv(f).elements)
    chinv = enumerate_chinv(f)
    assert hinv < set(chinv.elements)
    assert set(chinv.elements) - hinv == {z}
    assert chinv.closed


def test_chinv_gf3_equals_hinv():
    f = jordan_operator(GF(3), [1, 3])
    assert set(enumerate_chinv(f, method="group").elements) == set(enumerate_hinv(f).elements)


def test_mark_not_closed_under_sum(marked_pair):
    f, z1, z2 = marked_pair
    mark = set(enumerate_marked(f))
    assert z1 in mark and z2 in mark and (z1 + z2) not in mark


def test_search(cyclic_z):
    f, z = cyclic_z
    assert z in search_characteristic_not_hyperinvariant(f)
    assert search_characteristic_not_hyperinvariant(jordan_operator(GF(3), [1, 3])) == []
    assert search_characteristic_not_hyperinvariant(jordan_operator(GF(2), [1, 1])) == []
    search_characteristic_not_hyperinvariant(jordan_operator(GF(2), [2, 2]))


def test_hasse_covering_pairs():
    F = GF(2)
    a, b = span(2, 3, [1, 0, 0]), span(2, 3, [1, 0, 0], [0, 1, 0])
    lat = SubspaceLattice.build([(Subspace.zero(F, 3), []), (a, []), (b, []),
                                 (Subspace.full(F, 3), [])])
    assert lat.hasse_edges == [(0, 1), (1, 2), (2, 3)]
    assert hasse(lat) == lat.hasse_edges


def test_dot_output_stable(cyclic_z):
    f, _ = cyclic_z
    dot = enumerate_hinv(f).to_dot()
    assert dot == enumerate_hinv(jordan_operator(GF(2), [1, 3])).to_dot()
    assert 'label="dim=2\\nfV\\nW(1,1)"' in dot
    assert dot.count("->") == 6


def test_powers_appear_in_hinv():
    f = jordan_operator(GF(2), [1, 2, 4])
    els = set(enumerate_hinv(f).elements)
    for j in range(5):
        assert image(f.power(j), f.field) in els
        assert kernel(f.power(j), f.field) in els


def test_mark_meet_closure_reported(marked_pair):
    f, _, _ = marked_pair
    mark = enumerate_marked(f)
    lat = SubspaceLattice.build((x, []) for x in mark)
    assert lat.closed is False


def test_mark_not_closed_under_intersection():
    f = jordan_operator(GF(2), [1, 2, 3])
    a = span(2, 6, [1, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1])
    b = span(2, 6, [1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 1, 0], [0, 0, 0, 0, 0, 1])
    assert is_marked(f, a) and is_marked(f, b)
    assert not is_marked(f, a & b)


@pytest.mark.parametrize("p,t", [(2, (1, 3)), (2, (2, 3)), (3, (1, 2))])
def test_mark_closed_on_small_structures(p, t):
    f = jordan_operator(GF(p), t)
    lat = SubspaceLattice.build((x, []) for x in enumerate_marked(f))
    assert lat.closed
