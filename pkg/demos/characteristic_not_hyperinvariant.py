"""Over GF(2) an invariant subspace can be characteristic without being hyperinvariant.

f = diag(0, N3) on GF(2)^4 and Z = <e1+e3, e4>.  Every automorphism commuting
with f keeps Z, but the projection onto the first block does not.
"""
import numpy as np

from invlattice import (GF, Subspace, decompose_and_classify, enumerate_chinv, enumerate_hinv,
                        jordan_operator, search_characteristic_not_hyperinvariant)

F = GF(2)
f = jordan_operator(F, [1, 3])
Z = Subspace.span(F, np.array([[1, 0, 1, 0], [0, 0, 0, 1]]), 4)

report = decompose_and_classify(f, Z)
print("Z:", report.to_dict())

print("Hinv has", len(enumerate_hinv(f)), "members, Chinv has", len(enumerate_chinv(f)))
print("search finds:", [x.rows() for x in search_characteristic_not_hyperinvariant(f)])

# same shape over GF(3): the gap closes
f3 = jordan_operator(GF(3), [1, 3])
print("GF(3):", len(enumerate_hinv(f3)), "hyperinvariant,", len(enumerate_chinv(f3)), "characteristic")
