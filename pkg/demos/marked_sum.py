"""Two marked subspaces whose sum is not marked.

f = diag(0, N3, N2) over GF(2).  Z1 is the last block and Z2 is a twisted
copy of it; each is spanned by part of some generator tuple, Z1 + Z2 is not.
"""
import numpy as np

from invlattice import GF, Subspace, is_characteristic, is_marked, jordan_operator

F = GF(2)
f = jordan_operator(F, [1, 3, 2])


def span(*rows):
    return Subspace.span(F, np.array(rows), 6)


z1 = span([0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1])
z2 = span([1, 0, 1, 0, 1, 0], [0, 0, 0, 1, 0, 1])
for name, x in [("Z1", z1), ("Z2", z2), ("Z1+Z2", z1 + z2)]:
    m = is_marked(f, x)
    print(f"{name:6} dim {x.dim}  marked={m.holds}  characteristic={is_characteristic(f, x).holds}")
