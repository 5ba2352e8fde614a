"""Hyperinvariant lattice of a nilpotent operator, with DOT output.

Pass Jordan block sizes and a prime on the command line, e.g.
``python hinv_lattice.py 2 1 2 4``  (p = 2, blocks 1, 2, 4).
"""
import sys

from invlattice import GF, enumerate_hinv, jordan_operator

p, *blocks = (int(a) for a in sys.argv[1:]) if len(sys.argv) > 2 else (2, 1, 2, 4)
f = jordan_operator(GF(p), blocks)
lat = enumerate_hinv(f)
print(f"blocks {tuple(blocks)} over GF({p}): {len(lat)} hyperinvariant subspaces, "
      f"closed under + and meet: {lat.closed}")
for x, tags in zip(lat.elements, lat.labels):
    print(f"  dim {x.dim}: {', '.join(tags)}")
print()
print(lat.to_dot("hinv"))
