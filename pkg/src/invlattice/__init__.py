"""Invariant, marked, characteristic and hyperinvariant subspaces over GF(p).

Exact linear algebra over prime fields, Jordan data of nilpotent operators,
the subspaces ``W(r, U)`` and ``W(r)``, classification predicates and
lattice enumeration.
"""
from .gf import GF, PrimeField, Scalar
from .exactla import (EnumerationTooLarge, Subspace, image, kernel, rank, rref)
from .operator import (BOTTOM, JordanStructure, NonSplitCharPoly, NotInvariant,
                       NotNilpotent, Operator, cyclic_subspace, decompose, exponent, height,
                       jordan_operator, jordan_structure, quotient_structure,
                       restriction_structure)
from .commutant import (automorphism_generators, commutant_basis, count_automorphisms,
                        count_generator_tuples, enumerate_generator_tuples,
                        theta_automorphism)
from .markedcalc import (ExponentTuple, SearchBudgetExceeded, build_W_r, build_W_rU,
                         is_admissible, is_monotone, scaled_tuple)
from .classify import (ClassificationReport, check_distributivity, decompose_and_classify,
                       is_characteristic, is_hyperinvariant, is_invariant, is_marked)
from .lattice import (SubspaceLattice, enumerate_chinv, enumerate_hinv,
                      enumerate_invariant_subspaces, enumerate_marked,
                      search_characteristic_not_hyperinvariant)

__version__ = "0.1.0"
