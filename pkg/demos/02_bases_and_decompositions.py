"""
Bases and splittings of matrix space
====================================

Semipositive (and minimally semipositive) matrices span all of M_{m,n}; the
constructions below produce explicit bases and split any matrix into two
such parts.
"""

import numpy as np

from semipositive.cones import random_simplicial_cone
from semipositive.core import rank, rmatrix, to_strings, vec
from semipositive.semipos import (classify_msp, decompose_diff_msp, decompose_sum_sp, is_sp,
                                  msp_basis, sp_basis)

m, n = 3, 2
basis = sp_basis(m, n)
stack = np.array([vec(B) for B in basis], dtype=object)
print(f"{len(basis)} semipositive matrices, stacked rank {rank(stack)}")
print("first element", to_strings(basis[0]))

basis = msp_basis(m, n)
print("MSP basis, all minimal:", all(classify_msp(B).minimal for B in basis))

A = rmatrix([[1, -4], [0, 2], [-3, -3]])
B, C = decompose_sum_sp(A)
print("A = B + C with B, C semipositive:", is_sp(B) and is_sp(C), np.array_equal(B + C, A))
C1, C2 = decompose_diff_msp(A)
print("A = C1 - C2, both minimal:", classify_msp(C1).minimal and classify_msp(C2).minimal)

# same constructions over a random simplicial cone pair
rng = np.random.default_rng(0)
K1, K2 = random_simplicial_cone(rng, n), random_simplicial_cone(rng, m)
basis = msp_basis(m, n, K1, K2)
print("cone MSP basis rank", rank(np.array([vec(B) for B in basis], dtype=object)))
