"""
Semipositivity with certificates
================================

Every verdict comes with an object you can check by hand: an interior
witness ``x`` when the matrix is semipositive, a Farkas vector ``y`` when it
is not.
"""

import numpy as np

from semipositive.cones import cone_from_generators, dual
from semipositive.core import format_matrix, rmatrix, to_strings
from semipositive.semipos import classify_msp, classify_sp, sp_2x2_closed_form

# the identity is trivially semipositive: x = (1, 1) works
v = classify_sp(np.eye(2, dtype=int))
print("I:", v.kind, "witness", to_strings(v.witness))

# rows that cancel each other: y = (1, 1) gives y^T A = 0, so no x > 0 has Ax > 0
A = rmatrix([[1, -1], [-1, 1]])
v = classify_sp(A)
print("A:", v.kind, "certificate", to_strings(v.certificate))
print("y^T A =", to_strings(v.certificate.dot(A)))

# the 2x2 sign-pattern rule agrees with the LP
for rows in ([[2, -1], [-1, 2]], [[1, -2], [-2, 1]], [[0, 1], [-1, 1]]):
    print(rows, "closed form:", sp_2x2_closed_form(rows), "LP:", classify_sp(rows).semipositive)

# tall matrices: minimal means a nonnegative left inverse exists
for rows in ([[2, -1], [-1, 2], [1, 1]], [[1, 0], [0, 1], [-1, 3]]):
    c = classify_msp(rows)
    print(format_matrix(rmatrix(rows)).strip().replace("\n", " | "), "->", c.kind)

# a non-orthant cone: the 45 degree wedge between (1, 0) and (1, 1)
K = cone_from_generators([[1, 1], [0, 1]])
print("wedge facets", to_strings(K.facets), "dual generators", to_strings(dual(K).generators.T))
R = rmatrix([[0, -1], [1, 0]])  # quarter turn
v = classify_sp(R, K, K)
print("rotation on the wedge:", v.kind)
