"""
Zero patterns
=============

Full indecomposability and the block triangular form.  Inverse
nonnegativity forces sign conditions on the off-diagonal blocks of that form.
"""

import numpy as np

from semipositive.core import inverse, rmatrix, to_strings
from semipositive.patterns import (block_triangularize, check_pattern_inv_nonneg,
                                   is_fully_indecomposable)

A = np.array([[1, 0, 1, 0],
              [0, 1, 0, 0],
              [1, 0, 1, 1],
              [0, 1, 0, 1]])
print("fully indecomposable:", is_fully_indecomposable(A))
form = block_triangularize(A)
print("rows", form.row_perm, "cols", form.col_perm)
print(form.apply(A))
print("blocks", form.blocks, form.kinds)

# an inverse of a nonnegative matrix passes the block test
B = rmatrix([[2, 1, 0], [0, 1, 0], [1, 0, 3]])
C = inverse(B)
print("inv(B) =", to_strings(C))
print("pattern test:", check_pattern_inv_nonneg(C))
print("[[1, 1], [0, 1]] pattern test:", check_pattern_inv_nonneg([[1, 1], [0, 1]]))
