"""
Linear preservers of semipositivity
===================================

A linear map on M_{m,n} is stored as an mn x mn matrix acting on
column-stacked coordinates.  Maps of the form A -> XAY are recognised by a
rank-one rearrangement, and the into/onto conditions are checked exactly on
the factors.  Maps that do not factor are probed by random search.
"""

from semipositive.core import identity, ones, rmatrix, to_strings
from semipositive.preservers import (Counterexample, analyze_preserver, check_into_xay,
                                     check_onto_xay, falsify_preserver, from_xay,
                                     kronecker_factor, transpose_map)

X = rmatrix([[1, 2], [0, 1]])   # row positive
Y = rmatrix([[3, -1], [-1, 2]])  # M-matrix, so inverse nonnegative
L = from_xay(X, Y)
f = kronecker_factor(L)
print("factors X", to_strings(f.X), "Y", to_strings(f.Y), "sign", f.sign)
print("into:", check_into_xay(*f.signed()), "onto:", check_onto_xay(*f.signed()))

# transposition does not preserve semipositivity; search finds a witness fast
ce = falsify_preserver(transpose_map(2), trials=1000, seed=0)
assert isinstance(ce, Counterexample)
print("trial", ce.trial, "A =", to_strings(ce.A))
print("  A x > 0 with x =", to_strings(ce.witness))
print("  A^T fails, Farkas vector", to_strings(ce.certificate))

# A -> J A keeps semipositivity but is singular, so no classification is claimed
rep = analyze_preserver(from_xay(ones(2, 2), identity(2)), trials=50)
print("J A:", rep.verdict, "invertible:", rep.invertible, "into:", rep.into)

rep = analyze_preserver(L, trials=50)
print("X A Y:", rep.verdict)
