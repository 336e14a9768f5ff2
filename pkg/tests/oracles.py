"""Independent reference implementations used to cross-check the library.

Nothing here calls into the LP engine or the graph code; each oracle works
from the definition with plain Python integers / fractions.
"""

from fractions import Fraction
from itertools import permutations

import numpy as np


def frac_matrix(A):
    return [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in np.asarray(A)]


def frac_vector(v):
    return [Fraction(int(x.numerator), int(x.denominator)) for x in np.asarray(v)]


def matvec(A, x):
    return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def sp_witness_ok(A, x) -> bool:
    A, x = frac_matrix(A), frac_vector(x)
    return all(v > 0 for v in x) and all(v > 0 for v in matvec(A, x))


def sp_certificate_ok(A, y) -> bool:
    """y >= 0, y != 0 and A^T y <= 0 (orthant Farkas alternative)."""
    A, y = frac_matrix(A), frac_vector(y)
    return (all(v >= 0 for v in y) and any(v != 0 for v in y)
            and all(v <= 0 for v in matvec(transpose(A), y)))


# -- zero patterns -------------------------------------------------------------

def irreducible_bits(rows, n) -> bool:
    """Irreducibility of a 0/1 pattern given as row bitmasks (Warshall closure)."""
    if n == 1:
        return rows[0] & 1 == 1
    reach = [rows[i] & ~(1 << i) for i in range(n)]
    for k in range(n):
        for i in range(n):
            if reach[i] >> k & 1:
                reach[i] |= reach[k]
    full = (1 << n) - 1
    return all((reach[i] | (1 << i)) == full for i in range(n))


def fully_indecomposable_brute(rows, n) -> bool:
    """P A irreducible for every permutation P."""
    return all(irreducible_bits([rows[p] for p in perm], n) for perm in permutations(range(n)))


def pattern_rows(A) -> list[int]:
    A = np.asarray(A)
    return [sum(1 << j for j in range(A.shape[1]) if A[i, j] != 0) for i in range(A.shape[0])]


def monomial_brute(X) -> bool:
    """Some permutation carries exactly the positive entries; everything else is zero."""
    X = np.asarray(X)
    n = X.shape[0]
    for perm in permutations(range(n)):
        if all((X[i, j] > 0) if j == perm[i] else (X[i, j] == 0)
               for i in range(n) for j in range(n)):
            return True
    return False


# -- Kronecker rearrangement -----------------------------------------------------

def rearranged_rank(mat, m, n) -> int:
    """Rank of the Van Loan rearrangement of an (mn x mn) matrix, in floats.

    Block (j, t) of size m x m (row block j, column block t) becomes row
    ``j + n*t`` flattened column-wise.
    """
    M = np.array(mat, dtype=float)
    rows = []
    for t in range(n):
        for j in range(n):
            rows.append(M[j * m:(j + 1) * m, t * m:(t + 1) * m].flatten(order="F"))
    return int(np.linalg.matrix_rank(np.array(rows)))


# -- determinants and facets ------------------------------------------------------

def det_cofactor(A) -> Fraction:
    """Laplace expansion along the first row; fine for n <= 5."""
    A = [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in A]
    n = len(A)
    if n == 1:
        return A[0][0]
    total = Fraction(0)
    for j in range(n):
        if A[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        total += (-1) ** j * A[0][j] * det_cofactor(minor)
    return total


def _normalize(v):
    lead = next(x for x in v if x != 0)
    return tuple(x / abs(lead) for x in v)


def facets_brute(G) -> set:
    """Facet normals of a full-dimensional pointed cone by trying every
    (n-1)-subset of generators: the normal from cofactors must be one-signed on
    all generators."""
    from itertools import combinations
    G = frac_matrix(G)
    n = len(G)
    cols = [[G[i][j] for i in range(n)] for j in range(len(G[0]))]
    found = set()
    for sub in combinations(cols, n - 1):
        # normal: cofactors of the matrix with rows = sub plus a free last row
        normal = []
        for k in range(n):
            minor = [[v[i] for i in range(n) if i != k] for v in sub]
            normal.append((-1) ** (n - 1 + k) * det_cofactor(minor) if minor else Fraction(1))
        if all(x == 0 for x in normal):
            continue
        dots = [sum((a * b for a, b in zip(normal, g)), Fraction(0)) for g in cols]
        if all(d >= 0 for d in dots):
            found.add(_normalize(normal))
        elif all(d <= 0 for d in dots):
            found.add(_normalize([-x for x in normal]))
    return found
