"""Exact rational matrix kernel.

Matrices are 2-D numpy arrays of ``dtype=object`` whose entries are
``gmpy2.mpq`` rationals; vectors are 1-D arrays of the same kind.  No floating
point value is ever produced.  ``vec`` uses COLUMN stacking throughout the
package, so that ``vec(X @ A @ Y) == kron(Y.T, X) @ vec(A)``.

Text format for matrices (shared by every file reader in the package): one
row per line, entries separated by whitespace, each entry an integer or
``p/q`` with ``q > 0``.  Lines starting with ``#`` and blank lines are ignored.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Integral

import numpy as np
from gmpy2 import gcd as _gcd, mpq, mpz

Rational = type(mpq())

ZERO = mpq(0)
ONE = mpq(1)

_ENTRY = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


class SemipositivityError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(SemipositivityError, ValueError):
    """Shapes do not conform."""


class SingularMatrixError(SemipositivityError, ValueError):
    """Matrix has no inverse."""


class CapacityError(SemipositivityError, ValueError):
    """Input exceeds the sizes the exact algorithms are meant for."""


class ParseError(SemipositivityError, ValueError):
    """Malformed text input."""


class HypothesisError(SemipositivityError, ValueError):
    """A precondition of the underlying theorem is not met."""


def rational(x) -> Rational:
    """Convert *x* to an exact rational.

    Accepts integers, ``Fraction``, ``mpq``/``mpz`` and strings of the form
    ``"p"`` or ``"p/q"``.  Floats are rejected: they would silently smuggle a
    binary approximation into exact computations.
    """
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, (Integral, type(mpz()))):
        return mpq(int(x))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        m = _ENTRY.match(x.strip())
        if m is None:
            raise ParseError(f"not an integer or p/q rational: {x!r}")
        num, den = m.group(1), m.group(2)
        if den is not None and int(den) == 0:
            raise ParseError(f"zero denominator in {x!r}")
        return mpq(int(num), int(den) if den is not None else 1)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def rmatrix(data) -> np.ndarray:
    """Build a read-only 2-D rational matrix from nested sequences or an array."""
    arr = np.asarray(data, dtype=object)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError("matrices must have at least one row and one column")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = rational(v)
    return _freeze(out)


def rvector(data) -> np.ndarray:
    arr = np.asarray(data, dtype=object)
    if arr.ndim != 1:
        raise DimensionError(f"expected a vector, got ndim={arr.ndim}")
    out = np.empty(arr.shape, dtype=object)
    for i, v in enumerate(arr):
        out[i] = rational(v)
    return _freeze(out)


def identity(n: int) -> np.ndarray:
    out = np.full((n, n), ZERO, dtype=object)
    for i in range(n):
        out[i, i] = ONE
    return _freeze(out)


def zeros(m: int, n: int) -> np.ndarray:
    return _freeze(np.full((m, n), ZERO, dtype=object))


def ones(m: int, n: int) -> np.ndarray:
    return _freeze(np.full((m, n), ONE, dtype=object))


def unit(m: int, n: int, i: int, j: int) -> np.ndarray:
    """The matrix unit E_ij (0-based indices)."""
    out = np.full((m, n), ZERO, dtype=object)
    out[i, j] = ONE
    return _freeze(out)


def _integer_rows(A) -> list[list]:
    """Rows of *A* scaled by positive integers so that all entries are mpz."""
    rows = []
    for row in np.asarray(A, dtype=object):
        den = mpz(1)
        for v in row:
            d = rational(v).denominator
            den = den * d // _gcd(den, d)
        rows.append([rational(v).numerator * (den // rational(v).denominator) for v in row])
    return rows


def _bareiss(rows: list[list]) -> tuple[int, mpz, int]:
    """Fraction-free elimination in place; returns (rank, last pivot, row swaps)."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    prev = mpz(1)
    r = 0
    swaps = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            swaps += 1
        p = rows[r][c]
        for i in range(r + 1, m):
            f = rows[i][c]
            ri = rows[i]
            rr = rows[r]
            for k in range(c + 1, n):
                ri[k] = (p * ri[k] - f * rr[k]) // prev
            ri[c] = mpz(0)
        prev = p
        r += 1
        if r == m:
            break
    return r, prev, swaps


def rank(A) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    A = np.asarray(A, dtype=object)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.size == 0:
        return 0
    r, _, _ = _bareiss(_integer_rows(A))
    return r


def det(A) -> Rational:
    A = np.asarray(A, dtype=object)
    n, k = A.shape
    if n != k:
        raise DimensionError("determinant of a non-square matrix")
    scale = mpq(1)
    for row in A:
        den = mpz(1)
        for v in row:
            d = rational(v).denominator
            den = den * d // _gcd(den, d)
        scale *= den
    rows = _integer_rows(A)
    r, last, swaps = _bareiss(rows)
    if r < n:
        return ZERO
    d = mpq(rows[n - 1][n - 1])
    return (-d if swaps % 2 else d) / scale


def inverse(A) -> np.ndarray:
    """Exact inverse by Gauss-Jordan elimination; raises SingularMatrixError."""
    A = np.asarray(A, dtype=object)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"inverse of a non-square matrix {A.shape}")
    n = A.shape[0]
    aug = [[rational(v) for v in A[i]] + [ONE if j == i else ZERO for j in range(n)]
           for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise SingularMatrixError(f"matrix is singular (rank < {n})")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        rc = [v / p for v in aug[c]]
        aug[c] = rc
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], rc)]
    return _freeze(np.array([row[n:] for row in aug], dtype=object))


def is_invertible(A) -> bool:
    A = np.asarray(A, dtype=object)
    return A.shape[0] == A.shape[1] and rank(A) == A.shape[0]


def kron(A, B) -> np.ndarray:
    """Kronecker product; block (i, j) of the result is ``A[i, j] * B``."""
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    p, q = A.shape
    r, s = B.shape
    out = np.empty((p * r, q * s), dtype=object)
    for i in range(p):
        for j in range(q):
            out[i * r:(i + 1) * r, j * s:(j + 1) * s] = A[i, j] * B
    return _freeze(out)


def vec(A) -> np.ndarray:
    """Column-stacked vector: ``vec(A)[j*m + i] == A[i, j]``."""
    A = np.asarray(A, dtype=object)
    return _freeze(A.reshape(-1, order="F").copy())


def unvec(v, m: int, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=object).reshape(-1)
    if v.shape[0] != m * n:
        raise DimensionError(f"vector of length {v.shape[0]} cannot fill a {m}x{n} matrix")
    return _freeze(v.reshape((m, n), order="F").copy())


def primitive(v) -> list:
    """Positive multiple of *v* with coprime integer entries (zero stays zero)."""
    v = [rational(x) for x in v]
    den = mpz(1)
    for x in v:
        den = den * x.denominator // _gcd(den, x.denominator)
    ints = [x.numerator * (den // x.denominator) for x in v]
    g = mpz(0)
    for x in ints:
        g = _gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def is_nonnegative(A) -> bool:
    return bool(np.all(np.asarray(A, dtype=object) >= 0))


def is_positive(A) -> bool:
    return bool(np.all(np.asarray(A, dtype=object) > 0))


def is_zero(A) -> bool:
    return bool(np.all(np.asarray(A, dtype=object) == 0))


def format_rational(x) -> str:
    x = rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_strings(A):
    """Nested lists of ``"p/q"`` strings, for JSON output."""
    A = np.asarray(A, dtype=object)
    if A.ndim == 1:
        return [format_rational(v) for v in A]
    return [[format_rational(v) for v in row] for row in A]


def parse_rows(lines) -> list[list[Rational]]:
    rows = []
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            rows.append([rational(tok) for tok in s.split()])
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return rows


def parse_matrix(text: str) -> np.ndarray:
    rows = parse_rows(text.splitlines())
    if not rows:
        raise ParseError("no matrix rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError("rows have different lengths")
    return rmatrix(rows)


def format_matrix(A) -> str:
    return "\n".join(" ".join(row) for row in to_strings(A)) + "\n"


def read_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def random_rational(rng: np.random.Generator, bound: int = 9, positive: bool = False) -> Rational:
    """A rational ``p/q`` with ``|p| <= bound`` and ``1 <= q <= bound``."""
    q = int(rng.integers(1, bound + 1))
    if positive:
        p = int(rng.integers(1, bound + 1))
    else:
        p = int(rng.integers(-bound, bound + 1))
    return mpq(p, q)


def random_matrix(rng: np.random.Generator, m: int, n: int, bound: int = 9,
                  integer: bool = False) -> np.ndarray:
    if integer:
        return rmatrix(rng.integers(-bound, bound + 1, size=(m, n)).tolist())
    return rmatrix([[random_rational(rng, bound) for _ in range(n)] for _ in range(m)])
