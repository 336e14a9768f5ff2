"""Semipositivity over pairs of polyhedral cones.

A matrix ``A`` (``m x n``) is ``(K1, K2)``-semipositive when some ``x`` in the
interior of ``K1`` has ``A @ x`` in the interior of ``K2``.  Everything is
reduced to the orthant instance ``M = facets(K2) @ A @ generators(K1)`` and
decided by :func:`semipositive.lpcert.strict_feasibility`, so each verdict
carries either an interior witness or a Farkas certificate.

Minimal semipositivity uses the left-inverse characterisation: ``A`` is
minimally semipositive when it is semipositive and has a
``(K2, K1)``-nonnegative left inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np
from gmpy2 import mpq

from .cones import (PolyCone, contains_interior, dual, extend_to_simplicial, interior_point,
                    is_nonneg_map, is_simplicial, maps_interior_to_interior, orthant,
                    require_proper)
from .core import (ONE, ZERO, CapacityError, DimensionError, HypothesisError,
                   SemipositivityError, _freeze, identity, inverse, is_invertible, kron,
                   ones, primitive, random_rational, rank, rmatrix, unit, unvec, vec)
from .lpcert import StrictWitness, nonneg_solution, strict_feasibility

SEMIPOSITIVE = "Semipositive"
NOT_SEMIPOSITIVE = "NotSemipositive"
MINIMAL = "MinimallySemipositive"
REDUNDANT = "RedundantlySemipositive"


@dataclass(frozen=True)
class SPVerdict:
    """Outcome of a semipositivity test.

    ``witness`` is set when ``kind == "Semipositive"`` and ``certificate``
    otherwise.
    """

    kind: str
    witness: np.ndarray | None = None
    certificate: np.ndarray | None = None

    @property
    def semipositive(self) -> bool:
        return self.kind == SEMIPOSITIVE

    def __bool__(self) -> bool:
        return self.semipositive

    def verify(self, A, K1: PolyCone | None = None, K2: PolyCone | None = None) -> bool:
        A = np.asarray(A, dtype=object)
        K1, K2 = _default_cones(A, K1, K2)
        if self.semipositive:
            x = self.witness
            return (x is not None and self.certificate is None and contains_interior(K1, x)
                    and contains_interior(K2, A.dot(x)))
        y = self.certificate
        if y is None or self.witness is not None or not any(v != 0 for v in y):
            return False
        return (bool(np.all(K2.generators.T.dot(y) >= 0))
                and bool(np.all(K1.generators.T.dot(-A.T.dot(y)) >= 0)))


@dataclass(frozen=True)
class SPClass:
    """Minimal / redundant / not semipositive, with the supporting objects."""

    kind: str
    left_inverse: np.ndarray | None = None
    witness: np.ndarray | None = None
    certificate: np.ndarray | None = None

    @property
    def semipositive(self) -> bool:
        return self.kind != NOT_SEMIPOSITIVE

    @property
    def minimal(self) -> bool:
        return self.kind == MINIMAL


def _scaled(v) -> np.ndarray:
    # positive scaling keeps witnesses and certificates valid; print coprime integers
    return _freeze(np.array([mpq(x) for x in primitive(v)], dtype=object))


def _default_cones(A, K1, K2):
    m, n = np.asarray(A, dtype=object).shape
    if K1 is None:
        K1 = orthant(n)
    if K2 is None:
        K2 = orthant(m)
    if K1.dim != n or K2.dim != m:
        raise DimensionError(f"a {m}x{n} matrix needs cones in R^{n} and R^{m}, "
                             f"got R^{K1.dim} and R^{K2.dim}")
    return K1, K2


def _reduced(A, K1: PolyCone, K2: PolyCone) -> np.ndarray:
    M = A
    if not K2.is_orthant:
        M = K2.facets.dot(M)
    if not K1.is_orthant:
        M = M.dot(K1.generators)
    return M


def classify_sp(A, K1: PolyCone | None = None, K2: PolyCone | None = None) -> SPVerdict:
    """Decide ``(K1, K2)``-semipositivity of *A* (cones default to orthants).

    Examples
    --------
    >>> classify_sp([[1, -1], [-1, 1]]).kind
    'NotSemipositive'
    """
    A = rmatrix(A)
    K1, K2 = _default_cones(A, K1, K2)
    if not (K1.is_orthant and K2.is_orthant):
        require_proper(K1, K2)
    res = strict_feasibility(_reduced(A, K1, K2))
    if isinstance(res, StrictWitness):
        x = res.lam if K1.is_orthant else K1.generators.dot(res.lam)
        v = SPVerdict(SEMIPOSITIVE, witness=_scaled(x))
    else:
        y = res.y if K2.is_orthant else K2.facets.T.dot(res.y)
        v = SPVerdict(NOT_SEMIPOSITIVE, certificate=_scaled(y))
    if not v.verify(A, K1, K2):
        raise AssertionError("semipositivity verdict failed exact verification")
    return v


def is_sp(A, K1: PolyCone | None = None, K2: PolyCone | None = None) -> bool:
    return classify_sp(A, K1, K2).semipositive


def _left_inverse(A, K1: PolyCone, K2: PolyCone):
    """A ``(K2, K1)``-nonnegative ``B`` with ``B @ A = I``, or None."""
    m, n = A.shape
    I = identity(n)
    if K1.is_orthant and K2.is_orthant:
        Z = nonneg_solution(A.T, I)
        return None if Z is None else _freeze(Z.T.copy())
    G1 = K1.generators
    F2 = K2.facets
    # cheap pass: B = G1 Z F2 with Z >= 0
    E = kron((F2.dot(A)).T, G1)
    z = nonneg_solution(E, vec(I))
    if z is not None:
        Z = unvec(z[:, 0], G1.shape[1], F2.shape[0])
        return _freeze(G1.dot(Z).dot(F2))
    # complete formulation: B = P - N free, B A = I, F1 B G2 >= 0 via slack S
    F1 = K1.facets
    G2 = K2.generators
    KA = kron(A.T, identity(n))
    KC = kron(G2.T, F1)
    nb = n * m
    ns = KC.shape[0]
    top = np.hstack([KA, -KA, np.full((KA.shape[0], ns), ZERO, dtype=object)])
    S = -np.array(identity(ns), dtype=object)
    bottom = np.hstack([KC, -KC, S])
    E = np.vstack([top, bottom])
    F = np.concatenate([vec(I), np.full(ns, ZERO, dtype=object)]).reshape(-1, 1)
    sol = nonneg_solution(E, F)
    if sol is None:
        return None
    b = sol[:nb, 0] - sol[nb:2 * nb, 0]
    return unvec(b, n, m)


def classify_msp(A, K1: PolyCone | None = None, K2: PolyCone | None = None) -> SPClass:
    """Minimal, redundant or not semipositive, by the left-inverse criterion."""
    A = rmatrix(A)
    m, n = A.shape
    if m < n:
        raise DimensionError(f"minimal semipositivity needs m >= n, got {m}x{n}")
    K1, K2 = _default_cones(A, K1, K2)
    v = classify_sp(A, K1, K2)
    if not v.semipositive:
        return SPClass(NOT_SEMIPOSITIVE, certificate=v.certificate)
    B = _left_inverse(A, K1, K2)
    if B is None:
        return SPClass(REDUNDANT, witness=v.witness)
    if not (np.array_equal(B.dot(A), identity(n)) and is_nonneg_map(B, K2, K1)):
        raise AssertionError("left inverse failed exact verification")
    return SPClass(MINIMAL, left_inverse=B, witness=v.witness)


def cross_check_msp_by_deletion(A) -> bool:
    """Column-deletion form of minimal semipositivity on orthants.

    True iff ``A`` is semipositive and no matrix formed from a proper subset of
    its columns is.  Adding columns preserves semipositivity, so only the
    subsets with one column removed need testing.
    """
    A = rmatrix(A)
    m, n = A.shape
    if m < n:
        raise DimensionError(f"needs m >= n, got {m}x{n}")
    if n > 6:
        raise CapacityError("column-deletion check is limited to n <= 6")
    if not classify_sp(A).semipositive:
        return False
    if n == 1:
        return True
    for j in range(n):
        cols = [k for k in range(n) if k != j]
        if classify_sp(A[:, cols]).semipositive:
            return False
    return True


def is_left_sp(A, K1: PolyCone | None = None, K2: PolyCone | None = None,
               strict: bool = False) -> SPVerdict:
    """Left semipositivity: some ``x`` in ``dual(K2)`` with ``A.T @ x`` interior to ``dual(K1)``.

    The witness returned always lies in the interior of ``dual(K2)``, so it
    serves both the closed definition and the ``strict=True`` variant; the two
    variants are equivalent because a small interior perturbation of ``x``
    keeps ``A.T @ x`` interior.  The negative certificate is a nonzero ``z`` in
    ``K1`` with ``-A @ z`` in ``K2``.
    """
    A = rmatrix(A)
    K1, K2 = _default_cones(A, K1, K2)
    if not (K1.is_orthant and K2.is_orthant):
        require_proper(K1, K2)
    res = strict_feasibility(_reduced(A, K1, K2).T)
    if isinstance(res, StrictWitness):
        x = res.lam if K2.is_orthant else K2.facets.T.dot(res.lam)
        v = SPVerdict(SEMIPOSITIVE, witness=_scaled(x))
    else:
        z = res.y if K1.is_orthant else K1.generators.dot(res.y)
        v = SPVerdict(NOT_SEMIPOSITIVE, certificate=_scaled(z))
    if not verify_left_sp(v, A, K1, K2, strict):
        raise AssertionError("left semipositivity verdict failed exact verification")
    return v


def verify_left_sp(v: SPVerdict, A, K1: PolyCone, K2: PolyCone, strict: bool = False) -> bool:
    A = np.asarray(A, dtype=object)
    if v.semipositive:
        x = v.witness
        d2 = K2.generators.T.dot(x)
        inside = bool(np.all(d2 > 0)) if strict else bool(np.all(d2 >= 0))
        return inside and bool(np.all(K1.generators.T.dot(A.T.dot(x)) > 0))
    z = v.certificate
    return (any(c != 0 for c in z) and bool(np.all(K1.facets.dot(z) >= 0))
            and bool(np.all(K2.facets.dot(-A.dot(z)) >= 0)))


def sp_2x2_closed_form(A) -> bool:
    """Semipositivity of a 2x2 matrix over the orthants by sign patterns alone.

    ``A`` is semipositive iff it has a positive column, or it looks like
    ``[[a, -b], [-c, d]]`` or ``[[-a, b], [c, -d]]`` with ``a, d > 0``,
    ``b, c >= 0`` and ``ad - bc > 0`` (entries renamed to suit each form).
    """
    A = rmatrix(A)
    if A.shape != (2, 2):
        raise DimensionError("expected a 2x2 matrix")
    (p, q), (r, s) = A.tolist()
    if (p > 0 and r > 0) or (q > 0 and s > 0):
        return True
    if p > 0 and s > 0 and q <= 0 and r <= 0 and p * s - q * r > 0:
        return True
    if q > 0 and r > 0 and p <= 0 and s <= 0 and q * r - p * s > 0:
        return True
    return False


def sp_via_row_submatrices(A) -> bool:
    """Orthant semipositivity decided square block by square block.

    An ``m x n`` matrix with ``m >= n`` is semipositive iff every ``n x n``
    submatrix made of ``n`` of its rows is.
    """
    A = rmatrix(A)
    m, n = A.shape
    if m < n:
        raise DimensionError(f"needs m >= n, got {m}x{n}")
    if comb(m, n) > 5000:
        raise CapacityError(f"C({m},{n}) row subsets exceeds the limit of 5000")
    return all(classify_sp(A[list(rows), :]).semipositive for rows in combinations(range(m), n))


def conjugate_sp(A, S1, S2, K1: PolyCone, K2: PolyCone) -> np.ndarray:
    """``S1 @ A @ inv(S2)``, carrying orthant semipositivity to ``(K1, K2)``.

    Requires ``S1`` to map the open orthant into the interior of ``K2`` and
    ``S2`` to be an invertible map of the orthant into ``K1``.
    """
    A = rmatrix(A)
    m, n = A.shape
    if not maps_interior_to_interior(S1, orthant(m), K2):
        raise HypothesisError("S1 must map the open orthant into the interior of K2")
    if not (is_invertible(S2) and is_nonneg_map(S2, orthant(n), K1)):
        raise HypothesisError("S2 must be invertible and map the orthant into K1")
    return _freeze(np.asarray(S1, dtype=object).dot(A).dot(inverse(S2)))


def conjugate_back(B, Q1, Q2, K1: PolyCone, K2: PolyCone) -> np.ndarray:
    """``Q1 @ B @ inv(Q2)``, carrying ``(K1, K2)``-semipositivity to the orthants."""
    B = rmatrix(B)
    m, n = B.shape
    if not maps_interior_to_interior(Q1, K2, orthant(m)):
        raise HypothesisError("Q1 must map the interior of K2 into the open orthant")
    if not (is_invertible(Q2) and is_nonneg_map(Q2, K1, orthant(n))):
        raise HypothesisError("Q2 must be invertible and map K1 into the orthant")
    return _freeze(np.asarray(Q1, dtype=object).dot(B).dot(inverse(Q2)))


def _transport_pair(K1: PolyCone, K2: PolyCone):
    """Invertible ``S`` into ``K1`` and ``T`` into ``K2`` with ``T`` interior-preserving."""
    S = extend_to_simplicial(K1, interior_point(K1))
    T = extend_to_simplicial(K2, interior_point(K2))
    return S, T


def _check_basis(mats, m: int, n: int) -> None:
    stacked = np.array([vec(B) for B in mats], dtype=object)
    if len(mats) != m * n or rank(stacked) != m * n:
        raise AssertionError("basis elements are not linearly independent")


def sp_basis(m: int, n: int, K1: PolyCone | None = None,
             K2: PolyCone | None = None) -> list[np.ndarray]:
    """``m*n`` linearly independent ``(K1, K2)``-semipositive matrices.

    On the orthants these are ``J + E_ij`` (entrywise positive); other cones
    get ``T (J + E_ij) inv(S)`` with ``S, T`` from :func:`_transport_pair`.
    Order follows column stacking of the index ``(i, j)``.
    """
    K1 = orthant(n) if K1 is None else K1
    K2 = orthant(m) if K2 is None else K2
    require_proper(K1, K2)
    J = ones(m, n)
    base = [_freeze(J + unit(m, n, i, j)) for j in range(n) for i in range(m)]
    if K1.is_orthant and K2.is_orthant:
        out = base
    else:
        S, T = _transport_pair(K1, K2)
        out = [conjugate_sp(B, T, S, K1, K2) for B in base]
    for B in out:
        if not classify_sp(B, K1, K2).semipositive:
            raise AssertionError("basis element is not semipositive")
    _check_basis(out, m, n)
    return out


def _square_msp_basis(n: int) -> list[np.ndarray]:
    I = identity(n)
    half = mpq(1, 2)
    out = []
    for j in range(n):
        for i in range(n):
            if i == j:
                out.append(_freeze(I + half * unit(n, n, i, i)))
            else:
                out.append(_freeze(I - half * unit(n, n, i, j)))
    return out


def _orthant_msp_basis(m: int, n: int) -> list[np.ndarray]:
    square = _square_msp_basis(n)
    if m == n:
        return square
    k = m - n
    Jk = ones(k, n)
    out = [_freeze(np.vstack([C, Jk])) for C in square]
    I = identity(n)
    for j in range(n):
        for i in range(k):
            out.append(_freeze(np.vstack([I, Jk + unit(k, n, i, j)])))
    return out


def _msp_transport(m: int, n: int, K1: PolyCone, K2: PolyCone):
    """Matrices ``(P, Q)`` such that ``A -> P @ A @ Q`` carries orthant MSP to ``(K1, K2)``."""
    S = extend_to_simplicial(K1, interior_point(K1))
    if m > n:
        if not is_simplicial(K2):
            raise HypothesisError("for m > n the cone K2 must be simplicial")
        T = K2.generators
        return T, inverse(S)
    D = dual(K2)
    T = extend_to_simplicial(D, interior_point(D))
    return inverse(T.T), inverse(S)


def msp_basis(m: int, n: int, K1: PolyCone | None = None,
              K2: PolyCone | None = None) -> list[np.ndarray]:
    """``m*n`` linearly independent minimally semipositive matrices (``m >= n``).

    Square orthant case: ``I + E_ii/2`` and ``I - E_ij/2``.  For ``m > n``
    each square element is stacked on an all-ones block, and the remaining
    ``(m - n) n`` elements are ``[I; J + E_ij]``.  Other cones are reached by
    the simplicial transports; ``m > n`` needs ``K2`` simplicial.
    """
    if m < n:
        raise DimensionError(f"needs m >= n, got {m}x{n}")
    K1 = orthant(n) if K1 is None else K1
    K2 = orthant(m) if K2 is None else K2
    require_proper(K1, K2)
    base = _orthant_msp_basis(m, n)
    if K1.is_orthant and K2.is_orthant:
        out = base
    else:
        P, Q = _msp_transport(m, n, K1, K2)
        out = [_freeze(P.dot(B).dot(Q)) for B in base]
    for B in out:
        if not classify_msp(B, K1, K2).minimal:
            raise AssertionError("basis element is not minimally semipositive")
    _check_basis(out, m, n)
    return out


def decompose_sum_sp(A, K1: PolyCone | None = None, K2: PolyCone | None = None):
    """Split *A* as ``B + C`` with both parts semipositive (needs ``n >= 2``).

    On the orthants ``C`` has every row equal to ``(-t, 1, 0, ...)`` and
    ``B = A - C`` then has a positive first column.
    """
    A = rmatrix(A)
    m, n = A.shape
    if n < 2:
        raise HypothesisError("a sum decomposition needs at least two columns")
    K1, K2 = _default_cones(A, K1, K2)
    require_proper(K1, K2)
    orth = K1.is_orthant and K2.is_orthant
    if orth:
        A0 = A
    else:
        S, T = _transport_pair(K1, K2)
        A0 = inverse(T).dot(A).dot(S)
    t = 1 + max(ZERO, -min(A0[:, 0]))
    for _ in range(64):
        row = [-t, ONE] + [ZERO] * (n - 2)
        C0 = np.array([row] * m, dtype=object)
        B0 = A0 - C0
        if orth:
            B, C = B0, C0
        else:
            B, C = T.dot(B0).dot(inverse(S)), T.dot(C0).dot(inverse(S))
        if (np.array_equal(B + C, A) and classify_sp(B, K1, K2).semipositive
                and classify_sp(C, K1, K2).semipositive):
            return _freeze(B), _freeze(C)
        t *= 2
    raise SemipositivityError("sum decomposition failed verification")


def decompose_diff_msp(A, K1: PolyCone | None = None, K2: PolyCone | None = None):
    """Split *A* as ``C1 - C2`` with both parts minimally semipositive.

    ``C2 = t W`` with ``W = inv(I + J)`` (stacked on an all-ones block when
    ``m > n``) and ``C1 = A + C2``; ``t`` doubles until both parts pass.
    """
    A = rmatrix(A)
    m, n = A.shape
    if m < n:
        raise DimensionError(f"needs m >= n, got {m}x{n}")
    K1, K2 = _default_cones(A, K1, K2)
    require_proper(K1, K2)
    orth = K1.is_orthant and K2.is_orthant
    W = inverse(identity(n) + ones(n, n))
    if m > n:
        W = np.vstack([W, ones(m - n, n)])
    if orth:
        A0 = A
    else:
        P, Q = _msp_transport(m, n, K1, K2)
        A0 = inverse(P).dot(A).dot(inverse(Q))
    t = ONE
    for _ in range(200):
        C2_0 = t * W
        C1_0 = A0 + C2_0
        if orth:
            C1, C2 = C1_0, C2_0
        else:
            C1, C2 = P.dot(C1_0).dot(Q), P.dot(C2_0).dot(Q)
        if (np.array_equal(C1 - C2, A) and classify_msp(C1, K1, K2).minimal
                and classify_msp(C2, K1, K2).minimal):
            return _freeze(C1), _freeze(C2)
        t *= 2
    raise SemipositivityError("difference decomposition failed verification")


def sample_sp(m: int, n: int, K1: PolyCone | None = None, K2: PolyCone | None = None,
              seed=0, bound: int = 9) -> np.ndarray:
    """A random ``(K1, K2)``-semipositive ``m x n`` matrix, deterministic in *seed*.

    Draws an interior point ``x`` of ``K1`` and an interior target ``v`` of
    ``K2`` (positive combinations of generators), then corrects random rows so
    that ``A @ x == v`` exactly.
    """
    K1 = orthant(n) if K1 is None else K1
    K2 = orthant(m) if K2 is None else K2
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    lam = np.array([random_rational(rng, bound, positive=True) for _ in range(K1.num_rays)],
                   dtype=object)
    mu = np.array([random_rational(rng, bound, positive=True) for _ in range(K2.num_rays)],
                  dtype=object)
    x = K1.generators.dot(lam)
    v = K2.generators.dot(mu)
    xx = x.dot(x)
    rows = []
    for i in range(m):
        r = np.array([random_rational(rng, bound) for _ in range(n)], dtype=object)
        rows.append(r - ((r.dot(x) - v[i]) / xx) * x)
    A = rmatrix(rows)
    if not classify_sp(A, K1, K2).semipositive:
        raise AssertionError("sampled matrix is not semipositive")
    return A
