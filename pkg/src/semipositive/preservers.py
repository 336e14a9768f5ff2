"""Linear maps on ``m x n`` matrices and semipositivity preservers.

A :class:`LinearMap` stores the ``mn x mn`` matrix acting on column-stacked
coordinates, so ``apply(L, A) == unvec(L.mat @ vec(A))`` and the map
``A -> X @ A @ Y`` has matrix ``kron(Y.T, X)``.

Kronecker rearrangement used by :func:`kronecker_factor`::

    R[s*m + r, j*n + t] = mat[j*m + r, t*m + s]

the coefficient of ``A[s, t]`` in ``L(A)[r, j]``.  For ``L(A) = X A Y`` this is
``X[r, s] * Y[t, j]``, i.e. ``R = outer(vec(X), vec(Y))``, so the map has the
form ``XAY`` exactly when ``R`` has rank one.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cones import (PolyCone, is_automorphism, is_k_inverse_nonnegative, is_nonneg_map,
                    is_simplicial, maps_interior_to_interior, orthant, require_proper)
from .core import (ONE, ZERO, DimensionError, HypothesisError, ParseError, _freeze,
                   format_rational, identity, inverse, is_invertible, kron,
                   parse_rows, random_rational, rank, rmatrix, unit, unvec, vec)
from .patterns import is_monomial, is_row_positive
from .semipos import classify_sp, sample_sp

XAY = "XAY"
XATY = "XAtY"


@dataclass(frozen=True)
class LinearMap:
    m: int
    n: int
    mat: np.ndarray

    def __post_init__(self):
        k = self.m * self.n
        if self.mat.shape != (k, k):
            raise DimensionError(f"a map on {self.m}x{self.n} matrices needs a {k}x{k} matrix, "
                                 f"got {self.mat.shape}")

    def __call__(self, A) -> np.ndarray:
        return apply(self, A)

    def __eq__(self, other):
        return (isinstance(other, LinearMap) and (self.m, self.n) == (other.m, other.n)
                and np.array_equal(self.mat, other.mat))

    __hash__ = None


def linear_map(m: int, n: int, mat) -> LinearMap:
    return LinearMap(m, n, rmatrix(mat))


def from_xay(X, Y) -> LinearMap:
    """The map ``A -> X @ A @ Y``."""
    X = rmatrix(X)
    Y = rmatrix(Y)
    if X.shape[0] != X.shape[1] or Y.shape[0] != Y.shape[1]:
        raise DimensionError("X and Y must be square")
    return LinearMap(X.shape[0], Y.shape[0], kron(Y.T, X))


def identity_map(m: int, n: int) -> LinearMap:
    return LinearMap(m, n, identity(m * n))


def transpose_map(n: int) -> LinearMap:
    """``A -> A.T`` on ``n x n`` matrices (the commutation matrix)."""
    k = n * n
    P = np.full((k, k), ZERO, dtype=object)
    for i in range(n):
        for j in range(n):
            # A[i, j] sits at j*n + i and lands at position (j, i), index i*n + j
            P[i * n + j, j * n + i] = ONE
    return LinearMap(n, n, _freeze(P))


def apply(L: LinearMap, A) -> np.ndarray:
    A = rmatrix(A)
    if A.shape != (L.m, L.n):
        raise DimensionError(f"map acts on {L.m}x{L.n} matrices, got {A.shape}")
    return unvec(L.mat.dot(vec(A)), L.m, L.n)


def compose(L1: LinearMap, L2: LinearMap) -> LinearMap:
    """``A -> L1(L2(A))``."""
    if (L1.m, L1.n) != (L2.m, L2.n):
        raise DimensionError("maps act on different spaces")
    return LinearMap(L1.m, L1.n, _freeze(L1.mat.dot(L2.mat)))


def inverse_map(L: LinearMap) -> LinearMap:
    return LinearMap(L.m, L.n, inverse(L.mat))


def is_invertible_map(L: LinearMap) -> bool:
    return is_invertible(L.mat)


def parse_map(text: str) -> LinearMap:
    """``shape m n`` followed by the ``mn`` rows of the map matrix."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ParseError("empty map file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "shape":
        raise ParseError("map file must start with 'shape m n'")
    try:
        m, n = int(head[1]), int(head[2])
    except ValueError:
        raise ParseError("shape entries must be integers") from None
    if m < 1 or n < 1:
        raise ParseError("shape entries must be positive")
    rows = parse_rows(lines[1:])
    k = m * n
    if len(rows) != k or any(len(r) != k for r in rows):
        raise ParseError(f"expected {k} rows of {k} entries")
    return LinearMap(m, n, rmatrix(rows))


def read_map(path) -> LinearMap:
    with open(path, encoding="utf-8") as fh:
        return parse_map(fh.read())


def format_map(L: LinearMap) -> str:
    lines = [f"shape {L.m} {L.n}"]
    for row in L.mat:
        lines.append(" ".join(format_rational(v) for v in row))
    return "\n".join(lines) + "\n"


# -- Kronecker structure --------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """``L(A) = sign * X @ A @ Y`` (kind ``XAY``) or ``sign * X @ A.T @ Y`` (``XAtY``).

    ``X`` has first nonzero entry (column-stacked order) equal to 1 and ``Y``
    has a positive first nonzero entry.
    """

    X: np.ndarray
    Y: np.ndarray
    sign: int
    kind: str = XAY

    def signed(self) -> tuple[np.ndarray, np.ndarray]:
        """``(sign * X, Y)``: a pair with ``L(A) = X A Y`` exactly."""
        return _freeze(self.sign * self.X), self.Y

    def to_map(self) -> LinearMap:
        Xs, Y = self.signed()
        L = from_xay(Xs, Y)
        if self.kind == XATY:
            L = compose(L, transpose_map(L.n))
        return L


def rearrange(L: LinearMap) -> np.ndarray:
    m, n = L.m, L.n
    R = np.empty((m * m, n * n), dtype=object)
    for r in range(m):
        for s in range(m):
            for t in range(n):
                for j in range(n):
                    R[s * m + r, j * n + t] = L.mat[j * m + r, t * m + s]
    return _freeze(R)


def _first_nonzero(v) -> int | None:
    return next((i for i, x in enumerate(v) if x != 0), None)


def _normalize(X, Y, kind: str, L: LinearMap) -> Factorization | None:
    """Scale to the documented normal form and confirm it rebuilds *L* exactly."""
    vx = vec(X)
    vy = vec(Y)
    ix = _first_nonzero(vx)
    iy = _first_nonzero(vy)
    if ix is None or iy is None:
        return None
    c = vx[ix]
    X = X / c
    Y = Y * c
    sign = 1 if vec(Y)[iy] > 0 else -1
    Y = Y * sign
    f = Factorization(_freeze(np.asarray(X, dtype=object)), _freeze(np.asarray(Y, dtype=object)),
                      sign, kind)
    if f.to_map() != L:
        return None
    return f


def _factor_xay(L: LinearMap, kind: str, target: LinearMap) -> Factorization | None:
    R = rearrange(L)
    if rank(R) != 1:
        return None
    flat = [(i, j) for i in range(R.shape[0]) for j in range(R.shape[1]) if R[i, j] != 0]
    a, b = flat[0]
    X = unvec(R[:, b], L.m, L.m)
    Y = unvec(R[a, :] / R[a, b], L.n, L.n)
    return _normalize(X, Y, kind, target)


def kronecker_factor(L: LinearMap) -> Factorization | None:
    """Factor ``L`` as ``A -> sign * X A Y`` via the rank-one rearrangement, or None."""
    return _factor_xay(L, XAY, L)


def kronecker_factor_transposed(L: LinearMap) -> Factorization | None:
    """Factor ``L`` as ``A -> sign * X A.T Y`` (square matrices only), or None."""
    if L.m != L.n:
        return None
    LT = compose(L, transpose_map(L.n))
    return _factor_xay(LT, XATY, L)


def recover_xy(L: LinearMap) -> Factorization | None:
    """Read ``X`` and ``Y`` off the images of matrix units, then verify.

    ``X[r, s]`` is taken from entry ``(r, j*)`` of ``L(E_{s, t*})`` and
    ``Y[t, j]`` from entry ``(r*, j)`` of ``L(E_{s*, t})``, with the pivots the
    first indices (in order, ``(0, 0)`` first) giving nonzero values.  The
    result is accepted only if it rebuilds ``L`` exactly.
    """
    m, n = L.m, L.n
    images = {}

    def image(s, t):
        if (s, t) not in images:
            images[(s, t)] = apply(L, unit(m, n, s, t))
        return images[(s, t)]

    X = None
    for t_star in range(n):
        for j_star in range(n):
            cand = np.array([[image(s, t_star)[r, j_star] for s in range(m)] for r in range(m)],
                            dtype=object)
            if np.any(cand != 0):
                X = cand
                break
        if X is not None:
            break
    if X is None:
        return None
    r_star, s_star = next((r, s) for s in range(m) for r in range(m) if X[r, s] != 0)
    piv = X[r_star, s_star]
    Y = np.array([[image(s_star, t)[r_star, j] / piv for j in range(n)] for t in range(n)],
                 dtype=object)
    return _normalize(X, Y, XAY, L)


@dataclass(frozen=True)
class RankOneResult:
    passed: bool
    column: int | None = None
    x: np.ndarray | None = None
    A: np.ndarray | None = None
    image_rank: int | None = None


def rank_one_image_test(L: LinearMap, K1: PolyCone | None = None, K2: PolyCone | None = None,
                        witness_samples: int = 2, seed=0) -> RankOneResult:
    """Check ``rank(L(x e_i^T)) == 1`` for ``x = 1`` and random positive ``x``.

    The matrices ``x e_i^T`` with ``x > 0`` are semipositive rank-one matrices;
    an into preserver of the standard form sends each of them to a rank-one
    matrix.  Passing is evidence on the sampled family only.
    """
    for K, d in ((K1, L.n), (K2, L.m)):
        if K is not None and not K.is_orthant:
            raise HypothesisError("the rank-one image test is stated for orthant cones")
        if K is not None and K.dim != d:
            raise DimensionError("cone dimension does not match the map")
    rng = np.random.default_rng(seed)
    xs = [np.full(L.m, ONE, dtype=object)]
    for _ in range(witness_samples):
        xs.append(np.array([random_rational(rng, positive=True) for _ in range(L.m)],
                           dtype=object))
    for i in range(L.n):
        for x in xs:
            A = np.outer(x, np.array([ONE if k == i else ZERO for k in range(L.n)], dtype=object))
            r = rank(apply(L, A))
            if r != 1:
                return RankOneResult(False, i, _freeze(x), _freeze(A), r)
    return RankOneResult(True)


# -- preserver predicates for A -> XAY --------------------------------------------

def _cones(X, Y, K1, K2):
    X = rmatrix(X)
    Y = rmatrix(Y)
    m, n = X.shape[0], Y.shape[0]
    if X.shape != (m, m) or Y.shape != (n, n):
        raise DimensionError("X and Y must be square")
    K1 = orthant(n) if K1 is None else K1
    K2 = orthant(m) if K2 is None else K2
    if K1.dim != n or K2.dim != m:
        raise DimensionError("cone dimensions do not match X and Y")
    require_proper(K1, K2)
    return X, Y, K1, K2


def _both_signs(pred, X, Y) -> bool:
    return pred(X, Y) or pred(_freeze(-X), _freeze(-Y))


def check_into_xay(X, Y, K1: PolyCone | None = None, K2: PolyCone | None = None) -> bool:
    """Whether ``A -> X A Y`` maps ``S(K1, K2)`` into itself.

    Holds iff ``X`` maps the interior of ``K2`` into itself and ``Y`` is
    ``K1``-inverse nonnegative, or the same for ``-X, -Y``.
    """
    X, Y, K1, K2 = _cones(X, Y, K1, K2)
    res = _both_signs(lambda a, b: maps_interior_to_interior(a, K2, K2)
                      and is_k_inverse_nonnegative(b, K1), X, Y)
    if K1.is_orthant and K2.is_orthant:
        quoted = _both_signs(lambda a, b: is_row_positive(a) and is_k_inverse_nonnegative(b, K1),
                             X, Y)
        if quoted != res:
            raise AssertionError("cone test disagrees with the row-positive orthant test")
    return res


def check_onto_xay(X, Y, K1: PolyCone | None = None, K2: PolyCone | None = None) -> bool:
    """Whether ``A -> X A Y`` maps ``S(K1, K2)`` onto itself: both factors are
    cone automorphisms, up to a common sign."""
    X, Y, K1, K2 = _cones(X, Y, K1, K2)
    res = _both_signs(lambda a, b: is_automorphism(a, K2) and is_automorphism(b, K1), X, Y)
    if K1.is_orthant and K2.is_orthant:
        quoted = _both_signs(lambda a, b: is_monomial(a) and is_monomial(b), X, Y)
        if quoted != res:
            raise AssertionError("automorphism test disagrees with the monomial orthant test")
    return res


def check_msp_into_xay(X, Y, K1: PolyCone | None = None, K2: PolyCone | None = None) -> bool:
    """Whether ``A -> X A Y`` maps ``MS(K1, K2)`` into itself (``m >= n``).

    ``m > n`` (``K2`` simplicial): ``X`` is an automorphism of ``K2`` and ``Y``
    is ``K1``-inverse nonnegative.  ``m = n``: both are inverse nonnegative
    for their cones.  Either way up to a common sign.
    """
    X, Y, K1, K2 = _cones(X, Y, K1, K2)
    m, n = X.shape[0], Y.shape[0]
    if m < n:
        raise DimensionError("minimal semipositivity needs m >= n")
    if m > n:
        if not is_simplicial(K2):
            raise HypothesisError("for m > n the cone K2 must be simplicial")
        res = _both_signs(lambda a, b: is_automorphism(a, K2) and is_k_inverse_nonnegative(b, K1),
                          X, Y)
        if K1.is_orthant and K2.is_orthant:
            quoted = _both_signs(lambda a, b: is_monomial(a) and is_k_inverse_nonnegative(b, K1),
                                 X, Y)
            if quoted != res:
                raise AssertionError("automorphism test disagrees with the monomial orthant test")
        return res
    return _both_signs(lambda a, b: is_k_inverse_nonnegative(a, K2)
                       and is_k_inverse_nonnegative(b, K1), X, Y)


def check_msp_onto_xay(X, Y, K1: PolyCone | None = None, K2: PolyCone | None = None) -> bool:
    X, Y, K1, K2 = _cones(X, Y, K1, K2)
    m, n = X.shape[0], Y.shape[0]
    if m < n:
        raise DimensionError("minimal semipositivity needs m >= n")
    if m > n and not is_simplicial(K2):
        raise HypothesisError("for m > n the cone K2 must be simplicial")
    return _both_signs(lambda a, b: is_automorphism(a, K2) and is_automorphism(b, K1), X, Y)


def conjugate_preserver(L: LinearMap, Q1, Q2, S1, S2, K1: PolyCone, K2: PolyCone) -> LinearMap:
    """The map ``A -> Q1 L(S1 A inv(S2)) inv(Q2)`` on orthant-semipositive matrices.

    If ``L`` preserves ``S(K1, K2)`` the result preserves orthant
    semipositivity.  Hypotheses: ``S2`` maps the orthant into ``K1`` and ``Q2``
    maps ``K1`` into the orthant, both invertible; ``S1`` and ``Q1`` map
    interiors to interiors between the orthant and ``K2``.
    """
    m, n = L.m, L.n
    Q1, Q2, S1, S2 = (rmatrix(M) for M in (Q1, Q2, S1, S2))
    if not (is_invertible(S2) and is_nonneg_map(S2, orthant(n), K1)):
        raise HypothesisError("S2 must be invertible and map the orthant into K1")
    if not (is_invertible(Q2) and is_nonneg_map(Q2, K1, orthant(n))):
        raise HypothesisError("Q2 must be invertible and map K1 into the orthant")
    if not maps_interior_to_interior(S1, orthant(m), K2):
        raise HypothesisError("S1 must map the open orthant into the interior of K2")
    if not maps_interior_to_interior(Q1, K2, orthant(m)):
        raise HypothesisError("Q1 must map the interior of K2 into the open orthant")
    left = kron(inverse(Q2).T, Q1)
    right = kron(inverse(S2).T, S1)
    return LinearMap(m, n, _freeze(left.dot(L.mat).dot(right)))


# -- falsification and analysis ----------------------------------------------------

@dataclass(frozen=True)
class Counterexample:
    """A semipositive ``A`` whose image is not semipositive, with both proofs."""

    trial: int
    A: np.ndarray
    witness: np.ndarray
    image: np.ndarray
    certificate: np.ndarray


@dataclass(frozen=True)
class NoCounterexampleFound:
    trials: int


def _trial(args):
    L, K1, K2, seed, i = args
    rng = np.random.default_rng([seed, i])
    A = sample_sp(L.m, L.n, K1, K2, rng)
    B = apply(L, A)
    v = classify_sp(B, K1, K2)
    if v.semipositive:
        return None
    w = classify_sp(A, K1, K2)
    return Counterexample(i, A, w.witness, B, v.certificate)


def falsify_preserver(L: LinearMap, K1: PolyCone | None = None, K2: PolyCone | None = None,
                      trials: int = 1000, seed: int = 0, workers: int = 1):
    """Search for a semipositive ``A`` with ``L(A)`` not semipositive.

    Trial ``i`` draws from ``default_rng([seed, i])``, so the outcome does not
    depend on *workers*; the counterexample with the smallest trial index is
    returned.  Finding none is evidence, not proof.
    """
    K1 = orthant(L.n) if K1 is None else K1
    K2 = orthant(L.m) if K2 is None else K2
    require_proper(K1, K2)
    if workers <= 1:
        for i in range(trials):
            ce = _trial((L, K1, K2, seed, i))
            if ce is not None:
                return ce
        return NoCounterexampleFound(trials)
    chunk = max(1, 4 * workers)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for start in range(0, trials, chunk):
            idx = range(start, min(trials, start + chunk))
            for ce in ex.map(_trial, [(L, K1, K2, seed, i) for i in idx]):
                if ce is not None:
                    return ce
    return NoCounterexampleFound(trials)


STANDARD_FORM = "StandardForm"
COUNTEREXAMPLE = "Counterexample"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class PreserverReport:
    invertible: bool
    counterexample: Counterexample | None
    trials: int
    rank_one: RankOneResult | None
    factorization: Factorization | None
    transposed_factorization: Factorization | None
    into: bool | None
    onto: bool | None
    verdict: str
    notes: tuple = field(default_factory=tuple)


def analyze_preserver(L: LinearMap, K1: PolyCone | None = None, K2: PolyCone | None = None,
                      trials: int = 200, seed: int = 0, witness_samples: int = 2,
                      workers: int = 1) -> PreserverReport:
    """Run the classification pipeline on *L*.

    Invertibility, random falsification, the rank-one image test (orthants),
    Kronecker factorization cross-checked by unit-image recovery, then the
    into/onto tests on the factors.  ``StandardForm`` means every step
    affirmed, which for ``XAY`` maps is a proof that ``L`` is an into
    preserver; it says nothing about maps that do not factor.
    """
    K1 = orthant(L.n) if K1 is None else K1
    K2 = orthant(L.m) if K2 is None else K2
    notes = []
    invertible = is_invertible_map(L)
    found = falsify_preserver(L, K1, K2, trials, seed, workers)
    ce = found if isinstance(found, Counterexample) else None
    r1 = None
    if K1.is_orthant and K2.is_orthant:
        r1 = rank_one_image_test(L, K1, K2, witness_samples, seed)
    f = kronecker_factor(L)
    g = recover_xy(L)
    if (f is None) != (g is None) or (f is not None and
                                      not (np.array_equal(f.X, g.X) and np.array_equal(f.Y, g.Y)
                                           and f.sign == g.sign)):
        raise AssertionError("rearrangement and unit-image recovery disagree")
    ft = None if f is not None else kronecker_factor_transposed(L)
    into = onto = None
    if f is not None:
        Xs, Y = f.signed()
        into = check_into_xay(Xs, Y, K1, K2)
        onto = check_onto_xay(Xs, Y, K1, K2)
    if ft is not None:
        notes.append("map has the form A -> X A^T Y")
    if not invertible:
        notes.append("map is not invertible")
    if ce is not None:
        verdict = COUNTEREXAMPLE
    elif invertible and f is not None and into and (r1 is None or r1.passed):
        verdict = STANDARD_FORM
    else:
        verdict = INCONCLUSIVE
    return PreserverReport(invertible, ce, trials, r1, f, ft, into, onto, verdict, tuple(notes))


# -- random instances ----------------------------------------------------------------

def random_row_positive(rng: np.random.Generator, m: int, bound: int = 9) -> np.ndarray:
    """Invertible nonnegative matrix with no zero row."""
    while True:
        X = np.array([[random_rational(rng, bound, positive=True) if rng.random() < 0.6 else ZERO
                       for _ in range(m)] for _ in range(m)], dtype=object)
        if is_row_positive(X) and is_invertible(X):
            return rmatrix(X)


def random_m_matrix(rng: np.random.Generator, n: int, bound: int = 9) -> np.ndarray:
    """Nonsingular M-matrix ``s I - B`` with ``B >= 0`` and strict diagonal dominance."""
    B = np.array([[random_rational(rng, bound, positive=True) if rng.random() < 0.6 else ZERO
                   for _ in range(n)] for _ in range(n)], dtype=object)
    s = max(sum(B[i, :]) for i in range(n)) + random_rational(rng, bound, positive=True)
    return rmatrix(s * np.array(identity(n), dtype=object) - B)


def random_inverse_nonnegative(rng: np.random.Generator, n: int, bound: int = 9) -> np.ndarray:
    """Either an M-matrix or the inverse of a random invertible nonnegative matrix."""
    if rng.random() < 0.5:
        return random_m_matrix(rng, n, bound)
    while True:
        B = np.array([[random_rational(rng, bound, positive=True) if rng.random() < 0.5 else ZERO
                       for _ in range(n)] for _ in range(n)], dtype=object)
        if is_invertible(B):
            return inverse(B)


def random_monomial(rng: np.random.Generator, n: int, bound: int = 9) -> np.ndarray:
    perm = rng.permutation(n)
    X = np.full((n, n), ZERO, dtype=object)
    for i in range(n):
        X[i, perm[i]] = random_rational(rng, bound, positive=True)
    return rmatrix(X)

