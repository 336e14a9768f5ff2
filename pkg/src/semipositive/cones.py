"""Polyhedral cones in V- and H-representation.

A cone is stored by its generators (columns of an ``n x p`` matrix).  The
inner facet normals are computed on first use by the double description
method and cached.  Rays are normalized so that their first nonzero entry is
``+1`` or ``-1`` and kept in descending lexicographic order, which makes the
generators of the orthant come out as the identity matrix.

All predicates on matrices between cones reduce to sign tests on the finite
product ``facets(K2) @ A @ generators(K1)``.
"""

from __future__ import annotations

import threading

import numpy as np
from gmpy2 import mpq, mpz

from .core import (ONE, ZERO, CapacityError, DimensionError, HypothesisError, ParseError,
                   SingularMatrixError, _freeze, format_rational, identity, inverse,
                   parse_rows, primitive, rank, rational, rmatrix)
from .lpcert import in_cone_of, nonneg_solution

MAX_DIM = 8
MAX_GENERATORS = 24


def normalize_ray(v) -> tuple:
    """Scale *v* so its first nonzero entry has absolute value one."""
    v = [rational(x) for x in v]
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        raise ValueError("the zero vector is not a ray")
    s = abs(lead)
    return tuple(x / s for x in v)


def _canonical(rays) -> list[tuple]:
    """Normalized, deduplicated, descending lexicographic."""
    return sorted({normalize_ray(r) for r in rays}, reverse=True)


def _columns(rays, n: int) -> np.ndarray:
    out = np.empty((n, len(rays)), dtype=object)
    for j, r in enumerate(rays):
        out[:, j] = r
    return _freeze(out)


def _rows(rays, n: int) -> np.ndarray:
    out = np.empty((len(rays), n), dtype=object)
    for i, r in enumerate(rays):
        out[i, :] = r
    return _freeze(out)


class PolyCone:
    """A polyhedral cone ``K = {G @ lam : lam >= 0}`` in ``R^dim``.

    Build instances with :func:`cone_from_generators` or :func:`orthant`.
    The object is immutable; the facet matrix is filled in lazily under a lock
    so concurrent first access computes it once.
    """

    def __init__(self, dim: int, rays: list[tuple], facets=None, *, orthant: bool = False):
        self.dim = dim
        self._rays = rays
        self.generators = _columns(rays, dim)
        self.is_orthant = orthant
        self._facets = facets
        self._lock = threading.Lock()
        self._pointed = None
        self._full = None

    def __repr__(self):
        return f"PolyCone(dim={self.dim}, rays={len(self._rays)})"

    # locks do not pickle; worker processes get a fresh one
    def __getstate__(self):
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()

    @property
    def rays(self) -> list[tuple]:
        return list(self._rays)

    @property
    def num_rays(self) -> int:
        return len(self._rays)

    @property
    def facets(self) -> np.ndarray:
        if self._facets is None:
            with self._lock:
                if self._facets is None:
                    self._facets = _compute_facets(self.generators)
        return self._facets

    @property
    def full_dimensional(self) -> bool:
        if self._full is None:
            self._full = rank(self.generators) == self.dim
        return self._full

    @property
    def pointed(self) -> bool:
        if self._pointed is None:
            self._pointed = _is_pointed(self.generators)
        return self._pointed

    def same_as(self, other: "PolyCone") -> bool:
        """Equality as ray sets (both sides are already canonical)."""
        return self.dim == other.dim and self._rays == other._rays


def orthant(n: int) -> PolyCone:
    """The nonnegative orthant of ``R^n``."""
    eye = identity(n)
    rays = [tuple(eye[:, j]) for j in range(n)]
    return PolyCone(n, rays, facets=eye, orthant=True)


def _is_pointed(G) -> bool:
    G = np.asarray(G, dtype=object)
    n, p = G.shape
    if rank(G) == p:
        return True
    # a nonzero lam >= 0 with G lam = 0 means K contains a line
    E = np.vstack([G, np.full((1, p), ONE, dtype=object)])
    F = np.array([[ZERO]] * n + [[ONE]], dtype=object)
    return nonneg_solution(E, F) is None


def cone_from_generators(G) -> PolyCone:
    """Cone spanned by the columns of *G*.

    Columns are normalized, duplicates dropped and every generator lying in
    the cone of the others removed, so the result holds only extreme rays
    (for pointed cones).
    """
    G = rmatrix(G)
    n, p = G.shape
    for j in range(p):
        if all(v == 0 for v in G[:, j]):
            raise ValueError(f"generator column {j} is zero")
    rays = _canonical(G[:, j] for j in range(p))
    if len(rays) == n and rank(_columns(rays, n)) == n:
        return PolyCone(n, rays)
    keep = list(rays)
    i = 0
    while i < len(keep):
        others = keep[:i] + keep[i + 1:]
        if others and in_cone_of(_columns(others, n), keep[i]) is not None:
            keep.pop(i)
        else:
            i += 1
    return PolyCone(n, keep)


def parse_cone(text: str) -> PolyCone:
    """Read a cone from the ``dim n`` + one-generator-per-line format."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ParseError("empty cone file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "dim":
        raise ParseError("cone file must start with 'dim n'")
    try:
        n = int(head[1])
    except ValueError:
        raise ParseError(f"bad dimension {head[1]!r}") from None
    if n < 1:
        raise ParseError("dimension must be positive")
    rows = parse_rows(lines[1:])
    if not rows:
        raise ParseError("cone file lists no generators")
    if any(len(r) != n for r in rows):
        raise ParseError(f"every generator must have {n} entries")
    try:
        return cone_from_generators(np.array(rows, dtype=object).T)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_cone(path) -> PolyCone:
    with open(path, encoding="utf-8") as fh:
        return parse_cone(fh.read())


def format_cone(K: PolyCone) -> str:
    lines = [f"dim {K.dim}"]
    for r in K.rays:
        lines.append(" ".join(format_rational(v) for v in r))
    return "\n".join(lines) + "\n"


# -- double description -------------------------------------------------------

def _dot(a, b):
    s = mpz(0)
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def _extreme_rays(A: list[list]) -> list[list]:
    """Extreme rays of the pointed cone ``{z : A z >= 0}`` (A has full column rank).

    Classical double description: start from a simplex cut out by r independent
    rows, then add the remaining rows one at a time, combining adjacent pairs
    of rays on opposite sides.  Adjacency uses the combinatorial test.
    """
    p = len(A)
    r = len(A[0])
    order = []
    for i in range(p):
        if rank(np.array([A[k] for k in order + [i]], dtype=object)) > len(order):
            order.append(i)
        if len(order) == r:
            break
    rest = [i for i in range(p) if i not in order]
    Binv = inverse(np.array([A[i] for i in order], dtype=object))
    rays = []
    for k in range(r):
        v = primitive(list(Binv[:, k]))
        tight = 0
        for pos, i in enumerate(order):
            if pos != k:
                tight |= 1 << i
        rays.append((v, tight))
    A_int = [primitive(row) for row in A]

    for i in rest:
        a = A_int[i]
        plus, zero, minus = [], [], []
        for ray in rays:
            s = _dot(a, ray[0])
            if s > 0:
                plus.append((ray, s))
            elif s < 0:
                minus.append((ray, s))
            else:
                zero.append(ray)
        if not minus:
            rays = [ray for ray, _ in plus] + [(v, t | (1 << i)) for v, t in zero]
            continue
        new = [ray for ray, _ in plus] + [(v, t | (1 << i)) for v, t in zero]
        candidates = [ray for ray, _ in plus] + [ray for ray, _ in minus] + zero
        for (rp, sp) in plus:
            for (rn, sn) in minus:
                common = rp[1] & rn[1]
                if bin(common).count("1") < r - 2:
                    continue
                if any(other is not rp and other is not rn and (other[1] & common) == common
                       for other in candidates):
                    continue
                v = [sp * y - sn * x for x, y in zip(rp[0], rn[0])]
                new.append((primitive(v), common | (1 << i)))
        rays = new
    return [v for v, _ in rays]


def _compute_facets(G) -> np.ndarray:
    G = np.asarray(G, dtype=object)
    n, p = G.shape
    if n > MAX_DIM or p > MAX_GENERATORS:
        raise CapacityError(f"facet enumeration is limited to dim <= {MAX_DIM} and "
                            f"<= {MAX_GENERATORS} generators (got dim {n}, {p} generators)")
    if p == n and rank(G) == n:
        Ginv = inverse(G)
        return _rows(_canonical(Ginv[i, :] for i in range(n)), n)
    # basis of the column space of G, chosen greedily among the columns
    basis = []
    for j in range(p):
        cand = basis + [j]
        if rank(G[:, cand]) == len(cand):
            basis = cand
    B = G[:, basis]
    r = len(basis)
    rays = []
    if r < n:
        # lineality of the dual: y with G^T y = 0, both signs
        for v in _null_space(G.T):
            rays.append(tuple(v))
            rays.append(tuple(-x for x in v))
    GtB = G.T.dot(B)
    if r == 1:
        zs = [[ONE]] if all(x >= 0 for x in GtB[:, 0]) else [[-ONE]]
        if any(x > 0 for x in GtB[:, 0]) and any(x < 0 for x in GtB[:, 0]):
            zs = []
    else:
        zs = _extreme_rays([list(row) for row in GtB])
    for z in zs:
        y = B.dot(np.array([mpq(x) for x in z], dtype=object))
        if any(x != 0 for x in y):
            rays.append(tuple(y))
    return _rows(_canonical(rays), n)


def _null_space(A) -> list[list]:
    """Rational basis of ``{x : A x = 0}`` by reduced row echelon form."""
    A = np.asarray(A, dtype=object)
    m, n = A.shape
    rows = [[rational(v) for v in A[i]] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [v / p for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for k, c in enumerate(pivots):
            v[c] = -rows[k][f]
        basis.append(v)
    return basis


def facets(K: PolyCone) -> np.ndarray:
    """Inner facet normals as rows: ``x in K`` iff ``facets(K) @ x >= 0``."""
    return K.facets


def dual(K: PolyCone) -> PolyCone:
    """The dual cone ``{y : <y, x> >= 0 for all x in K}``."""
    F = K.facets
    rays = [tuple(F[i, :]) for i in range(F.shape[0])]
    if K.is_orthant:
        return orthant(K.dim)
    if K.pointed and K.full_dimensional:
        return PolyCone(K.dim, rays, facets=_rows(K.rays, K.dim))
    return PolyCone(K.dim, rays)


def is_proper(K: PolyCone) -> tuple[bool, str]:
    """Return ``(proper, reason)``; the reason is empty for proper cones."""
    if not K.full_dimensional:
        return False, f"not full-dimensional (rank {rank(K.generators)} < {K.dim})"
    if not K.pointed:
        return False, "not pointed (contains a line)"
    return True, ""


def require_proper(*cones: PolyCone) -> None:
    for K in cones:
        ok, why = is_proper(K)
        if not ok:
            raise HypothesisError(f"cone is not proper: {why}")


def _vector(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=object).reshape(-1)
    if x.shape[0] != n:
        raise DimensionError(f"vector of length {x.shape[0]} for a cone in R^{n}")
    return np.array([rational(v) for v in x], dtype=object)


def contains(K: PolyCone, x) -> bool:
    x = _vector(x, K.dim)
    return bool(np.all(K.facets.dot(x) >= 0))


def contains_interior(K: PolyCone, x) -> bool:
    require_proper(K)
    x = _vector(x, K.dim)
    return bool(np.all(K.facets.dot(x) > 0))


def is_simplicial(K: PolyCone) -> bool:
    require_proper(K)
    return K.num_rays == K.dim


def interior_point(K: PolyCone) -> np.ndarray:
    """Sum of the generators, which lies in the interior of a proper cone."""
    return _freeze(K.generators.dot(np.full(K.num_rays, ONE, dtype=object)))


def extend_to_simplicial(K: PolyCone, v) -> np.ndarray:
    """Invertible ``T`` with columns in ``K`` and first column *v*.

    The remaining columns are generators of ``K`` scanned in canonical order,
    each taken when it raises the rank of the columns collected so far.
    """
    v = _vector(v, K.dim)
    if all(x == 0 for x in v):
        raise ValueError("v must be nonzero")
    if not contains(K, v):
        raise ValueError("v is not in the cone")
    cols = [v]
    for g in K.rays:
        trial = cols + [np.array(g, dtype=object)]
        if rank(np.array(trial, dtype=object).T) == len(trial):
            cols = trial
        if len(cols) == K.dim:
            break
    if len(cols) < K.dim:
        raise HypothesisError("cone is not full-dimensional; no invertible completion exists")
    return _freeze(np.array(cols, dtype=object).T.copy())


def _cone_product(A, K1: PolyCone, K2: PolyCone) -> np.ndarray:
    A = np.asarray(A, dtype=object)
    if A.ndim != 2 or A.shape != (K2.dim, K1.dim):
        raise DimensionError(f"matrix of shape {A.shape} does not map R^{K1.dim} to R^{K2.dim}")
    if K1.is_orthant and K2.is_orthant:
        return A
    if K1.is_orthant:
        return K2.facets.dot(A)
    if K2.is_orthant:
        return A.dot(K1.generators)
    return K2.facets.dot(A).dot(K1.generators)


def is_nonneg_map(A, K1: PolyCone, K2: PolyCone) -> bool:
    """Whether ``A(K1)`` is contained in ``K2``."""
    return bool(np.all(_cone_product(A, K1, K2) >= 0))


def maps_interior_to_interior(A, K1: PolyCone, K2: PolyCone) -> bool:
    """Whether ``A`` maps the interior of ``K1`` into the interior of ``K2``.

    For proper polyhedral cones this holds exactly when ``A`` is
    ``(K1, K2)``-nonnegative and no facet of ``K2`` vanishes on every generator
    image, i.e. the product matrix has no zero row.
    """
    require_proper(K1, K2)
    P = _cone_product(A, K1, K2)
    return bool(np.all(P >= 0)) and all(any(v != 0 for v in row) for row in P)


def is_k_inverse_nonnegative(Y, K: PolyCone) -> bool:
    Y = np.asarray(Y, dtype=object)
    if Y.ndim != 2 or Y.shape[0] != Y.shape[1]:
        return False
    try:
        Yinv = inverse(Y)
    except SingularMatrixError:
        return False
    return is_nonneg_map(Yinv, K, K)


def is_automorphism(X, K: PolyCone) -> bool:
    """Whether ``X(K) = K``: ``X`` is invertible and permutes the extreme rays."""
    X = np.asarray(X, dtype=object)
    if X.shape != (K.dim, K.dim):
        raise DimensionError(f"matrix of shape {X.shape} on a cone in R^{K.dim}")
    if rank(X) < K.dim:
        return False
    rays = K.rays
    index = {r: i for i, r in enumerate(rays)}
    hit = set()
    for g in rays:
        image = X.dot(np.array(g, dtype=object))
        j = index.get(normalize_ray(image))
        if j is None or j in hit:
            return False
        hit.add(j)
    return len(hit) == len(rays)


def random_proper_cone(rng: np.random.Generator, n: int, p: int | None = None,
                       bound: int = 5) -> PolyCone:
    """A random proper cone in ``R^n`` with about *p* generators.

    Generators have positive first coordinate, which makes the cone pointed;
    the first *n* are kept independent so the cone is full-dimensional.
    """
    if p is None:
        p = n
    while True:
        cols = []
        for _ in range(p):
            head = int(rng.integers(1, bound + 1))
            v = [head] + [int(x) for x in rng.integers(-bound, bound + 1, size=n - 1)]
            cols.append(v)
        G = np.array(cols, dtype=object).T
        if rank(G) == n:
            K = cone_from_generators(G)
            if K.full_dimensional:
                return K


def random_simplicial_cone(rng: np.random.Generator, n: int, bound: int = 5) -> PolyCone:
    return random_proper_cone(rng, n, n, bound)

