"""Zero-pattern structure of square matrices.

Reducibility, full indecomposability and the block upper-triangular form
whose diagonal blocks are fully indecomposable or ``1 x 1`` zeros.  Graph
work (matchings, strongly connected components) is delegated to
``scipy.sparse.csgraph``; entries are compared to zero exactly.

Convention: a ``1 x 1`` zero matrix is reducible, a nonzero ``1 x 1`` matrix
is irreducible and fully indecomposable.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, maximum_bipartite_matching

from .core import DimensionError, SingularMatrixError, inverse, is_nonnegative

FULLY_INDECOMPOSABLE = "FullyIndecomposable"
ZERO_ONE_BY_ONE = "ZeroOneByOne"


def _square(A) -> np.ndarray:
    A = np.asarray(A, dtype=object)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    return A


def _support(A) -> np.ndarray:
    return np.asarray(A, dtype=object) != 0


def is_row_positive(A) -> bool:
    """Nonnegative with at least one nonzero entry in every row."""
    A = np.asarray(A, dtype=object)
    return is_nonnegative(A) and bool(np.all(np.any(A != 0, axis=1)))


def is_monomial(A) -> bool:
    """Nonnegative with exactly one nonzero entry in each row and column."""
    A = _square(A)
    nz = A != 0
    return (is_nonnegative(A) and bool(np.all(nz.sum(axis=0) == 1))
            and bool(np.all(nz.sum(axis=1) == 1)))


def _csr(S: np.ndarray) -> csr_matrix:
    # direct (data, indices, indptr) construction skips scipy's dense conversion
    r, c = np.nonzero(S)
    indptr = np.searchsorted(r, np.arange(S.shape[0] + 1)).astype(np.int32)
    return csr_matrix((np.ones(len(c), dtype=np.int8), c.astype(np.int32), indptr),
                      shape=S.shape)


def _strong_labels(S: np.ndarray) -> tuple[int, np.ndarray]:
    return connected_components(_csr(S), directed=True, connection="strong")


def is_reducible(A) -> bool:
    A = _square(A)
    n = A.shape[0]
    if n == 1:
        return A[0, 0] == 0
    S = _support(A)
    np.fill_diagonal(S, False)
    ncomp, _ = _strong_labels(S)
    return ncomp > 1


def _matching(S: np.ndarray) -> np.ndarray:
    """Column matched to each row (``-1`` when unmatched)."""
    return maximum_bipartite_matching(_csr(S), perm_type="column")


def is_fully_indecomposable(A) -> bool:
    """No ``k x (n-k)`` zero submatrix for ``1 <= k <= n-1`` (and nonzero if ``n = 1``).

    Decided as: the support has a perfect matching and, with the matching moved
    onto the diagonal, the support digraph is strongly connected.
    """
    A = _square(A)
    n = A.shape[0]
    S = _support(A)
    if n == 1:
        return bool(S[0, 0])
    match = _matching(S)
    if np.any(match < 0):
        return False
    P = S[:, match]
    ncomp, _ = _strong_labels(P)
    return ncomp == 1


@dataclass(frozen=True)
class BlockForm:
    """Permutations bringing a matrix to block upper-triangular form.

    ``A[np.ix_(row_perm, col_perm)]`` has square diagonal blocks at the index
    ranges ``blocks`` (half-open ``(start, stop)``), labelled in ``kinds``, and
    zeros below them.
    """

    row_perm: tuple
    col_perm: tuple
    blocks: tuple
    kinds: tuple

    def apply(self, A) -> np.ndarray:
        A = np.asarray(A, dtype=object)
        return A[np.ix_(list(self.row_perm), list(self.col_perm))]

    def diagonal_blocks(self, A) -> list[np.ndarray]:
        P = self.apply(A)
        return [P[a:b, a:b] for a, b in self.blocks]


def _blocks_matched(S: np.ndarray, rows: list, cols: list, match: np.ndarray):
    """Split a pattern with a perfect matching along strong components.

    ``match[k]`` is the local column index matched to local row ``k``.  Blocks
    come out in a topological order of the condensation, ties broken by the
    smallest row index in a component.
    """
    k = len(rows)
    P = S[:, match]
    ncomp, labels = _strong_labels(P)
    members = [[] for _ in range(ncomp)]
    for v in range(k):
        members[labels[v]].append(v)
    succ = [set() for _ in range(ncomp)]
    indeg = [0] * ncomp
    for i in range(k):
        for j in range(k):
            if P[i, j] and labels[i] != labels[j] and labels[j] not in succ[labels[i]]:
                succ[labels[i]].add(labels[j])
                indeg[labels[j]] += 1
    heap = [(min(members[c]), c) for c in range(ncomp) if indeg[c] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        _, c = heapq.heappop(heap)
        vs = sorted(members[c])
        out.append(([rows[v] for v in vs], [cols[match[v]] for v in vs]))
        for d in sorted(succ[c]):
            indeg[d] -= 1
            if indeg[d] == 0:
                heapq.heappush(heap, (min(members[d]), d))
    return out


def _zero_block(S: np.ndarray, match: np.ndarray):
    """Rows ``R`` and columns ``C`` with ``S[R, C] == 0`` and ``|R| + |C| == n``.

    Used when no perfect matching exists: alternating paths from the unmatched
    rows reach a row set whose neighbourhood is too small (Konig).
    """
    k = S.shape[0]
    col_owner = {int(c): r for r, c in enumerate(match) if c >= 0}
    seen_rows = set()
    seen_cols = set()
    stack = [r for r in range(k) if match[r] < 0]
    seen_rows.update(stack)
    while stack:
        r = stack.pop()
        for c in range(k):
            if S[r, c] and c not in seen_cols:
                seen_cols.add(c)
                owner = col_owner.get(c)
                if owner is not None and owner not in seen_rows:
                    seen_rows.add(owner)
                    stack.append(owner)
    R = sorted(seen_rows)
    C = [c for c in range(k) if c not in seen_cols]
    q = min(len(C), k - 1)
    p = k - q
    return R[:p], C[:q]


def _decompose(S: np.ndarray, rows: list, cols: list) -> list:
    k = len(rows)
    if k == 1:
        return [(rows, cols)]
    match = _matching(S)
    if np.all(match >= 0):
        return _blocks_matched(S, rows, cols, match)
    R, C = _zero_block(S, match)
    top_rows = [i for i in range(k) if i not in R]
    bottom_cols = [j for j in range(k) if j not in C]
    top = _decompose(S[np.ix_(top_rows, C)], [rows[i] for i in top_rows], [cols[j] for j in C])
    bottom = _decompose(S[np.ix_(R, bottom_cols)], [rows[i] for i in R],
                        [cols[j] for j in bottom_cols])
    return top + bottom


def block_triangularize(A) -> BlockForm:
    """Permutation-equivalent block upper-triangular form.

    Every diagonal block is fully indecomposable or a ``1 x 1`` zero; a fully
    indecomposable input comes back as a single block.
    """
    A = _square(A)
    n = A.shape[0]
    S = _support(A)
    parts = _decompose(S, list(range(n)), list(range(n)))
    row_perm, col_perm, blocks, kinds = [], [], [], []
    for rs, cs in parts:
        start = len(row_perm)
        row_perm.extend(rs)
        col_perm.extend(cs)
        blocks.append((start, len(row_perm)))
        if len(rs) == 1 and not S[rs[0], cs[0]]:
            kinds.append(ZERO_ONE_BY_ONE)
        else:
            kinds.append(FULLY_INDECOMPOSABLE)
    return BlockForm(tuple(row_perm), tuple(col_perm), tuple(blocks), tuple(kinds))


def _nonneg_nonzero(B) -> bool:
    return B.size > 0 and is_nonnegative(B) and bool(np.any(B != 0))


def check_pattern_inv_nonneg(A) -> bool:
    """Block conditions for inverse nonnegativity of a square matrix.

    After :func:`block_triangularize`, requires every diagonal block to be
    invertible with a nonnegative inverse, and no strip
    ``[B_{i,i+1} ... B_{i,j}]`` (block row) or ``[B_{i,j}; ...; B_{j-1,j}]``
    (block column) to be nonnegative and nonzero.
    """
    A = _square(A)
    form = block_triangularize(A)
    P = form.apply(A)
    blocks = form.blocks
    for (a, b), kind in zip(blocks, form.kinds):
        if kind == ZERO_ONE_BY_ONE:
            return False
        try:
            inv = inverse(P[a:b, a:b])
        except SingularMatrixError:
            return False
        if not is_nonnegative(inv):
            return False
    k = len(blocks)
    for i in range(k):
        for j in range(i + 1, k):
            row_strip = P[blocks[i][0]:blocks[i][1], blocks[i + 1][0]:blocks[j][1]]
            col_strip = P[blocks[i][0]:blocks[j - 1][1], blocks[j][0]:blocks[j][1]]
            if _nonneg_nonzero(row_strip) or _nonneg_nonzero(col_strip):
                return False
    return True
