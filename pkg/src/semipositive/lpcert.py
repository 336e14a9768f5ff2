"""Exact LP feasibility with certificates.

Everything here runs a dense tableau simplex over ``mpq`` with Bland's
smallest-index rule, so every run terminates and no tolerance exists.

The central routine is :func:`strict_feasibility`, the orthant form of the
theorem of the alternative: for a rational ``q x p`` matrix ``M`` exactly one of

* there is ``lam > 0`` with ``M @ lam > 0``, or
* there is ``y >= 0, y != 0`` with ``M.T @ y <= 0``

holds, and the function returns a certificate for whichever one does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ONE, ZERO, DimensionError, SemipositivityError, _freeze, rational


class Unbounded(SemipositivityError):
    """The LP objective is unbounded above."""


@dataclass(frozen=True)
class LPResult:
    value: object
    x: np.ndarray
    dual: np.ndarray
    pivots: int


class _Tableau:
    """Dense simplex tableau in the form ``B^-1 [A | b]`` plus a reduced-cost row.

    ``cost[j]`` holds ``c_B B^-1 a_j - c_j``; the basis is optimal for the
    maximisation once every entry is nonnegative.
    """

    def __init__(self, rows, rhs, basis, cost, value):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.cost = cost
        self.value = value
        self.pivots = 0

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        p = row[c]
        row = [v / p for v in row]
        rhs_r = self.rhs[r] / p
        self.rows[r] = row
        self.rhs[r] = rhs_r
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f != 0:
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
                self.rhs[i] -= f * rhs_r
        f = self.cost[c]
        if f != 0:
            self.cost = [a - f * b for a, b in zip(self.cost, row)]
            self.value -= f * rhs_r
        self.basis[r] = c
        self.pivots += 1

    def solve(self, max_pivots: int = 100_000) -> None:
        """Run Bland's rule to optimality; raises Unbounded."""
        while True:
            c = next((j for j, d in enumerate(self.cost) if d < 0), None)
            if c is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[c]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded(f"objective unbounded along column {c}")
            self.pivot(best[1], c)
            if self.pivots > max_pivots:
                raise RuntimeError("pivot limit exceeded; Bland's rule should prevent this")

    def primal(self, ncols: int) -> list:
        x = [ZERO] * ncols
        for i, b in enumerate(self.basis):
            if b < ncols:
                x[b] = self.rhs[i]
        return x


def _as_lists(M) -> list[list]:
    M = np.asarray(M, dtype=object)
    if M.ndim != 2:
        raise DimensionError("expected a 2-D matrix")
    return [[rational(v) for v in row] for row in M]


def maximize(c, A, b) -> LPResult:
    """Maximise ``c @ x`` subject to ``A @ x <= b``, ``x >= 0``, with ``b >= 0``.

    The slack basis is feasible by the sign requirement on *b*, so no phase one
    is needed.  ``dual`` holds the optimal multipliers of the rows.
    """
    rows = _as_lists(A)
    q = len(rows)
    p = len(rows[0])
    c = [rational(v) for v in np.asarray(c, dtype=object).reshape(-1)]
    b = [rational(v) for v in np.asarray(b, dtype=object).reshape(-1)]
    if len(c) != p or len(b) != q:
        raise DimensionError("objective / right-hand side lengths do not match A")
    if any(v < 0 for v in b):
        raise ValueError("maximize() needs b >= 0 so the slack basis is feasible")
    tab_rows = [row + [ONE if k == i else ZERO for k in range(q)] for i, row in enumerate(rows)]
    tab = _Tableau(tab_rows, list(b), [p + i for i in range(q)],
                   [-v for v in c] + [ZERO] * q, ZERO)
    tab.solve()
    x = tab.primal(p)
    dual = tab.cost[p:p + q]
    return LPResult(tab.value, _freeze(np.array(x, dtype=object)),
                    _freeze(np.array(dual, dtype=object)), tab.pivots)


@dataclass(frozen=True)
class StrictWitness:
    """``lam > 0`` with ``M @ lam > 0``."""

    lam: np.ndarray

    def verify(self, M) -> bool:
        M = np.asarray(M, dtype=object)
        lam = self.lam
        return (lam.shape == (M.shape[1],) and bool(np.all(lam > 0))
                and bool(np.all(M.dot(lam) > 0)))


@dataclass(frozen=True)
class FarkasWitness:
    """``y >= 0, y != 0`` with ``M.T @ y <= 0``."""

    y: np.ndarray

    def verify(self, M) -> bool:
        M = np.asarray(M, dtype=object)
        y = self.y
        return (y.shape == (M.shape[0],) and bool(np.all(y >= 0)) and bool(np.any(y != 0))
                and bool(np.all(M.T.dot(y) <= 0)))


def strict_feasibility(M) -> StrictWitness | FarkasWitness:
    """Decide whether ``M @ lam > 0`` has a solution ``lam > 0``.

    Solves ``max t`` s.t. ``M lam >= t 1``, ``1^T lam <= 1``, ``t <= 1``,
    ``lam, t >= 0``.  A positive optimum gives the witness (pushed into the
    open orthant if some coordinate sits at zero); an optimum of zero gives a
    Farkas vector read off the optimal reduced costs of the row slacks.
    """
    rows = _as_lists(M)
    q = len(rows)
    p = len(rows[0])
    # columns: lam_0..lam_{p-1}, t, then q + 2 slacks
    nslack = q + 2
    tab_rows = []
    for i, row in enumerate(rows):
        slack = [ZERO] * nslack
        slack[i] = ONE
        tab_rows.append([-v for v in row] + [ONE] + slack)
    slack = [ZERO] * nslack
    slack[q] = ONE
    tab_rows.append([ONE] * p + [ZERO] + slack)
    slack = [ZERO] * nslack
    slack[q + 1] = ONE
    tab_rows.append([ZERO] * p + [ONE] + slack)
    rhs = [ZERO] * q + [ONE, ONE]
    cost = [ZERO] * p + [-ONE] + [ZERO] * nslack
    tab = _Tableau(tab_rows, rhs, [p + 1 + i for i in range(nslack)], cost, ZERO)
    tab.solve()

    if tab.value > 0:
        lam = tab.primal(p)
        if any(v == 0 for v in lam):
            width = max(sum(abs(v) for v in row) for row in rows)
            delta = tab.value / (2 * (1 + width))
            lam = [v + delta for v in lam]
        w = StrictWitness(_freeze(np.array(lam, dtype=object)))
        if not w.verify(M):
            raise AssertionError("strict witness failed exact verification")
        return w

    y = tab.cost[p + 1:p + 1 + q]
    f = FarkasWitness(_freeze(np.array(y, dtype=object)))
    if not f.verify(M):
        raise AssertionError("Farkas certificate failed exact verification")
    return f


def _phase_one(E_rows: list[list], f: list):
    """Find z >= 0 with E z = f, or None.  Minimises the artificial sum."""
    r = len(E_rows)
    s = len(E_rows[0]) if r else 0
    rows = []
    rhs = []
    for i in range(r):
        sign = -1 if f[i] < 0 else 1
        art = [ZERO] * r
        art[i] = ONE
        rows.append([sign * v for v in E_rows[i]] + art)
        rhs.append(sign * f[i])
    # maximise -sum(art): reduced costs start at -(column sums) for structurals
    cost = [-sum((rows[i][j] for i in range(r)), ZERO) for j in range(s)] + [ZERO] * r
    value = -sum(rhs, ZERO)
    tab = _Tableau(rows, rhs, [s + i for i in range(r)], cost, value)
    tab.solve()
    if tab.value != 0:
        return None
    return tab.primal(s)


def nonneg_solution(E, F) -> np.ndarray | None:
    """Return ``Z >= 0`` with ``E @ Z == F`` exactly, or None if infeasible.

    Columns of *F* are independent systems and are solved one at a time.
    """
    E_rows = _as_lists(E)
    F = np.asarray(F, dtype=object)
    if F.ndim == 1:
        F = F.reshape(-1, 1)
    if F.shape[0] != len(E_rows):
        raise DimensionError(f"E has {len(E_rows)} rows but F has {F.shape[0]}")
    cols = []
    for j in range(F.shape[1]):
        z = _phase_one(E_rows, [rational(v) for v in F[:, j]])
        if z is None:
            return None
        cols.append(z)
    Z = np.array(cols, dtype=object).T.copy()
    if not (np.all(Z >= 0) and np.array_equal(np.asarray(E, dtype=object).dot(Z), F)):
        raise AssertionError("nonnegative solution failed exact verification")
    return _freeze(Z)


def in_cone_of(G, v) -> np.ndarray | None:
    """Coefficients ``lam >= 0`` with ``G @ lam == v``, or None."""
    z = nonneg_solution(G, np.asarray(v, dtype=object).reshape(-1, 1))
    return None if z is None else _freeze(z[:, 0].copy())

