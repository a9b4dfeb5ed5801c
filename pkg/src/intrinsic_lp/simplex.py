"""Dense two-phase tableau simplex with Bland's anti-cycling rule.

Solves   maximize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class LPStall(RuntimeError):
    """Iteration cap reached; cannot happen with Bland's rule short of a bad cap."""


class LPInfeasible(ValueError):
    pass


class LPUnbounded(ValueError):
    pass


@dataclass
class LPResult:
    x: np.ndarray
    value: float
    iterations: int


def _pivot(T: np.ndarray, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    nz = np.nonzero(col)[0]
    if nz.size:
        T[nz] -= np.outer(col[nz], T[r])


def _run(T: np.ndarray, basis: np.ndarray, n_cols: int, tol: float, max_iter: int) -> int:
    """Bland's rule on tableau T (last row = reduced costs, last column = rhs)."""
    it = 0
    m = T.shape[0] - 1
    while True:
        red = T[-1, :n_cols]
        cand = np.nonzero(red > tol)[0]
        if cand.size == 0:
            return it
        j = int(cand[0])
        col = T[:m, j]
        pos = np.nonzero(col > tol)[0]
        if pos.size == 0:
            raise LPUnbounded("objective unbounded")
        ratios = T[pos, -1] / col[pos]
        best = ratios.min()
        ties = pos[ratios <= best + tol * max(1.0, abs(best))]
        r = int(ties[np.argmin(basis[ties])])
        _pivot(T, r, j)
        basis[r] = j
        it += 1
        if it >= max_iter:
            raise LPStall("LP stall")


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
             tol: float = 1e-10, max_iter: int = 200_000) -> LPResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq

    # rows with negative rhs are flipped and need an artificial variable
    flip_ub = b_ub < 0
    flip_eq = b_eq < 0
    A = np.vstack([np.where(flip_ub[:, None], -A_ub, A_ub), np.where(flip_eq[:, None], -A_eq, A_eq)])
    b = np.concatenate([np.abs(b_ub), np.abs(b_eq)])
    slack_sign = np.where(flip_ub, -1.0, 1.0)
    needs_art = np.concatenate([flip_ub, np.ones(m_eq, dtype=bool)])
    art_rows = np.nonzero(needs_art)[0]
    n_art = art_rows.size

    n_cols = n + m_ub + n_art
    T = np.zeros((m + 1, n_cols + 1))
    T[:m, :n] = A
    T[np.arange(m_ub), n + np.arange(m_ub)] = slack_sign
    T[art_rows, n + m_ub + np.arange(n_art)] = 1.0
    T[:m, -1] = b
    basis = np.zeros(m, dtype=np.int64)
    basis[:m_ub] = n + np.arange(m_ub)
    basis[art_rows] = n + m_ub + np.arange(n_art)

    iters = 0
    if n_art:
        # phase 1: maximize -sum(artificials); express in terms of nonbasics
        T[-1, :] = T[art_rows, :].sum(axis=0)
        T[-1, n + m_ub:n_cols] = 0.0
        iters += _run(T, basis, n_cols, tol, max_iter)
        if T[-1, -1] > 1e-8 * max(1.0, np.abs(b).max()):
            raise LPInfeasible("no feasible point")
        # drive remaining zero-level artificials out of the basis
        keep = np.ones(m + 1, dtype=bool)
        for r in range(m):
            if basis[r] >= n + m_ub:
                row = T[r, :n + m_ub]
                nz = np.nonzero(np.abs(row) > tol)[0]
                if nz.size:
                    _pivot(T, r, int(nz[0]))
                    basis[r] = int(nz[0])
                else:
                    keep[r] = False
        T = T[keep]
        basis = basis[keep[:-1]]
        T = np.delete(T, np.s_[n + m_ub:n_cols], axis=1)
        n_cols = n + m_ub

    # phase 2 objective row: c_j - z_j
    T[-1, :] = 0.0
    T[-1, :n] = c
    cb = np.zeros(basis.size)
    inb = basis < n
    cb[inb] = c[basis[inb]]
    T[-1, :] -= cb @ T[:-1, :]
    iters += _run(T, basis, n_cols, tol, max_iter - iters)
    x = np.zeros(n_cols)
    x[basis] = T[:-1, -1]
    x = x[:n]
    return LPResult(x, float(c @ x), iters)
