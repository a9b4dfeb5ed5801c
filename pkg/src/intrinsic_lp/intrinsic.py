"""The Hoelder kernel class C_alpha, the exact grid supremum A_alpha by linear
programming, the intrinsic square functions and their BMO commutators."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .grid_core import Grid, GridFunction, HalfSpaceGrid
from .simplex import LPStall, solve_lp

FEAS_TOL = 1e-9


# ---------------------------------------------------------------- kernel grid

@dataclass(frozen=True, eq=False)
class KernelGrid:
    """Lattice of the closed unit ball with spacing 2/(m-1) and uniform weights."""

    alpha: float
    m: int
    dim: int = 1
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)
    bound: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not (0 < self.alpha <= 1):
            raise ValueError("alpha must lie in (0, 1]")
        if self.m < 9 or self.m % 2 == 0:
            raise ValueError("resolution m must be an odd integer >= 9")
        if self.dim not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        ax = np.linspace(-1.0, 1.0, self.m)
        if self.dim == 1:
            z = ax[:, None]
        else:
            X, Y = np.meshgrid(ax, ax, indexing="ij")
            z = np.stack([X.ravel(), Y.ravel()], axis=1)
            z = z[np.linalg.norm(z, axis=1) <= 1 + 1e-12]
        spacing = 2.0 / (self.m - 1)
        r = np.minimum(np.linalg.norm(z, axis=1), 1.0)
        for name, arr in (("nodes", z), ("weights", np.full(z.shape[0], spacing**self.dim)),
                          ("bound", (1.0 - r) ** self.alpha)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def spacing(self) -> float:
        return 2.0 / (self.m - 1)

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    @property
    def interior(self) -> np.ndarray:
        return np.nonzero(self.bound > 0)[0]

    def holder_matrix(self) -> np.ndarray:
        return _holder_matrix(self.nodes.tobytes(), self.nodes.shape, self.alpha)

    def is_feasible(self, theta: np.ndarray, tol: float = FEAS_TOL) -> bool:
        return max_violation(theta, self) <= 1 + tol and abs(theta @ self.weights) <= tol


@lru_cache(maxsize=32)
def _holder_matrix(buf: bytes, shape: tuple, alpha: float) -> np.ndarray:
    z = np.frombuffer(buf).reshape(shape)
    d = np.linalg.norm(z[:, None, :] - z[None, :, :], axis=2) ** alpha
    d.setflags(write=False)
    return d


def max_violation(theta: np.ndarray, kg: KernelGrid) -> float:
    """Largest ratio among |theta_i - theta_j| / |z_i - z_j|^alpha and |theta_i| / (1-|z_i|)^alpha."""
    theta = np.asarray(theta, dtype=float)
    D = kg.holder_matrix()
    diff = np.abs(theta[:, None] - theta[None, :])
    off = ~np.eye(kg.size, dtype=bool)
    pair = float(np.max(diff[off] / D[off])) if kg.size > 1 else 0.0
    U = kg.bound
    zero = U <= 0
    if np.any(np.abs(theta[zero]) > 0):
        return math.inf
    bnd = float(np.max(np.abs(theta[~zero]) / U[~zero])) if np.any(~zero) else 0.0
    return max(pair, bnd)


# ---------------------------------------------------------------- kernel LP

@dataclass(frozen=True, eq=False)
class KernelLP:
    """maximize sum theta_i c_i over the discretized class C_alpha."""

    objective: np.ndarray
    kg: KernelGrid
    pairs: np.ndarray | None = None

    def initial_pairs(self, seed: int = 0) -> np.ndarray:
        """All pairs for small problems, else k-nearest (k=8) plus 64 random pairs."""
        inner = self.kg.interior
        n = inner.size
        iu = np.triu_indices(n, 1)
        all_pairs = np.stack(iu, axis=1)
        if (self.kg.dim == 1 and self.kg.m <= 21) or n <= 20:
            return all_pairs
        z = self.kg.nodes[inner]
        d = np.linalg.norm(z[:, None] - z[None, :], axis=2)
        np.fill_diagonal(d, np.inf)
        near = np.argsort(d, axis=1)[:, :8]
        pairs = {(min(i, j), max(i, j)) for i in range(n) for j in near[i]}
        rng = np.random.default_rng(seed)
        pick = rng.choice(all_pairs.shape[0], size=min(64, all_pairs.shape[0]), replace=False)
        pairs.update(map(tuple, all_pairs[pick]))
        return np.array(sorted(pairs))

    def solve(self, max_rounds: int = 50) -> tuple[float, np.ndarray]:
        """Exact optimum over all node pairs, reached by adding violated pairs."""
        kg = self.kg
        inner = kg.interior
        c = np.asarray(self.objective, dtype=float)[inner]
        U = kg.bound[inner]
        w = kg.weights[inner]
        D = kg.holder_matrix()[np.ix_(inner, inner)]
        pairs = self.initial_pairs() if self.pairs is None else np.asarray(self.pairs)
        n = inner.size
        if not np.any(c):
            return 0.0, np.zeros(kg.size)
        # v = theta + U in [0, 2U]; pair rows v_i - v_j <= d_ij + U_i - U_j
        for _ in range(max_rounds):
            i, j = pairs[:, 0], pairs[:, 1]
            k = pairs.shape[0]
            A = np.zeros((2 * k + n, n))
            A[np.arange(k), i] = 1.0
            A[np.arange(k), j] = -1.0
            A[k + np.arange(k), i] = -1.0
            A[k + np.arange(k), j] = 1.0
            A[2 * k + np.arange(n), np.arange(n)] = 1.0
            dij = D[i, j]
            b = np.concatenate([dij + U[i] - U[j], dij + U[j] - U[i], 2 * U])
            b = np.maximum(b, 0.0)
            res = solve_lp(c, A, b, w[None, :], np.array([w @ U]))
            theta_in = res.x - U
            diff = np.abs(theta_in[:, None] - theta_in[None, :]) - D
            np.fill_diagonal(diff, -np.inf)
            viol = np.argwhere(np.triu(diff > FEAS_TOL * np.maximum(D, 1e-300), 1))
            if viol.size == 0:
                theta = np.zeros(kg.size)
                theta[inner] = theta_in
                return float(c @ theta_in), theta
            order = np.argsort(-diff[viol[:, 0], viol[:, 1]])[:64]
            new = {tuple(p) for p in viol[order]}
            pairs = np.array(sorted(set(map(tuple, pairs)) | new))
        raise LPStall("LP stall: cutting planes did not close")


def lp_objective(f: GridFunction, y, t: float, kg: KernelGrid,
                 multiplier: GridFunction | Callable | None = None,
                 extension: str = "clamp") -> np.ndarray:
    """c_i = f(y - t z_i) * multiplier(y - t z_i) * w_i (node weights live in unit-ball scale)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    pts = y[None, :] - t * kg.nodes
    c = f.at(pts, extension) * kg.weights
    if multiplier is not None:
        m = multiplier.at(pts, extension) if isinstance(multiplier, GridFunction) else multiplier(pts)
        c = c * m
    return c


def kernel_lp_max(f: GridFunction, y, t: float, kg: KernelGrid,
                  multiplier: GridFunction | Callable | None = None) -> float:
    """A_alpha-type supremum sup_theta |sum theta_i c_i| solved exactly by the simplex method."""
    if t < f.grid.h * (1 - 1e-12):
        raise ValueError("t below grid spacing")
    c = lp_objective(f, y, t, kg, multiplier)
    return KernelLP(c, kg).solve()[0]


# ---------------------------------------------------------------- dictionaries

def _bump(kg: KernelGrid, a: np.ndarray, s: float) -> np.ndarray:
    r = np.linalg.norm(kg.nodes - a[None, :], axis=1) / s
    return np.maximum(0.0, 1.0 - r) ** kg.alpha * kg.bound


def normalize_kernel(theta: np.ndarray, kg: KernelGrid) -> np.ndarray | None:
    """Project to weighted mean zero with the corrector (1-|z|)^alpha, then rescale
    so the largest Hoelder/bound ratio is exactly 1. None if degenerate."""
    U = kg.bound
    theta = theta - (theta @ kg.weights) / (U @ kg.weights) * U
    viol = max_violation(theta, kg)
    if not (viol > 1e-12) or not math.isfinite(viol):
        return None
    return theta / viol


def kernel_dictionary(alpha: float, m: int, size: int = 128, dim: int = 1,
                      seed: int = 0) -> np.ndarray:
    """Feasible kernels built from differences of translated bumps.

    Bump profile: max(0, 1 - |z - a|/s)^alpha (1 - |z|)^alpha. Returns an array
    of shape (count, nodes); fewer than `size` survivors only warns.
    """
    if size < 8:
        raise ValueError("dictionary size must be >= 8")
    kg = KernelGrid(alpha, m, dim)
    rng = np.random.default_rng(seed)
    widths = np.array([0.125, 0.25, 0.5, 1.0, 2.0, 4.0])
    out: list[np.ndarray] = []

    def add(th):
        th = normalize_kernel(th, kg)
        if th is not None and len(out) < size:
            out.append(th)

    def at(a):
        return np.full(dim, a) if dim == 1 else np.array([a, 0.0])

    # structured members: single bumps (paired with the corrector) and
    # mirrored wide pairs, which behave like smoothed odd kernels
    for s in (0.25, 0.5, 1.0):
        for a in np.linspace(-0.75, 0.75, 7):
            add(_bump(kg, at(a), s))
    for s in (2.0, 4.0):
        for a in (0.3, 0.5, 0.7, 0.9):
            add(_bump(kg, at(-a), s) - _bump(kg, at(a), s))
    attempts = 0
    while len(out) < size and attempts < 50 * size:
        attempts += 1
        a1, a2 = rng.uniform(-1, 1, (2, dim))
        s1, s2 = rng.choice(widths, 2)
        add(_bump(kg, a1, s1) - _bump(kg, a2, s2))
    if len(out) < size:
        warnings.warn(f"kernel_dictionary: only {len(out)} of {size} kernels survived")
    return np.array(out)


def kernel_decay_check(dictionary: np.ndarray, kg: KernelGrid, eps: float) -> float:
    """max |theta(x1)-theta(x2)| / (|x1-x2|^a [(1+|x1|)^{-n-eps} + (1+|x2|)^{-n-eps}])."""
    D = kg.holder_matrix()
    r = np.linalg.norm(kg.nodes, axis=1)
    decay = (1 + r) ** (-kg.dim - eps)
    den = D * (decay[:, None] + decay[None, :])
    off = ~np.eye(kg.size, dtype=bool)
    best = 0.0
    for th in np.atleast_2d(dictionary):
        diff = np.abs(th[:, None] - th[None, :])
        best = max(best, float(np.max(diff[off] / den[off])))
    if not math.isfinite(best):
        raise ValueError("kernel decay constant is not finite")
    return best


# ---------------------------------------------------------------- refined-dictionary oracle

def _balance(theta: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Shrink the heavier signed part so the weighted mean is zero (stays feasible)."""
    P = float(np.sum(np.maximum(theta, 0) * w))
    N = float(np.sum(np.maximum(-theta, 0) * w))
    if P <= 0 or N <= 0:
        return np.zeros_like(theta)
    a, b = (N / P, 1.0) if P > N else (1.0, P / N)
    return np.where(theta > 0, a * theta, b * theta)


def _repair(theta: np.ndarray, D: np.ndarray, U: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Nearest-style feasible kernel: McShane envelopes, clip to the bound, balance."""
    t = np.min(theta[None, :] + D, axis=1)
    t = np.max(t[None, :] - D, axis=1)
    return _balance(np.clip(t, -U, U), w)


def _project_box_plane(v: np.ndarray, U: np.ndarray, w: np.ndarray, iters: int = 60) -> np.ndarray:
    """Euclidean projection onto {|theta| <= U, w.theta = 0}: clip(v - lam w)."""
    span = (np.max(np.abs(v)) + np.max(U)) / np.min(w)
    lo, hi = -span, span
    for _ in range(iters):
        lam = 0.5 * (lo + hi)
        if np.clip(v - lam * w, -U, U) @ w > 0:
            lo = lam
        else:
            hi = lam
    return np.clip(v - 0.5 * (lo + hi) * w, -U, U)


def refined_dictionary_value(c: np.ndarray, kg: KernelGrid, budget: int = 10_000,
                             base: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """Best |sum theta_i c_i| over `budget` feasible kernels.

    The kernels are the base dictionary followed by the iterates of a
    primal-dual first-order method on the Hoelder-class problem, each made
    exactly feasible by _repair. This is a certified lower bound that does not
    share any code path with the simplex solver.
    """
    c = np.asarray(c, dtype=float)
    inner = kg.interior
    base = kernel_dictionary(kg.alpha, kg.m, 128, kg.dim) if base is None else np.atleast_2d(base)
    vals = np.abs(base @ c)
    k0 = int(np.argmax(vals)) if vals.size else 0
    best = float(vals[k0]) if vals.size else 0.0
    best_theta = base[k0].copy() if vals.size else np.zeros(kg.size)
    iters = budget - base.shape[0]
    cc, U, w = c[inner], kg.bound[inner], kg.weights[inner]
    D = kg.holder_matrix()[np.ix_(inner, inner)]
    scale = float(np.max(np.abs(cc)))
    if scale == 0 or iters <= 0:
        return best, best_theta
    cn = cc / scale
    n = inner.size
    step = 0.99 / math.sqrt(2 * n)
    Y = np.zeros((n, n))
    th = np.zeros(n)
    tb = th.copy()
    for _ in range(iters):
        Y = np.maximum(0.0, Y + step * (tb[:, None] - tb[None, :] - D))
        grad = Y.sum(axis=1) - Y.sum(axis=0) - cn
        new = _project_box_plane(th - step * grad, U, w)
        tb = 2 * new - th
        th = new
        k = _repair(th, D, U, w)
        v = float(k @ cc)
        if abs(v) > best:
            best = abs(v)
            best_theta = np.zeros(kg.size)
            best_theta[inner] = k * np.sign(v)
    return best, best_theta


# ---------------------------------------------------------------- A_alpha fields

@dataclass(frozen=True)
class ConeParams:
    hs: HalfSpaceGrid
    beta: float = 1.0
    lam: float | None = None
    eps_w: float = 1e-8

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("aperture must be positive")
        if self.lam is not None and not self.lam > 0:
            raise ValueError("lambda must be positive")
        if not (0 <= self.eps_w <= 1e-6):
            raise ValueError("eps_w must lie in [0, 1e-6]")


@dataclass(frozen=True)
class OperatorParams:
    alpha: float = 1.0
    lam: float = 4.0
    beta: float = 1.0
    q: float = 2.0
    p0: float = 1.0
    p1: float = 1.0
    eps: float | None = None

    def __post_init__(self):
        if not (0 < self.alpha <= 1):
            raise ValueError("alpha must lie in (0, 1]")


@dataclass(frozen=True, eq=False)
class AField:
    """A_alpha(f)(y, t_k) on the base grid for every time level (shape (K, P))."""

    hs: HalfSpaceGrid
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class PairedField:
    """Per-kernel responses F = theta*f and G = theta*(b f); the commutator
    A-value at vertex x is max_d |b(x) F_d - G_d| (shape (K, P, ndict))."""

    hs: HalfSpaceGrid
    F: np.ndarray
    G: np.ndarray


def _samples(f: GridFunction, hs: HalfSpaceGrid, kg: KernelGrid, k: int) -> np.ndarray:
    """Row y: f(y - t_k z_i) w_i for every node i."""
    pts = hs.base.points()
    t = hs.levels[k]
    locs = pts[:, None, :] - t * kg.nodes[None, :, :]
    return f.at(locs) * kg.weights[None, :]


def default_kernel_grid(alpha: float, dim: int) -> KernelGrid:
    return KernelGrid(alpha, 41 if dim == 1 else 9, dim)


@lru_cache(maxsize=16)
def default_dictionary(alpha: float, m: int, dim: int, size: int = 128) -> np.ndarray:
    d = kernel_dictionary(alpha, m, size, dim)
    d.setflags(write=False)
    return d


def a_alpha_field(f: GridFunction, alpha: float, hs: HalfSpaceGrid, mode: str = "dictionary",
                  kg: KernelGrid | None = None, dictionary: np.ndarray | None = None,
                  multiplier_factory: Callable[[np.ndarray], GridFunction] | None = None,
                  vertex: np.ndarray | None = None) -> AField:
    """A_alpha(f)(y, t) on every cell of hs.

    mode "lp" solves each cell exactly; "dictionary" maximizes over a fixed
    dictionary (a certified lower bound). multiplier_factory(x) gives the
    commutator weight z -> b(x) - b(z) for the vertex x.
    """
    if hs.base != f.grid:
        raise ValueError("half-space grid must sit on the function's grid")
    kg = default_kernel_grid(alpha, f.grid.dim) if kg is None else kg
    mult = None if multiplier_factory is None else multiplier_factory(vertex)
    K, P = len(hs.levels), f.grid.size
    out = np.zeros((K, P))
    if mode in ("dict", "dictionary"):
        D = default_dictionary(kg.alpha, kg.m, kg.dim) if dictionary is None else dictionary
        for k in range(K):
            S = _samples(f if mult is None else f * mult, hs, kg, k)
            out[k] = np.max(np.abs(S @ D.T), axis=1)
    elif mode == "lp":
        g = f if mult is None else f * mult
        for k in range(K):
            S = _samples(g, hs, kg, k)
            for i in range(P):
                out[k, i] = KernelLP(S[i], kg).solve()[0] if np.any(S[i]) else 0.0
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return AField(hs, out)


def paired_field(b: GridFunction, f: GridFunction, alpha: float, hs: HalfSpaceGrid,
                 kg: KernelGrid | None = None, dictionary: np.ndarray | None = None) -> PairedField:
    kg = default_kernel_grid(alpha, f.grid.dim) if kg is None else kg
    D = default_dictionary(kg.alpha, kg.m, kg.dim) if dictionary is None else dictionary
    K, P = len(hs.levels), f.grid.size
    F = np.zeros((K, P, D.shape[0]))
    G = np.zeros_like(F)
    bf = b * f
    for k in range(K):
        F[k] = _samples(f, hs, kg, k) @ D.T
        G[k] = _samples(bf, hs, kg, k) @ D.T
    return PairedField(hs, F, G)


# ---------------------------------------------------------------- quadratures

def _distances(grid: Grid) -> np.ndarray:
    return _dist_cached(grid)


@lru_cache(maxsize=8)
def _dist_cached(grid: Grid) -> np.ndarray:
    pts = grid.points()
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    d.setflags(write=False)
    return d


def _cone_weights(hs: HalfSpaceGrid, k: int, beta: float, row: np.ndarray) -> np.ndarray:
    t = hs.levels[k]
    n = hs.base.dim
    inside = row < beta * t * (1 - 1e-12)
    return inside * (hs.base.cell_volume * hs.deltas[k] / t ** (n + 1))


def _gstar_weights(hs: HalfSpaceGrid, k: int, lam: float, row: np.ndarray, eps_w: float) -> np.ndarray:
    t = hs.levels[k]
    n = hs.base.dim
    wt = (t / (t + row)) ** (lam * n)
    wt = np.where(wt < eps_w, 0.0, wt)
    return wt * (hs.base.cell_volume * hs.deltas[k] / t ** (n + 1))


def area_from_field(field: AField, beta: float = 1.0) -> np.ndarray:
    """S_{alpha,beta} from a precomputed field."""
    hs = field.hs
    dist = _distances(hs.base)
    total = np.zeros(hs.base.size)
    for k in range(len(hs.levels)):
        W = _cone_weights(hs, k, beta, dist)
        total += W @ field.values[k] ** 2
    return np.sqrt(total)


def vertical_from_field(field: AField) -> np.ndarray:
    hs = field.hs
    coef = hs.deltas / hs.levels
    return np.sqrt(np.einsum("k,kp->p", coef, field.values**2))


def gstar_from_field(field: AField, lam: float, eps_w: float = 1e-8) -> np.ndarray:
    hs = field.hs
    dist = _distances(hs.base)
    total = np.zeros(hs.base.size)
    for k in range(len(hs.levels)):
        W = _gstar_weights(hs, k, lam, dist, eps_w)
        total += W @ field.values[k] ** 2
    return np.sqrt(total)


def _resolve_cone(f: GridFunction, cone: ConeParams | HalfSpaceGrid | None) -> ConeParams:
    if cone is None:
        return ConeParams(HalfSpaceGrid(f.grid))
    if isinstance(cone, HalfSpaceGrid):
        return ConeParams(cone)
    return cone


def s_alpha_beta(f: GridFunction, alpha: float, beta: float, cone: ConeParams | HalfSpaceGrid | None = None,
                 mode: str = "dictionary", **kw) -> GridFunction:
    cp = _resolve_cone(f, cone)
    field_ = a_alpha_field(f, alpha, cp.hs, mode, **kw)
    return GridFunction(f.grid, area_from_field(field_, beta))


def s_alpha(f: GridFunction, alpha: float, cone: ConeParams | HalfSpaceGrid | None = None,
            mode: str = "dictionary", **kw) -> GridFunction:
    """Intrinsic Lusin area function with the cone |y - x| < t."""
    return s_alpha_beta(f, alpha, 1.0, cone, mode, **kw)


def g_alpha(f: GridFunction, alpha: float, t_levels: HalfSpaceGrid | None = None,
            mode: str = "dictionary", **kw) -> GridFunction:
    """Vertical intrinsic g-function (sum_k A(x,t_k)^2 Delta_k / t_k)^{1/2}."""
    hs = HalfSpaceGrid(f.grid) if t_levels is None else t_levels
    field_ = a_alpha_field(f, alpha, hs, mode, **kw)
    return GridFunction(f.grid, vertical_from_field(field_))


def g_star_lambda(f: GridFunction, alpha: float, lam: float,
                  cone: ConeParams | HalfSpaceGrid | None = None,
                  mode: str = "dictionary", **kw) -> GridFunction:
    cp = _resolve_cone(f, cone)
    field_ = a_alpha_field(f, alpha, cp.hs, mode, **kw)
    return GridFunction(f.grid, gstar_from_field(field_, lam, cp.eps_w))


# ---------------------------------------------------------------- commutators

def commutator_from_paired(pf: PairedField, b: GridFunction, kind: str, beta: float = 1.0,
                           lam: float | None = None, eps_w: float = 1e-8) -> np.ndarray:
    """Commutator square function values from per-kernel responses.

    kind is "s" (area, aperture beta), "g" (vertical) or "gstar" (weight lam).
    """
    if kind not in ("s", "g", "gstar"):
        raise ValueError(f"unknown commutator kind {kind!r}")
    if kind == "gstar" and lam is None:
        raise ValueError("gstar needs lambda")
    hs = pf.hs
    P = hs.base.size
    dist = _distances(hs.base)
    bv = b.values
    out = np.zeros(P)
    for x in range(P):
        total = 0.0
        for k in range(len(hs.levels)):
            if kind == "g":
                a = np.max(np.abs(bv[x] * pf.F[k, x] - pf.G[k, x]))
                total += a * a * hs.deltas[k] / hs.levels[k]
                continue
            W = (_cone_weights(hs, k, beta, dist[x]) if kind == "s"
                 else _gstar_weights(hs, k, lam, dist[x], eps_w))
            nz = np.nonzero(W)[0]
            if nz.size == 0:
                continue
            a = np.max(np.abs(bv[x] * pf.F[k, nz] - pf.G[k, nz]), axis=1)
            total += float(W[nz] @ (a * a))
        out[x] = math.sqrt(total)
    return out


def _commutator_values(b: GridFunction, f: GridFunction, alpha: float, hs: HalfSpaceGrid,
                       kind: str, beta: float = 1.0, lam: float | None = None, eps_w: float = 1e-8,
                       mode: str = "dictionary", kg: KernelGrid | None = None,
                       dictionary: np.ndarray | None = None) -> np.ndarray:
    if mode in ("dict", "dictionary"):
        pf = paired_field(b, f, alpha, hs, kg, dictionary)
        return commutator_from_paired(pf, b, kind, beta, lam, eps_w)
    if mode != "lp":
        raise ValueError(f"unknown mode {mode!r}")
    kg = default_kernel_grid(alpha, f.grid.dim) if kg is None else kg
    P = f.grid.size
    out = np.zeros(P)
    dist = _distances(f.grid)
    pts = f.grid.points()
    for x in range(P):
        # objective weights carry b(x) - b(z); only cells with positive weight are solved
        g = (b * -1.0 + b.values[x]) * f
        total = 0.0
        for k in range(len(hs.levels)):
            t = hs.levels[k]
            if kind == "g":
                cells, W = np.array([x]), np.array([hs.deltas[k] / t])
            else:
                W = (_cone_weights(hs, k, beta, dist[x]) if kind == "s"
                     else _gstar_weights(hs, k, lam, dist[x], eps_w))
                cells = np.nonzero(W)[0]
                W = W[cells]
            for y, wy in zip(cells, W):
                c = lp_objective(g, pts[y], t, kg)
                a = KernelLP(c, kg).solve()[0] if np.any(c) else 0.0
                total += wy * a * a
        out[x] = math.sqrt(total)
    return out


def commutator_s(b: GridFunction, f: GridFunction, alpha: float,
                 cone: ConeParams | HalfSpaceGrid | None = None, mode: str = "dictionary", **kw) -> GridFunction:
    """[b, S_alpha](f): kernel integrand carries b(x) - b(z) for the cone vertex x."""
    cp = _resolve_cone(f, cone)
    return GridFunction(f.grid, _commutator_values(b, f, alpha, cp.hs, "s", cp.beta, mode=mode, **kw))


def commutator_g(b: GridFunction, f: GridFunction, alpha: float,
                 t_levels: HalfSpaceGrid | None = None, mode: str = "dictionary", **kw) -> GridFunction:
    hs = HalfSpaceGrid(f.grid) if t_levels is None else t_levels
    return GridFunction(f.grid, _commutator_values(b, f, alpha, hs, "g", mode=mode, **kw))


def commutator_gstar(b: GridFunction, f: GridFunction, alpha: float, lam: float,
                     cone: ConeParams | HalfSpaceGrid | None = None, mode: str = "dictionary",
                     **kw) -> GridFunction:
    cp = _resolve_cone(f, cone)
    return GridFunction(f.grid, _commutator_values(b, f, alpha, cp.hs, "gstar", lam=lam,
                                                   eps_w=cp.eps_w, mode=mode, **kw))


def lambda_threshold(p1: float, alpha: float, n: int, low: float = 3.0) -> float:
    """min{max{low, p1}, 3 + 2 alpha / n}."""
    return min(max(low, p1), 3.0 + 2.0 * alpha / n)
