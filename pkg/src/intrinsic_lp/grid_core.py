"""Uniform grids, grid functions, balls and the discretized upper half-space."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Sequence

import numpy as np


class BallOffGrid(ValueError):
    """Raised when a ball contains no grid point."""

    def __init__(self, ball: "Ball"):
        super().__init__(f"ball off grid: center={ball.center}, radius={ball.radius}")
        self.ball = ball


@dataclass(frozen=True)
class Grid:
    """Uniform grid on a box in R^n, n in {1, 2}, same spacing on every axis."""

    lower: tuple[float, ...]
    shape: tuple[int, ...]
    h: float

    def __post_init__(self):
        lower = tuple(float(v) for v in np.atleast_1d(self.lower))
        shape = tuple(int(v) for v in np.atleast_1d(self.shape))
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "h", float(self.h))
        if len(lower) not in (1, 2) or len(shape) != len(lower):
            raise ValueError("grid dimension must be 1 or 2 with matching lower/shape")
        if not self.h > 0 or not math.isfinite(self.h):
            raise ValueError("grid spacing must be positive")
        if min(shape) < 2:
            raise ValueError("need at least 2 points per axis")

    @classmethod
    def uniform(cls, lo: float, hi: float, n_points: int, dim: int = 1) -> "Grid":
        """Grid with n_points per axis spanning [lo, hi] on every axis."""
        h = (hi - lo) / (n_points - 1)
        return cls((lo,) * dim, (n_points,) * dim, h)

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def upper(self) -> tuple[float, ...]:
        return tuple(lo + (n - 1) * self.h for lo, n in zip(self.lower, self.shape))

    @property
    def cell_volume(self) -> float:
        return self.h**self.dim

    @property
    def diameter(self) -> float:
        return self.h * math.sqrt(sum((n - 1) ** 2 for n in self.shape))

    def axes(self) -> list[np.ndarray]:
        return [lo + self.h * np.arange(n) for lo, n in zip(self.lower, self.shape)]

    def points(self) -> np.ndarray:
        """All grid points as a (size, dim) array in row-major order."""
        return _points(self)

    def refined(self) -> "Grid":
        """Same box with half the spacing."""
        return Grid(self.lower, tuple(2 * n - 1 for n in self.shape), self.h / 2)


@lru_cache(maxsize=64)
def _points(grid: Grid) -> np.ndarray:
    mesh = np.meshgrid(*grid.axes(), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    pts.setflags(write=False)
    return pts


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real values attached to every point of a grid (row-major)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size != self.grid.size:
            raise ValueError(f"expected {self.grid.size} values, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: Grid, func: Callable[[np.ndarray], np.ndarray]) -> "GridFunction":
        """Sample func on the grid; func receives a (size, dim) array of points."""
        pts = grid.points()
        arg = pts[:, 0] if grid.dim == 1 else pts
        return cls(grid, np.broadcast_to(np.asarray(func(arg), dtype=float), (grid.size,)))

    @classmethod
    def constant(cls, grid: Grid, c: float) -> "GridFunction":
        return cls(grid, np.full(grid.size, float(c)))

    def as_array(self) -> np.ndarray:
        return self.values.reshape(self.grid.shape)

    def __add__(self, other):
        if isinstance(other, GridFunction):
            return GridFunction(self.grid, self.values + other.values)
        return GridFunction(self.grid, self.values + float(other))

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            return GridFunction(self.grid, self.values * other.values)
        return GridFunction(self.grid, self.values * float(other))

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(self.grid, -self.values)

    def __sub__(self, other):
        return self + (-other)

    def abs(self) -> "GridFunction":
        return GridFunction(self.grid, np.abs(self.values))

    def at(self, points: np.ndarray, extension: str = "clamp") -> np.ndarray:
        """Multilinear interpolation at arbitrary points (shape (..., dim)).

        extension="clamp" continues the function by its boundary values,
        extension="zero" returns 0 outside the box.
        """
        g = self.grid
        pts = np.asarray(points, dtype=float)
        if g.dim == 1 and (pts.ndim == 0 or pts.shape[-1] != 1):
            pts = pts[..., None]
        lead = pts.shape[:-1]
        pts = pts.reshape(-1, g.dim)
        arr = self.as_array()
        inside = np.ones(pts.shape[0], dtype=bool)
        idx0, frac = [], []
        for ax in range(g.dim):
            s = (pts[:, ax] - g.lower[ax]) / g.h
            n = g.shape[ax]
            inside &= (s >= -1e-9) & (s <= n - 1 + 1e-9)
            s = np.clip(s, 0.0, n - 1)
            i = np.minimum(np.floor(s).astype(int), n - 2)
            idx0.append(i)
            frac.append(s - i)
        out = np.zeros(pts.shape[0])
        for corner in range(2**g.dim):
            wgt = np.ones(pts.shape[0])
            ind = []
            for ax in range(g.dim):
                bit = (corner >> ax) & 1
                wgt = wgt * (frac[ax] if bit else 1.0 - frac[ax])
                ind.append(idx0[ax] + bit)
            out += wgt * arr[tuple(ind)]
        if extension == "zero":
            out = np.where(inside, out, 0.0)
        elif extension != "clamp":
            raise ValueError(f"unknown extension {extension!r}")
        return out.reshape(lead)


@dataclass(frozen=True)
class Ball:
    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in np.atleast_1d(self.center)))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    def scaled(self, factor: float) -> "Ball":
        return Ball(self.center, self.radius * factor)


@lru_cache(maxsize=65536)
def ball_indices(grid: Grid, ball: Ball) -> np.ndarray:
    """Flat indices of grid points strictly inside the ball."""
    if len(ball.center) != grid.dim:
        raise ValueError("ball and grid dimensions differ")
    # restrict to the bounding box before the distance test
    lo_idx, hi_idx = [], []
    for ax in range(grid.dim):
        c, lo, n = ball.center[ax], grid.lower[ax], grid.shape[ax]
        lo_idx.append(max(0, int(math.floor((c - ball.radius - lo) / grid.h))))
        hi_idx.append(min(n - 1, int(math.ceil((c + ball.radius - lo) / grid.h))))
    if any(a > b for a, b in zip(lo_idx, hi_idx)):
        return np.empty(0, dtype=np.intp)
    sub = [np.arange(a, b + 1) for a, b in zip(lo_idx, hi_idx)]
    mesh = np.meshgrid(*sub, indexing="ij")
    d2 = np.zeros(mesh[0].shape)
    for ax in range(grid.dim):
        d2 += (grid.lower[ax] + grid.h * mesh[ax] - ball.center[ax]) ** 2
    # strict membership; near-ties from rounding count as outside
    keep = d2 < ball.radius**2 * (1 - 1e-12)
    flat = np.ravel_multi_index(tuple(m[keep] for m in mesh), grid.shape)
    flat = np.sort(flat)
    flat.setflags(write=False)
    return flat


def _nonempty(grid: Grid, ball: Ball) -> np.ndarray:
    idx = ball_indices(grid, ball)
    if idx.size == 0:
        raise BallOffGrid(ball)
    return idx


@dataclass(frozen=True)
class BallFamily:
    """Finite list of balls standing in for the supremum over all balls."""

    balls: tuple[Ball, ...]
    stride: int = 4
    r_min: float = 0.0
    policy: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "balls", tuple(self.balls))
        if not self.balls:
            raise ValueError("ball family must be non-empty")

    @classmethod
    def default(cls, grid: Grid, stride: int = 4, r_min_cells: float = 2.0,
                r_max: float | None = None) -> "BallFamily":
        """Centers on every stride-th grid point, radii r_min*2^k up to r_max.

        r_max defaults to half the domain diameter.
        """
        r_min = r_min_cells * grid.h
        r_max = grid.diameter / 2 if r_max is None else r_max
        radii = []
        r = r_min
        while r <= r_max * (1 + 1e-12):
            radii.append(r)
            r *= 2
        if not radii:
            radii = [r_min]
        sub = [ax[::stride] for ax in grid.axes()]
        mesh = np.meshgrid(*sub, indexing="ij")
        centers = np.stack([m.ravel() for m in mesh], axis=1)
        balls = tuple(Ball(tuple(c), r) for c in centers for r in radii)
        return cls(balls, stride, r_min, f"stride={stride},radii={r_min:.6g}*2^k<= {r_max:.6g}")

    @classmethod
    def centered_chain(cls, center: Sequence[float], radii: Sequence[float]) -> "BallFamily":
        return cls(tuple(Ball(tuple(np.atleast_1d(center)), r) for r in radii), policy="chain")

    def __iter__(self):
        return iter(self.balls)

    def __len__(self):
        return len(self.balls)

    def usable(self, grid: Grid) -> "BallFamily":
        """Drop balls that miss the grid."""
        kept = tuple(b for b in self.balls if ball_indices(grid, b).size > 0)
        return BallFamily(kept, self.stride, self.r_min, self.policy)


def integrate_ball(f: GridFunction, ball: Ball) -> float:
    """Midpoint-rule integral of f over the grid points inside the ball."""
    idx = _nonempty(f.grid, ball)
    return float(f.values[idx].sum() * f.grid.cell_volume)


def ball_measure(grid: Grid, ball: Ball) -> float:
    return _nonempty(grid, ball).size * grid.cell_volume


def mean_on_ball(f: GridFunction, ball: Ball) -> float:
    idx = _nonempty(f.grid, ball)
    return float(f.values[idx].mean())


def ess_inf_on_ball(f: GridFunction, ball: Ball) -> float:
    idx = _nonempty(f.grid, ball)
    return float(f.values[idx].min())


@dataclass(frozen=True)
class HalfSpaceGrid:
    """Base grid times geometric time levels t_k = h*ratio^k, last level >= t_max."""

    base: Grid
    ratio: float = 2.0**0.25
    t_max: float | None = None
    levels: np.ndarray = field(init=False, repr=False, compare=False)
    deltas: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.ratio > 1:
            raise ValueError("time-level ratio must exceed 1")
        t_max = self.base.diameter if self.t_max is None else float(self.t_max)
        if not t_max >= self.base.h:
            raise ValueError("t_max must be at least the grid spacing")
        object.__setattr__(self, "t_max", t_max)
        k_last = max(0, int(math.ceil(math.log(t_max / self.base.h) / math.log(self.ratio) - 1e-9)))
        lv = self.base.h * self.ratio ** np.arange(k_last + 1)
        lv.setflags(write=False)
        d = lv * (self.ratio - 1.0)
        d.setflags(write=False)
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "deltas", d)

    def __len__(self):
        return len(self.levels)


def write_csv(f: GridFunction, path: str | Path) -> None:
    """Write `x[,y],value` rows with 17 significant digits."""
    pts = f.grid.points()
    header = ["x", "y"][: f.grid.dim] + ["value"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for p, v in zip(pts, f.values):
            w.writerow([f"{c:.17g}" for c in p] + [f"{v:.17g}"])


def read_csv(path: str | Path) -> GridFunction:
    """Inverse of write_csv; the grid is rebuilt from the coordinates."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if header not in (["x", "value"], ["x", "y", "value"]):
        raise ValueError(f"{path}: header must be x[,y],value")
    dim = len(header) - 1
    data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    if data.size == 0:
        raise ValueError(f"{path}: no data rows")
    axes = [np.unique(data[:, k]) for k in range(dim)]
    shape = tuple(len(a) for a in axes)
    if int(np.prod(shape)) != data.shape[0]:
        raise ValueError(f"{path}: points do not form a full grid")
    steps = np.concatenate([np.diff(a) for a in axes])
    h = float((axes[0][-1] - axes[0][0]) / (shape[0] - 1))
    if np.max(np.abs(steps - h)) > 1e-9 * max(1.0, abs(h)):
        raise ValueError(f"{path}: grid spacing is not uniform")
    grid = Grid(tuple(a[0] for a in axes), shape, h)
    order = np.lexsort(tuple(data[:, k] for k in reversed(range(dim))))
    return GridFunction(grid, data[order, dim])
