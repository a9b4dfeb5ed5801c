"""Luxembourg-type ball norms and the Morrey / Campanato / BMO space norms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .grid_core import Ball, BallFamily, GridFunction, ball_indices, BallOffGrid
from .growth import (GrowthFunction, OuterFunction, Weight, YoungFunction,
                     complementary_values, normalized_psi)

SPACE_KINDS = ("musielak_morrey", "weighted_orlicz_morrey", "campanato", "campanato_star",
               "bmo", "classical_morrey", "l_phi")


class LuxembourgBracketError(ArithmeticError):
    pass


def _ball_idx(f: GridFunction, ball: Ball) -> np.ndarray:
    idx = ball_indices(f.grid, ball)
    if idx.size == 0:
        raise BallOffGrid(ball)
    return idx


def _gauge(modular: Callable[[float], float], scale: float) -> float:
    """inf{mu > 0 : modular(mu) <= 1} for a continuous decreasing modular.

    Root of log(modular) in log(mu), bracket [1e-12 scale, 1e12 scale].
    Bisection runs first while either end of the bracket is infinite.
    """
    lo, hi = math.log(1e-12 * scale), math.log(1e12 * scale)

    def g(lm):
        v = modular(math.exp(lm))
        if v <= 0:
            return -math.inf
        return math.log(v)

    glo, ghi = g(lo), g(hi)
    if not (glo > 0 and ghi < 0):
        raise LuxembourgBracketError("luxembourg bracket")
    for _ in range(200):
        if math.isfinite(glo) and math.isfinite(ghi):
            break
        m = 0.5 * (lo + hi)
        gm = g(m)
        if gm == 0:
            return math.exp(m)
        if gm > 0:
            lo, glo = m, gm
        else:
            hi, ghi = m, gm
    else:
        return math.exp(0.5 * (lo + hi))
    root = brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return math.exp(root)


def _ball_points(f: GridFunction, idx: np.ndarray) -> np.ndarray:
    return f.grid.points()[idx]


def luxembourg_functional(f: GridFunction, phi: GrowthFunction, ball: Ball, mu: float) -> float:
    """(1/phi(B,1)) int_B phi(x, |f|/mu) dx."""
    idx = _ball_idx(f, ball)
    b = phi.bind(_ball_points(f, idx))
    a = np.abs(f.values[idx])
    return float(b(a / mu).sum() / b(np.ones(idx.size)).sum())


def luxembourg_norm_ball(f: GridFunction, phi: GrowthFunction, ball: Ball) -> float:
    """||f||_{phi,B}: the mu with (1/phi(B,1)) int_B phi(x,|f|/mu) = 1."""
    idx = _ball_idx(f, ball)
    a = np.abs(f.values[idx])
    top = float(a.max())
    if top == 0:
        return 0.0
    b = phi.bind(_ball_points(f, idx))
    denom = float(b(np.ones(idx.size)).sum())
    return _gauge(lambda mu: float(b(a / mu).sum()) / denom, top)


def complementary_functional(g: GridFunction, phi: GrowthFunction, ball: Ball, mu: float) -> float:
    idx = _ball_idx(g, ball)
    pts = _ball_points(g, idx)
    psi = normalized_psi(phi)
    w1 = phi.bind(pts)(np.ones(idx.size))
    vals = complementary_values(psi, pts, np.abs(g.values[idx]) / mu)
    return float((vals * w1).sum() / w1.sum())


def complementary_norm_ball(g: GridFunction, phi: GrowthFunction, ball: Ball) -> float:
    """||g||_{psi~,B} with integrand psi~(x, |g|/mu) phi(x, 1), normalizer phi(B, 1)."""
    idx = _ball_idx(g, ball)
    a = np.abs(g.values[idx])
    top = float(a.max())
    if top == 0:
        return 0.0
    pts = _ball_points(g, idx)
    psi = normalized_psi(phi)
    w1 = phi.bind(pts)(np.ones(idx.size))
    denom = float(w1.sum())
    x_arg = None if psi.x_independent else pts
    nz = a > 0

    def modular(mu):
        vals = np.zeros(idx.size)
        vals[nz] = complementary_values(psi, None if x_arg is None else x_arg[nz], a[nz] / mu)
        return float((vals * w1).sum()) / denom

    return _gauge(modular, top)


def luxembourg_norm_global(f: GridFunction, phi: GrowthFunction) -> float:
    """inf{mu : int phi(x, |f|/mu) dx <= 1} over the whole grid."""
    a = np.abs(f.values)
    top = float(a.max())
    if top == 0:
        return 0.0
    b = phi.bind(f.grid.points())
    vol = f.grid.cell_volume
    return _gauge(lambda mu: float(b(a / mu).sum()) * vol, top)


def chi_ball_norm(phi: GrowthFunction, ball: Ball, grid) -> float:
    """||chi_B||_{L^phi}: the mu with int_B phi(x, 1/mu) dx = 1."""
    idx = ball_indices(grid, ball)
    if idx.size == 0:
        raise BallOffGrid(ball)
    b = phi.bind(grid.points()[idx])
    vol = grid.cell_volume
    ones = np.ones(idx.size)
    return _gauge(lambda mu: float(b(ones / mu).sum()) * vol, 1.0)


def phi_ball(phi: GrowthFunction, ball: Ball, grid, t: float = 1.0) -> float:
    """phi(B, t) = int_B phi(x, t) dx."""
    idx = ball_indices(grid, ball)
    if idx.size == 0:
        raise BallOffGrid(ball)
    return float(phi.bind(grid.points()[idx])(np.full(idx.size, t)).sum() * grid.cell_volume)


# ---------------------------------------------------------------- space specs

@dataclass(frozen=True, eq=False)
class SpaceSpec:
    kind: str
    balls: BallFamily | None = None
    phi: GrowthFunction | None = None
    outer: OuterFunction | None = None
    young: YoungFunction | None = None
    weight: Weight | None = None
    p: float | None = None
    kappa: float | None = None
    q: float | None = None

    def __post_init__(self):
        k = self.kind
        if k not in SPACE_KINDS:
            raise ValueError(f"unknown space kind {k!r}")
        if k != "l_phi" and self.balls is None:
            raise ValueError(f"{k} needs a ball family")
        if k in ("musielak_morrey", "l_phi", "campanato", "campanato_star") and self.phi is None:
            raise ValueError(f"{k} needs a growth function")
        if k in ("musielak_morrey", "weighted_orlicz_morrey") and self.outer is None:
            raise ValueError(f"{k} needs an outer function")
        if k == "weighted_orlicz_morrey" and self.young is None:
            raise ValueError("weighted_orlicz_morrey needs a Young function")
        if k in ("campanato", "campanato_star"):
            if self.q is None or not (1 <= self.q < math.inf):
                raise ValueError("campanato kinds need q in [1, inf)")
        if k == "classical_morrey":
            if self.p is None or self.kappa is None or not (1 <= self.p < math.inf) or not (0 <= self.kappa < 1):
                raise ValueError("classical_morrey needs p in [1,inf) and kappa in [0,1)")


def classical_morrey_ball(f: GridFunction, p: float, kappa: float, ball: Ball) -> float:
    idx = _ball_idx(f, ball)
    vol = f.grid.cell_volume
    measure = idx.size * vol
    return float((measure ** (-kappa) * np.sum(np.abs(f.values[idx]) ** p) * vol) ** (1.0 / p))


def musielak_morrey_ball(f: GridFunction, phi: GrowthFunction, outer: OuterFunction, ball: Ball) -> float:
    """phi_small(phi(B,1)) * ||f||_{phi,B}; a center-dependent outer uses the ball center."""
    pb = phi_ball(phi, ball, f.grid)
    scale = outer(pb, ball.center) if outer.center_dependent else outer(pb)
    return float(scale) * luxembourg_norm_ball(f, phi, ball)


def weighted_orlicz_morrey_ball(f: GridFunction, young: YoungFunction, weight: Weight | None,
                                outer: OuterFunction, ball: Ball) -> float:
    """inf mu with (1/(w(B) phi(w(B)))) int_B Phi(|f|/mu) w <= 1."""
    idx = _ball_idx(f, ball)
    a = np.abs(f.values[idx])
    top = float(a.max())
    if top == 0:
        return 0.0
    w = np.ones(idx.size) if weight is None else weight.at(_ball_points(f, idx))
    wB = float(w.sum() * f.grid.cell_volume)
    scale = outer(wB, ball.center) if outer.center_dependent else outer(wB)
    denom = wB * float(scale)
    vol = f.grid.cell_volume
    return _gauge(lambda mu: float((young(a / mu) * w).sum()) * vol / denom, top)


def campanato_ball(f: GridFunction, phi: GrowthFunction, q: float, ball: Ball, star: bool = False) -> float:
    """(1/||chi_B||) (int_B [|f - c_B| / phi(x, 1/||chi_B||)]^q phi(x, 1/||chi_B||) dx)^{1/q}.

    c_B is the mean of f on B, or its minimum on B for the star variant.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    idx = _ball_idx(f, ball)
    v = f.values[idx]
    c = v.min() if star else v.mean()
    dev = np.abs(v - c)
    if not np.any(dev > 0):
        return 0.0
    chi = chi_ball_norm(phi, ball, f.grid)
    ph = phi.bind(_ball_points(f, idx))(np.full(idx.size, 1.0 / chi))
    integral = float(np.sum((dev / ph) ** q * ph) * f.grid.cell_volume)
    return integral ** (1.0 / q) / chi


def bmo_ball(b: GridFunction, ball: Ball) -> float:
    v = b.values[_ball_idx(b, ball)]
    return float(np.mean(np.abs(v - v.mean())))


def oscillation_ball(b: GridFunction, ball: Ball, p: float = 2.0) -> float:
    """(mean_B |b - b_B|^p)^{1/p}."""
    v = b.values[_ball_idx(b, ball)]
    return float(np.mean(np.abs(v - v.mean()) ** p) ** (1.0 / p))


def ball_norms(f: GridFunction, spec: SpaceSpec) -> list[tuple[Ball, float]]:
    """Per-ball values whose maximum is the space norm."""
    k = spec.kind
    if k == "l_phi":
        raise ValueError("l_phi has no ball decomposition")
    rows = []
    for ball in spec.balls:
        if ball_indices(f.grid, ball).size == 0:
            continue
        if k == "musielak_morrey":
            v = musielak_morrey_ball(f, spec.phi, spec.outer, ball)
        elif k == "weighted_orlicz_morrey":
            v = weighted_orlicz_morrey_ball(f, spec.young, spec.weight, spec.outer, ball)
        elif k == "campanato":
            v = campanato_ball(f, spec.phi, spec.q, ball)
        elif k == "campanato_star":
            v = campanato_ball(f, spec.phi, spec.q, ball, star=True)
        elif k == "bmo":
            v = bmo_ball(f, ball)
        else:
            v = classical_morrey_ball(f, spec.p, spec.kappa, ball)
        rows.append((ball, v))
    if not rows:
        raise BallOffGrid(spec.balls.balls[0])
    return rows


def space_norm(f: GridFunction, spec: SpaceSpec) -> float:
    if spec.kind == "l_phi":
        return luxembourg_norm_global(f, spec.phi)
    return max(v for _, v in ball_norms(f, spec))


def morrey_norm(f: GridFunction, spec: SpaceSpec) -> float:
    if spec.kind != "musielak_morrey":
        raise ValueError("morrey_norm needs a musielak_morrey spec")
    return space_norm(f, spec)


def classical_morrey_norm(f: GridFunction, p: float, kappa: float, balls: BallFamily) -> float:
    return space_norm(f, SpaceSpec("classical_morrey", balls, p=p, kappa=kappa))


def weighted_orlicz_morrey_norm(f: GridFunction, spec: SpaceSpec) -> float:
    if spec.kind != "weighted_orlicz_morrey":
        raise ValueError("needs a weighted_orlicz_morrey spec")
    return space_norm(f, spec)


def campanato_norm(f: GridFunction, spec: SpaceSpec) -> float:
    if spec.kind not in ("campanato", "campanato_star"):
        raise ValueError("needs a campanato spec")
    return space_norm(f, SpaceSpec("campanato", spec.balls, phi=spec.phi, q=spec.q))


def campanato_star_norm(f: GridFunction, spec: SpaceSpec) -> float:
    if spec.kind not in ("campanato", "campanato_star"):
        raise ValueError("needs a campanato spec")
    return space_norm(f, SpaceSpec("campanato_star", spec.balls, phi=spec.phi, q=spec.q))


def bmo_norm(b: GridFunction, balls: BallFamily) -> float:
    return space_norm(b, SpaceSpec("bmo", balls))


def john_nirenberg_constant(b: GridFunction, balls: BallFamily, p: float = 2.0) -> float:
    """sup_B L^p oscillation / sup_B L^1 oscillation."""
    bmo = bmo_norm(b, balls)
    if bmo == 0:
        return 0.0
    osc = max(oscillation_ball(b, ball, p) for ball in balls if ball_indices(b.grid, ball).size)
    return osc / bmo


def generalized_holder_check(f: GridFunction, g: GridFunction, phi: GrowthFunction, ball: Ball) -> float:
    """[(1/phi(B,1)) int_B |f||g| phi(x,1)] / (||f||_{phi,B} ||g||_{psi~,B}); at most 2."""
    idx = _ball_idx(f, ball)
    w1 = phi.bind(_ball_points(f, idx))(np.ones(idx.size))
    num = float(np.sum(np.abs(f.values[idx] * g.values[idx]) * w1) / w1.sum())
    if num == 0:
        return 0.0
    return num / (luxembourg_norm_ball(f, phi, ball) * complementary_norm_ball(g, phi, ball))
