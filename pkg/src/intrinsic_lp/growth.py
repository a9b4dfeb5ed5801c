"""Growth functions phi(x, t), Young functions, complementary functions and
the integral/weight conditions used as theorem hypotheses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .grid_core import BallFamily, Grid, GridFunction, ball_indices, read_csv

# t-lattice for Legendre suprema: 64 points per decade over [1e-8, 1e8]
T_LATTICE = np.logspace(-8.0, 8.0, 16 * 64 + 1)
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def as_points(x) -> np.ndarray:
    """Coerce to a (P, n) array; a flat array is read as P points in 1D."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return x.reshape(1, 1)
    if x.ndim == 1:
        return x[:, None]
    return x


class TypeViolation(ValueError):
    pass


class ComplementaryDiverges(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class YoungFunction:
    """Increasing convex Phi with Phi(0)=0, declared lower/upper types."""

    func: Callable[[np.ndarray], np.ndarray]
    p0: float
    p1: float
    name: str = "custom"
    powers: tuple[float, ...] = ()

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))

    @classmethod
    def power(cls, p: float) -> "YoungFunction":
        p = float(p)
        return cls(lambda t: t**p, p, p, f"t^{p:g}", (p,))

    @classmethod
    def sum_of_powers(cls, *ps: float) -> "YoungFunction":
        ps = tuple(sorted({float(p) for p in ps}))
        if len(ps) == 1:
            return cls.power(ps[0])

        def func(t):
            return sum(t**p for p in ps)

        return cls(func, ps[0], ps[-1], "+".join(f"t^{p:g}" for p in ps), ps)

    @property
    def is_power(self) -> bool:
        return len(self.powers) == 1

    def check(self, lattice: np.ndarray | None = None, rtol: float = 1e-9) -> dict:
        """Midpoint convexity and the two limits of Phi(t)/t on a sampled lattice."""
        t = np.logspace(-6, 6, 241) if lattice is None else np.asarray(lattice, float)
        a, b = t[:-1], t[1:]
        mid = self((a + b) / 2)
        avg = (self(a) + self(b)) / 2
        convex = bool(np.all(mid <= avg * (1 + rtol) + 1e-300))
        ratio = self(t) / t
        return {
            "convex": convex,
            "zero_at_zero": float(self(np.array(0.0))) == 0.0,
            "small_limit": bool(ratio[0] < 1e-2 * ratio[len(t) // 2]),
            "large_limit": bool(ratio[-1] > 1e2 * ratio[len(t) // 2]),
        }


@dataclass(frozen=True, eq=False)
class Weight:
    """Strictly positive weight stored on a grid, evaluated by interpolation."""

    values: GridFunction

    def __post_init__(self):
        if not np.all(self.values.values > 0):
            raise ValueError("weight values must be strictly positive")

    @classmethod
    def from_callable(cls, grid: Grid, func) -> "Weight":
        return cls(GridFunction.from_callable(grid, func))

    @classmethod
    def constant(cls, grid: Grid, c: float = 1.0) -> "Weight":
        return cls(GridFunction.constant(grid, c))

    @property
    def grid(self) -> Grid:
        return self.values.grid

    def at(self, points: np.ndarray) -> np.ndarray:
        return self.values.at(points, extension="clamp")


@dataclass(frozen=True, eq=False)
class GrowthFunction:
    """phi(x, t): either weight(x)*profile(t) or a general evaluator.

    Evaluation convention: x has shape (P, n); t has shape (P,) or (P, K).
    """

    p0: float
    p1: float
    q: float = 1.0
    family: str = "custom"
    profile: Callable[[np.ndarray], np.ndarray] | None = None
    weight: Weight | None = None
    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    young: YoungFunction | None = None
    exponent: float | None = None

    def __post_init__(self):
        if not (0 < self.p0 <= self.p1 < math.inf):
            raise ValueError("need 0 < p0 <= p1 < inf")
        if self.q < 1:
            raise ValueError("Muckenhoupt exponent must be >= 1")
        if (self.profile is None) == (self.evaluator is None):
            raise ValueError("give exactly one of profile or evaluator")

    # constructors
    @classmethod
    def power(cls, p: float) -> "GrowthFunction":
        p = float(p)
        return cls(p, p, 1.0, "power", profile=lambda t: t**p,
                   young=YoungFunction.power(p), exponent=p)

    @classmethod
    def weighted_power(cls, w: Weight, p: float, q: float = 1.0) -> "GrowthFunction":
        p = float(p)
        return cls(p, p, q, "weighted_power", profile=lambda t: t**p, weight=w,
                   young=YoungFunction.power(p), exponent=p)

    @classmethod
    def weighted_orlicz(cls, w: Weight | None, young: YoungFunction, q: float = 1.0) -> "GrowthFunction":
        return cls(young.p0, young.p1, q, "weighted_orlicz", profile=young.func,
                   weight=w, young=young)

    @classmethod
    def custom(cls, evaluator, p0: float, p1: float, q: float = 1.0) -> "GrowthFunction":
        return cls(p0, p1, q, "custom", evaluator=evaluator)

    @property
    def x_independent(self) -> bool:
        return self.evaluator is None and self.weight is None

    def weight_at(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.weight is None:
            return np.ones(x.shape[0])
        return self.weight.at(x)

    def __call__(self, x, t):
        x = as_points(x)
        t = np.asarray(t, dtype=float)
        if self.evaluator is not None:
            return np.asarray(self.evaluator(x, t), dtype=float)
        w = self.weight_at(x)
        w = w.reshape(w.shape + (1,) * (t.ndim - 1)) if t.ndim >= 1 else w
        return w * self.profile(t)

    def bind(self, x: np.ndarray) -> "BoundGrowth":
        return BoundGrowth(self, as_points(x))


@dataclass(frozen=True, eq=False)
class BoundGrowth:
    """phi restricted to a fixed set of points, t -> phi(x_i, t_i)."""

    phi: GrowthFunction
    x: np.ndarray
    w: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "w", self.phi.weight_at(self.x) if self.phi.evaluator is None else None)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.w is None:
            return self.phi(self.x, t)
        w = self.w.reshape(self.w.shape + (1,) * (t.ndim - 1))
        return w * self.phi.profile(t)


@dataclass(frozen=True)
class CheckResult:
    check: str
    param: str
    constant: float
    passed: bool
    diverged: bool = False

    def row(self) -> list[str]:
        return [self.check, self.param, f"{self.constant:.17g}", "true" if self.passed else "false"]


CHECK_HEADER = ["check", "param", "fitted_constant", "pass"]


# ---------------------------------------------------------------- type exponents

def type_constant(phi: GrowthFunction, which: str, x_points: np.ndarray,
                  t_lattice: np.ndarray | None = None,
                  s_lattice: np.ndarray | None = None) -> float:
    """max over the lattice of phi(x, s t) / (s^p phi(x, t)), p = p0 or p1."""
    if which not in ("lower", "upper"):
        raise ValueError("which must be 'lower' or 'upper'")
    x = as_points(x_points)
    t = np.logspace(-4, 4, 33) if t_lattice is None else np.asarray(t_lattice, float)
    if s_lattice is None:
        s = np.logspace(-4, 0, 17) if which == "lower" else np.logspace(0, 4, 17)
    else:
        s = np.asarray(s_lattice, float)
    p = phi.p0 if which == "lower" else phi.p1
    P, S, T = x.shape[0], s.size, t.size
    xr = np.repeat(x, S * T, axis=0)
    st = np.tile((s[:, None] * t[None, :]).ravel(), P)
    tt = np.tile(np.tile(t, S), P)
    ss = np.tile(np.repeat(s, T), P)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = phi(xr, st) / (ss**p * phi(xr, tt))
    bad = ~np.isfinite(ratio)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise TypeViolation(f"type violation at (x={tuple(xr[k])}, s={ss[k]:.6g}, t={tt[k]:.6g})")
    return float(ratio.max())


def normalized_psi(phi: GrowthFunction) -> GrowthFunction:
    """psi(x, t) = phi(x, t) / phi(x, 1)."""
    if phi.evaluator is None:
        prof = phi.profile
        one = float(prof(np.array(1.0)))
        if one == 1.0:
            norm_prof = prof
        else:
            def norm_prof(t, prof=prof, one=one):
                return prof(t) / one
        fam = "power" if phi.family in ("power", "weighted_power") else "normalized"
        young = phi.young if one == 1.0 else None
        return GrowthFunction(phi.p0, phi.p1, 1.0, fam, profile=norm_prof,
                              young=young, exponent=phi.exponent)

    def ev(x, t, ev0=phi.evaluator):
        base = ev0(x, np.ones(x.shape[0]))
        base = base.reshape(base.shape + (1,) * (np.ndim(t) - 1))
        return ev0(x, t) / base

    return GrowthFunction(phi.p0, phi.p1, phi.q, "normalized", evaluator=ev)


# ---------------------------------------------------------------- Legendre transforms

def _legendre(values: Callable[[np.ndarray], np.ndarray], s: np.ndarray) -> np.ndarray:
    """sup_{t>0} (s t - F(t)) per entry of s, where values(t) evaluates F row-wise.

    values receives t of shape (S, K) and must return the same shape; row i
    belongs to s[i]. Divergent rows (argmax at the top of the lattice) are inf.
    """
    s = np.asarray(s, dtype=float).ravel()
    S = s.size
    out = np.zeros(S)
    if S == 0:
        return out
    K = T_LATTICE.size
    chunk = max(1, 2_000_000 // K)
    for a in range(0, S, chunk):
        sl = slice(a, min(S, a + chunk))
        sc = s[sl]
        tt = np.broadcast_to(T_LATTICE, (sc.size, K))
        vals = sc[:, None] * T_LATTICE[None, :] - values(tt, sl)
        k = np.argmax(vals, axis=1)
        best = vals[np.arange(sc.size), k]
        diverge = (k == K - 1) & (vals[:, -1] > vals[:, -2])
        lo = T_LATTICE[np.maximum(k - 1, 0)]
        hi = T_LATTICE[np.minimum(k + 1, K - 1)]
        lo = np.where(k == 0, 0.0, lo)
        refined = _golden_max(values, sc, lo, hi, sl)
        res = np.maximum(np.maximum(best, refined), 0.0)
        res[diverge] = np.inf
        out[sl] = res
    return out


def _golden_max(values, s, lo, hi, sl, iters: int = 100) -> np.ndarray:
    """Vectorized golden-section search for max of s t - F(t) on [lo, hi]."""
    a, b = lo.copy(), hi.copy()

    def obj(t):
        return s * t - values(t[:, None], sl)[:, 0]

    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = obj(c), obj(d)
    for _ in range(iters):
        left = fc >= fd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        c_new = np.where(left, b - _GOLDEN * (b - a), d)
        d_new = np.where(left, c, a + _GOLDEN * (b - a))
        probe = np.where(left, c_new, d_new)
        fp = obj(probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        c, d = c_new, d_new
        if np.all(b - a <= 1e-14 * np.maximum(b, 1e-300)):
            break
    return np.maximum(fc, fd)


def _psi_rows(psi: GrowthFunction, x: np.ndarray | None):
    """Row-wise evaluator of psi for _legendre; row i uses point x[i]."""
    if psi.evaluator is None and psi.weight is None:
        prof = psi.profile
        return lambda t, sl: prof(t)
    xs = as_points(x)
    return lambda t, sl: psi(xs[sl], t)


def complementary_values(psi: GrowthFunction, x: np.ndarray | None, s) -> np.ndarray:
    """psi~(x_i, s_i) for paired arrays; inf where the supremum diverges."""
    s = np.asarray(s, dtype=float)
    shape = s.shape
    flat = s.ravel()
    if x is not None and not (psi.evaluator is None and psi.weight is None):
        xs = as_points(x)
        if xs.shape[0] != flat.size:
            xs = np.repeat(xs, flat.size // xs.shape[0], axis=0)
        vals = _legendre(_psi_rows(psi, xs), flat)
    else:
        vals = _legendre(_psi_rows(psi, None), flat)
    return vals.reshape(shape)


def complementary(psi: GrowthFunction, x, s: float) -> float:
    """psi~(x, s) = sup_{t>0} {s t - psi(x, t)}."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    x = as_points(x) if x is not None else np.zeros((1, 1))
    v = float(complementary_values(psi, x, np.array([s]))[0])
    if not math.isfinite(v):
        raise ComplementaryDiverges(f"complementary diverges at s={s}")
    return v


def complementary_bounded_at_one(psi: GrowthFunction, x_points: np.ndarray) -> float:
    """max over x of psi~(x, 1)."""
    x = as_points(x_points)
    vals = complementary_values(psi, x, np.ones(x.shape[0]))
    if not np.all(np.isfinite(vals)):
        raise ComplementaryDiverges("complementary diverges at s=1")
    return float(vals.max())


def young_complementary(young: YoungFunction, s) -> np.ndarray:
    """Phi~(s) = sup_t {s t - Phi(t)}."""
    return _legendre(lambda t, sl: young(t), np.atleast_1d(np.asarray(s, float)))


def _increasing_inverse(func: Callable[[float], float], r: float, rtol: float = 1e-12) -> float:
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r == 0:
        return 0.0
    lo, hi = 0.0, 1.0
    while func(hi) < r:
        lo, hi = hi, hi * 2.0
        if hi > 1e300:
            raise ValueError("inverse bracket failed")
    return float(brentq(lambda t: func(t) - r, lo, hi, xtol=1e-300, rtol=rtol, maxiter=500))


def _increasing_inverse_vec(func: Callable[[np.ndarray], np.ndarray], r: np.ndarray,
                            rtol: float = 1e-13, max_iter: int = 200) -> np.ndarray:
    """Vectorized bisection for func(t) = r, bracket grown geometrically from [0, 1]."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be nonnegative")
    lo = np.zeros_like(r)
    hi = np.ones_like(r)
    for _ in range(2100):
        low = func(hi) < r
        if not np.any(low):
            break
        lo = np.where(low, hi, lo)
        hi = np.where(low, hi * 2.0, hi)
    else:
        raise ValueError("inverse bracket failed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        below = func(mid) < r
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= rtol * hi):
            break
    return np.where(r == 0, 0.0, 0.5 * (lo + hi))


def young_inverse(young: YoungFunction, r):
    """Phi^{-1}(r) by bisection on a bracket grown geometrically from [0, 1]."""
    if np.ndim(r) == 0:
        return _increasing_inverse(lambda t: float(young(t)), float(r))
    return _increasing_inverse_vec(young, np.asarray(r, float))


def young_complementary_inverse(young: YoungFunction, r):
    """Inverse of s -> Phi~(s)."""
    def f(sv):
        return young_complementary(young, sv).reshape(np.shape(sv))
    return _increasing_inverse_vec(f, np.atleast_1d(np.asarray(r, float))).reshape(np.shape(r))


def young_sandwich(young: YoungFunction, r: np.ndarray) -> np.ndarray:
    """Phi^{-1}(r) * Phi~^{-1}(r) / r, which must lie in [1, 2]."""
    r = np.asarray(r, dtype=float)
    return young_inverse(young, r) * young_complementary_inverse(young, r) / r


# ---------------------------------------------------------------- weights

def _ball_sets(grid: Grid, balls: BallFamily) -> list[np.ndarray]:
    return [idx for idx in (ball_indices(grid, b) for b in balls) if idx.size]


def muckenhoupt_constant(phi: GrowthFunction, q: float, balls: BallFamily, grid: Grid,
                         t_lattice: np.ndarray | None = None,
                         per_ball: bool = False):
    """max over t and balls of mean_B phi(., t) * mean_B(phi^{-q'/q})^{q/q'}.

    For q = 1 the second factor is max_B phi(., t)^{-1}.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    t = np.logspace(-4, 4, 17) if t_lattice is None else np.asarray(t_lattice, float)
    sets = _ball_sets(grid, balls)
    if not sets:
        raise ValueError("zero-measure ball family")
    pts = grid.points()
    table = np.zeros((t.size, len(sets)))
    bound = phi.bind(pts)
    for i, tv in enumerate(t):
        vals = bound(np.full(pts.shape[0], tv))
        for j, idx in enumerate(sets):
            v = vals[idx]
            if q == 1:
                table[i, j] = v.mean() / v.min()
            else:
                qq = q / (q - 1.0)
                table[i, j] = v.mean() * np.mean(v ** (-qq / q)) ** (q / qq)
    const = float(table.max())
    return (const, table) if per_ball else const


def reverse_holder_constant(w: Weight | GridFunction, r_exp: float, balls: BallFamily) -> float:
    """max over balls of (mean w^r)^{1/r} / mean w."""
    gf = w.values if isinstance(w, Weight) else w
    if r_exp <= 1:
        raise ValueError("reverse Holder exponent must exceed 1")
    best = 0.0
    for idx in _ball_sets(gf.grid, balls):
        v = gf.values[idx]
        best = max(best, float(np.mean(v**r_exp) ** (1.0 / r_exp) / v.mean()))
    return best


# ---------------------------------------------------------------- outer functions

@dataclass(frozen=True, eq=False)
class OuterFunction:
    """The outer function phi_small(r) of a Morrey-type space.

    family "power" is r^exponent; "variable_power" is r^{lam(x)} evaluated at a
    ball center x; "custom" wraps func(r).
    """

    func: Callable[..., np.ndarray]
    family: str = "custom"
    exponent: float | None = None
    exponent_fn: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = "custom"

    @classmethod
    def power(cls, s: float) -> "OuterFunction":
        s = float(s)
        return cls(lambda r: np.asarray(r, float) ** s, "power", s, name=f"r^{s:g}")

    @classmethod
    def variable_power(cls, lam: Callable[[np.ndarray], np.ndarray], name: str = "r^lam(x)") -> "OuterFunction":
        def f(r, center):
            return np.asarray(r, float) ** _lam_at(lam, center)
        return cls(f, "variable_power", None, lam, name)

    @classmethod
    def custom(cls, func, name: str = "custom") -> "OuterFunction":
        return cls(func, "custom", None, name=name)

    @property
    def center_dependent(self) -> bool:
        return self.family == "variable_power"

    def __call__(self, r, center=None):
        if self.center_dependent:
            if center is None:
                raise ValueError("center-dependent outer function needs a center")
            return self.func(r, center)
        return self.func(r)

    def at_center(self, center) -> "OuterFunction":
        """Freeze the center of a variable outer function."""
        if not self.center_dependent:
            return self
        e = _lam_at(self.exponent_fn, center)
        return OuterFunction.power(e)


def _lam_at(lam, center) -> float:
    c = np.atleast_2d(np.asarray(center, dtype=float))
    return float(np.ravel(lam(c))[0])


def _log_quadrature(integrand: Callable[[np.ndarray], np.ndarray], r: float, r_end: float,
                    per_decade: int = 64) -> tuple[float, np.ndarray]:
    """Trapezoid in u = log t of integrand(t)*t over [r, r_end].

    Returns the total and the partial sums at the decade marks before r_end
    (used by the divergence test).
    """
    decades = math.log10(r_end / r)
    n = max(2, int(math.ceil(decades * per_decade)) + 1)
    u = np.linspace(math.log(r), math.log(r_end), n)
    t = np.exp(u)
    g = integrand(t) * t
    du = u[1] - u[0]
    cum = np.concatenate([[0.0], np.cumsum((g[1:] + g[:-1]) * du / 2)])
    marks = []
    for k in (3, 2, 1, 0):
        target = math.log(r_end) - k * math.log(10)
        i = int(np.clip(np.searchsorted(u, target), 0, n - 1))
        marks.append(cum[i])
    return float(cum[-1]), np.array(marks)


def _diverges(marks: np.ndarray, rel: float = 1e-3) -> bool:
    total = marks[-1]
    if not math.isfinite(total) or total <= 0:
        return not math.isfinite(total)
    inc = np.diff(marks) / total
    return bool(np.any(inc > rel))


def _default_r_list() -> np.ndarray:
    return np.logspace(-3, 3, 13)


def phi_dini_check(phi_small: OuterFunction, r_list: Sequence[float] | None = None,
                   cap: float = math.inf, param: str = "") -> CheckResult:
    """max_r phi(r) * int_r^inf dt / (phi(t) t)."""
    r_list = _default_r_list() if r_list is None else np.asarray(r_list, float)
    r_end = 1e8 * float(np.max(r_list))
    best, diverged = 0.0, False
    power = phi_small.family == "power" and phi_small.exponent is not None
    for r in r_list:
        total, marks = _log_quadrature(lambda t: 1.0 / (np.asarray(phi_small(t), float) * t), r, r_end)
        if power:
            s = phi_small.exponent
            if s <= 0:
                diverged = True
                break
            total += r_end ** (-s) / s
        elif _diverges(marks):
            diverged = True
            break
        best = max(best, float(phi_small(np.array(r))) * total)
    if diverged:
        return CheckResult("phi_dini", param or phi_small.name, math.inf, False, True)
    return CheckResult("phi_dini", param or phi_small.name, best, best <= cap)


def phi_decreasing_check(phi_small: OuterFunction, r_list: Sequence[float] | None = None,
                         cap: float = math.inf, param: str = "") -> tuple[CheckResult, CheckResult]:
    """(C_int, C_mono): int_r^inf phi(t)/t dt <= C phi(r) and phi(r) r <= C phi(s) s."""
    r_list = np.sort(_default_r_list() if r_list is None else np.asarray(r_list, float))
    r_end = 1e8 * float(np.max(r_list))
    best, diverged = 0.0, False
    power = phi_small.family == "power" and phi_small.exponent is not None
    for r in r_list:
        total, marks = _log_quadrature(lambda t: np.asarray(phi_small(t), float) / t, r, r_end)
        if power:
            s = -phi_small.exponent
            if s <= 0:
                diverged = True
                break
            total += r_end ** (-s) / s
        elif _diverges(marks):
            diverged = True
            break
        best = max(best, total / float(phi_small(np.array(r))))
    name = param or phi_small.name
    c_int = (CheckResult("phi_decreasing_int", name, math.inf, False, True) if diverged
             else CheckResult("phi_decreasing_int", name, best, best <= cap))
    vals = np.asarray(phi_small(r_list), float) * r_list
    # pairs r <= s: max of vals[r] / vals[s]
    ratio = vals[:, None] / vals[None, :]
    upper = np.triu(np.ones_like(ratio, dtype=bool))
    c_mono_v = float(ratio[upper].max())
    c_mono = CheckResult("phi_decreasing_mono", name, c_mono_v, c_mono_v <= cap)
    return c_int, c_mono


def phi_inverse_composite_check(young: YoungFunction, phi_small: OuterFunction,
                                r_list: Sequence[float] | None = None,
                                cap: float = math.inf, param: str = "") -> CheckResult:
    """max_r int_r^inf Phi^{-1}(phi(t))/t dt / Phi^{-1}(phi(r))."""
    r_list = _default_r_list() if r_list is None else np.asarray(r_list, float)
    r_end = 1e8 * float(np.max(r_list))
    # Phi >= t^p_min, so Phi^{-1}(y) <= y^{1/p_min} bounds the tail of any sum of powers
    power = (phi_small.family == "power" and phi_small.exponent is not None and bool(young.powers))
    best, diverged = 0.0, False

    def integrand(t):
        return young_inverse(young, np.asarray(phi_small(t), float)) / t

    for r in r_list:
        total, marks = _log_quadrature(integrand, r, r_end, per_decade=32)
        if power:
            e = -phi_small.exponent / young.powers[0]
            if e <= 0:
                diverged = True
                break
            total += r_end ** (-e) / e
        elif _diverges(marks):
            diverged = True
            break
        best = max(best, total / young_inverse(young, float(phi_small(np.array(r)))))
    name = param or f"{young.name},{phi_small.name}"
    if diverged:
        return CheckResult("phi_inverse_composite", name, math.inf, False, True)
    return CheckResult("phi_inverse_composite", name, best, best <= cap)


# ---------------------------------------------------------------- config

def parse_kv(text: str) -> dict[str, str]:
    """Flat `key = value` lines with # comments."""
    out: dict[str, str] = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {n}: expected key=value")
        k, v = line.split("=", 1)
        k, v = k.strip(), v.strip()
        if not k:
            raise ValueError(f"line {n}: empty key")
        if k in out:
            raise ValueError(f"line {n}: duplicate key {k!r}")
        out[k] = v
    return out


GROWTH_KEYS = {"family", "p", "weight_csv", "p0", "p1", "q", "expr"}

_SAFE = {name: getattr(np, name) for name in
         ("sqrt", "log", "log1p", "exp", "abs", "minimum", "maximum", "sin", "cos", "pi", "where")}


def growth_from_config(cfg: dict[str, str], base_dir: str | Path | None = None) -> GrowthFunction:
    """Build a GrowthFunction from family/p/weight_csv/p0/p1 keys.

    weighted_orlicz uses Phi(t) = t^p0 + t^p1 (t^p0 when equal); custom takes
    an `expr` in t and x (numpy functions only) with declared p0, p1.
    """
    unknown = set(cfg) - GROWTH_KEYS
    if unknown:
        raise ValueError(f"unknown growth keys: {sorted(unknown)}")
    fam = cfg.get("family", "power")
    q = float(cfg.get("q", 1.0))

    def weight():
        if "weight_csv" not in cfg:
            raise ValueError(f"family {fam} needs weight_csv")
        path = Path(cfg["weight_csv"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return Weight(read_csv(path))

    if fam == "power":
        return GrowthFunction.power(float(cfg["p"]))
    if fam == "weighted_power":
        return GrowthFunction.weighted_power(weight(), float(cfg["p"]), q)
    if fam == "weighted_orlicz":
        p0 = float(cfg.get("p0", cfg.get("p", "nan")))
        p1 = float(cfg.get("p1", p0))
        if not (1 < p0 <= p1):
            raise ValueError("weighted_orlicz needs 1 < p0 <= p1")
        w = weight() if "weight_csv" in cfg else None
        return GrowthFunction.weighted_orlicz(w, YoungFunction.sum_of_powers(p0, p1), q)
    if fam == "custom":
        if "expr" not in cfg:
            raise ValueError("custom family needs expr")
        code = compile(cfg["expr"], "<expr>", "eval")

        def ev(x, t, code=code):
            xx = x[:, 0] if x.shape[1] == 1 else x
            if np.ndim(t) > 1:
                xx = xx.reshape(xx.shape + (1,) * (np.ndim(t) - 1))
            env = dict(_SAFE, t=t, x=xx)
            return np.broadcast_to(eval(code, {"__builtins__": {}}, env), np.shape(t)).astype(float)

        return GrowthFunction.custom(ev, float(cfg["p0"]), float(cfg["p1"]), q)
    raise ValueError(f"unknown growth family {fam!r}")
