"""Empirical theorem suites: hypothesis checkers, boundedness-ratio tables,
the Campanato tail estimate and CSV reports.

A boundedness theorem ||T f||_X <= C ||f||_X cannot be checked for an
unnamed C, so each suite records the ratios over a fixed corpus and asserts
they are finite; the acceptance tests add stability under grid refinement.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .grid_core import Ball, BallFamily, Grid, GridFunction, HalfSpaceGrid, ball_indices
from .growth import (CheckResult, GrowthFunction, OuterFunction, TypeViolation, Weight, YoungFunction,
                     muckenhoupt_constant, phi_decreasing_check, phi_dini_check,
                     phi_inverse_composite_check, type_constant)
from .intrinsic import (AField, OperatorParams, PairedField, a_alpha_field, area_from_field,
                        commutator_from_paired, gstar_from_field, lambda_threshold, paired_field,
                        vertical_from_field)
from .norms import SpaceSpec, bmo_norm, chi_ball_norm, space_norm

REPORT_HEADER = ["suite", "function", "norm_in", "norm_out", "ratio", "pass"]
SUMMARY_HEADER = ["suite", "rows", "max_ratio", "hypotheses", "pass", "corpus_hash"]


def _fmt(v: float) -> str:
    return f"{v:.17g}"


# ---------------------------------------------------------------- corpus

@dataclass(frozen=True)
class CorpusMember:
    """func(points, h) -> values; h lets singular members clamp at the grid scale."""

    name: str
    func: Callable[[np.ndarray, float], np.ndarray]
    kind: str = "plain"
    seed: int | None = None


def _radius(pts: np.ndarray, center=0.0) -> np.ndarray:
    c = np.zeros(pts.shape[1]) + np.asarray(center, float)
    return np.linalg.norm(pts - c, axis=1)


def _random_piecewise(seed: int, pieces: int = 6):
    rng = np.random.default_rng(seed)
    breaks = np.sort(rng.uniform(-0.9, 0.9, pieces - 1))
    levels = rng.normal(size=pieces)
    angle = rng.uniform(0, np.pi)

    def f(pts, h):
        # 2D members use a random direction
        s = pts[:, 0] if pts.shape[1] == 1 else pts @ np.array([np.cos(angle), np.sin(angle)])
        return levels[np.searchsorted(breaks, s)]
    return f


def default_members() -> list[CorpusMember]:
    """One constant plus twenty nonconstant members, dimension agnostic."""
    bump = lambda r: np.maximum(0.0, 1.0 - r**2) ** 2  # noqa: E731
    m = [
        CorpusMember("const", lambda p, h: np.full(p.shape[0], 1.5), "constant"),
        CorpusMember("ind_a", lambda p, h: (_radius(p, 0.1) < 0.3) * 1.0),
        CorpusMember("ind_b", lambda p, h: (_radius(p, -0.2) < 0.4) * 1.0),
        CorpusMember("tent_a", lambda p, h: np.maximum(0.0, 1 - _radius(p, 0.2) / 0.5)),
        CorpusMember("tent_b", lambda p, h: np.maximum(0.0, 1 - _radius(p, -0.3) / 0.15)),
        CorpusMember("pow_0.2", lambda p, h: np.maximum(_radius(p), h) ** -0.2 * bump(_radius(p)),
                     "singular"),
        CorpusMember("pow_0.25", lambda p, h: np.maximum(_radius(p, 0.3), h) ** -0.25 * bump(_radius(p)),
                     "singular"),
        CorpusMember("osc_3", lambda p, h: np.sin(3 * p[:, 0]) * bump(_radius(p))),
        CorpusMember("osc_8", lambda p, h: np.sin(8 * p[:, 0]) * bump(_radius(p))),
        CorpusMember("osc_20", lambda p, h: np.sin(20 * p[:, 0]) * bump(_radius(p))),
        CorpusMember("log", lambda p, h: np.log(1.0 / np.maximum(_radius(p), h)), "bmo"),
        CorpusMember("log_shift", lambda p, h: np.log(1.0 / np.maximum(_radius(p, 0.5), h)), "bmo"),
        CorpusMember("step", lambda p, h: np.where(p[:, 0] > 0.2, 1.0, -1.0), "bmo"),
        CorpusMember("gauss", lambda p, h: np.exp(-_radius(p) ** 2 / 0.05)),
        CorpusMember("ramp", lambda p, h: p[:, 0] * bump(_radius(p))),
        CorpusMember("bump", lambda p, h: bump(_radius(p))),
        CorpusMember("dipole", lambda p, h: np.maximum(0.0, 1 - _radius(p, 0.25) / 0.25)
                     - np.maximum(0.0, 1 - _radius(p, -0.25) / 0.25)),
    ]
    m += [CorpusMember(f"rand_{s}", _random_piecewise(s), "bmo", seed=s) for s in range(4)]
    return m


@dataclass(frozen=True, eq=False)
class Corpus:
    grid: Grid
    members: tuple[CorpusMember, ...]
    functions: dict = field(init=False, repr=False)

    def __post_init__(self):
        pts = self.grid.points()
        funcs = {}
        for mem in self.members:
            v = np.asarray(mem.func(pts, self.grid.h), dtype=float)
            if not np.all(np.isfinite(v)):
                raise ValueError(f"corpus member {mem.name} is not finite")
            funcs[mem.name] = GridFunction(self.grid, v)
        object.__setattr__(self, "functions", funcs)

    @classmethod
    def default(cls, grid: Grid, names: Sequence[str] | None = None) -> "Corpus":
        members = default_members()
        if names is not None:
            keep = set(names)
            unknown = keep - {m.name for m in members}
            if unknown:
                raise ValueError(f"unknown corpus members: {sorted(unknown)}")
            members = [m for m in members if m.name in keep]
        return cls(grid, tuple(members))

    def resample(self, grid: Grid) -> "Corpus":
        return Corpus(grid, self.members)

    def subset(self, names: Sequence[str]) -> "Corpus":
        keep = set(names)
        return Corpus(self.grid, tuple(m for m in self.members if m.name in keep))

    def nonconstant(self) -> "Corpus":
        return Corpus(self.grid, tuple(m for m in self.members if m.kind != "constant"))

    def bmo_members(self) -> "Corpus":
        return Corpus(self.grid, tuple(m for m in self.members if m.kind == "bmo"))

    def items(self):
        return self.functions.items()

    def __len__(self):
        return len(self.members)

    def __getitem__(self, name: str) -> GridFunction:
        return self.functions[name]

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.grid.lower, self.grid.shape, self.grid.h)).encode())
        for name in sorted(self.functions):
            h.update(name.encode())
            h.update(np.ascontiguousarray(self.functions[name].values).tobytes())
        return h.hexdigest()[:16]


def commutator_symbol(grid: Grid) -> GridFunction:
    """The BMO multiplier b(x) = log(1/|x|) clamped at the grid scale."""
    return GridFunction.from_callable(grid, lambda x: np.log(1.0 / np.maximum(np.abs(x) if grid.dim == 1
                                                                               else np.linalg.norm(x, axis=1),
                                                                               grid.h)))


# ---------------------------------------------------------------- operators

class OperatorBank:
    """Shares A-fields and commutator responses between suites.

    Operator names: S, sab (aperture beta), g, gstar, comm_s, comm_g, comm_gstar.
    """

    def __init__(self, grid: Grid, alpha: float, b: GridFunction | None = None,
                 mode: str = "dictionary", eps_w: float = 1e-8):
        if mode not in ("dictionary", "dict", "lp"):
            raise ValueError(f"unknown mode {mode!r}")
        self.grid = grid
        self.alpha = alpha
        self.hs = HalfSpaceGrid(grid)
        self.b = commutator_symbol(grid) if b is None else b
        self.mode = mode
        self.eps_w = eps_w
        self._fields: dict[bytes, AField] = {}
        self._paired: dict[bytes, PairedField] = {}

    @staticmethod
    def _key(f: GridFunction) -> bytes:
        return hashlib.sha1(np.ascontiguousarray(f.values).tobytes()).digest()

    def field(self, f: GridFunction) -> AField:
        k = self._key(f)
        if k not in self._fields:
            self._fields[k] = a_alpha_field(f, self.alpha, self.hs, self.mode)
        return self._fields[k]

    def paired(self, f: GridFunction) -> PairedField:
        k = self._key(f)
        if k not in self._paired:
            self._paired[k] = paired_field(self.b, f, self.alpha, self.hs)
        return self._paired[k]

    def apply(self, op: str, f: GridFunction, lam: float | None = None, beta: float = 1.0) -> GridFunction:
        if op == "S":
            v = area_from_field(self.field(f), 1.0)
        elif op == "sab":
            v = area_from_field(self.field(f), beta)
        elif op == "g":
            v = vertical_from_field(self.field(f))
        elif op == "gstar":
            v = gstar_from_field(self.field(f), lam, self.eps_w)
        elif op in ("comm_s", "comm_g", "comm_gstar"):
            if self.mode == "lp":
                from .intrinsic import _commutator_values
                v = _commutator_values(self.b, f, self.alpha, self.hs, op[5:], beta, lam, self.eps_w, "lp")
            else:
                v = commutator_from_paired(self.paired(f), self.b, op[5:], beta, lam, self.eps_w)
        else:
            raise ValueError(f"unknown operator {op!r}")
        return GridFunction(self.grid, v)

    def handle(self, op: str, lam: float | None = None, beta: float = 1.0) -> Callable[[GridFunction], GridFunction]:
        return lambda f: self.apply(op, f, lam, beta)


# ---------------------------------------------------------------- ratio tables

@dataclass(frozen=True)
class RatioRow:
    function: str
    norm_in: float
    norm_out: float
    ratio: float
    status: str  # "true", "false" or "skipped_hypothesis"


@dataclass
class RatioTable:
    suite: str
    rows: list[RatioRow]
    corpus_hash: str = ""

    @property
    def max_ratio(self) -> float:
        vals = [r.ratio for r in self.rows if r.status != "skipped_hypothesis"]
        return max(vals) if vals else 0.0

    @property
    def passed(self) -> bool:
        return all(r.status == "true" for r in self.rows)


def modular(f: GridFunction, phi: GrowthFunction) -> float:
    """int phi(x, |f(x)|) dx over the grid."""
    return float(np.sum(phi.bind(f.grid.points())(np.abs(f.values))) * f.grid.cell_volume)


NormLike = SpaceSpec | Callable[[GridFunction], float]


def _norm_fn(X: NormLike) -> Callable[[GridFunction], float]:
    return (lambda f: space_norm(f, X)) if isinstance(X, SpaceSpec) else X


def _row(label: str, n_in: float, n_out: float) -> RatioRow | None:
    if n_in == 0 and n_out == 0:
        return None  # constant input, 0/0
    if n_in == 0:
        return RatioRow(label, n_in, n_out, math.inf, "false")
    r = n_out / n_in
    return RatioRow(label, n_in, n_out, r, "true" if math.isfinite(r) else "false")


def boundedness_ratio(T: Callable[[GridFunction], GridFunction], X: NormLike, corpus: Corpus,
                      suite: str = "", label: str = "", X_out: NormLike | None = None) -> RatioTable:
    """Rows (name, ||f||_X, ||Tf||_X, ratio); constant members are skipped."""
    n_in, n_out = _norm_fn(X), _norm_fn(X if X_out is None else X_out)
    rows = []
    for name, f in corpus.items():
        if np.ptp(f.values) == 0:
            continue
        row = _row(f"{name}{label}", n_in(f), n_out(T(f)))
        if row is not None:
            rows.append(row)
    return RatioTable(suite, rows, corpus.content_hash())


def campanato_suite(T: Callable[[GridFunction], GridFunction], phi: GrowthFunction, q: float,
                    corpus: Corpus, balls: BallFamily, suite: str = "", label: str = "") -> RatioTable:
    """||Tf|| in the star Campanato norm against ||f|| in the Campanato norm."""
    X_in = SpaceSpec("campanato", balls, phi=phi, q=q)
    X_out = SpaceSpec("campanato_star", balls, phi=phi, q=q)
    return boundedness_ratio(T, X_in, corpus, suite, label, X_out)


# ---------------------------------------------------------------- tail estimate

@dataclass(frozen=True)
class TailCheck:
    constant: float
    per_ball: np.ndarray
    radii: np.ndarray

    @property
    def spread(self) -> float:
        pos = self.per_ball[self.per_ball > 0]
        return float(pos.max() / pos.min()) if pos.size else 1.0


def tail_lhs(f: GridFunction, ball: Ball, beta_exp: float, phi: GrowthFunction) -> float:
    """r^b |B| / ||chi_B|| * int |f - f_B| / (r^{n+b} + |y - x0|^{n+b}) dy.

    The integral runs over the grid; the region outside the box is bounded by
    sup|f - f_B| times the exact integral of |y - x0|^{-n-b} beyond the
    nearest face.
    """
    grid = f.grid
    n = grid.dim
    idx = ball_indices(grid, ball)
    if idx.size == 0:
        raise ValueError("ball holds no grid points")
    fB = float(f.values[idx].mean())
    dev = np.abs(f.values - fB)
    if not np.any(dev > 0):
        return 0.0
    pts = grid.points()
    x0 = np.asarray(ball.center, float)
    r = ball.radius
    dist = np.linalg.norm(pts - x0, axis=1)
    inner = float(np.sum(dev / (r ** (n + beta_exp) + dist ** (n + beta_exp))) * grid.cell_volume)
    face = min(min(x0 - np.asarray(grid.lower)), min(np.asarray(grid.upper) - x0)) + grid.h / 2
    sphere = 2.0 if n == 1 else 2.0 * math.pi
    outer = float(dev.max()) * sphere * face ** (-beta_exp) / beta_exp
    measure = idx.size * grid.cell_volume
    return r**beta_exp * measure / chi_ball_norm(phi, ball, grid) * (inner + outer)


def tail_estimate_check(f: GridFunction, beta_exp: float, phi: GrowthFunction, balls: BallFamily,
                        q: float = 1.0, ap_index: float = 1.0,
                        norm_balls: BallFamily | None = None) -> TailCheck:
    """max over balls of tail_lhs / ||f||_{L^{phi,q}}; needs beta > max{n(p/p0 - 1), 0}."""
    n = f.grid.dim
    floor = max(n * (ap_index / phi.p0 - 1.0), 0.0)
    if not beta_exp > floor:
        raise ValueError(f"beta must exceed {floor:g}")
    nb = BallFamily.default(f.grid) if norm_balls is None else norm_balls
    norm = space_norm(f, SpaceSpec("campanato", nb, phi=phi, q=q))
    balls = balls.usable(f.grid)
    lhs = np.array([tail_lhs(f, b, beta_exp, phi) for b in balls])
    radii = np.array([b.radius for b in balls])
    if norm == 0:
        if np.any(lhs > 0):
            return TailCheck(math.inf, np.full(lhs.size, math.inf), radii)
        return TailCheck(0.0, np.zeros(lhs.size), radii)
    per = lhs / norm
    c = float(per.max())
    if not math.isfinite(c):
        raise ValueError("tail constant is not finite")
    return TailCheck(c, per, radii)


# name kept for external callers
lemma41_tail_check = tail_estimate_check


# ---------------------------------------------------------------- suites

SUITE_IDS = ("pro-vz", "t2.1", "t2.1v", "cor-g", "t2.3", "t2.2", "pro-bg", "t2.4",
             "t3.1", "t3.1v", "cor-g2", "t3.2", "t3.3", "t3.4",
             "t4.1", "cor-gBMO", "t4.2", "sa-q1", "t4.3", "ga-q1")


@dataclass(frozen=True)
class SuiteDef:
    group: str                    # "modular", "t2", "t3" or "t4"
    ops: tuple[str, ...]
    lam_floor: float | None = None  # low end inside min{max{floor, p1}, 3 + 2a/n}
    lam_strict: bool = False      # lambda > 3 + 2a/n
    variable: bool = False
    q_one: bool = False
    commutator: bool = False


SUITES: dict[str, SuiteDef] = {
    "pro-vz": SuiteDef("modular", ("S", "gstar"), lam_floor=2.0),
    "t2.1": SuiteDef("t2", ("S",)),
    "t2.1v": SuiteDef("t2", ("S",), variable=True),
    "cor-g": SuiteDef("t2", ("g",)),
    "t2.3": SuiteDef("t2", ("gstar",), lam_floor=3.0),
    "t2.2": SuiteDef("t2", ("comm_s",), commutator=True),
    "pro-bg": SuiteDef("t2", ("comm_g",), commutator=True),
    "t2.4": SuiteDef("t2", ("comm_gstar",), lam_floor=3.0, commutator=True),
    "t3.1": SuiteDef("t3", ("S",)),
    "t3.1v": SuiteDef("t3", ("S",), variable=True),
    "cor-g2": SuiteDef("t3", ("g",)),
    "t3.2": SuiteDef("t3", ("gstar",), lam_floor=3.0),
    "t3.3": SuiteDef("t3", ("comm_gstar",), lam_floor=3.0, commutator=True),
    "t3.4": SuiteDef("t3", ("comm_s", "comm_g"), commutator=True),
    "t4.1": SuiteDef("t4", ("g",)),
    "cor-gBMO": SuiteDef("t4", ("g",), q_one=True),
    "t4.2": SuiteDef("t4", ("S",)),
    "sa-q1": SuiteDef("t4", ("S",), q_one=True),
    "t4.3": SuiteDef("t4", ("gstar",), lam_strict=True),
    "ga-q1": SuiteDef("t4", ("gstar",), lam_strict=True, q_one=True),
}


def _variable_exponent(center: float, spread: float):
    """lam(x) = center + spread * sin(pi x_1), evaluated at ball centers."""
    def lam(x):
        x = np.atleast_2d(np.asarray(x, float))
        return center + spread * np.sin(np.pi * x[:, 0])
    return lam


@dataclass(frozen=True)
class SuiteConfig:
    """Defaults: phi = t^2 with outer t^{1/4} and lambda = 4 for the Morrey
    group; Phi = t^2, w = 1, outer r^{-1/2} for the weighted group; phi = t,
    q = 2 and lambda = 6 for the Campanato group."""

    n_points: int = 129
    dim: int = 1
    lo: float = -1.0
    hi: float = 1.0
    alpha: float = 1.0
    lam: float = 4.0
    lam_campanato: float = 6.0
    p: float = 2.0
    phi_small: float = 0.25
    young_p0: float = 2.0
    young_p1: float = 2.0
    outer_weighted: float = -0.5
    weight: Weight | None = None
    campanato_p: float = 1.0
    ap_index: float = 1.0
    q: float = 2.0
    var_center_t2: float = 0.25
    var_center_t3: float = -0.5
    var_spread_t2: float = 0.05
    var_spread_t3: float = 0.25
    mode: str = "dictionary"
    seed: int = 0

    def __post_init__(self):
        if self.n_points < 9:
            raise ValueError("n_points must be >= 9")
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if not (0 < self.alpha <= 1):
            raise ValueError("alpha must lie in (0, 1]")
        if not (self.lam > 0 and self.lam_campanato > 0):
            raise ValueError("lambda must be positive")
        if not self.hi > self.lo:
            raise ValueError("need hi > lo")

    def grid(self) -> Grid:
        return Grid.uniform(self.lo, self.hi, self.n_points, self.dim)


@dataclass
class TheoremSuite:
    id: str
    params: OperatorParams
    space: SpaceSpec | None
    checks: list[CheckResult]
    table: RatioTable

    @property
    def hypotheses_ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def passed(self) -> bool:
        return self.hypotheses_ok and self.table.passed

    @property
    def max_ratio(self) -> float:
        return self.table.max_ratio


def _ok(name: str, param: str, value: float, passed: bool) -> CheckResult:
    return CheckResult(name, param, float(value), bool(passed))


def _sample_x(grid: Grid) -> np.ndarray:
    pts = grid.points()
    return pts[:: max(1, pts.shape[0] // 17)]


def _monotone_constant(outer: OuterFunction, increasing: bool, r_list: np.ndarray) -> float:
    """max phi(r)/phi(s) over r <= s (increasing) or phi(s)/phi(r) (nonincreasing)."""
    v = np.asarray(outer(r_list), float)
    ratio = v[:, None] / v[None, :] if increasing else v[None, :] / v[:, None]
    return float(ratio[np.triu(np.ones_like(ratio, dtype=bool))].max())


def _phi_for(cfg: SuiteConfig, group: str) -> GrowthFunction:
    if group in ("t2", "modular"):
        return GrowthFunction.power(cfg.p)
    if group == "t3":
        young = YoungFunction.sum_of_powers(cfg.young_p0, cfg.young_p1)
        return GrowthFunction.weighted_orlicz(cfg.weight, young)
    return GrowthFunction.power(cfg.campanato_p)


def _outer_for(cfg: SuiteConfig, sd: SuiteDef) -> OuterFunction:
    if sd.group == "t2":
        if sd.variable:
            return OuterFunction.variable_power(_variable_exponent(cfg.var_center_t2, cfg.var_spread_t2))
        return OuterFunction.power(cfg.phi_small)
    if sd.variable:
        return OuterFunction.variable_power(_variable_exponent(cfg.var_center_t3, cfg.var_spread_t3))
    return OuterFunction.power(cfg.outer_weighted)


def _frozen_outers(cfg: SuiteConfig, sd: SuiteDef, grid: Grid) -> list[OuterFunction]:
    """The outer function itself, or one power per sampled center for variable exponents."""
    outer = _outer_for(cfg, sd)
    if not outer.center_dependent:
        return [outer]
    return [outer.at_center(x) for x in _sample_x(grid)]


def suite_lambda(suite_id: str, cfg: SuiteConfig) -> float | None:
    sd = SUITES[suite_id]
    if "gstar" not in sd.ops and "comm_gstar" not in sd.ops:
        return None
    return cfg.lam_campanato if sd.group == "t4" else cfg.lam


def hypothesis_report(suite_id: str, cfg: SuiteConfig, balls: BallFamily | None = None,
                      outer: OuterFunction | None = None) -> list[CheckResult]:
    """Checklist for one suite; `outer` overrides the configured outer function."""
    if suite_id not in SUITES:
        raise ValueError(f"unknown suite {suite_id!r}")
    sd = SUITES[suite_id]
    grid = cfg.grid()
    balls = BallFamily.default(grid) if balls is None else balls
    n = grid.dim
    phi = _phi_for(cfg, sd.group)
    xs = _sample_x(grid)
    checks: list[CheckResult] = []
    r_list = np.logspace(-3, 3, 13)

    def type_checks(need_above_one: bool):
        for which, p in (("lower", phi.p0), ("upper", phi.p1)):
            try:
                c = type_constant(phi, which, xs)
                ok = math.isfinite(c) and c <= 1 + 1e-9
            except TypeViolation:
                c, ok = math.inf, False
            checks.append(_ok(f"type_{which}", f"p={p:g}", c, ok))
        rng_ok = (1 < phi.p0 <= phi.p1 < math.inf) if need_above_one else (0 < phi.p0 <= phi.p1 < math.inf)
        checks.append(_ok("type_range", f"p0={phi.p0:g},p1={phi.p1:g}", phi.p1, rng_ok))

    def lam_check(low: float | None, strict: bool):
        lam = suite_lambda(suite_id, cfg)
        if lam is None:
            return
        thr = 3.0 + 2.0 * cfg.alpha / n if strict else lambda_threshold(phi.p1, cfg.alpha, n, low)
        checks.append(_ok("lambda_threshold", f"lambda={lam:g}", thr, lam > thr))

    def bmo_check():
        b = commutator_symbol(grid)
        v = bmo_norm(b, balls)
        checks.append(_ok("bmo_symbol", "log(1/|x|)", v, math.isfinite(v)))

    if sd.group in ("modular", "t2"):
        type_checks(True)
        mc = muckenhoupt_constant(phi, phi.p0, balls, grid)
        checks.append(_ok("muckenhoupt", f"A_{phi.p0:g}", mc, math.isfinite(mc)))
        if sd.group == "t2":
            outers = [outer] if outer is not None else _frozen_outers(cfg, sd, grid)
            dini = [phi_dini_check(o) for o in outers]
            worst = max(dini, key=lambda c: c.constant)
            checks.append(replace(worst, param=outers[0].name if len(outers) == 1 else "r^lam(x)",
                                  passed=all(c.passed for c in dini)))
            mono = max(_monotone_constant(o, True, r_list) for o in outers)
            checks.append(_ok("phi_nondecreasing", outers[0].name if len(outers) == 1 else "r^lam(x)",
                              mono, mono <= 1 + 1e-12 if not sd.variable else math.isfinite(mono)))
        lam_check(sd.lam_floor, False)
        if sd.commutator:
            bmo_check()
    elif sd.group == "t3":
        young = phi.young
        yc = young.check()
        checks.append(_ok("young_function", young.name, float(all(yc.values())), all(yc.values())))
        type_checks(True)
        w = cfg.weight or Weight.constant(grid)
        mc = muckenhoupt_constant(GrowthFunction.weighted_power(w, 1.0), young.p0, balls, grid)
        checks.append(_ok("muckenhoupt_weight", f"A_{young.p0:g}", mc, math.isfinite(mc)))
        outers = [outer] if outer is not None else _frozen_outers(cfg, sd, grid)
        label = outers[0].name if len(outers) == 1 else "r^lam(x)"
        pairs = [phi_decreasing_check(o) for o in outers]
        c_int = max((p[0] for p in pairs), key=lambda c: c.constant)
        c_mono = max((p[1] for p in pairs), key=lambda c: c.constant)
        checks.append(replace(c_int, param=label, passed=all(p[0].passed for p in pairs)))
        checks.append(replace(c_mono, param=label, passed=all(p[1].passed for p in pairs)))
        down = max(_monotone_constant(o, False, r_list) for o in outers)
        checks.append(_ok("phi_nonincreasing", label, down,
                          down <= 1 + 1e-12 if not sd.variable else math.isfinite(down)))
        comp = [phi_inverse_composite_check(young, o) for o in outers]
        worst = max(comp, key=lambda c: c.constant)
        checks.append(replace(worst, param=label, passed=all(c.passed for c in comp)))
        lam_check(sd.lam_floor, False)
        if sd.commutator:
            bmo_check()
    else:
        type_checks(False)
        if sd.q_one:
            checks.append(_ok("type_at_most_one", f"p1={phi.p1:g}", phi.p1, phi.p1 <= 1))
        q = 1.0 if sd.q_one else cfg.q
        checks.append(_ok("q_range", f"q={q:g}", q, q == 1 if sd.q_one else 1 < q < math.inf))
        p = cfg.ap_index
        mc = muckenhoupt_constant(replace(phi, q=p), p, balls, grid)
        checks.append(_ok("muckenhoupt", f"A_{p:g}", mc, math.isfinite(mc)))
        index = n * (p / phi.p0 - 1.0)
        checks.append(_ok("index_condition", f"n(p/p0-1)<alpha={cfg.alpha:g}", index, index < cfg.alpha))
        if not sd.q_one:
            qd = q / (q - 1.0)
            checks.append(_ok("dual_exponent", f"p<=q'={qd:g}", p, p <= qd))
        lam_check(None, sd.lam_strict)
    return checks


def run_suite(suite_id: str, cfg: SuiteConfig | None = None, corpus: Corpus | None = None,
              balls: BallFamily | None = None, bank: OperatorBank | None = None) -> TheoremSuite:
    """Hypotheses first; ratio rows only when every checker passed."""
    cfg = SuiteConfig() if cfg is None else cfg
    sd = SUITES[suite_id]
    grid = corpus.grid if corpus is not None else cfg.grid()
    corpus = Corpus.default(grid) if corpus is None else corpus
    balls = BallFamily.default(grid) if balls is None else balls
    lam = suite_lambda(suite_id, cfg)
    params = OperatorParams(alpha=cfg.alpha, lam=lam or 0.0, q=1.0 if sd.q_one else cfg.q,
                            p0=1.0, p1=1.0)
    checks = hypothesis_report(suite_id, replace(cfg, n_points=grid.shape[0]), balls)
    phi = _phi_for(cfg, sd.group)
    params = replace(params, p0=phi.p0, p1=phi.p1)
    space = None
    if sd.group == "t2":
        space = SpaceSpec("musielak_morrey", balls, phi=phi, outer=_outer_for(cfg, sd))
    elif sd.group == "t3":
        space = SpaceSpec("weighted_orlicz_morrey", balls, young=phi.young, weight=cfg.weight,
                          outer=_outer_for(cfg, sd))
    elif sd.group == "t4":
        space = SpaceSpec("campanato", balls, phi=phi, q=params.q)

    if not all(c.passed for c in checks):
        rows = [RatioRow(name, math.nan, math.nan, math.nan, "skipped_hypothesis")
                for name, f in corpus.items() if np.ptp(f.values) > 0]
        return TheoremSuite(suite_id, params, space, checks, RatioTable(suite_id, rows, corpus.content_hash()))

    bank = OperatorBank(grid, cfg.alpha, mode=cfg.mode) if bank is None else bank
    rows: list[RatioRow] = []
    for op in sd.ops:
        T = bank.handle(op, lam)
        label = f"/{op}" if len(sd.ops) > 1 else ""
        if sd.group == "modular":
            tab = boundedness_ratio(T, lambda f: modular(f, phi), corpus, suite_id, label)
        elif sd.group == "t4":
            tab = campanato_suite(T, phi, params.q, corpus, balls, suite_id, label)
        else:
            tab = boundedness_ratio(T, space, corpus, suite_id, label)
        rows.extend(tab.rows)
    return TheoremSuite(suite_id, params, space, checks, RatioTable(suite_id, rows, corpus.content_hash()))


# ---------------------------------------------------------------- reports

def emit_report(tables: Sequence[RatioTable | TheoremSuite], out_dir: str | Path,
                name: str = "report") -> tuple[Path, Path]:
    """Write <name>.csv (one row per function) and <name>_summary.csv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report, summary = out / f"{name}.csv", out / f"{name}_summary.csv"
    with open(report, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        for t in tables:
            tab = t.table if isinstance(t, TheoremSuite) else t
            for r in tab.rows:
                w.writerow([tab.suite, r.function, _fmt(r.norm_in), _fmt(r.norm_out), _fmt(r.ratio), r.status])
    with open(summary, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for t in tables:
            tab = t.table if isinstance(t, TheoremSuite) else t
            hyp = "n/a"
            ok = tab.passed
            if isinstance(t, TheoremSuite):
                hyp = "pass" if t.hypotheses_ok else "fail"
                ok = t.passed
            w.writerow([tab.suite, len(tab.rows), _fmt(tab.max_ratio), hyp,
                        "true" if ok else "false", tab.corpus_hash])
    return report, summary


def emit_checks(suites: Sequence[TheoremSuite], out_dir: str | Path, name: str = "hypotheses") -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{name}.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["suite", "check", "param", "fitted_constant", "pass"])
        for s in suites:
            for c in s.checks:
                w.writerow([s.id] + c.row())
    return path
