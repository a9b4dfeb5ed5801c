import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from intrinsic_lp.grid_core import Ball, BallFamily, Grid, GridFunction, ball_indices
from intrinsic_lp.growth import GrowthFunction, OuterFunction, Weight, YoungFunction, young_inverse
from intrinsic_lp.norms import (LuxembourgBracketError, SpaceSpec, ball_norms, bmo_ball, bmo_norm,
                                campanato_ball, campanato_norm, campanato_star_norm, chi_ball_norm,
                                classical_morrey_ball, classical_morrey_norm, complementary_functional,
                                complementary_norm_ball, generalized_holder_check, john_nirenberg_constant,
                                luxembourg_functional, luxembourg_norm_ball, luxembourg_norm_global,
                                morrey_norm, phi_ball, space_norm, weighted_orlicz_morrey_norm)

SQ = GrowthFunction.power(2.0)


def gf(grid, func):
    return GridFunction.from_callable(grid, func)


# ---------------------------------------------------------------- ball Luxembourg norms

def test_luxembourg_constant(unit_grid):
    f = GridFunction.constant(unit_grid, 3.5)
    assert luxembourg_norm_ball(f, SQ, Ball(0.5, 0.3)) == pytest.approx(3.5, rel=1e-12)
    assert luxembourg_norm_ball(GridFunction.constant(unit_grid, 0.0), SQ, Ball(0.5, 0.3)) == 0.0


def test_luxembourg_linear(unit_grid):
    f = gf(unit_grid, lambda x: x)
    ball = Ball(0.5, 0.5)
    got = luxembourg_norm_ball(f, SQ, ball)
    assert got == pytest.approx(1 / math.sqrt(3), abs=2 * unit_grid.h)
    idx = ball_indices(unit_grid, ball)
    assert got == pytest.approx(math.sqrt(np.mean(f.values[idx] ** 2)), rel=1e-8)
    # the returned mu sits on the unit sphere of the modular
    assert luxembourg_functional(f, SQ, ball, got) == pytest.approx(1.0, abs=1e-8)


def test_luxembourg_bracket_error(unit_grid):
    flat = GrowthFunction.custom(lambda x, t: np.minimum(t, 1.0), 1.0, 1.0)
    with pytest.raises(LuxembourgBracketError, match="luxembourg bracket"):
        luxembourg_norm_ball(gf(unit_grid, lambda x: 1 + x), flat, Ball(0.5, 0.3))


def test_complementary_norm(unit_grid):
    ball = Ball(0.5, 0.3)
    g = GridFunction.constant(unit_grid, 3.0)
    mu = complementary_norm_ball(g, SQ, ball)
    assert mu == pytest.approx(1.5, rel=1e-7)
    assert complementary_norm_ball(GridFunction.constant(unit_grid, 0.0), SQ, ball) == 0.0
    h = gf(unit_grid, lambda x: 1 + np.sin(7 * x))
    mu = complementary_norm_ball(h, SQ, ball)
    assert complementary_functional(h, SQ, ball, mu) == pytest.approx(1.0, abs=1e-7)


def test_luxembourg_global():
    g = Grid.uniform(0, 2, 513)
    chi = gf(g, lambda x: (x < 1).astype(float))
    assert luxembourg_norm_global(chi, SQ) == pytest.approx(1.0, abs=2 * g.h)
    f = gf(g, lambda x: np.cos(x))
    two = GrowthFunction.weighted_power(Weight.constant(g, 2.0), 2.0)
    plain = luxembourg_norm_global(f, SQ)
    assert luxembourg_norm_global(f, two) == pytest.approx(math.sqrt(2) * plain, rel=1e-10)
    assert plain == pytest.approx(math.sqrt(np.sum(f.values**2) * g.h), rel=1e-10)
    assert luxembourg_norm_global(GridFunction.constant(g, 0.0), SQ) == 0.0


def test_chi_ball_norm():
    g = Grid.uniform(-3, 3, 1537)
    one = Ball(0.0, 0.5)
    assert chi_ball_norm(GrowthFunction.power(3.0), one, g) == pytest.approx(1.0, abs=2 * g.h)
    four = Ball(0.0, 2.0)
    mu = chi_ball_norm(SQ, four, g)
    assert mu == pytest.approx(2.0, abs=2 * g.h)
    assert phi_ball(SQ, four, g, 1 / mu) == pytest.approx(1.0, abs=1e-8)
    w = Weight.from_callable(g, lambda x: 1 + x**2)
    phi = GrowthFunction.weighted_orlicz(w, YoungFunction.sum_of_powers(1.5, 2.5))
    mu = chi_ball_norm(phi, four, g)
    assert phi_ball(phi, four, g, 1 / mu) == pytest.approx(1.0, abs=1e-8)


# ---------------------------------------------------------------- Morrey

@pytest.mark.parametrize("p,s", [(2.0, 0.25), (1.5, 0.5), (3.0, 0.1)])
def test_morrey_matches_classical(sym_grid, p, s):
    f = gf(sym_grid, lambda x: np.exp(-4 * x**2) * (1 + np.sin(9 * x)))
    fam = BallFamily.default(sym_grid)
    spec = SpaceSpec("musielak_morrey", fam, phi=GrowthFunction.power(p), outer=OuterFunction.power(s))
    classical = classical_morrey_norm(f, p, 1 - s * p, fam)
    assert morrey_norm(f, spec) == pytest.approx(classical, rel=1e-8)
    assert morrey_norm(GridFunction.constant(sym_grid, 0.0), spec) == 0.0


def test_classical_morrey_singular_stable():
    g = Grid.uniform(-1, 1, 4096)
    p, kappa = 2.0, 0.5
    f = gf(g, lambda x: np.abs(x) ** (-(1 - kappa) / p))
    chain = BallFamily.centered_chain(0.0, [0.5, 0.25, 0.125, 0.0625])
    vals = [classical_morrey_ball(f, p, kappa, b) for b in chain]
    # continuum per-ball value: ((2r)^-1/2 * 4 r^1/2)^{1/2} = 2^{3/4}
    assert np.allclose(vals, 2**0.75, rtol=0.1)
    assert max(vals) / min(vals) <= 1.1


def test_classical_morrey_constant(sym_grid):
    fam = BallFamily.default(sym_grid)
    c, p, kappa = 2.0, 2.0, 0.3
    f = GridFunction.constant(sym_grid, c)
    for ball, v in ball_norms(f, SpaceSpec("classical_morrey", fam, p=p, kappa=kappa)):
        meas = ball_indices(sym_grid, ball).size * sym_grid.h
        assert v == pytest.approx(c * meas ** ((1 - kappa) / p), rel=1e-12)
    biggest = max(fam, key=lambda b: b.radius)
    assert classical_morrey_norm(f, p, kappa, fam) == pytest.approx(
        max(classical_morrey_ball(f, p, kappa, b) for b in fam if b.radius == biggest.radius))
    assert classical_morrey_norm(GridFunction.constant(sym_grid, 0.0), p, kappa, fam) == 0.0


def test_classical_morrey_kappa_zero(sym_grid):
    f = gf(sym_grid, lambda x: x**2 - 0.3)
    fam = BallFamily.default(sym_grid)
    direct = max(math.sqrt(np.sum(f.values[ball_indices(sym_grid, b)] ** 2) * sym_grid.h) for b in fam)
    assert classical_morrey_norm(f, 2.0, 0.0, fam) == pytest.approx(direct, rel=1e-12)


def test_weighted_orlicz_unweighted_consistency(sym_grid):
    fam = BallFamily.default(sym_grid)
    inv = OuterFunction.power(-1.0)
    for p in (1.5, 2.0, 3.0):
        f = gf(sym_grid, lambda x: np.cos(5 * x) + 0.2)
        spec = SpaceSpec("weighted_orlicz_morrey", fam, outer=inv, young=YoungFunction.power(p))
        direct = max((np.sum(np.abs(f.values[ball_indices(sym_grid, b)]) ** p) * sym_grid.h) ** (1 / p)
                     for b in fam)
        assert weighted_orlicz_morrey_norm(f, spec) == pytest.approx(direct, rel=1e-8)


def test_weighted_orlicz_constant(sym_grid):
    fam = BallFamily.default(sym_grid, stride=16)
    w = Weight.from_callable(sym_grid, lambda x: 1 + 0.5 * np.cos(x))
    young = YoungFunction.sum_of_powers(2.0, 3.0)
    outer = OuterFunction.power(-0.5)
    spec = SpaceSpec("weighted_orlicz_morrey", fam, outer=outer, young=young, weight=w)
    c = 1.7
    for ball, v in ball_norms(GridFunction.constant(sym_grid, c), spec):
        wB = w.values.values[ball_indices(sym_grid, ball)].sum() * sym_grid.h
        assert v == pytest.approx(c / young_inverse(young, float(outer(wB))), rel=1e-8)
    assert weighted_orlicz_morrey_norm(GridFunction.constant(sym_grid, 0.0), spec) == 0.0


# ---------------------------------------------------------------- Campanato / BMO

def campanato_spec(grid, q=1.0, phi=None):
    return SpaceSpec("campanato", BallFamily.default(grid), phi=phi or GrowthFunction.power(1.0), q=q)


def test_campanato_constant_and_translation(sym_grid):
    spec = campanato_spec(sym_grid, q=2.0, phi=GrowthFunction.power(1.5))
    assert campanato_norm(GridFunction.constant(sym_grid, 4.0), spec) == 0.0
    f = gf(sym_grid, lambda x: np.sin(3 * x) + x**2)
    a = campanato_norm(f, spec)
    b = campanato_norm(f + 10.0, spec)
    assert b == pytest.approx(a, rel=1e-9)
    with pytest.raises(ValueError):
        SpaceSpec("campanato", spec.balls, phi=spec.phi, q=0.5)
    with pytest.raises(ValueError):
        campanato_ball(f, spec.phi, 0.5, Ball(0.0, 0.5))


@given(st.integers(0, 10_000))
def test_campanato_at_most_twice_star(seed):
    g = Grid.uniform(-1, 1, 65)
    r = np.random.default_rng(seed)
    f = GridFunction(g, np.cumsum(r.normal(size=g.size)) * g.h)
    phi = GrowthFunction.power(1.0)
    for ball in BallFamily.default(g, stride=8):
        plain = campanato_ball(f, phi, 1.0, ball)
        star = campanato_ball(f, phi, 1.0, ball, star=True)
        assert plain <= 2 * star * (1 + 1e-12) + 1e-15
    spec = campanato_spec(g)
    assert campanato_norm(f, spec) <= 2 * campanato_star_norm(f, spec) * (1 + 1e-12)


def test_campanato_q_one_linear_is_oscillation(sym_grid):
    # with phi = t the Campanato ball value is the mean absolute oscillation
    f = gf(sym_grid, lambda x: np.exp(x))
    phi = GrowthFunction.power(1.0)
    for ball in list(BallFamily.default(sym_grid))[::7]:
        assert campanato_ball(f, phi, 1.0, ball) == pytest.approx(bmo_ball(f, ball), rel=1e-9)


def test_bmo_linear(unit_grid):
    fam = BallFamily.default(unit_grid)
    assert bmo_norm(GridFunction.constant(unit_grid, 2.0), fam) == 0.0
    x = gf(unit_grid, lambda t: t)
    inside = [b for b in fam if b.radius <= min(b.center[0], 1 - b.center[0]) + 1e-12]
    for ball in inside:
        assert bmo_ball(x, ball) == pytest.approx(ball.radius / 2, abs=unit_grid.h)
    # over balls contained in the domain the maximum sits at the largest radius
    top = max(b.radius for b in inside)
    best = max(inside, key=lambda b: bmo_ball(x, b))
    assert best.radius == top
    assert bmo_norm(x, BallFamily(inside)) == pytest.approx(top / 2, abs=unit_grid.h)


def test_bmo_log_refinement_stable():
    vals = []
    for n in (129, 257, 513):
        g = Grid.uniform(-1, 1, n)
        b = gf(g, lambda x: np.log(1 / np.maximum(np.abs(x), g.h)))
        fam = BallFamily.centered_chain(0.0, [0.5, 0.25, 0.125, 0.0625])
        vals.append(bmo_norm(b, fam))
    assert max(vals) / min(vals) <= 1.1


def test_john_nirenberg_single_constant():
    g = Grid.uniform(-1, 1, 257)
    fam = BallFamily.default(g)
    corpus = [
        gf(g, lambda x: np.log(1 / np.maximum(np.abs(x), g.h))),
        gf(g, lambda x: np.log(1 / np.maximum(np.abs(x - 0.3), g.h))),
        gf(g, lambda x: np.sign(x)),
        gf(g, lambda x: np.sin(12 * x)),
    ] + [GridFunction(g, np.repeat(np.random.default_rng(s).normal(size=16), 17)[:g.size])
         for s in range(4)]
    consts = [john_nirenberg_constant(b, fam) for b in corpus]
    assert all(1 - 1e-12 <= c for c in consts)
    assert max(consts) <= 4.0


# ---------------------------------------------------------------- Holder

def test_holder_equality_case():
    g = Grid.uniform(0, 1, 33)
    one = GridFunction.constant(g, 1.0)
    assert generalized_holder_check(one, one, SQ, Ball(0.5, 0.3)) == pytest.approx(2.0, rel=1e-7)
    zero = GridFunction.constant(g, 0.0)
    assert generalized_holder_check(zero, one, SQ, Ball(0.5, 0.3)) == 0.0


def test_holder_random_pairs():
    g = Grid.uniform(0, 1, 17)
    r = np.random.default_rng(7)
    w = Weight.from_callable(g, lambda x: 1 + x)
    phis = [SQ, GrowthFunction.weighted_orlicz(w, YoungFunction.sum_of_powers(1.5, 3.0))]
    worst = 0.0
    for k in range(100):
        f = GridFunction(g, r.normal(size=g.size))
        h = GridFunction(g, r.exponential(size=g.size))
        worst = max(worst, generalized_holder_check(f, h, phis[k % 2], Ball(0.5, 0.45)))
    assert worst <= 2 + 1e-6


# ---------------------------------------------------------------- properties

def test_quasi_triangle_fitted():
    g = Grid.uniform(0, 1, 33)
    r = np.random.default_rng(3)
    ball = Ball(0.5, 0.4)
    for p, bound in ((2.0, 1.0), (0.5, 2.0)):
        phi = GrowthFunction.power(p)
        K = 0.0
        for _ in range(100):
            f = GridFunction(g, r.normal(size=g.size))
            h = GridFunction(g, r.normal(size=g.size))
            lhs = luxembourg_norm_ball(f + h, phi, ball)
            K = max(K, lhs / (luxembourg_norm_ball(f, phi, ball) + luxembourg_norm_ball(h, phi, ball)))
        # convex case is a true norm; t^{1/2} obeys the 2^{1/p - 1} quasi-triangle law
        assert K <= bound * (1 + 1e-8)


@given(st.sampled_from([0.5, 2.0, 10.0]), st.floats(1.0, 3.0), st.integers(0, 1000))
def test_homogeneity(c, p, seed):
    g = Grid.uniform(0, 1, 33)
    f = GridFunction(g, np.random.default_rng(seed).normal(size=g.size))
    phi = GrowthFunction.custom(lambda x, t: t**p * (1 + np.minimum(t, 1)), p, p + 1)
    ball = Ball(0.5, 0.4)
    # homogeneity holds exactly for power growth only
    pw = GrowthFunction.power(p)
    assert luxembourg_norm_ball(f * c, pw, ball) == pytest.approx(c * luxembourg_norm_ball(f, pw, ball), rel=1e-8)
    assert luxembourg_norm_ball(f * -c, pw, ball) == pytest.approx(c * luxembourg_norm_ball(f, pw, ball), rel=1e-8)
    assert luxembourg_norm_ball(f * c, phi, ball) > 0


@given(st.integers(0, 10_000))
def test_monotonicity(seed):
    g = Grid.uniform(-1, 1, 33)
    r = np.random.default_rng(seed)
    small = GridFunction(g, r.normal(size=g.size))
    big = GridFunction(g, np.abs(small.values) + r.exponential(size=g.size))
    fam = BallFamily.default(g, stride=8)
    w = Weight.from_callable(g, lambda x: 1 + x**2)
    phi = GrowthFunction.weighted_orlicz(w, YoungFunction.sum_of_powers(1.5, 2.5))
    for ball in fam:
        assert luxembourg_norm_ball(small, phi, ball) <= luxembourg_norm_ball(big, phi, ball) * (1 + 1e-10)
    spec = SpaceSpec("musielak_morrey", fam, phi=phi, outer=OuterFunction.power(0.2))
    for (_, a), (_, b) in zip(ball_norms(small, spec), ball_norms(big, spec)):
        assert a <= b * (1 + 1e-10)


def test_variable_outer_uses_center(sym_grid):
    fam = BallFamily.default(sym_grid, stride=16)
    phi = GrowthFunction.power(2.0)
    var = OuterFunction.variable_power(lambda c: 0.25 + 0.1 * np.sin(np.pi * c[:, 0]))
    f = gf(sym_grid, lambda x: np.cos(2 * x))
    spec = SpaceSpec("musielak_morrey", fam, phi=phi, outer=var)
    for ball, v in ball_norms(f, spec):
        frozen = SpaceSpec("musielak_morrey", BallFamily([ball]), phi=phi, outer=var.at_center(ball.center))
        assert v == pytest.approx(space_norm(f, frozen), rel=1e-12)


def test_spec_validation(sym_grid):
    fam = BallFamily.default(sym_grid)
    with pytest.raises(ValueError):
        SpaceSpec("nonsense", fam)
    with pytest.raises(ValueError):
        SpaceSpec("musielak_morrey", fam, phi=SQ)
    with pytest.raises(ValueError):
        SpaceSpec("classical_morrey", fam, p=2.0, kappa=1.0)
