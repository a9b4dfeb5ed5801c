# Growth functions, Luxembourg norms and the Morrey/Campanato family on a 1D grid.
#
# Run: python3 demos/growth_and_norms.py

import numpy as np

from intrinsic_lp import (Ball, BallFamily, Grid, GridFunction, GrowthFunction, OuterFunction, SpaceSpec,
                          YoungFunction, bmo_norm, classical_morrey_norm, complementary,
                          john_nirenberg_constant, luxembourg_norm_ball, morrey_norm, normalized_psi,
                          space_norm, type_constant)
from intrinsic_lp.growth import young_sandwich

grid = Grid.uniform(-1, 1, 257)
x = grid.axes()[0]

# A growth function carries lower and upper types p0 <= p1.
phi = GrowthFunction.weighted_orlicz(None, YoungFunction.sum_of_powers(2.0, 3.0))
print("types of t^2 + t^3:", phi.p0, phi.p1)
print("type constant (lower, upper):", type_constant(phi, "lower", x), type_constant(phi, "upper", x))

# Normalizing by phi(x, 1) and taking the Legendre transform.
sq = normalized_psi(GrowthFunction.power(2.0))
print("complementary of t^2 at 0.5, 1, 2:", [complementary(sq, 0.0, s) for s in (0.5, 1.0, 2.0)])

# Phi^-1(r) * Phi~^-1(r) sits between r and 2r.
r = np.logspace(-3, 3, 7)
print("sandwich ratios for t^3:", np.round(young_sandwich(YoungFunction.power(3.0), r), 4))

# Luxembourg norm of a linear function on a ball.
f = GridFunction(grid, x)
print("||x||_{L^2(B(0,1/2))} =", luxembourg_norm_ball(f, GrowthFunction.power(2.0), Ball(0.0, 0.5)))

# The Musielak-Orlicz Morrey norm with phi = t^2, outer = t^(1/4) is the classical M^{2,1/2} norm.
balls = BallFamily.default(grid)
spec = SpaceSpec("musielak_morrey", balls, phi=GrowthFunction.power(2.0), outer=OuterFunction.power(0.25))
tent = GridFunction(grid, np.maximum(0, 1 - 4 * np.abs(x)))
print("Morrey vs classical:", morrey_norm(tent, spec), classical_morrey_norm(tent, 2.0, 0.5, balls))

# Campanato with phi = t, q = 1 is BMO; log|x| is the textbook member.
log = GridFunction(grid, np.log(np.abs(x) + grid.h / 2))
camp = SpaceSpec("campanato", balls, phi=GrowthFunction.power(1.0), q=1.0)
print("Campanato(t, q=1) vs BMO of log|x|:", space_norm(log, camp), bmo_norm(log, balls))
print("John-Nirenberg constant of log|x|:", john_nirenberg_constant(log, balls))
