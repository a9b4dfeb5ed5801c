# Intrinsic square functions S, g and g*_lambda, the wide-aperture S_{alpha,beta},
# and a commutator with a log symbol.
#
# Run: python3 demos/square_functions.py

import numpy as np

from intrinsic_lp import (Grid, GridFunction, HalfSpaceGrid, commutator_s, g_alpha, g_star_lambda, s_alpha,
                          s_alpha_beta)

grid = Grid.uniform(-1, 1, 129)
x = grid.axes()[0]
hs = HalfSpaceGrid(grid)
f = GridFunction(grid, np.maximum(0, 1 - 4 * np.abs(x)))

S = s_alpha(f, 1.0, hs).values
g = g_alpha(f, 1.0, hs).values
gs = g_star_lambda(f, 1.0, 10.0, hs).values
print("sup S, g, g*_10:", S.max(), g.max(), gs.max())
print("g*_10 / S in", (gs / S).min(), (gs / S).max())

# Widening the cone raises S by a power of the aperture.
for beta in (1, 2, 4, 8):
    print(f"aperture {beta}: sup S_beta / S = {np.max(s_alpha_beta(f, 1.0, beta, hs).values / S):.3f}")

# Constants are invisible to every operator.
print("S of f + 3 equals S of f:", np.allclose(s_alpha(f + 3.0, 1.0, hs).values, S))

b = GridFunction(grid, np.log(np.abs(x) + grid.h / 2))
print("sup [b, S] f =", commutator_s(b, f, 1.0, hs).values.max())
