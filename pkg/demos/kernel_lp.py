# The intrinsic kernel class: how large can |sum c_z phi(z)| get over all
# kernels supported in the unit ball with the Holder bound of order alpha?
# A dictionary of explicit kernels gives a lower bound, the LP the exact
# discrete maximum, and a refined dictionary an independent estimate.
#
# Run: python3 demos/kernel_lp.py

import numpy as np

from intrinsic_lp import Grid, GridFunction, KernelGrid, KernelLP, kernel_dictionary, refined_dictionary_value
from intrinsic_lp.intrinsic import lp_objective

grid = Grid.uniform(-1, 1, 129)
x = grid.axes()[0]
f = GridFunction(grid, np.sign(x))

for alpha in (0.5, 1.0):
    kg = KernelGrid(alpha, 41)
    c = lp_objective(f, [0.0], 1.0, kg)
    D = kernel_dictionary(alpha, 41, 128)
    lower = np.abs(D @ c).max()
    lp = KernelLP(c, kg).solve()[0]
    refined, _ = refined_dictionary_value(c, kg, base=D)
    print(f"alpha={alpha}: dictionary {lower:.5f} <= LP {lp:.5f}, refined oracle {refined:.5f}")
