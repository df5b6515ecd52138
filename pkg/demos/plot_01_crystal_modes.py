"""
Equilibrium and phonon modes of a linear ion crystal
=====================================================

Solve the dimensionless force balance, then diagonalise the coupling matrix.
The centre-of-mass mode (mu = 1) and the breathing mode (mu = 3) come out
the same for every chain length.
"""

import numpy as np

from qet_ion import CrystalSpec, build_mode_decomposition, solve_equilibrium, w_matrices

for n in (2, 3, 5, 8):
    eq = solve_equilibrium(CrystalSpec(n))
    modes = build_mode_decomposition(eq)
    print(f"N={n}: u = {np.round(eq.u, 6)}")
    print(f"      mu = {np.round(modes.eigenvalues, 6)}  (residual {eq.residual:.1e})")

# Delta is the ground-state position correlation kernel (times 2 m nu)
modes = build_mode_decomposition(solve_equilibrium(CrystalSpec(2)))
print("Delta for N=2:\n", modes.delta)

# W1 W1 + W2 W3 = 1 at all times
w1, w2, w3 = w_matrices(modes, nu=1.0, t=np.pi)
print("W1(pi) =\n", w1)
print("symplectic residual:", np.max(np.abs(w1 @ w1 + w2 @ w3 - np.eye(2))))
