"""
Input and output energy of the teleportation protocol
======================================================

Measure the gateway ion, send the outcome to the exit ion and kick it by
``s * theta``. At the optimal kick the energy extracted at the exit is
``gamma_N E_in exp(-zeta_N E_in / nu) sin^2(2 phi)``.
"""

import math

import numpy as np

from qet_ion import (
    CrystalSpec,
    MeasurementParams,
    build_mode_decomposition,
    n2_closed_form,
    protocol_energies,
    solve_equilibrium,
)

spec = CrystalSpec(2)
modes = build_mode_decomposition(solve_equilibrium(spec))
res = protocol_energies(spec, modes, MeasurementParams(phi=math.pi / 4, lam=0.3))
print(res)
print("two-ion closed form:", n2_closed_form(1.0, 1.0, 0.3, math.pi / 4))

# The final energy is a parabola in theta with its minimum at theta*
for scale in (0.0, 0.5, 1.0, 1.5, 2.0):
    r = protocol_energies(spec, modes, MeasurementParams(math.pi / 4, 0.3, scale * res.theta_star))
    print(f"theta = {scale:.1f} theta*: E_F = {r.e_f:.6f}, E_out = {r.e_out:+.6f}")

# Output peaks at E_in = nu / zeta_N
e_in = np.linspace(0.01, 2.0, 400)
e_out = [protocol_energies(spec, modes, MeasurementParams(math.pi / 4, math.sqrt(2 * e))).e_out
         for e in e_in]
print(f"peak at E_in = {e_in[int(np.argmax(e_out))]:.3f}, 1/zeta_2 = {1 / res.zeta_n:.3f}")
