"""
Checking the closed forms in a truncated Fock space
====================================================

Build the phonon operators as explicit matrices, apply the Kraus operators
and the conditional kick to the vacuum, and compare energies. The per-ion
energy after the measurement sits entirely on the gateway ion.
"""

import math

import numpy as np

from qet_ion import CrystalSpec, MeasurementParams, build_mode_decomposition, protocol_energies
from qet_ion import solve_equilibrium
from qet_ion.fock_oracle import (
    FockBasisSpec,
    build_workspace,
    local_energy_operators,
    local_energy_profile,
    simulate_protocol,
)

spec = CrystalSpec(3)
modes = build_mode_decomposition(solve_equilibrium(spec))
ws = build_workspace(spec, modes, FockBasisSpec(3, cutoff=8))
params = MeasurementParams(phi=math.pi / 4, lam=0.3)

run = simulate_protocol(ws, modes, params)
closed = protocol_energies(spec, modes, params)
print(f"E_in : oracle {run.e_in_oracle:.10f}  closed {closed.e_in:.10f}")
print(f"E_out: oracle {run.e_out_oracle:.10f}  closed {closed.e_out:.10f}")

# Without the measurement outcome the kick only adds energy
blind = simulate_protocol(ws, modes, MeasurementParams(math.pi / 4, 0.3, closed.theta_star),
                          outcome_dependent=False)
print(f"outcome-independent kick: E_out = {blind.e_out_oracle:+.3e}")

# Energy spreads from ion 1 to the rest of the chain as time passes
ops = local_energy_operators(ws, modes)
for t in (0.0, 1.0, 3.0, 6.0):
    print(f"t = {t:4.1f}: local energies {np.round(local_energy_profile(ws, modes, run.rho_m, t, ops), 5)}")
