"""Quantum energy teleportation on a linear trapped-ion crystal.

Closed-form protocol energies built on the crystal's phonon modes, together
with a truncated Fock-space oracle that recomputes them by brute force.
"""

__version__ = "0.1.0"

from .crystal_modes import (  # noqa: E402
    CrystalSpec,
    EquilibriumConfig,
    ModeDecomposition,
    build_mode_decomposition,
    chain_modes,
    scale_length,
    solve_equilibrium,
    w_matrices,
)
from .coherent_states import (  # noqa: E402
    CoherentParams,
    coherent_overlap,
    ground_q_matrix_element,
    q_cos2g_expectation,
)
from .errors import (  # noqa: E402
    DegeneracyError,
    DomainError,
    NumericalError,
    QETError,
    ResourceError,
    SolverError,
)
from .qet_protocol import (  # noqa: E402
    MeasurementParams,
    ProtocolEnergies,
    gamma_zeta,
    n2_closed_form,
    protocol_energies,
)
