"""Closed-form energies of the teleportation protocol.

The gateway ion (ion 1) is measured with Kraus operators ``cos G_1`` and
``sin G_1``, ``G_1 = phi + lam q_1``; the exit ion (ion N) then receives the
kick ``exp(i s theta p_N)`` conditioned on the outcome ``s = +-1``.

Units: hbar = 1. ``MeasurementParams.lam`` is given in units of
``sqrt(m nu)``, so ``lam = 1`` means ``E_in = nu / 2``. ``theta`` is a length
in units of ``1 / sqrt(m nu)``. Returned energies are absolute (hbar = 1);
with the default ``m = nu = 1`` they are in units of ``nu``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .crystal_modes import CrystalSpec, ModeDecomposition
from .errors import DomainError

__all__ = [
    "MeasurementParams",
    "ProtocolEnergies",
    "protocol_energies",
    "gamma_zeta",
    "eta_coefficient",
    "xi_coefficient",
    "final_energy",
    "n2_closed_form",
    "energy_to_joules",
]

HBAR = 1.054571817e-34  # J s


@dataclass(frozen=True)
class MeasurementParams:
    phi: float
    lam: float
    theta: Optional[float] = None

    def __post_init__(self):
        vals = [self.phi, self.lam] + ([] if self.theta is None else [self.theta])
        if not all(np.isfinite(v) for v in vals):
            raise DomainError(f"measurement parameters must be finite: {self!r}")

    def coupling(self, spec: CrystalSpec) -> float:
        """Physical coupling ``lam * sqrt(m nu)``."""
        return self.lam * np.sqrt(spec.mass * spec.trap_frequency)

    def kick(self, spec: CrystalSpec) -> Optional[float]:
        """Physical feedback displacement ``theta / sqrt(m nu)``, or None."""
        if self.theta is None:
            return None
        return self.theta / np.sqrt(spec.mass * spec.trap_frequency)


@dataclass(frozen=True)
class ProtocolEnergies:
    e_in: float
    eta: float
    xi: float
    theta_star: float
    theta: float
    e_f: float
    e_out: float
    gamma_n: float
    zeta_n: float

    def as_dict(self) -> dict:
        return asdict(self)


def _check(spec, modes):
    if spec.n_ions != modes.n_ions:
        raise DomainError(f"crystal has {spec.n_ions} ions but modes describe {modes.n_ions}")


def gamma_zeta(modes: ModeDecomposition):
    """Dimensionless efficiency ``gamma_N`` and suppression ``zeta_N``.

    ``gamma_N = (sum_n Delta_1n A_nN)^2 / A_NN`` and ``zeta_N = 4 Delta_11``.
    """
    a = modes.coupling
    overlap = float(modes.delta[0] @ a[:, -1])
    return overlap**2 / a[-1, -1], 4.0 * modes.delta[0, 0]


def eta_coefficient(lam, phi, modes: ModeDecomposition, m=1.0, nu=1.0) -> float:
    """Linear coefficient of the final energy in the feedback displacement.

    ``eta = -lam nu sin(2 phi) exp(-lam^2 Delta_11 / (m nu)) sum_n Delta_1n A_nN``
    for the physical coupling ``lam``.
    """
    a = modes.coupling
    d = modes.delta
    return float(-lam * nu * np.sin(2 * phi) * np.exp(-lam**2 * d[0, 0] / (m * nu))
                 * (d[0] @ a[:, -1]))


def xi_coefficient(modes: ModeDecomposition, m=1.0, nu=1.0) -> float:
    """Curvature ``xi = m nu^2 A_NN / 2`` of the final energy in the displacement."""
    return 0.5 * m * nu**2 * float(modes.coupling[-1, -1])


def final_energy(e_in, eta, xi, theta):
    """Energy left in the crystal after feedback, ``E_in - theta eta + theta^2 xi``."""
    return e_in - theta * eta + theta**2 * xi


def protocol_energies(spec: CrystalSpec, modes: ModeDecomposition,
                      params: MeasurementParams) -> ProtocolEnergies:
    """Evaluate every closed-form protocol quantity for one parameter set.

    At the optimal displacement ``theta* = eta / (2 xi)`` the extracted energy
    is ``eta^2 / (4 xi)``; otherwise it is ``theta eta - theta^2 xi`` and may
    be negative (energy deposited by the kick).
    """
    _check(spec, modes)
    m, nu = spec.mass, spec.trap_frequency
    lam = params.coupling(spec)
    e_in = lam**2 / (2 * m)
    eta = eta_coefficient(lam, params.phi, modes, m, nu)
    xi = xi_coefficient(modes, m, nu)
    theta_star = eta / (2 * xi)
    gamma, zeta = gamma_zeta(modes)
    if params.theta is None:
        theta = theta_star
        e_out = eta**2 / (4 * xi)
        e_f = e_in - e_out
    else:
        theta = params.kick(spec)
        e_f = final_energy(e_in, eta, xi, theta)
        e_out = e_in - e_f
    return ProtocolEnergies(e_in=float(e_in), eta=eta, xi=xi, theta_star=theta_star,
                            theta=float(theta), e_f=float(e_f), e_out=float(e_out),
                            gamma_n=float(gamma), zeta_n=float(zeta))


def n2_closed_form(m, nu, lam, phi) -> float:
    """Extracted energy for a two-ion crystal at the optimal feedback.

    ``(2 - sqrt 3)/4 * lam^2/(2m) * sin^2(2 phi) * exp(-(1 + 1/sqrt 3) lam^2 / (m nu))``
    with ``lam`` the physical coupling.
    """
    if not (m > 0 and nu > 0):
        raise DomainError(f"m and nu must be positive, got m={m!r}, nu={nu!r}")
    r3 = np.sqrt(3.0)
    return float((2 - r3) / 4 * lam**2 / (2 * m) * np.sin(2 * phi) ** 2
                 * np.exp(-(1 + 1 / r3) * lam**2 / (m * nu)))


def energy_to_joules(energy, nu, trap_frequency_hz):
    """Convert an energy computed with trap frequency ``nu`` to joules.

    ``trap_frequency_hz`` is the ordinary axial frequency; the angular
    frequency ``2 pi f`` plays the role of ``nu``.
    """
    return energy / nu * HBAR * 2 * np.pi * trap_frequency_hz
