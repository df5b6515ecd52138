"""Equilibrium geometry and axial phonon modes of a linear ion crystal.

Positions are dimensionless, ``u_n = x_n / l`` with the scale length
``l = (Z^2 e^2 / m nu^2)^(1/3)``. The coupling matrix ``A`` is the Hessian of
the dimensionless potential

    V(u) = 1/2 sum_n u_n^2 + sum_{n<n'} 1 / |u_n - u_n'|

at equilibrium, and its eigenvectors ``b^(k)`` are the normal modes with
frequencies ``nu * sqrt(mu_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, DomainError, NumericalError, SolverError

__all__ = [
    "CrystalSpec",
    "EquilibriumConfig",
    "ModeDecomposition",
    "solve_equilibrium",
    "equilibrium_residual",
    "coupling_matrix",
    "build_mode_decomposition",
    "w_matrices",
    "scale_length",
    "chain_modes",
]

RESIDUAL_TOL = 1e-12
MAX_ITER = 200
DEGENERACY_GAP = 1e-8


@dataclass(frozen=True)
class CrystalSpec:
    """Ion count, mass and axial trap frequency (natural units, hbar = 1)."""

    n_ions: int
    mass: float = 1.0
    trap_frequency: float = 1.0

    def __post_init__(self):
        if int(self.n_ions) != self.n_ions or self.n_ions < 2:
            raise DomainError(f"n_ions must be an integer >= 2, got {self.n_ions!r}")
        if not (np.isfinite(self.mass) and self.mass > 0):
            raise DomainError(f"mass must be positive, got {self.mass!r}")
        if not (np.isfinite(self.trap_frequency) and self.trap_frequency > 0):
            raise DomainError(
                f"trap_frequency must be positive, got {self.trap_frequency!r}"
            )


@dataclass(frozen=True)
class EquilibriumConfig:
    """Dimensionless equilibrium positions ``u`` and the force residual there."""

    u: np.ndarray
    residual: float
    iterations: int = 0

    @property
    def n_ions(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True)
class ModeDecomposition:
    """Coupling matrix, its sorted eigenpairs and the correlation kernel Delta.

    ``eigenvectors[:, k]`` is the k-th mode (0-based), normalised and with its
    largest-magnitude component positive.
    """

    u: np.ndarray
    coupling: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    delta: np.ndarray = field(repr=False)

    @property
    def n_ions(self) -> int:
        return self.coupling.shape[0]

    @property
    def mode_frequencies(self) -> np.ndarray:
        """Mode frequencies in units of the trap frequency, ``sqrt(mu_k)``."""
        return np.sqrt(self.eigenvalues)


def _pair_distances(u):
    d = u[:, None] - u[None, :]
    np.fill_diagonal(d, 1.0)
    return d


def equilibrium_residual(u) -> np.ndarray:
    """Left-hand side of the dimensionless force balance for each ion.

    ``F_n = u_n - sum_{n'<n} (u_n - u_n')^-2 + sum_{n'>n} (u_n - u_n')^-2``;
    for ordered ``u`` this equals ``dV/du_n``.
    """
    u = np.asarray(u, dtype=float)
    d = _pair_distances(u)
    coulomb = np.sign(d) / d**2
    np.fill_diagonal(coulomb, 0.0)
    return u - coulomb.sum(axis=1)


def coupling_matrix(u) -> np.ndarray:
    """Hessian of the dimensionless potential at ``u``.

    Off-diagonal ``-2/|u_n - u_n'|^3``; diagonal ``1 + 2 sum_{n''!=n} 1/|u_n - u_n''|^3``.
    """
    u = np.asarray(u, dtype=float)
    inv3 = 1.0 / np.abs(_pair_distances(u)) ** 3
    np.fill_diagonal(inv3, 0.0)
    a = -2.0 * inv3
    np.fill_diagonal(a, 1.0 + 2.0 * inv3.sum(axis=1))
    return a


def solve_equilibrium(spec: CrystalSpec, tol: float = RESIDUAL_TOL,
                      max_iter: int = MAX_ITER) -> EquilibriumConfig:
    """Solve the force balance for the ordered crystal by damped Newton.

    The Jacobian of the residual is the coupling matrix, which is positive
    definite for ordered configurations, so every Newton step is a descent
    direction for the potential. Steps are halved until the ordering is kept
    and the residual max-norm decreases.

    Raises:
        DomainError: fewer than two ions.
        SolverError: no convergence within ``max_iter`` iterations.
    """
    n = spec.n_ions
    if n < 2:
        raise DomainError("need at least two ions")
    u = 2.0 * (np.arange(1, n + 1) - (n + 1) / 2.0)
    f = equilibrium_residual(u)
    res = np.max(np.abs(f))
    for it in range(max_iter):
        if res <= tol:
            break
        step = np.linalg.solve(coupling_matrix(u), -f)
        t = 1.0
        while t > 1e-12:
            trial = u + t * step
            if np.all(np.diff(trial) > 0):
                f_trial = equilibrium_residual(trial)
                res_trial = np.max(np.abs(f_trial))
                if res_trial < res:
                    break
            t *= 0.5
        else:
            # Newton stalled at round-off level
            break
        u, f, res = trial, f_trial, res_trial
    else:
        it = max_iter
    # a round-off floor between tol and 1e-10 is accepted
    if res > 1e-10:
        raise SolverError(
            f"equilibrium solver did not converge for N={n}: residual {res:.3e}",
            residual=res, n_ions=n,
        )
    # enforce exact reflection symmetry u_n = -u_{N+1-n}
    u = 0.5 * (u - u[::-1])
    res = float(np.max(np.abs(equilibrium_residual(u))))
    u.setflags(write=False)
    return EquilibriumConfig(u=u, residual=res, iterations=it)


def _fix_signs(vecs, tie_tol=1e-9):
    vecs = vecs.copy()
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        mag = np.abs(col)
        # lowest index among components tied for largest magnitude
        idx = int(np.flatnonzero(mag >= mag.max() * (1 - tie_tol))[0])
        if col[idx] < 0:
            vecs[:, k] = -col
    return vecs


def _delta_from_modes(mu, b):
    return (b / np.sqrt(mu)) @ b.T


def build_mode_decomposition(eq: EquilibriumConfig) -> ModeDecomposition:
    """Diagonalise the coupling matrix and form ``Delta = sum_k mu_k^-1/2 b b^T``.

    Raises:
        DegeneracyError: adjacent eigenvalues closer than 1e-8.
        NumericalError: a non-positive eigenvalue.
    """
    a = coupling_matrix(eq.u)
    a = 0.5 * (a + a.T)
    mu, b = np.linalg.eigh(a)
    if np.any(mu <= 0):
        raise NumericalError(f"non-positive eigenvalue in coupling matrix: {mu.min():.3e}")
    if mu.size > 1 and np.min(np.diff(mu)) < DEGENERACY_GAP:
        raise DegeneracyError(f"degenerate mode spectrum: min gap {np.min(np.diff(mu)):.3e}")
    b = _fix_signs(b)
    delta = _delta_from_modes(mu, b)
    delta = 0.5 * (delta + delta.T)
    for arr in (a, mu, b, delta):
        arr.setflags(write=False)
    return ModeDecomposition(u=eq.u, coupling=a, eigenvalues=mu, eigenvectors=b, delta=delta)


def chain_modes(n_ions: int) -> ModeDecomposition:
    """Shortcut: equilibrium plus mode decomposition for ``n_ions`` ions."""
    return build_mode_decomposition(solve_equilibrium(CrystalSpec(n_ions)))


def w_matrices(modes: ModeDecomposition, nu: float, t: float):
    """Heisenberg propagator blocks ``(W1, W2, W3)`` at time ``t``.

    ``q(t) = W1 q + W2 p / (m nu)`` and ``p(t) = -m nu W3 q + W1 p``.
    """
    mu = modes.eigenvalues
    b = modes.eigenvectors
    root = np.sqrt(mu)
    phase = nu * root * t
    c, s = np.cos(phase), np.sin(phase)
    w1 = (b * c) @ b.T
    w2 = (b * (s / root)) @ b.T
    w3 = (b * (s * root)) @ b.T
    return w1, w2, w3


def scale_length(charge_number, charge_unit, mass, nu) -> float:
    """Crystal length scale ``l = (Z^2 e^2 / (m nu^2))^(1/3)``.

    ``charge_unit`` is ``e`` in whatever unit system makes ``e^2 / r`` an
    energy (Gaussian units, or ``e^2 / (4 pi eps0)`` in SI).
    """
    for name, val in (("charge_number", charge_number), ("charge_unit", charge_unit),
                      ("mass", mass), ("nu", nu)):
        if not val > 0:
            raise DomainError(f"{name} must be positive, got {val!r}")
    return float(np.cbrt(charge_number**2 * charge_unit**2 / (mass * nu**2)))
