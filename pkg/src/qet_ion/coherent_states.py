"""Closed-form algebra of phonon coherent states.

A coherent state is ``|(alpha, beta)> = exp[i sum_n (alpha_n q_n - beta_n p_n)] |g>``
with real vectors ``alpha`` and ``beta`` over the ions. All inner products
needed by the protocol follow from the mode amplitudes
``A_k = b^(k) . alpha`` and ``B_k = b^(k) . beta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crystal_modes import ModeDecomposition
from .errors import DomainError, NumericalError

__all__ = [
    "CoherentParams",
    "coherent_overlap",
    "gateway_displacement",
    "ground_q_matrix_element",
    "q_cos2g_expectation",
    "annihilation_eigenvalues",
]


@dataclass(frozen=True)
class CoherentParams:
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float)
        beta = np.asarray(self.beta, dtype=float)
        if alpha.ndim != 1 or alpha.shape != beta.shape:
            raise DomainError(f"alpha and beta must be equal-length vectors, got "
                              f"{alpha.shape} and {beta.shape}")
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(beta))):
            raise DomainError("coherent parameters must be finite")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def ground(cls, n_ions: int) -> "CoherentParams":
        return cls(np.zeros(n_ions), np.zeros(n_ions))


def gateway_displacement(n_ions: int, lam: float, sign: int = 1) -> CoherentParams:
    """Parameters of ``|+-2 lam> = exp(+-2 i lam q_1)|g>``."""
    alpha = np.zeros(n_ions)
    alpha[0] = 2.0 * sign * lam
    return CoherentParams(alpha, np.zeros(n_ions))


def _mode_scale(modes, m, nu):
    return m * nu * np.sqrt(modes.eigenvalues)


def annihilation_eigenvalues(c: CoherentParams, modes: ModeDecomposition,
                             m: float = 1.0, nu: float = 1.0) -> np.ndarray:
    """Eigenvalues of ``a_k`` on ``|(alpha, beta)>``.

    ``A_k / sqrt(2 m nu sqrt(mu_k)) - i sqrt(m nu sqrt(mu_k) / 2) B_k``.
    """
    _check_len(c, modes)
    b = modes.eigenvectors
    amp_a = b.T @ c.alpha
    amp_b = b.T @ c.beta
    w = _mode_scale(modes, m, nu)
    return amp_a / np.sqrt(2 * w) - 1j * np.sqrt(w / 2) * amp_b


def _check_len(c, modes):
    if c.alpha.shape[0] != modes.n_ions:
        raise DomainError(f"coherent parameters have length {c.alpha.shape[0]}, "
                          f"crystal has {modes.n_ions} ions")


def coherent_overlap(c1: CoherentParams, c2: CoherentParams, modes: ModeDecomposition,
                     m: float = 1.0, nu: float = 1.0) -> complex:
    """Inner product ``<(alpha, beta)|(alpha', beta')>``.

    The modulus is the Gaussian
    ``exp(-1/4 sum_k |(A_k - A'_k)/sqrt(w_k) - i sqrt(w_k)(B_k - B'_k)|^2)``
    with ``w_k = m nu sqrt(mu_k)``. The phase comes from the Weyl product
    ``U(a,b)^dag U(a',b') = U(a'-a, b'-b) exp[(i/2) sum_n (beta_n alpha'_n - alpha_n beta'_n)]``.
    """
    _check_len(c1, modes)
    _check_len(c2, modes)
    b = modes.eigenvectors
    da = b.T @ (c1.alpha - c2.alpha)
    db = b.T @ (c1.beta - c2.beta)
    w = _mode_scale(modes, m, nu)
    z = da / np.sqrt(w) - 1j * np.sqrt(w) * db
    phase = 0.5 * np.sum(c1.beta * c2.alpha - c1.alpha * c2.beta)
    return complex(np.exp(1j * phase - 0.25 * np.sum(np.abs(z) ** 2)))


def ground_q_matrix_element(n: int, lam: float, sign: int, modes: ModeDecomposition,
                            m: float = 1.0, nu: float = 1.0) -> complex:
    """``<g| q_n |+-2 lam>`` for the ion index ``n`` (1-based).

    Equals ``+-i (lam / (m nu)) <g|+-2 lam> Delta_{1n}`` where the overlap with
    the ground state is ``exp(-lam^2 Delta_11 / (m nu))``.
    """
    if not 1 <= n <= modes.n_ions:
        raise DomainError(f"ion index {n} outside 1..{modes.n_ions}")
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    ground = CoherentParams.ground(modes.n_ions)
    overlap = coherent_overlap(ground, gateway_displacement(modes.n_ions, lam, sign),
                               modes, m, nu)
    return sign * 1j * (lam / (m * nu)) * overlap * modes.delta[0, n - 1]


def q_cos2g_expectation(lam: float, phi: float, modes: ModeDecomposition,
                        m: float = 1.0, nu: float = 1.0) -> np.ndarray:
    """``<g| q_n cos(2 G_1) |g>`` for all ions, with ``G_1 = phi + lam q_1``.

    Built from ``cos(2 G_1)|g> = (e^{2i phi}|+2 lam> + e^{-2i phi}|-2 lam>) / 2``.
    The result is real; the imaginary residue is dropped after a sanity check.
    """
    vals = np.empty(modes.n_ions, dtype=complex)
    for n in range(1, modes.n_ions + 1):
        vals[n - 1] = (0.5 * np.exp(2j * phi) * ground_q_matrix_element(n, lam, 1, modes, m, nu)
                       + 0.5 * np.exp(-2j * phi) * ground_q_matrix_element(n, lam, -1, modes, m, nu))
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.max(np.abs(vals.imag)) > 1e-12 * scale:
        raise NumericalError("q cos(2G) expectation has an imaginary part")
    return vals.real
