"""Brute-force check of the protocol in a truncated phonon Fock space.

Each normal mode keeps the occupations ``0 .. cutoff-1``; the joint basis is
the lexicographic product with mode 1 most significant. The Hamiltonian is
built normal-ordered, ``H = sum_k nu sqrt(mu_k) a_k^dag a_k``, so the vacuum
is an exact zero-energy eigenstate at any cutoff. Site operators are
assembled from the ladder matrices and every operator function (cos, sin,
exp) is applied through a full Hermitian eigendecomposition.

Truncation makes the canonical commutator wrong in the highest occupation
levels. Identities that rely on it only hold on the low-occupation block,
see :func:`low_occupation_mask`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np

from .crystal_modes import CrystalSpec, ModeDecomposition
from .errors import DomainError, NumericalError, ResourceError
from .qet_protocol import MeasurementParams

__all__ = [
    "FockBasisSpec",
    "FockWorkspace",
    "DensityState",
    "OracleRun",
    "build_workspace",
    "hermitian_function",
    "kraus_pair",
    "cos_2g",
    "feedback_unitary",
    "oracle_eta",
    "simulate_protocol",
    "local_energy_operators",
    "local_energy_profile",
    "low_occupation_mask",
    "gateway_coherent_state",
]

DEFAULT_MAX_DIM = 20_000


@dataclass(frozen=True)
class FockBasisSpec:
    n_ions: int
    cutoff: int
    max_dim: int = DEFAULT_MAX_DIM

    def __post_init__(self):
        if self.n_ions < 2:
            raise DomainError(f"n_ions must be >= 2, got {self.n_ions}")
        if self.cutoff < 2:
            raise DomainError(f"cutoff must be >= 2, got {self.cutoff}")
        if self.dim > self.max_dim:
            raise ResourceError(
                f"Fock dimension {self.cutoff}^{self.n_ions} = {self.dim} exceeds "
                f"ceiling {self.max_dim}")

    @property
    def dim(self) -> int:
        return self.cutoff ** self.n_ions


@dataclass(frozen=True, eq=False)
class FockWorkspace:
    spec: CrystalSpec
    basis: FockBasisSpec
    annihilators: list = field(repr=False)
    q_ops: list = field(repr=False)
    p_ops: list = field(repr=False)
    energies: np.ndarray = field(repr=False)
    occupations: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def hamiltonian(self) -> np.ndarray:
        return np.diag(self.energies).astype(complex)

    @property
    def ground(self) -> np.ndarray:
        g = np.zeros(self.dim, dtype=complex)
        g[0] = 1.0
        return g

    @cached_property
    def _q1_eig(self):
        return np.linalg.eigh(self.q_ops[0])

    @cached_property
    def _pn_eig(self):
        return np.linalg.eigh(self.p_ops[-1])


class DensityState:
    """A validated density matrix (Hermitian, unit trace, PSD to 1e-10)."""

    def __init__(self, rho, tol=1e-10):
        rho = np.asarray(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DomainError(f"density matrix must be square, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > tol:
            raise NumericalError("density matrix is not Hermitian")
        rho = 0.5 * (rho + rho.conj().T)
        tr = np.trace(rho).real
        if abs(tr - 1.0) > tol:
            raise NumericalError(f"density matrix trace {tr!r} != 1")
        lo = np.linalg.eigvalsh(rho).min()
        if lo < -tol:
            raise NumericalError(f"density matrix has negative eigenvalue {lo:.3e}")
        self.rho = rho

    @classmethod
    def from_vectors(cls, vectors, tol=1e-10):
        """Mixture ``sum_s |v_s><v_s|`` of unnormalised branch vectors."""
        rho = sum(np.outer(v, v.conj()) for v in vectors)
        return cls(rho, tol)

    def expect(self, op) -> float:
        return float(np.real(np.einsum("ij,ji->", self.rho, op)))

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.rho).min())


class OracleRun(NamedTuple):
    e_in_oracle: float
    e_f_oracle: float
    e_out_oracle: float
    rho_m: DensityState
    rho_f: DensityState
    theta: float


def _embed(op, k, n_modes, cutoff):
    left = np.eye(cutoff ** k)
    right = np.eye(cutoff ** (n_modes - k - 1))
    return np.kron(np.kron(left, op), right)


def build_workspace(spec: CrystalSpec, modes: ModeDecomposition,
                    basis: FockBasisSpec) -> FockWorkspace:
    """Assemble ladder, position and momentum matrices in the truncated basis.

    ``q_n = sum_k b_n^(k) i (a_k - a_k^dag) / sqrt(2 w_k)`` and
    ``p_n = sum_k b_n^(k) sqrt(w_k / 2) (a_k + a_k^dag)``, ``w_k = m nu sqrt(mu_k)``.
    """
    n = spec.n_ions
    if modes.n_ions != n or basis.n_ions != n:
        raise DomainError(f"dimension mismatch: spec {n}, modes {modes.n_ions}, "
                          f"basis {basis.n_ions}")
    m, nu, c = spec.mass, spec.trap_frequency, basis.cutoff
    root_mu = np.sqrt(modes.eigenvalues)
    w = m * nu * root_mu
    a1 = np.diag(np.sqrt(np.arange(1, c)), k=1).astype(complex)
    ann = [_embed(a1, k, n, c) for k in range(n)]
    b = modes.eigenvectors
    q_ops, p_ops = [], []
    for site in range(n):
        q = np.zeros((basis.dim, basis.dim), dtype=complex)
        p = np.zeros_like(q)
        for k, a in enumerate(ann):
            ad = a.conj().T
            q += b[site, k] * 1j * (a - ad) / np.sqrt(2 * w[k])
            p += b[site, k] * np.sqrt(w[k] / 2) * (a + ad)
        q_ops.append(q)
        p_ops.append(p)
    occ = np.array(np.unravel_index(np.arange(basis.dim), (c,) * n)).T
    energies = occ @ (nu * root_mu)
    return FockWorkspace(spec=spec, basis=basis, annihilators=ann, q_ops=q_ops,
                         p_ops=p_ops, energies=energies, occupations=occ)


def hermitian_function(h, f) -> np.ndarray:
    """``f(h)`` for Hermitian ``h`` via eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return (v * f(w)) @ v.conj().T


def _q1_function(ws, f):
    w, v = ws._q1_eig
    return (v * f(w)) @ v.conj().T


def kraus_pair(ws: FockWorkspace, params: MeasurementParams):
    """Measurement operators ``(cos G_1, sin G_1)`` with ``G_1 = phi + lam q_1``."""
    lam = params.coupling(ws.spec)
    g = lambda w: params.phi + lam * w  # noqa: E731
    m_plus = _q1_function(ws, lambda w: np.cos(g(w)))
    m_minus = _q1_function(ws, lambda w: np.sin(g(w)))
    return m_plus, m_minus


def cos_2g(ws: FockWorkspace, params: MeasurementParams) -> np.ndarray:
    lam = params.coupling(ws.spec)
    return _q1_function(ws, lambda w: np.cos(2 * (params.phi + lam * w)))


def feedback_unitary(ws: FockWorkspace, kick: float) -> np.ndarray:
    """``exp(i kick p_N)``; pass ``s * theta`` for the conditional kick."""
    w, v = ws._pn_eig
    return (v * np.exp(1j * kick * w)) @ v.conj().T


def gateway_coherent_state(ws: FockWorkspace, lam: float, sign: int = 1) -> np.ndarray:
    """``exp(+-2 i lam q_1)|g>`` for the physical coupling ``lam``."""
    return _q1_function(ws, lambda w: np.exp(2j * sign * lam * w)) @ ws.ground


def oracle_eta(ws: FockWorkspace, modes: ModeDecomposition,
               params: MeasurementParams) -> float:
    """``m nu^2 sum_n A_Nn <g|q_n cos(2 G_1)|g>`` by explicit matrix products."""
    m, nu = ws.spec.mass, ws.spec.trap_frequency
    vec = cos_2g(ws, params) @ ws.ground
    g = ws.ground
    vals = np.array([g.conj() @ (q @ vec) for q in ws.q_ops])
    return float(m * nu**2 * np.real(modes.coupling[-1] @ vals))


def _energy(ws, vec):
    return float(np.sum(ws.energies * np.abs(vec) ** 2))


def simulate_protocol(ws: FockWorkspace, modes: ModeDecomposition,
                      params: MeasurementParams, outcome_dependent: bool = True) -> OracleRun:
    """Run measurement and feedback on the vacuum and return the energies.

    With ``params.theta`` unset the kick is the oracle's own optimum
    ``eta / (2 xi)``, where ``eta`` comes from :func:`oracle_eta`. With
    ``outcome_dependent=False`` both branches get ``exp(i theta p_N)``, the
    no-information control.
    """
    spec = ws.spec
    m, nu = spec.mass, spec.trap_frequency
    if params.theta is None:
        xi = 0.5 * m * nu**2 * modes.coupling[-1, -1]
        theta = oracle_eta(ws, modes, params) / (2 * xi)
    else:
        theta = params.kick(spec)
    m_plus, m_minus = kraus_pair(ws, params)
    g = ws.ground
    branches = {1: m_plus @ g, -1: m_minus @ g}
    e_in = sum(_energy(ws, v) for v in branches.values())
    fed = {}
    for s, v in branches.items():
        kick = s * theta if outcome_dependent else theta
        fed[s] = feedback_unitary(ws, kick) @ v
    e_f = sum(_energy(ws, v) for v in fed.values())
    rho_m = DensityState.from_vectors(branches.values())
    rho_f = DensityState.from_vectors(fed.values())
    return OracleRun(e_in, e_f, e_in - e_f, rho_m, rho_f, theta)


def local_energy_operators(ws: FockWorkspace, modes: ModeDecomposition) -> list:
    """Per-ion energy operators with each pair coupling split evenly.

    ``h_n = p_n^2/2m + (m nu^2/2)[A_nn q_n^2 + sum_{n'!=n} A_nn' (q_n q_n' + q_n' q_n)/2]``
    minus its vacuum value, so the vacuum carries zero local energy.
    """
    m, nu = ws.spec.mass, ws.spec.trap_frequency
    a = modes.coupling
    q, p = ws.q_ops, ws.p_ops
    n = len(q)
    g = ws.ground
    ops = []
    for i in range(n):
        h = p[i] @ p[i] / (2 * m) + 0.5 * m * nu**2 * a[i, i] * (q[i] @ q[i])
        for j in range(n):
            if j != i:
                h = h + 0.25 * m * nu**2 * a[i, j] * (q[i] @ q[j] + q[j] @ q[i])
        h = h - np.real(g.conj() @ h @ g) * np.eye(ws.dim)
        ops.append(h)
    return ops


def local_energy_profile(ws: FockWorkspace, modes: ModeDecomposition, rho: DensityState,
                         t: float = 0.0, operators: Optional[list] = None) -> np.ndarray:
    """Per-ion energies of ``rho`` after free evolution for time ``t``."""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    ops = local_energy_operators(ws, modes) if operators is None else operators
    e = ws.energies
    rho_t = rho.rho * np.exp(-1j * t * (e[:, None] - e[None, :]))
    return np.array([np.real(np.einsum("ij,ji->", rho_t, h)) for h in ops])


def low_occupation_mask(ws: FockWorkspace, max_total: Optional[int] = None) -> np.ndarray:
    """Boolean mask of basis states with total phonon number <= ``max_total``.

    Defaults to ``cutoff // 2``.
    """
    if max_total is None:
        max_total = ws.basis.cutoff // 2
    return ws.occupations.sum(axis=1) <= max_total
