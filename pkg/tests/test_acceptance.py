"""Exit criteria for the library, one test per criterion.

Each test records a PASS/FAIL line that the terminal summary prints after the
run (see ``conftest.py``).
"""

import math
import time

import numpy as np
import pytest

from qet_ion.cli import main as cli_main
from qet_ion.cli import sweep_gamma_zeta
from qet_ion.coherent_states import q_cos2g_expectation
from qet_ion.crystal_modes import (
    CrystalSpec,
    ModeDecomposition,
    build_mode_decomposition,
    solve_equilibrium,
    w_matrices,
)
from qet_ion.fock_oracle import (
    FockBasisSpec,
    build_workspace,
    cos_2g,
    kraus_pair,
    local_energy_profile,
    oracle_eta,
    simulate_protocol,
)
from qet_ion.qet_protocol import MeasurementParams, final_energy, protocol_energies

R3 = math.sqrt(3)
QUARTER = math.pi / 4

ACCEPTANCE_LOG = []


def record(criterion, ok, detail, elapsed=None):
    timing = "" if elapsed is None else f" [{elapsed:.2f}s]"
    ACCEPTANCE_LOG.append(f"{'PASS' if ok else 'FAIL'} {criterion}: {detail}{timing}")
    assert ok, f"{criterion}: {detail}"


def _modes(n):
    spec = CrystalSpec(n)
    return spec, build_mode_decomposition(solve_equilibrium(spec))


def test_c01_equilibrium_anchors():
    t0 = time.perf_counter()
    u2 = solve_equilibrium(CrystalSpec(2)).u
    u3 = solve_equilibrium(CrystalSpec(3)).u
    err2 = np.max(np.abs(u2 - np.array([-1, 1]) * 0.5 ** (2 / 3)))
    err3 = np.max(np.abs(u3 - np.array([-1, 0, 1]) * 1.25 ** (1 / 3)))
    dt = time.perf_counter() - t0
    ok = err2 <= 1e-10 and err3 <= 1e-10 and dt < 1.0
    record("C1 equilibrium anchors", ok, f"N=2 err {err2:.1e}, N=3 err {err3:.1e} (tol 1e-10)", dt)


def test_c02_spectrum_anchors():
    t0 = time.perf_counter()
    worst_mu = worst_b = 0.0
    for n in range(2, 13):
        _, modes = _modes(n)
        mu, b = modes.eigenvalues, modes.eigenvectors
        worst_mu = max(worst_mu, abs(mu[0] - 1), abs(mu[1] - 3))
        u_hat = modes.u / np.linalg.norm(modes.u)
        err_b1 = np.max(np.abs(b[:, 0] - 1 / math.sqrt(n)))
        err_b2 = min(np.max(np.abs(b[:, 1] - u_hat)), np.max(np.abs(b[:, 1] + u_hat)))
        worst_b = max(worst_b, err_b1, err_b2)
    dt = time.perf_counter() - t0
    ok = worst_mu <= 1e-10 and worst_b <= 1e-8 and dt < 5.0
    record("C2 spectrum anchors N=2..12", ok,
           f"max |mu-anchor| {worst_mu:.1e} (tol 1e-10), max b err {worst_b:.1e} (tol 1e-8)", dt)


def test_c03_two_ion_closed_form():
    t0 = time.perf_counter()
    spec, modes = _modes(2)
    worst = 0.0
    for lam in np.linspace(0, 2, 20):
        for phi in np.linspace(0, math.pi, 20):
            got = protocol_energies(spec, modes, MeasurementParams(phi, lam)).e_out
            ref = ((2 - R3) / 4 * lam**2 / 2 * math.sin(2 * phi) ** 2
                   * math.exp(-(1 + 1 / R3) * lam**2))
            if ref != 0:
                worst = max(worst, abs(got - ref) / abs(ref))
            else:
                worst = max(worst, abs(got))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 1.0
    record("C3 N=2 closed form on 20x20 grid", ok, f"max rel err {worst:.1e} (tol 1e-12)", dt)


def test_c04_gamma_zeta_sweep():
    t0 = time.perf_counter()
    res = sweep_gamma_zeta(2, 10)
    zetas = [r["zeta"] for r in res.rows]
    ratio = max(zetas) / min(zetas)
    zeta2_err = abs(res.rows[0]["zeta"] - (2 + 2 / R3))
    dt = time.perf_counter() - t0
    slope_ok = -1.25 <= res.fit_slope <= -0.95
    ok = slope_ok and ratio < 2 and zeta2_err <= 1e-10 and dt < 10.0
    record("C4 ln gamma_N slope and zeta_N spread, N=2..10", ok,
           f"slope {res.fit_slope:.4f} (need [-1.25, -0.95]), "
           f"zeta max/min {ratio:.4f} (need < 2), zeta_2 err {zeta2_err:.1e} (tol 1e-10)", dt)


@pytest.fixture(scope="module")
def oracle2():
    spec, modes = _modes(2)
    return spec, modes, build_workspace(spec, modes, FockBasisSpec(2, 16))


def test_c05_oracle_equivalence(oracle2):
    t0 = time.perf_counter()
    spec, modes, ws = oracle2
    worst_in = worst_f = 0.0
    out_le_in = True
    for lam in np.linspace(0.1, 0.5, 5):
        for phi in np.linspace(0, math.pi / 2, 7)[1:-1]:
            closed = protocol_energies(spec, modes, MeasurementParams(phi, lam))
            for scale in (1.0, 0.5, 1.5):
                theta = scale * closed.theta_star
                run = simulate_protocol(ws, modes, MeasurementParams(phi, lam, theta))
                worst_in = max(worst_in, abs(run.e_in_oracle - lam**2 / 2))
                expected = final_energy(closed.e_in, closed.eta, closed.xi, theta)
                worst_f = max(worst_f, abs(run.e_f_oracle - expected))
                out_le_in &= run.e_out_oracle <= run.e_in_oracle
    dt = time.perf_counter() - t0
    ok = worst_in <= 1e-4 and worst_f <= 1e-4 and out_le_in and dt < 300
    record("C5 oracle equivalence, 25 points x 3 theta", ok,
           f"max e_in err {worst_in:.1e}, max e_f err {worst_f:.1e} (tol 1e-4), "
           f"e_out<=e_in {out_le_in}", dt)


def test_c06_kraus_identities(oracle2):
    _, _, ws = oracle2
    worst_c = worst_22 = 0.0
    for lam, phi in [(0.3, QUARTER), (0.5, 0.2), (1.0, 1.3)]:
        params = MeasurementParams(phi, lam)
        mp, mm = kraus_pair(ws, params)
        mpp, mmm = mp.conj().T @ mp, mm.conj().T @ mm
        worst_c = max(worst_c, np.max(np.abs(mpp + mmm - np.eye(ws.dim))))
        worst_22 = max(worst_22, np.max(np.abs(mpp - mmm - cos_2g(ws, params))))
    ok = worst_c <= 1e-10 and worst_22 <= 1e-10
    record("C6 Kraus completeness and signed sum", ok,
           f"completeness {worst_c:.1e}, sum s M^dag M - cos 2G {worst_22:.1e} (tol 1e-10)")


def test_c07_locality():
    spec, modes = _modes(3)
    ws = build_workspace(spec, modes, FockBasisSpec(3, 8))
    run = simulate_protocol(ws, modes, MeasurementParams(QUARTER, 0.3))
    local = local_energy_profile(ws, modes, run.rho_m, 0.0)
    err1 = abs(local[0] - 0.3**2 / 2)
    rest = float(np.max(np.abs(local[1:])))
    ok = err1 <= 1e-4 and rest <= 1e-4
    record("C7 locality after measurement, N=3", ok,
           f"|E1 - lam^2/2m| {err1:.1e}, max |E2|,|E3| {rest:.1e} (tol 1e-4)")


def test_c08_passivity(oracle2):
    spec, modes, ws = oracle2
    closed = protocol_energies(spec, modes, MeasurementParams(QUARTER, 0.3))
    worst = 0.0
    never_gains = True
    for theta in np.linspace(-2, 2, 11) * closed.theta_star:
        run = simulate_protocol(ws, modes, MeasurementParams(QUARTER, 0.3, theta),
                                outcome_dependent=False)
        worst = max(worst, abs(run.e_f_oracle - (run.e_in_oracle + theta**2 * closed.xi)))
        never_gains &= run.e_f_oracle >= run.e_in_oracle - 1e-4
    ok = worst <= 1e-4 and never_gains
    record("C8 outcome-independent feedback is passive", ok,
           f"max |e_f - (e_in + theta^2 xi)| {worst:.1e} (tol 1e-4), e_f >= e_in {never_gains}")


def test_c09_eta_triple_agreement(oracle2):
    spec, modes, ws = oracle2
    worst_cs = worst_or = 0.0
    for lam, phi in [(0.3, QUARTER), (0.1, 0.4), (0.5, 1.1), (0.25, -0.6)]:
        params = MeasurementParams(phi, lam)
        closed = protocol_energies(spec, modes, params).eta
        coherent = float(modes.coupling[-1] @ q_cos2g_expectation(lam, phi, modes))
        oracle = oracle_eta(ws, modes, params)
        worst_cs = max(worst_cs, abs(closed - coherent))
        worst_or = max(worst_or, abs(closed - oracle))
    ok = worst_cs <= 1e-12 and worst_or <= 1e-4
    record("C9 eta: closed form / coherent states / oracle", ok,
           f"closed-coherent {worst_cs:.1e} (tol 1e-12), closed-oracle {worst_or:.1e} (tol 1e-4)")


def test_c10_invariant_suites(tmp_path, oracle2):
    # symplectic identity
    symp = 0.0
    for n in (2, 5, 9):
        _, modes = _modes(n)
        for t in np.linspace(0, 20, 100):
            w1, w2, w3 = w_matrices(modes, 1.0, t)
            symp = max(symp, np.max(np.abs(w1 @ w1 + w2 @ w3 - np.eye(n))))
    # sign-flip invariance
    spec, modes = _modes(5)
    params = MeasurementParams(0.4, 0.9)
    ref = protocol_energies(spec, modes, params).as_dict()
    flip = 0.0
    for k in range(5):
        b = modes.eigenvectors.copy()
        b[:, k] *= -1
        delta = (b / np.sqrt(modes.eigenvalues)) @ b.T
        flipped = ModeDecomposition(modes.u, modes.coupling, modes.eigenvalues, b, delta)
        got = protocol_energies(spec, flipped, params).as_dict()
        flip = max(flip, np.max(np.abs(delta - modes.delta)),
                   max(abs(got[key] - ref[key]) for key in ref))
    # CPTP
    spec2, modes2, ws = oracle2
    run = simulate_protocol(ws, modes2, MeasurementParams(0.7, 0.45))
    cptp = max(abs(run.rho_m.trace - 1), abs(run.rho_f.trace - 1),
               -run.rho_m.min_eigenvalue, -run.rho_f.min_eigenvalue)
    # CLI determinism
    det = True
    for argv in (["sweep", "--n-min", "2", "--n-max", "10"],
                 ["sweep", "--n-min", "2", "--n-max", "10", "--format", "json"],
                 ["protocol", "--n", "3", "--lambda", "0.3", "--phi", "0.5", "--format", "json"]):
        blobs = []
        for i in range(2):
            path = tmp_path / f"o{i}"
            cli_main(argv + ["--out", str(path)])
            blobs.append(path.read_bytes())
        det &= blobs[0] == blobs[1]
    ok = symp <= 1e-10 and flip <= 1e-12 and cptp <= 1e-10 and det
    record("C10 invariant suites", ok,
           f"symplectic {symp:.1e} (tol 1e-10), sign flip {flip:.1e} (tol 1e-12), "
           f"CPTP {cptp:.1e} (tol 1e-10), CLI deterministic {det}")
