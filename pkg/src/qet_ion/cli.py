"""Command-line front end: ``qet-ion modes|protocol|sweep|oracle``.

Every subcommand writes either CSV (header row, 15 significant digits) or a
JSON object ``{"meta": ..., "rows": [...]}`` to ``--out`` or stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import stats

from . import __version__
from .crystal_modes import CrystalSpec, build_mode_decomposition, solve_equilibrium
from .errors import QETError, SolverError
from .fock_oracle import (
    FockBasisSpec,
    build_workspace,
    kraus_pair,
    local_energy_profile,
    simulate_protocol,
)
from .qet_protocol import MeasurementParams, gamma_zeta, protocol_energies

__all__ = ["SweepResult", "sweep_gamma_zeta", "compare_oracle", "main"]

SWEEP_COLUMNS = ["n", "gamma", "ln_gamma", "zeta"]


@dataclass
class SweepResult:
    rows: list
    fit_slope: float
    fit_intercept: float
    fit_r_squared: float

    def meta(self) -> dict:
        return {"fit_slope": self.fit_slope, "fit_intercept": self.fit_intercept,
                "fit_r_squared": self.fit_r_squared}


def sweep_gamma_zeta(n_min: int = 2, n_max: int = 10) -> SweepResult:
    """``gamma_N`` and ``zeta_N`` for each ``N`` in ``n_min..n_max`` plus an OLS
    fit of ``ln gamma_N`` against ``N``.

    The fit needs at least two points; for a single ``N`` the slope and
    intercept are NaN.
    """
    if not 2 <= n_min <= n_max <= 12:
        raise ValueError(f"need 2 <= n_min <= n_max <= 12, got {n_min}..{n_max}")
    rows = []
    for n in range(n_min, n_max + 1):
        try:
            modes = build_mode_decomposition(solve_equilibrium(CrystalSpec(n)))
        except SolverError as exc:
            raise SolverError(f"sweep failed at N={n}: {exc}", exc.residual, n) from exc
        gamma, zeta = gamma_zeta(modes)
        rows.append({"n": n, "gamma": float(gamma), "ln_gamma": math.log(gamma),
                     "zeta": float(zeta)})
    if len(rows) >= 2:
        fit = stats.linregress([r["n"] for r in rows], [r["ln_gamma"] for r in rows])
        slope, intercept, r2 = float(fit.slope), float(fit.intercept), float(fit.rvalue**2)
    else:
        slope = intercept = r2 = math.nan
    return SweepResult(rows, slope, intercept, r2)


@dataclass
class OracleReport:
    meta: dict
    rows: list
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _residual_row(name, analytic, oracle, tol):
    abs_res = abs(analytic - oracle)
    rel_res = abs_res / abs(analytic) if analytic != 0 else (0.0 if abs_res == 0 else math.inf)
    return {"quantity": name, "analytic": analytic, "oracle": oracle,
            "abs_residual": abs_res, "rel_residual": rel_res, "tol": tol,
            "pass": bool(abs_res <= tol)}


def compare_oracle(n: int, cutoff: int, lam: float, phi: float,
                   theta: Optional[float] = None, tol: float = 1e-4) -> OracleReport:
    """Run the closed forms and the Fock oracle side by side.

    Checked: ``e_in``, ``e_f``, ``e_out`` within ``tol``; Kraus completeness
    within 1e-10; local energies of the post-measurement state at t = 0 equal
    ``(e_in, 0, ..., 0)`` within ``tol``.
    """
    if n not in (2, 3, 4):
        raise ValueError(f"oracle runs support n in {{2, 3, 4}}, got {n}")
    spec = CrystalSpec(n)
    modes = build_mode_decomposition(solve_equilibrium(spec))
    basis = FockBasisSpec(n, cutoff)
    params = MeasurementParams(phi=phi, lam=lam, theta=theta)
    closed = protocol_energies(spec, modes, params)
    ws = build_workspace(spec, modes, basis)
    # both sides use the same kick so e_f is compared like for like
    run = simulate_protocol(ws, modes, MeasurementParams(phi, lam, closed.theta * math.sqrt(
        spec.mass * spec.trap_frequency)))
    rows = [
        _residual_row("e_in", closed.e_in, run.e_in_oracle, tol),
        _residual_row("e_f", closed.e_f, run.e_f_oracle, tol),
        _residual_row("e_out", closed.e_out, run.e_out_oracle, tol),
    ]
    m_plus, m_minus = kraus_pair(ws, params)
    completeness = float(np.max(np.abs(
        m_plus.conj().T @ m_plus + m_minus.conj().T @ m_minus - np.eye(ws.dim))))
    rows.append({"quantity": "completeness", "analytic": 0.0, "oracle": completeness,
                 "abs_residual": completeness, "rel_residual": math.inf if completeness else 0.0,
                 "tol": 1e-10, "pass": completeness <= 1e-10})
    local = local_energy_profile(ws, modes, run.rho_m, 0.0)
    expected_local = np.zeros(n)
    expected_local[0] = closed.e_in
    for i in range(n):
        rows.append(_residual_row(f"local_energy_{i + 1}", float(expected_local[i]),
                                  float(local[i]), tol))
    failures = [r["quantity"] for r in rows if not r["pass"]]
    meta = {"n": n, "cutoff": cutoff, "dim": basis.dim, "lambda": lam, "phi": phi,
            "theta": closed.theta, "tol": tol, "completeness_residual": completeness,
            "local_energies": [float(x) for x in local], "passed": not failures,
            "failures": failures}
    return OracleReport(meta=meta, rows=rows, failures=failures)


# output ------------------------------------------------------------------


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".15g")
    return str(x)


def _json_value(x):
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return None
        return float(format(x, ".15g"))
    return x


def render(meta: dict, rows: list, fmt: str, columns=None) -> str:
    """Serialise a table to CSV or JSON text deterministically."""
    if fmt == "json":
        return json.dumps({"meta": _json_value(meta), "rows": _json_value(rows)},
                          indent=2, sort_keys=True, allow_nan=False) + "\n"
    columns = columns or list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)


def _modes_table(n):
    spec = CrystalSpec(n)
    eq = solve_equilibrium(spec)
    modes = build_mode_decomposition(eq)
    rows = []
    for i in range(n):
        row = {"index": i + 1, "u": float(eq.u[i]), "mu": float(modes.eigenvalues[i])}
        for k in range(n):
            row[f"b{k + 1}"] = float(modes.eigenvectors[i, k])
        for j in range(n):
            row[f"delta{j + 1}"] = float(modes.delta[i, j])
        rows.append(row)
    meta = {"n": n, "mass": spec.mass, "trap_frequency": spec.trap_frequency,
            "residual": eq.residual,
            "columns": "b<k> is component of mode k at ion <index>; "
                       "mu is the eigenvalue of mode <index>"}
    return meta, rows


def _cmd_modes(args):
    meta, rows = _modes_table(args.n)
    _emit(render(meta, rows, args.format), args.out)
    return 0


def _cmd_protocol(args):
    spec = CrystalSpec(args.n)
    modes = build_mode_decomposition(solve_equilibrium(spec))
    res = protocol_energies(spec, modes, MeasurementParams(args.phi, args.lam, args.theta))
    row = {k: float(v) for k, v in res.as_dict().items()}
    meta = {"n": args.n, "lambda": args.lam, "phi": args.phi, "theta": args.theta}
    _emit(render(meta, [row], args.format), args.out)
    return 0


def _cmd_sweep(args):
    res = sweep_gamma_zeta(args.n_min, args.n_max)
    meta = {"n_min": args.n_min, "n_max": args.n_max, **res.meta()}
    _emit(render(meta, res.rows, args.format, SWEEP_COLUMNS), args.out)
    return 0


def _cmd_oracle(args):
    report = compare_oracle(args.n, args.cutoff, args.lam, args.phi, args.theta, args.tol)
    _emit(render(report.meta, report.rows, args.format), args.out)
    if not report.passed:
        sys.stderr.write(json.dumps({"failures": report.failures}) + "\n")
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qet-ion", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, default_format="csv"):
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("--out", default=None, help="output path (default stdout)")

    def measurement(p):
        p.add_argument("--lambda", dest="lam", type=float, required=True,
                       help="coupling in units of sqrt(m nu)")
        p.add_argument("--phi", type=float, required=True)
        p.add_argument("--theta", type=float, default=None,
                       help="feedback displacement in units of 1/sqrt(m nu); default optimal")

    p = sub.add_parser("modes", help="equilibrium positions, eigenmodes, Delta")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_modes)

    p = sub.add_parser("protocol", help="closed-form protocol energies")
    p.add_argument("--n", type=int, required=True)
    measurement(p)
    common(p)
    p.set_defaults(func=_cmd_protocol)

    p = sub.add_parser("sweep", help="gamma_N and zeta_N over a range of N")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=10)
    common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("oracle", help="compare closed forms with the Fock-space oracle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cutoff", type=int, default=12)
    measurement(p)
    p.add_argument("--tol", type=float, default=1e-4)
    common(p, default_format="json")
    p.set_defaults(func=_cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (QETError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
