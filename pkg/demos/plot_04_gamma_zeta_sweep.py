"""
Chain-length dependence of gamma_N and zeta_N
==============================================

``gamma_N`` falls off quickly with N while ``zeta_N`` changes little. The
sweep also reports an ordinary least-squares fit of ``ln gamma_N`` against N.
The same table is available from the command line with
``qet-ion sweep --n-min 2 --n-max 10``.
"""

from qet_ion.cli import sweep_gamma_zeta

res = sweep_gamma_zeta(2, 12)
print(" N      gamma_N     ln gamma_N    zeta_N")
for r in res.rows:
    print(f"{r['n']:2d}  {r['gamma']:.6e}  {r['ln_gamma']:10.5f}  {r['zeta']:8.5f}")

fit = sweep_gamma_zeta(2, 10)
print(f"OLS over N=2..10: slope {fit.fit_slope:.4f}, intercept {fit.fit_intercept:.4f}, "
      f"R^2 {fit.fit_r_squared:.4f}")
zetas = [r["zeta"] for r in fit.rows]
print(f"zeta_N max/min over N=2..10: {max(zetas) / min(zetas):.4f}")
