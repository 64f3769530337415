"""Solve dbar u = g on the disc and test the improved L^2 estimate."""

import numpy as np

from dbar_poincare import constant, make_domain, minimal_solution, solve_cauchy
from dbar_poincare.dbar import hormander_instances, run_hormander
from dbar_poincare.fields import zero_weight
from dbar_poincare.geometry import to_complex

disc = make_domain("UnitDisc")
sol = solve_cauchy(disc, constant(1.0))
z = to_complex(sol.grid)[:, 0]
print(f"g = 1: max |u - conj(z)| = {np.max(np.abs(sol.u - np.conj(z))):.2e} on {len(z)} grid points, "
      f"dbar residual {sol.residual_sup:.1e}")
m = minimal_solution(sol, zero_weight())
print(f"projection onto holomorphic polynomials removes coefficients of size {np.max(np.abs(m.coeffs)):.1e}")

print("\nmode       domain    ||u||^2     improved    classical   1 - factor")
for it in hormander_instances():
    h = run_hormander(it)
    print(f"{h.mode:9s}  {it.domain.kind.value:8s}  {h.lhs:10.4g}  {h.improved_rhs:10.4g}  "
          f"{h.classical_rhs:10.4g}  {h.factor_gap:.3e}  {h.verdict}")
