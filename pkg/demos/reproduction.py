"""Rebuild fields from boundary values and dbar f with the reproduction formula.

The unit disc uses the deterministic polar rule; the unit ball in C^2 uses
scrambled Sobol points, so its error is compared with the reported standard
error rather than a fixed tolerance.
"""

import numpy as np

from dbar_poincare import make_domain, reconstruct_bm
from dbar_poincare.bm_kernels import reproduction_fields
from dbar_poincare.quadrature import boundary_rule, interior_rule
from dbar_poincare.verify import random_targets

disc = make_domain("UnitDisc")
rules = (interior_rule(disc, 128), boundary_rule(disc, 512))
targets = random_targets(disc, 20, seed=0)
for f in reproduction_fields(1):
    rec = reconstruct_bm(disc, rules, f, targets)
    print(f"disc  {f.to_dict()['terms']!s:70.70}  max |error| {rec.max_abs_error:.2e}")

ball = make_domain("UnitBall", n=2)
rules = (interior_rule(ball, 32, samples=200_000), boundary_rule(ball, 32))
targets = random_targets(ball, 5, seed=0, max_rho=-0.2)
rec = reconstruct_bm(ball, rules, reproduction_fields(2)[0], targets)
z = np.abs(rec.values - rec.exact) / rec.errors
print(f"ball  z1 * conj(z2)  max |error| / standard error {z.max():.2f}")
