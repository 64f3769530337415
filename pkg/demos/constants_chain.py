"""Print explicit constants together with the factors they are assembled from."""

import math

from dbar_poincare import (fixed_psi_constants, hormander_constants, make_domain, make_weight,
                           max_modulus_delta, poincare_delta, quadratic_weight)
from dbar_poincare.constants import WEIGHTED
from dbar_poincare.fields import zero_weight


def show(rep, indent=""):
    print(f"{indent}{rep.name} = {rep.value:.6g}   (chain re-multiplies: {rep.check_chain()})")
    for e in rep.chain:
        print(f"{indent}    {e.tag:45s} {e.value:12.6g} ^ {e.power:g}")


disc = make_domain("UnitDisc")
print(f"unit disc: K = {disc.K:g}, c0 = {disc.c0:g}\n")
show(poincare_delta(disc, 2, 2, 2))
show(poincare_delta(disc, 2, 6, 4))
show(max_modulus_delta(disc, 2, 2))
show(poincare_delta(disc, 2, mode=WEIGHTED, weight=make_weight(quadratic_weight(1.0)), q_weight=4.0))

h = hormander_constants(disc, zero_weight(), quadratic_weight(1.0), math.inf)
print("\nimproved L^2 estimate, phi = 0, psi = |z|^2:")
for k in ("m1", "m2", "delta0", "delta"):
    print(f"    {k:7s} {getattr(h, k).value:.6g}")
c, psi = fixed_psi_constants(disc, zero_weight())
print(f"fixed psi = |z|^2/R^2: delta0 = {c.delta0.value:g}, delta = {c.delta.value:.6g}")
