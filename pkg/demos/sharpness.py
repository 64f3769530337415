"""Compare the explicit constants with empirical infima of the inequality quotients."""

from dbar_poincare import estimate_sharp_constant, make_domain, make_weight, quadratic_weight
from dbar_poincare import verify as V
from dbar_poincare.fields import constant, monomial

disc = make_domain("UnitDisc")
mixed = [constant(1.0), monomial([1], [0]), monomial([0], [1]), monomial([1], [1])]
holo = [monomial([k], [0]) for k in range(5)]
cases = [
    (V.LP_POINCARE, (2.0,), None, mixed),
    (V.SOBOLEV_DBAR, (2.0, 3.0, 2.0), None, mixed),
    (V.REAL_SOBOLEV, (2.0, 2.0, 2.0), None, mixed),
    (V.WEIGHTED, (2.0, 4.0), make_weight(quadratic_weight(1.0)), mixed),
    (V.MAX_MODULUS, (2.0, 2.0), None, holo),
]
for case, exps, w, fam in cases:
    res = estimate_sharp_constant(case, disc, fam, exps, w, budget=5000, restarts=8)
    print(f"{case:13s} empirical inf {res.empirical_inf:9.5g}  explicit delta "
          f"{res.analytic_delta:9.3g}  ratio {res.empirical_inf / res.analytic_delta:9.3g}")
