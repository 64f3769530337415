import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dbar_poincare import verify as V
from dbar_poincare.errors import ConfigurationError, DegenerateFamilyError
from dbar_poincare.fields import constant, make_weight, monomial, quadratic_weight
from dbar_poincare.quadrature import rules_for
from dbar_poincare.sharpness import _Quotient, estimate_sharp_constant


def holo_family(k):
    return [monomial([j], [0]) for j in range(k + 1)]


def test_max_modulus_finds_witness(disc):
    res = estimate_sharp_constant(V.MAX_MODULUS, disc, holo_family(4), (2, 2), budget=2000,
                                  restarts=2)
    assert res.empirical_inf <= 2.0 + 1e-9
    assert res.dominates


def test_lp_zbar_quotient_is_six(disc):
    res = estimate_sharp_constant(V.LP_POINCARE, disc, [monomial([0], [1])], (2,), budget=400,
                                  restarts=2)
    assert res.empirical_inf == pytest.approx(6.0, rel=1e-12)
    assert res.scale == 0.0


@pytest.mark.parametrize("case,exps,weight", [
    (V.SOBOLEV_DBAR, (2, 3, 2), None),
    (V.REAL_SOBOLEV, (2, 2, 2), None),
    (V.WEIGHTED, (2, 4), quadratic_weight(1.0)),
])
def test_domination_small(disc, case, exps, weight):
    fam = [constant(1.0), monomial([0], [1]), monomial([1], [1])]
    w = make_weight(weight) if weight is not None else None
    res = estimate_sharp_constant(case, disc, fam, exps, w, budget=1400, restarts=2, resolution=32)
    assert res.dominates
    assert res.empirical_inf > res.analytic_delta


def test_trace_is_monotone(disc):
    res = estimate_sharp_constant(V.LP_POINCARE, disc, holo_family(2), (2,), budget=1200, restarts=3)
    tr = np.array(res.trace)
    assert np.all(np.diff(tr) <= 0)
    assert res.evaluations == len(tr)


def test_errors(disc):
    with pytest.raises(DegenerateFamilyError):
        estimate_sharp_constant(V.LP_POINCARE, disc, [constant(1.0)], (2,), budget=0)
    with pytest.raises(DegenerateFamilyError):
        estimate_sharp_constant(V.LP_POINCARE, disc, [], (2,))
    with pytest.raises(ConfigurationError):
        estimate_sharp_constant(V.MAX_MODULUS, disc, [monomial([0], [1])], (2, 2), budget=400)
    with pytest.raises(DegenerateFamilyError):
        # only the zero function: every candidate is below the LHS floor
        estimate_sharp_constant(V.LP_POINCARE, disc, [constant(0.0)], (2,), budget=400, restarts=1)


def test_forced_integral_form_frees_scale(disc):
    res = estimate_sharp_constant(V.SOBOLEV_DBAR, disc, [constant(1.0)], (2, 3, 2), budget=600,
                                  restarts=1, form="integral")
    assert res.form == "integral"
    assert res.scale != 0.0


@settings(max_examples=25, deadline=None)
@given(s=st.floats(-5, 5), re=st.floats(-2, 2), im=st.floats(-2, 2), p=st.sampled_from([1.5, 2.0, 3.0]))
def test_quotient_scale_invariant_for_equal_exponents(s, re, im, p):
    from dbar_poincare.geometry import make_domain
    disc = make_domain("UnitDisc")
    fam = [constant(1.0), monomial([0], [1])]
    c = np.array([1.0, complex(re, im)])
    q = _Quotient(V.LP_POINCARE, disc, fam, p, p, p, None, rules_for(disc, 32), "integral")
    assert q(c * math.exp(s)) == pytest.approx(q(c), rel=1e-10)
