import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dbar_poincare import verify as V
from dbar_poincare.errors import ConfigurationError, DomainMembershipError
from dbar_poincare.fields import (constant, gaussian_bump, make_weight, mixed_poly, monomial,
                                  quadratic_weight, vanishing_on_boundary, zero_weight)
from dbar_poincare.geometry import make_domain


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_max_modulus_monomials(disc, k):
    rec = V.verify_inequality(V.MAX_MODULUS, disc, monomial([k], [0]), (2, 2))
    assert rec.lhs == pytest.approx(math.pi / (k + 1), rel=1e-12)
    assert rec.rhs == pytest.approx(2 * math.pi, rel=1e-12)
    assert rec.verdict == V.PASS
    assert rec.constant_value <= 2 * (k + 1)


def test_lp_poincare_zbar(disc):
    rec = V.verify_inequality(V.LP_POINCARE, disc, monomial([0], [1]), (2,))
    assert rec.lhs == pytest.approx(math.pi / 2, rel=1e-12)
    assert rec.rhs == pytest.approx(3 * math.pi, rel=1e-12)
    assert rec.verdict == V.PASS


def test_zero_field_passes_with_zero_margin(disc):
    rec = V.verify_inequality(V.LP_POINCARE, disc, constant(0.0), (2,))
    assert rec.lhs == 0 and rec.rhs == 0 and rec.margin == 0 and rec.verdict == V.PASS


def test_weighted_example(disc):
    rec = V.verify_inequality(V.WEIGHTED, disc, monomial([0], [1]), (2, 4),
                              make_weight(quadratic_weight(1.0)))
    assert rec.verdict == V.PASS
    # int |zbar|^2 e^{-|z|^2} = pi (1 - 2/e)
    assert rec.lhs == pytest.approx(math.pi * (1 - 2 / math.e), rel=1e-10)


def test_verdict_rule():
    assert V.verdict_for(0.0, 0.0) == V.PASS
    assert V.verdict_for(-1e-3, 1e-3) == V.INCONCLUSIVE
    assert V.verdict_for(-1.0, 1e-3) == V.FAIL


def test_max_modulus_rejects_non_holomorphic(disc):
    with pytest.raises(ConfigurationError):
        V.verify_inequality(V.MAX_MODULUS, disc, monomial([0], [1]), (2, 2))
    with pytest.raises(ConfigurationError):
        V.verify_inequality("NOPE", disc, constant(1.0), (2,))


def test_kernel_bounds(disc):
    recs = V.verify_kernel_bounds(disc, 1.0, [[0.0, 0.0], [0.9, 0.0]])
    centre = recs[0]
    assert abs(centre.lhs - centre.rhs) < 1e-6
    assert recs[1].lhs < 2 * math.pi
    assert all(r.verdict == V.PASS for r in recs)


def test_trace_examples(disc, ellipse):
    rec = V.verify_trace(disc, constant(1.0))
    assert rec.lhs == pytest.approx(2 * math.pi)
    assert rec.rhs == pytest.approx(math.pi)
    assert rec.constant_value == pytest.approx(1 / 3)
    assert rec.verdict == V.PASS
    for f in V.trace_battery_fields():
        for dom in (disc, ellipse):
            assert V.verify_trace(dom, f).verdict == V.PASS


def test_kmh_examples(disc):
    one = vanishing_on_boundary(disc, constant(1.0))
    rec = V.verify_kmh_identity(disc, one, zero_weight())
    assert rec.lhs == pytest.approx(math.pi / 2, rel=1e-12)
    assert abs(rec.lhs - rec.rhs) < 1e-6
    rec = V.verify_kmh_identity(disc, constant(0.0), zero_weight())
    assert rec.lhs == 0 and rec.rhs == 0
    a = vanishing_on_boundary(disc, monomial([0], [1]))
    rec = V.verify_kmh_identity(disc, a, quadratic_weight(1.0))
    assert rec.details["relative_residual"] < 1e-4
    with pytest.raises(DomainMembershipError):
        V.verify_kmh_identity(disc, constant(1.0), zero_weight())


def test_kmh_residual_shrinks(disc):
    for alpha, phi in V.kmh_instances(disc):
        res = [abs(r.lhs - r.rhs) for r in
               (V.verify_kmh_identity(disc, alpha, phi, resolution=m) for m in (8, 16, 32, 64))]
        floor = 1e-13 * max(1.0, abs(V.verify_kmh_identity(disc, alpha, phi).lhs))
        assert all(b <= a or b <= floor for a, b in zip(res, res[1:]))


def test_battery_size_and_windows():
    inst = V.default_battery()
    assert len(inst) >= 200
    kinds = {i.domain.kind.value for i in inst}
    assert kinds == {"UnitDisc", "Ellipse", "UnitBall"}
    assert {i.case for i in inst} == set(V.CASES)


def test_battery_sample_passes():
    inst = V.default_battery()[::15]
    recs = V.run_battery(inst, resolution=32)
    assert all(r.verdict != V.FAIL for r in recs)


def test_random_targets_interior(ellipse):
    t = V.random_targets(ellipse, 50, seed=2)
    assert len(t) == 50 and np.all(ellipse.rho(t) <= -1e-3)


@settings(max_examples=20, deadline=None)
@given(c=st.sampled_from([2.0, 10.0]), p=st.sampled_from([1.0, 1.5, 2.0, 3.0]),
       which=st.integers(0, 2))
def test_homogeneous_ratio_invariant_under_scaling(c, p, which):
    disc = make_domain("UnitDisc")
    f = [monomial([1], [1]), monomial([0], [1]),
         mixed_poly([((0,), (0,), 1.0), ((1,), (0,), 0.5j)], 1)][which]
    r1 = V.verify_inequality(V.LP_POINCARE, disc, f, (p,), resolution=32)
    r2 = V.verify_inequality(V.LP_POINCARE, disc, c * f, (p,), resolution=32)
    assert r2.rhs / r2.lhs == pytest.approx(r1.rhs / r1.lhs, rel=1e-10)
    assert r2.verdict == r1.verdict == V.PASS


@settings(max_examples=25, deadline=None)
@given(a=st.complex_numbers(max_magnitude=3), b=st.complex_numbers(max_magnitude=3),
       p=st.floats(1.0, 3.0), case=st.sampled_from([V.LP_POINCARE, V.SOBOLEV_DBAR, V.REAL_SOBOLEV]))
def test_random_polynomials_never_fail(a, b, p, case):
    disc = make_domain("UnitDisc")
    f = mixed_poly([((1,), (0,), a), ((0,), (1,), b), ((0,), (0,), 1.0)], 1)
    exps = (p,) if case == V.LP_POINCARE else (p, p, p)
    assert V.verify_inequality(case, disc, f, exps, resolution=32).verdict != V.FAIL
