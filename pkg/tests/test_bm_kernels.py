import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dbar_poincare.bm_kernels import (CAUCHY, FIRST_COORDINATE, FULL_BM, apply_boundary_bm,
                                      apply_interior_bm, bm_prefactor, reconstruct_bm,
                                      reproduction_fields)
from dbar_poincare.errors import ConfigurationError, OutOfDomainError
from dbar_poincare.fields import constant, eval_field, gaussian_bump, monomial, mixed_poly
from dbar_poincare.geometry import make_domain
from dbar_poincare.quadrature import boundary_rule, interior_rule, rules_for
from dbar_poincare.verify import random_targets


@pytest.fixture(scope="module")
def disc_rules(disc):
    return interior_rule(disc, 64), boundary_rule(disc, 256)


def test_prefactor():
    assert bm_prefactor(1) == pytest.approx(1 / math.pi)
    assert bm_prefactor(2) == pytest.approx(1 / math.pi**2)


def test_interior_cauchy_of_one(disc, disc_rules):
    r = apply_interior_bm(disc, disc_rules[0], constant(1.0), CAUCHY, [[0.3, 0.0]])
    assert abs(r.values[0] + math.pi * 0.3) < 1e-4


def test_zero_field(disc, disc_rules):
    for v in (CAUCHY, FIRST_COORDINATE, FULL_BM):
        r = apply_interior_bm(disc, disc_rules[0], constant(0.0), v, [[0.1, 0.2]])
        assert r.values[0] == 0
        b = apply_boundary_bm(disc, disc_rules[1], constant(0.0), v, [[0.1, 0.2]])
        assert b.values[0] == 0


def test_ball_first_coordinate_vanishes_at_center(ball):
    ir, _ = rules_for(ball, 32)
    r = apply_interior_bm(ball, ir, constant(1.0, 2), FIRST_COORDINATE, [[0, 0, 0, 0]])
    assert abs(r.values[0]) <= 3 * r.errors[0] + 1e-12


def test_boundary_cauchy_examples(disc, disc_rules):
    b = apply_boundary_bm(disc, disc_rules[1], constant(1.0), CAUCHY, [[0.0, 0.0]])
    assert abs(b.values[0]) < 1e-12
    b = apply_boundary_bm(disc, disc_rules[1], monomial([1], [0]), CAUCHY, [[0.0, 0.0]])
    assert b.values[0] == pytest.approx(2 * math.pi, abs=1e-12)


def test_reconstruction_examples(disc, disc_rules):
    rec = reconstruct_bm(disc, disc_rules, monomial([2], [0]), [[0.0, 0.4]])
    assert abs(rec.values[0] - (-0.16)) < 1e-6
    assert np.all(rec.interior_term == 0)
    rec = reconstruct_bm(disc, disc_rules, monomial([0], [1]), [[0.25, 0.0]])
    assert abs(rec.values[0] - 0.25) < 1e-4


def test_ball_reconstruction(ball):
    rules = (interior_rule(ball, 32, samples=100000), boundary_rule(ball, 32))
    rec = reconstruct_bm(ball, rules, monomial([1, 0], [0, 1]), [[0.2, 0.0, 0.1, 0.0]])
    assert abs(rec.values[0] - rec.exact[0]) <= 3 * rec.errors[0]


def test_cauchy_and_first_coordinate_identical(disc, disc_rules):
    f = gaussian_bump([0.1j], 0.7)
    t = random_targets(disc, 5, seed=3)
    for rule, op in ((disc_rules[0], apply_interior_bm), (disc_rules[1], apply_boundary_bm)):
        a = op(disc, rule, f, CAUCHY, t).values
        b = op(disc, rule, f, FIRST_COORDINATE, t).values
        np.testing.assert_array_equal(a, b)


def test_linearity(disc, disc_rules):
    f, g = monomial([1], [1]), gaussian_bump([0.3], 0.5)
    t = random_targets(disc, 4, seed=5)
    h = lambda x: eval_field(f, x).value + eval_field(g, x).value
    for rule, op in ((disc_rules[0], apply_interior_bm), (disc_rules[1], apply_boundary_bm)):
        s = op(disc, rule, h, FIRST_COORDINATE, t).values
        sep = op(disc, rule, f, FIRST_COORDINATE, t).values + op(disc, rule, g, FIRST_COORDINATE, t).values
        np.testing.assert_allclose(s, sep, rtol=1e-12, atol=1e-12)


def test_reproduction_battery_within_error_estimates(disc):
    rules = rules_for(disc, 64)
    fields = reproduction_fields(1) + [gaussian_bump([0.2 - 0.1j], 0.5), constant(2.0),
                                       mixed_poly([((2,), (1,), 1.0j)], 1)]
    t = random_targets(disc, 20, seed=11)
    for f in fields:
        rec = reconstruct_bm(disc, rules, f, t)
        assert np.all(np.abs(rec.values - rec.exact) <= 5 * rec.errors + 1e-12)


def test_errors(disc, ball, disc_rules):
    with pytest.raises(ConfigurationError):
        apply_interior_bm(ball, rules_for(ball, 16)[0], constant(1.0, 2), CAUCHY, [[0, 0, 0, 0]])
    with pytest.raises(ConfigurationError):
        apply_interior_bm(disc, disc_rules[0], constant(1.0), "Szego", [[0, 0]])
    with pytest.raises(OutOfDomainError):
        apply_boundary_bm(disc, disc_rules[1], constant(1.0), CAUCHY, [[1.0, 0.0]])
    with pytest.raises(ConfigurationError):
        apply_interior_bm(disc, disc_rules[0], constant(1.0), CAUCHY, [[0, 0, 0]])


@settings(max_examples=25, deadline=None)
@given(r=st.floats(0.0, 0.97), t=st.floats(0, 2 * math.pi),
       a=st.complex_numbers(max_magnitude=2), b=st.complex_numbers(max_magnitude=2))
def test_reproduction_of_random_polynomials(r, t, a, b):
    disc = make_domain("UnitDisc")
    f = mixed_poly([((1,), (0,), a), ((0,), (2,), b), ((1,), (1,), 1.0)], 1)
    z = [[r * math.cos(t), r * math.sin(t)]]
    rec = reconstruct_bm(disc, rules_for(disc, 64), f, z)
    assert rec.max_abs_error < 1e-8 * (1 + abs(a) + abs(b))
