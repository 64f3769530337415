import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dbar_poincare.errors import ConfigurationError, DegeneracyError
from dbar_poincare.fields import (check_psh, constant, defining_polynomial, eval_field,
                                  exp_weight_norms, field_from_dict, gaussian_bump, holo_poly,
                                  linear_real_weight, make_weight, mixed_poly, monomial,
                                  quadratic_weight, vanishing_on_boundary, weight_from_dict,
                                  weight_range, weight_sum, zero_weight)
from dbar_poincare.geometry import make_domain, to_real


def at(z):
    return to_real(np.atleast_1d(np.asarray(z, dtype=complex)))


def test_monomial_examples():
    v = eval_field(monomial([1], [0]), at(0.3 - 0.2j))
    assert v.dbar[0] == 0
    v = eval_field(monomial([0], [1]), at(1j))
    assert v.value == pytest.approx(-1j) and v.dbar[0] == pytest.approx(1.0)
    z = 1 + 1j
    v = eval_field(monomial([1], [2]), at(z))
    assert v.value == pytest.approx(z * np.conj(z) ** 2)
    assert v.dbar[0] == pytest.approx(4.0)


def test_weight_examples(disc):
    w = make_weight(quadratic_weight(1.0))
    np.testing.assert_allclose(w.hessian, [[1.0]])
    np.testing.assert_allclose(w.inverse_hessian(), [[1.0]])
    assert make_weight(quadratic_weight(1 / 4)).hessian[0, 0] == 0.25
    z = make_weight(zero_weight())
    assert z.hessian[0, 0] == 0
    with pytest.raises(DegeneracyError):
        z.inverse_hessian()
    assert check_psh(zero_weight(), disc).classification == "psh"
    rep = check_psh(quadratic_weight(1.0), disc)
    assert rep.classification == "strictly-psh" and rep.min_eigenvalue == 1.0
    assert check_psh(linear_real_weight(5.0), disc).classification == "psh"
    rep = check_psh(weight_sum([quadratic_weight(1.0), linear_real_weight(-3.0)]), disc)
    assert rep.classification == "strictly-psh" and rep.min_eigenvalue == 1.0
    assert check_psh(quadratic_weight(-1.0), disc).classification == "not-psh"
    with pytest.raises(ConfigurationError):
        check_psh(zero_weight(), disc, samples=5)


def test_hessian_of_sum_is_sum():
    a, b = quadratic_weight(0.7, [0.1j]), quadratic_weight(1.3, [0.5])
    np.testing.assert_array_equal(make_weight(a + b).hessian,
                                  make_weight(a).hessian + make_weight(b).hessian)


def test_defining_polynomial_matches_rho(ellipse):
    rng = np.random.default_rng(0)
    x = rng.uniform(-2, 2, size=(30, 2))
    np.testing.assert_allclose(eval_field(defining_polynomial(ellipse), x).value, ellipse.rho(x),
                               atol=1e-14)
    f = vanishing_on_boundary(ellipse, monomial([0], [1]))
    t = np.linspace(0, 2 * math.pi, 40)
    pts = np.stack([2 * np.cos(t), np.sin(t)], -1)
    assert np.max(np.abs(eval_field(f, pts).value)) < 1e-14


def test_algebra():
    f = monomial([1], [0]) + monomial([1], [0])
    assert f.terms == (((1,), (0,), 2.0),)
    g = (monomial([1], [0]) * monomial([0], [1])) * 2.0
    x = at(0.4 + 0.3j)
    assert eval_field(g, x).value == pytest.approx(2 * abs(0.4 + 0.3j) ** 2)


def test_json_round_trip():
    specs = [monomial([2], [1], 0.5 - 0.5j), holo_poly([1.0, 2.0j]), constant(3.0),
             gaussian_bump([0.2 - 0.1j], 0.5), mixed_poly([((1, 0), (0, 1), 1.0)], 2)]
    x = np.random.default_rng(0).uniform(-0.5, 0.5, size=(5, 2))
    for s in specs:
        back = field_from_dict(s.to_dict())
        xx = x if s.n == 1 else np.hstack([x, x])
        np.testing.assert_allclose(eval_field(back, xx).value, eval_field(s, xx).value)
    for w in [zero_weight(), quadratic_weight(2.0, [0.1 + 0.2j]), linear_real_weight(-1.0),
              weight_sum([quadratic_weight(1.0), linear_real_weight(2.0)])]:
        assert weight_from_dict(w.to_dict()) == w
    with pytest.raises(ConfigurationError):
        field_from_dict({"family": "Bessel"})
    with pytest.raises(ConfigurationError):
        weight_from_dict({"family": "Quadratic"})


def test_weight_range_and_norms(disc, ellipse):
    w = make_weight(quadratic_weight(1.0))
    assert weight_range(w, disc) == pytest.approx((0.0, 1.0))
    assert exp_weight_norms(w, disc, math.inf) == pytest.approx((math.e, math.e))
    assert exp_weight_norms(make_weight(zero_weight()), disc, 2.0) == pytest.approx(
        (math.sqrt(math.pi), math.sqrt(2 * math.pi)))
    # int_D e^{4|z|^2} = pi (e^4 - 1) / 4
    ni, nb = exp_weight_norms(w, disc, 4.0)
    assert ni == pytest.approx((math.pi * (math.e**4 - 1) / 4) ** 0.25, rel=1e-10)
    assert nb == pytest.approx((2 * math.pi * math.e**4) ** 0.25, rel=1e-10)
    lo, hi = weight_range(make_weight(linear_real_weight(1.0)), ellipse)
    assert (lo, hi) == pytest.approx((-2.0, 2.0), abs=1e-6)


def _fd_check(spec, pts, h=1e-6):
    v = eval_field(spec, pts)
    dim = pts.shape[-1]
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = h
        fd = (eval_field(spec, pts + e).value - eval_field(spec, pts - e).value) / (2 * h)
        np.testing.assert_allclose(v.grad[..., j], fd, atol=1e-6 * (1 + np.max(np.abs(fd))))
    gx, gy = v.grad[..., 0::2], v.grad[..., 1::2]
    np.testing.assert_allclose(v.dbar, 0.5 * (gx + 1j * gy), atol=1e-13)
    np.testing.assert_allclose(v.dz, 0.5 * (gx - 1j * gy), atol=1e-13)


index = st.integers(0, 3)
coeff = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(terms=st.lists(st.tuples(index, index, coeff), min_size=1, max_size=4),
       seed=st.integers(0, 2**16))
def test_polynomial_derivatives_match_fd(terms, seed):
    spec = mixed_poly([((a,), (b,), c) for a, b, c in terms], 1)
    pts = np.random.default_rng(seed).uniform(-1, 1, size=(100, 2))
    _fd_check(spec, pts)


@settings(max_examples=30, deadline=None)
@given(c1=st.complex_numbers(max_magnitude=0.8), c2=st.complex_numbers(max_magnitude=0.8),
       width=st.floats(0.2, 2.0), seed=st.integers(0, 2**16))
def test_bump_derivatives_match_fd(c1, c2, width, seed):
    rng = np.random.default_rng(seed)
    _fd_check(gaussian_bump([c1], width), rng.uniform(-1, 1, size=(100, 2)))
    _fd_check(gaussian_bump([c1, c2], width), rng.uniform(-0.7, 0.7, size=(100, 4)))


@settings(max_examples=40, deadline=None)
@given(coeffs=st.dictionaries(st.tuples(index, index), coeff, min_size=1, max_size=5),
       seed=st.integers(0, 2**16))
def test_holomorphic_dbar_is_exactly_zero(coeffs, seed):
    spec = holo_poly(coeffs, 2)
    assert spec.is_holomorphic
    v = eval_field(spec, np.random.default_rng(seed).uniform(-1, 1, size=(50, 4)))
    assert np.all(v.dbar == 0)


@settings(max_examples=40, deadline=None)
@given(c=st.floats(0.01, 5.0), a=st.floats(-5, 5), z0=st.complex_numbers(max_magnitude=1.0))
def test_weight_dz_matches_fd(c, a, z0):
    w = make_weight(weight_sum([quadratic_weight(c, [z0]), linear_real_weight(a)]))
    x = np.random.default_rng(0).uniform(-1, 1, size=(20, 2))
    h = 1e-6
    gx = (w.value(x + [h, 0]) - w.value(x - [h, 0])) / (2 * h)
    gy = (w.value(x + [0, h]) - w.value(x - [0, h])) / (2 * h)
    np.testing.assert_allclose(w.dz(x)[:, 0], 0.5 * (gx - 1j * gy), atol=1e-6 * (1 + c))
