import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from dbar_poincare import constants as C
from dbar_poincare.errors import PshError, WindowError
from dbar_poincare.fields import make_weight, monomial, quadratic_weight, zero_weight
from dbar_poincare.geometry import make_domain


def test_kernel_bound_examples(disc):
    assert C.kernel_bound_interior(1, 2, math.pi) == pytest.approx(2 * math.pi)
    assert C.kernel_bound_interior(2, 2, math.pi) == pytest.approx(math.pi)
    for V in (0.3, math.pi, 7.0):
        assert C.kernel_bound_interior(2, 2, V) == pytest.approx(V)
    assert C.kernel_bound_boundary(1, 2, math.pi, 2.0) == pytest.approx(12 * math.pi)
    assert C.kernel_bound_boundary(1, 2, math.pi, disc.K) == pytest.approx(18 * math.pi)
    assert C.kernel_bound_boundary(1, 2, math.pi, 3.0) >= 2 * math.pi
    with pytest.raises(WindowError, match="0<a<=N"):
        C.kernel_bound_interior(0, 2, 1.0)
    with pytest.raises(WindowError, match="0<a<=N-1"):
        C.kernel_bound_boundary(1.5, 2, 1.0, 3.0)


def test_interior_split_branch():
    sp = C.interior_split(1, 2, 2)
    assert sp.b == -0.5
    rep = C.interior_operator_bound(1, 2, 2, math.pi)
    assert rep.inputs["b"] == -0.5
    assert any(e.tag.startswith("split_b=-0.5") for e in rep.chain)


def test_sobolev_windows():
    C.check_sobolev_window(1, 2, 6, 4)
    Bi, Bb = C.bm_operator_bounds(1, 2, 6, 4, math.pi, 2 * math.pi, 3.0)
    assert math.isfinite(Bi.value) and math.isfinite(Bb.value)
    # (2, 6, 2) sits on the boundary of the trace window: 6 * 1 < 2 * 2 fails
    with pytest.raises(WindowError, match=r"q\(2n-1\)<2nr"):
        C.check_sobolev_window(1, 2, 6, 2)
    with pytest.raises(WindowError, match=r"q\(2n-p\)<2np"):
        C.check_sobolev_window(1, 1, 3, 1)


def test_weighted_windows_and_bounds(disc):
    L = C.weighted_operator_bounds(1, 2, math.inf, math.pi, 2 * math.pi, 3.0, (1.0, 1.0))
    assert math.isfinite(L.value) and L.check_chain()
    with pytest.raises(WindowError):
        C.check_weighted_window(1, 2, 1.0)  # q = (2n-1)(p-1)
    d = C.poincare_delta(disc, 2.0, mode=C.WEIGHTED, weight=make_weight(quadratic_weight(1.0)),
                         q_weight=4.0)
    assert d.value == pytest.approx(1.973e-4, rel=1e-3)
    assert d.check_chain()


def test_poincare_delta_disc(disc):
    d = C.poincare_delta(disc, 2, 2, 2)
    assert d.inputs["form"] == "integral"
    assert d.value == pytest.approx(5.526e-4, rel=1e-3)
    pref = [e for e in d.parts["norm_form"].chain if e.tag in ("reproduction_prefactor", "component_count")]
    assert math.prod(e.value ** e.power for e in pref) == pytest.approx(math.pi)
    assert d.parts["interior"].chain and d.parts["boundary"].chain
    assert C.poincare_delta(disc, 2, 6, 4).value == pytest.approx(7.4985e-3, rel=1e-4)
    assert C.poincare_delta(disc, 1, 1, 1).value == pytest.approx(0.5, rel=1e-12)
    real = C.poincare_delta(disc, 2, 2, 2, mode=C.REAL)
    assert real.value == pytest.approx(d.value)
    assert any(e.tag == "gradient_domination" for e in real.parts["norm_form"].chain)
    with pytest.raises(WindowError):
        C.poincare_delta(disc, 2, 6, 2)


def test_max_modulus_delta(disc):
    d = C.max_modulus_delta(disc, 2, 2)
    assert d.inputs["form"] == "integral"
    assert d.value == pytest.approx(1.105e-3, rel=1e-3)
    with pytest.raises(WindowError, match=r"q\(2n-1\)<2np"):
        C.max_modulus_delta(disc, 2, 4)


def test_hormander_constants(disc):
    h = C.hormander_constants(disc, zero_weight(), quadratic_weight(1.0), math.inf)
    assert disc.c0 == 1.0 and disc.sup_grad_rho == 2.0
    assert h.m2.value == pytest.approx(0.5)
    assert h.m1.value == pytest.approx(1 / (2 * math.e))
    assert h.delta0.value == pytest.approx(1 / (4 * math.e))
    assert h.delta.value == pytest.approx(5.526e-4, rel=1e-3)
    with pytest.raises(WindowError, match="2n-1<q"):
        C.hormander_constants(disc, zero_weight(), quadratic_weight(1.0), 1.0)
    with pytest.raises(PshError):
        C.hormander_constants(disc, quadratic_weight(-1.0), quadratic_weight(1.0), math.inf)
    with pytest.raises(PshError):
        C.hormander_constants(disc, zero_weight(), zero_weight(), math.inf)


def test_fixed_psi_constants(disc):
    consts, psi = C.fixed_psi_constants(disc, zero_weight())
    assert make_weight(psi).hessian[0, 0] == pytest.approx(0.25)
    assert consts.delta0.value == pytest.approx(2.0)
    for k in ("m1", "m2", "delta0", "delta"):
        assert getattr(consts, k).check_chain()


def test_report_json(disc):
    import json
    d = C.poincare_delta(disc, 2, 3, 2)
    data = json.loads(d.to_json())
    assert data["value"] == d.value
    prod = math.prod(e["value"] ** e["power"] for e in data["chain"])
    assert prod == pytest.approx(d.value, rel=1e-12)


def _splits_continuous(f, x0, eps=1e-9):
    return abs(f(x0 - eps) - f(x0 + eps)) < 1e-6


def test_split_continuity_at_branch_points():
    n = 1
    # q = 2n/(2n-1) switches the first max; p = 2n switches the min
    qb = 2 * n / (2 * n - 1)
    assert _splits_continuous(lambda q: C.interior_split(n, 1.5, q).b, qb + 0.0)
    assert _splits_continuous(lambda p: C.interior_split(n, p, 3.0).b, 2 * n)
    assert _splits_continuous(lambda q: C.boundary_split(n, q, 1.5).b, qb + 0.0)
    assert _splits_continuous(lambda q: C.interior_split(2, 1.2, q).b, 4 / 3)
    assert _splits_continuous(lambda p: C.interior_split(2, p, 4.5).b, 4.0)


exps = st.floats(1.0, 6.0)


@settings(max_examples=150, deadline=None)
@given(n=st.sampled_from([1, 2]), p=exps, q=exps, r=exps,
       kind=st.sampled_from(["UnitDisc", "Ellipse", "UnitBall"]))
def test_delta_positive_and_chain_consistent(n, p, q, r, kind):
    dom = make_domain(kind, [2.0, 1.0] if kind == "Ellipse" else [], 2 if kind == "UnitBall" else None)
    try:
        C.check_sobolev_window(dom.n, p, q, r)
    except WindowError:
        assume(False)
    d = C.poincare_delta(dom, p, q, r)
    assert 0 < d.value < math.inf
    assert d.check_chain()
    for part in d.parts.values():
        assert part.check_chain()


@settings(max_examples=60, deadline=None)
@given(p=st.floats(1.05, 4.0), q=st.floats(1.0, 8.0))
def test_weighted_and_max_modulus_positive(p, q):
    disc = make_domain("UnitDisc")
    try:
        C.check_weighted_window(1, p, q)
        d = C.poincare_delta(disc, p, mode=C.WEIGHTED, weight=make_weight(zero_weight()),
                             weight_norms=(1.0, 1.0), q_weight=q)
        assert 0 < d.value < math.inf and d.check_chain()
    except WindowError:
        pass
    try:
        C.check_max_modulus_window(1, p, q)
        m = C.max_modulus_delta(disc, p, q)
        assert 0 < m.value < math.inf and m.check_chain()
    except WindowError:
        pass


@settings(max_examples=60, deadline=None)
@given(a1=st.floats(0.05, 2.0), a2=st.floats(0.05, 2.0), V=st.floats(0.01, 0.5 * math.pi))
def test_kernel_bound_monotone(a1, a2, V):
    # with N V / omega <= 1 the bound decreases in a; it always increases in volume
    lo, hi = sorted((a1, a2))
    assume(hi - lo > 1e-9)
    assert C.kernel_bound_interior(hi, 2, V) <= C.kernel_bound_interior(lo, 2, V)
    assert C.kernel_bound_interior(lo, 2, V) <= C.kernel_bound_interior(lo, 2, 2 * V)


def test_split_limits_are_stable():
    # r -> 1 from above: the boundary kernel parameter tends to (2n-1)/2
    for n in (1, 2):
        sp = C.boundary_split(n, 1 + 1e-15, 1 + 1e-15)
        assert sp.kernel_a[1] == (2 * n - 1) / 2
        sp = C.interior_split(n, 1 + 1e-15, 1 + 1e-15)
        assert sp.kernel_a[1] == n
    _, a1, a2 = C.weighted_interior_split(1, 1.5, 1.0)
    assert (a1, a2) == pytest.approx((0.5, 1.0))
    _, a1, a3 = C.weighted_boundary_split(1, 1.5, 1.0)
    assert a3 == 0.5
