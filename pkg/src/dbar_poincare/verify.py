"""Both sides of each inequality or identity for concrete instances.

A record stores ``lhs``, ``rhs`` and the constant ``c`` of an inequality
``c * lhs <= rhs``; ``margin = rhs - c * lhs``.  The verdict is ``pass`` for a
non-negative margin, ``inconclusive`` when a negative margin sits inside five
quadrature error estimates and ``fail`` otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import constants as C
from .errors import ConfigurationError, DomainMembershipError
from .fields import (FieldSpec, constant, eval_field, exp_weight_norms, gaussian_bump, holo_poly,
                     make_weight, mixed_poly, monomial, quadratic_weight, linear_real_weight,
                     vanishing_on_boundary, weight_sum, zero_weight)
from .geometry import make_domain, sample_interior
from .quadrature import boundary_rule_near, integrate_singular, rules_for

LP_POINCARE = "LP_POINCARE"
SOBOLEV_DBAR = "SOBOLEV_DBAR"
REAL_SOBOLEV = "REAL_SOBOLEV"
WEIGHTED = "WEIGHTED"
MAX_MODULUS = "MAX_MODULUS"
CASES = (LP_POINCARE, SOBOLEV_DBAR, REAL_SOBOLEV, WEIGHTED, MAX_MODULUS)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass(frozen=True)
class VerificationRecord:
    tag: str
    lhs: float
    rhs: float
    constant: Optional[C.ConstantReport]
    margin: float
    quadrature_error: float
    verdict: str
    details: dict = field(default_factory=dict)

    @property
    def constant_value(self):
        return self.constant.value if self.constant is not None else float("nan")

    def to_dict(self):
        return {
            "tag": self.tag, "lhs": self.lhs, "rhs": self.rhs,
            "constant": None if self.constant is None else self.constant.to_dict(),
            "margin": self.margin, "error": self.quadrature_error, "verdict": self.verdict,
            "details": self.details,
        }


def verdict_for(margin, error):
    if margin >= 0:
        return PASS
    return INCONCLUSIVE if margin >= -5.0 * error else FAIL


def _record(tag, lhs, rhs, const, lhs_err, rhs_err, details):
    c = const.value
    margin = rhs - c * lhs
    err = rhs_err + c * lhs_err
    return VerificationRecord(tag, float(lhs), float(rhs), const, float(margin), float(err),
                              verdict_for(margin, err), details)


def _norm(I, err, q):
    """``I^{1/q}`` and its propagated error."""
    if I <= 0:
        return 0.0, err ** (1.0 / q) if err > 0 else 0.0
    return I ** (1.0 / q), I ** (1.0 / q - 1.0) * err / q


def _parse_exponents(case, exponents):
    if isinstance(exponents, dict):
        e = dict(exponents)
    else:
        ex = list(np.atleast_1d(exponents).astype(float))
        keys = {MAX_MODULUS: ("p", "q"), WEIGHTED: ("p", "q"), LP_POINCARE: ("p",)}.get(case, ("p", "q", "r"))
        e = dict(zip(keys, ex))
    p = float(e["p"])
    q = float(e.get("q", p))
    r = float(e.get("r", p))
    return p, q, r


def _field_label(f):
    return f.label or repr(f.to_dict())


def verify_inequality(case, domain, f, exponents, weight=None, resolution=64, seed=0, rules=None):
    """Evaluate one inequality instance and return its :class:`VerificationRecord`."""
    if case not in CASES:
        raise ConfigurationError(f"unknown inequality case {case!r}")
    p, q, r = _parse_exponents(case, exponents)
    if case == LP_POINCARE:
        q = r = p
    ir, br = rules if rules is not None else rules_for(domain, resolution, seed)
    fi = eval_field(f, ir.nodes)
    fb = eval_field(f, br.nodes)
    details = {"case": case, "domain": domain.kind.value, "field": _field_label(f),
               "p": p, "q": q, "r": r, "resolution": resolution}

    # each integrand is a function of FieldValues so the coarse companion reuses it
    def quad(rule, fv_fine, fn):
        vals = fn(fv_fine)
        if rule.is_random or rule.coarse is None:
            return rule.apply_values(vals)
        fc = eval_field(f, rule.coarse.nodes)
        return rule.apply_values(vals, lambda x: fn(fc))

    absf = lambda fv: np.abs(fv.value)
    dbar_norm = lambda fv: np.sqrt(np.sum(np.abs(fv.dbar) ** 2, axis=-1))
    grad_norm = lambda fv: np.sqrt(np.sum(np.abs(fv.grad) ** 2, axis=-1))

    if case == MAX_MODULUS:
        if not f.is_holomorphic or np.max(np.abs(fi.dbar), initial=0.0) != 0.0:
            raise ConfigurationError("MAX_MODULUS needs a holomorphic field")
        const = C.max_modulus_delta(domain, p, q)
        Iin = quad(ir, fi, lambda fv: absf(fv) ** q)
        Ibd = quad(br, fb, lambda fv: absf(fv) ** p)
        if const.inputs["form"] == "integral":
            return _record(MAX_MODULUS, Iin.value, Ibd.value, const, Iin.error, Ibd.error, details)
        L, Le = _norm(Iin.value, Iin.error, q)
        R, Re = _norm(Ibd.value, Ibd.error, p)
        return _record(MAX_MODULUS, L, R, const, Le, Re, details)

    if case == WEIGHTED:
        if weight is None:
            weight = make_weight(zero_weight(domain.n))
        details["weight"] = weight.spec.to_dict()
        const = C.poincare_delta(domain, p, mode=C.WEIGHTED, weight=weight, q_weight=q)
        Il = _weighted_quad(ir, f, weight, lambda fv: absf(fv) ** p)
        Id = _weighted_quad(ir, f, weight, lambda fv: dbar_norm(fv) ** p)
        Ib = _weighted_quad(br, f, weight, lambda fv: absf(fv) ** p)
        return _record(WEIGHTED, Il.value, Id.value + Ib.value, const, Il.error,
                       Id.error + Ib.error, details)

    mode = C.REAL if case == REAL_SOBOLEV else C.UNWEIGHTED
    const = C.poincare_delta(domain, p, q, r, mode=mode)
    deriv = grad_norm if case == REAL_SOBOLEV else dbar_norm
    Il = quad(ir, fi, lambda fv: absf(fv) ** q)
    Id = quad(ir, fi, lambda fv: deriv(fv) ** p)
    Ib = quad(br, fb, lambda fv: absf(fv) ** r)
    details["form"] = const.inputs["form"]
    if const.inputs["form"] == "integral":
        return _record(case, Il.value, Id.value + Ib.value, const, Il.error, Id.error + Ib.error, details)
    L, Le = _norm(Il.value, Il.error, q)
    D1, De = _norm(Id.value, Id.error, p)
    B1, Be = _norm(Ib.value, Ib.error, r)
    return _record(case, L, D1 + B1, const, Le, De + Be, details)


def _weighted_quad(rule, f, weight, fn):
    def func(x):
        return fn(eval_field(f, x)) * np.exp(-weight.value(x))
    return rule.apply(func)


# -- kernel bounds and trace -----------------------------------------------

def verify_kernel_bounds(domain, a, targets, resolution=64, boundary=True):
    """Interior (and, when ``a <= N - 1``, boundary) kernel integrals against their bounds."""
    N = domain.real_dim
    ir, br = rules_for(domain, resolution)
    const = C._report("unit", [C.ChainEntry("identity", 1.0)])
    bound_i = C.kernel_bound_interior(a, N, domain.volume)
    out = []
    s = N - a
    for z in np.atleast_2d(targets):
        res = integrate_singular(ir, z, s, lambda x: np.ones(len(x)))
        out.append(_record("interior_kernel_bound", float(np.real(res.value)), bound_i, const,
                           res.error, 0.0, {"a": a, "target": list(map(float, z)), "bound": bound_i}))
    if boundary and a <= N - 1:
        bound_b = C.kernel_bound_boundary(a, N, domain.volume, domain.K)
        for z in np.atleast_2d(targets):
            rule = boundary_rule_near(br, z)
            res = rule.apply(lambda x, z=z: np.linalg.norm(x - z, axis=-1) ** (-N + 1 + a))
            out.append(_record("boundary_kernel_bound", float(res.value), bound_b, const,
                               res.error, 0.0, {"a": a, "target": list(map(float, z)), "bound": bound_b}))
    return out


def verify_trace(domain, f, resolution=64):
    """``int_d |f| dS <= K (int |grad f| + int |f|)`` with the closed-form K."""
    ir, br = rules_for(domain, resolution)
    K = domain.K
    const = C._report("inverse_K", [C.ChainEntry("geometric_K", K, -1.0)], {"K": K})
    Ib = br.apply(lambda x: np.abs(eval_field(f, x).value))
    Ig = ir.apply(lambda x: np.sqrt(np.sum(np.abs(eval_field(f, x).grad) ** 2, axis=-1)))
    If = ir.apply(lambda x: np.abs(eval_field(f, x).value))
    return _record("trace", Ib.value, Ig.value + If.value, const, Ib.error, Ig.error + If.error,
                   {"domain": domain.kind.value, "field": _field_label(f), "K": K})


# -- Kohn-Morrey-Hoermander identity ----------------------------------------

def verify_kmh_identity(domain, alpha, phi, resolution=64, tol=1e-3):
    """Both sides of the basic identity for a (0,1)-form ``alpha dzbar`` in n=1.

    ``alpha`` must satisfy ``alpha * drho/dz = 0`` on the boundary.
    """
    if domain.n != 1:
        raise ConfigurationError("the KMH check is implemented for n=1")
    w = make_weight(phi)
    ir, br = rules_for(domain, resolution)
    fb = eval_field(alpha, br.nodes)
    dz_rho = np.conj(domain.dbar_rho(br.nodes))[..., 0]
    scale = max(1.0, float(np.max(np.abs(eval_field(alpha, ir.nodes).value), initial=0.0)))
    if np.max(np.abs(fb.value * dz_rho), initial=0.0) > 1e-10 * scale:
        raise DomainMembershipError("alpha * drho/dz does not vanish on the boundary")
    hess = float(np.real(w.hessian[0, 0]))
    rho_h = float(np.real(domain.complex_hessian()[0, 0]))

    def lhs(x):
        fv = eval_field(alpha, x)
        ts = -(fv.dz[..., 0] - fv.value * w.dz(x)[..., 0])
        return np.abs(ts) ** 2 * np.exp(-w.value(x))

    def rhs_in(x):
        fv = eval_field(alpha, x)
        return (np.abs(fv.value) ** 2 * hess + np.abs(fv.dbar[..., 0]) ** 2) * np.exp(-w.value(x))

    def rhs_bd(x):
        fv = eval_field(alpha, x)
        g = np.linalg.norm(domain.grad_rho(x), axis=-1)
        return np.abs(fv.value) ** 2 * rho_h * np.exp(-w.value(x)) / g

    L = ir.apply(lhs)
    R1 = ir.apply(rhs_in)
    R2 = br.apply(rhs_bd)
    Lv, Rv = float(L.value), float(R1.value + R2.value)
    err = L.error + R1.error + R2.error
    diff = abs(Lv - Rv)
    big = max(abs(Lv), abs(Rv), 1e-300)
    rel = diff / big if max(abs(Lv), abs(Rv)) > 0 else 0.0
    if diff <= tol * big or diff == 0.0:
        verdict = PASS
    else:
        verdict = INCONCLUSIVE if diff <= 5.0 * err else FAIL
    const = C._report("unit", [C.ChainEntry("identity", 1.0)])
    return VerificationRecord("kmh_identity", Lv, Rv, const, -diff, float(err), verdict,
                              {"relative_residual": rel, "field": _field_label(alpha),
                               "weight": phi.to_dict(), "resolution": resolution})


# -- shipped battery --------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    case: str
    domain: object
    field: FieldSpec
    exponents: tuple
    weight: Optional[object] = None


def _disc_fields():
    return [
        constant(1.0), monomial([1], [0]), monomial([0], [1]), monomial([1], [1]),
        monomial([2], [1], 0.5 - 0.5j), mixed_poly([((0,), (0,), 1.0), ((1,), (1,), -1.0)], 1),
        holo_poly([1.0, -0.5, 0.25j]), gaussian_bump([0.2 - 0.1j], 0.5),
    ]


def _holo_fields_1d():
    return [constant(1.0), monomial([1], [0]), monomial([3], [0]), holo_poly([1.0, 2.0, 0.5j]),
            holo_poly([0.0, 1.0, 0.0, -1.0])]


def _ball_fields():
    return [constant(1.0, 2), monomial([1, 0], [0, 1]), monomial([0, 0], [1, 0]),
            mixed_poly([((0, 0), (0, 0), 1.0), ((1, 0), (1, 0), -0.5), ((0, 1), (0, 1), -0.5)], 2),
            gaussian_bump([0.1, -0.2j], 0.6)]


def _ball_holo():
    return [constant(1.0, 2), monomial([1, 0], [0, 0]), monomial([1, 1], [0, 0]),
            holo_poly({(2, 0): 1.0, (0, 1): 0.5j}, 2)]


def sobolev_exponents(n):
    """A spread of in-window (p, q, r) triples."""
    trip = [(1.5, 2, 2), (2, 3, 2), (2, 1.5, 3), (3, 2, 2), (1, 1.5, 1.5), (2, 4, 3), (4, 3, 2.5)]
    out = []
    for p, q, r in trip:
        try:
            C.check_sobolev_window(n, p, q, r)
        except Exception:
            continue
        out.append((p, q, r))
    return out


def default_battery():
    """In-window instances across the unit disc, an ellipse and the unit ball in C^2."""
    disc = make_domain("UnitDisc")
    ell = make_domain("Ellipse", [2.0, 1.0])
    ball = make_domain("UnitBall", n=2)
    inst = []
    weights_1d = [quadratic_weight(1.0), linear_real_weight(-1.5),
                  weight_sum([quadratic_weight(0.5, [0.2j]), linear_real_weight(0.7)])]
    for dom in (disc, ell):
        fields = _disc_fields()
        for f in fields:
            for p in (1.0, 1.5, 2.0, 3.0):
                inst.append(Instance(LP_POINCARE, dom, f, (p,)))
            for e in sobolev_exponents(1):
                inst.append(Instance(SOBOLEV_DBAR, dom, f, e))
            for e in ((2, 2, 2), (1.5, 3, 2), (3, 2, 4)):
                inst.append(Instance(REAL_SOBOLEV, dom, f, e))
            for w in weights_1d:
                for pq in ((2.0, 4.0), (2.0, math.inf), (1.5, 2.0)):
                    inst.append(Instance(WEIGHTED, dom, f, pq, w))
        for f in _holo_fields_1d():
            for pq in ((2, 2), (2, 3), (1.5, 2), (3, 5)):
                inst.append(Instance(MAX_MODULUS, dom, f, pq))
    for f in _ball_fields():
        for p in (1.5, 2.0):
            inst.append(Instance(LP_POINCARE, ball, f, (p,)))
        for e in sobolev_exponents(2)[:3]:
            inst.append(Instance(SOBOLEV_DBAR, ball, f, e))
        inst.append(Instance(REAL_SOBOLEV, ball, f, (2, 2, 2)))
        inst.append(Instance(WEIGHTED, ball, f, (2.0, 4.0), quadratic_weight(1.0, n=2)))
    for f in _ball_holo():
        for pq in ((2, 2), (2, 2.5)):
            inst.append(Instance(MAX_MODULUS, ball, f, pq))
    return inst


def run_battery(instances, resolution=64, seed=0):
    out = []
    for it in instances:
        w = make_weight(it.weight) if it.weight is not None else None
        res = resolution if it.domain.n == 1 else min(resolution, 32)
        out.append(verify_inequality(it.case, it.domain, it.field, it.exponents, w, res, seed))
    return out


def trace_battery_fields():
    """Twenty fields for the trace inequality."""
    fs = _disc_fields() + _holo_fields_1d()
    fs += [monomial([k], [j]) for k, j in ((2, 2), (0, 3), (4, 1))]
    fs += [gaussian_bump([0.5], 0.3), gaussian_bump([-0.4j], 0.8), constant(2.0 - 1.0j),
           mixed_poly([((1,), (0,), 1.0), ((0,), (2,), 1.0j)], 1)]
    return fs[:20]


def kmh_instances(domain=None):
    """The three shipped ``(alpha, phi)`` pairs on the unit disc."""
    domain = domain or make_domain("UnitDisc")
    one = constant(1.0)
    return [
        (vanishing_on_boundary(domain, one), zero_weight()),
        (constant(0.0), zero_weight()),
        (vanishing_on_boundary(domain, monomial([0], [1])), quadratic_weight(1.0)),
    ]


def random_targets(domain, count, seed=0, max_rho=-1e-3):
    """Interior targets with ``rho <= max_rho``."""
    rng = np.random.default_rng(seed)
    pts = sample_interior(domain, 4 * count, rng)
    pts = pts[domain.rho(pts) <= max_rho]
    return pts[:count]
