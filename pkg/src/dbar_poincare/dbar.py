"""Solving dbar u = g dzbar on planar domains and the improved L^2 estimate.

The particular solution is the Cauchy transform

    u(z) = -(1/pi) int_Omega g(xi) / (xi - z) dlambda(xi),

evaluated with target-centred quadrature.  The minimal solution in a weighted
L^2 space is approximated by subtracting the weighted least-squares projection
onto holomorphic polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import linalg

from . import constants as C
from .errors import ConfigurationError, DegeneracyError, ResolutionError
from .fields import eval_field, make_weight, zero_weight
from .geometry import to_complex
from .quadrature import integrate_singular, interior_rule
from .verify import verdict_for

GENERAL = "general"
FIXED_PSI = "fixed_psi"


def _polyval(z, coeffs):
    if len(coeffs) == 0:
        return np.zeros(np.shape(z), dtype=complex)
    return np.polynomial.polynomial.polyval(z, coeffs)


def _cauchy_kernel(xi, z):
    d = xi - z
    return (d[..., 0] - 1j * d[..., 1]) / (d[..., 0] ** 2 + d[..., 1] ** 2)


def cauchy_transform(domain, g, points, resolution=64, rule=None):
    """``-(1/pi) int g(xi)/(xi - z)`` at each point, with error estimates."""
    rule = rule or interior_rule(domain, resolution)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    vals = np.empty(len(pts), dtype=complex)
    errs = np.empty(len(pts))
    gfun = lambda x: eval_field(g, x).value
    for i, z in enumerate(pts):
        res = integrate_singular(rule, z, 1.0, gfun, _cauchy_kernel)
        vals[i] = -res.value / math.pi
        errs[i] = res.error / math.pi
    return vals, errs


def check_grid(domain, spacing=0.1, margin=0.1):
    """Square grid of points at distance more than ``margin`` from the boundary."""
    c, s = domain._c, domain._s
    xs = np.arange(c[0] - s[0], c[0] + s[0] + 1e-12, spacing)
    ys = np.arange(c[1] - s[1], c[1] + s[1] + 1e-12, spacing)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel()], -1)
    return pts[domain.distance_lower_bound(pts) > margin]


@dataclass(frozen=True)
class DbarSolution:
    """A solution ``u = particular - sum_k coeffs[k] z^k`` of ``dbar u = g``."""

    domain: object
    g: object
    particular: Callable = field(repr=False)
    coeffs: np.ndarray  # holomorphic polynomial subtracted from the particular solution
    weight: object  # WeightSpec used for norms
    grid: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)  # values on grid
    residual_sup: float = 0.0
    norm_sq: float = 0.0
    norm_rule: object = field(repr=False, default=None)
    u_rule: np.ndarray = field(repr=False, default=None)  # values on norm_rule nodes
    truncation_gap: float = 0.0

    def holomorphic_part(self, x):
        z = to_complex(x)[..., 0]
        return _polyval(z, self.coeffs)

    def __call__(self, x):
        return self.particular(x) - self.holomorphic_part(x)


def _fd_dbar(func, pts, h=1e-4):
    ex, ey = np.array([h, 0.0]), np.array([0.0, h])
    ux = (func(pts + ex) - func(pts - ex)) / (2 * h)
    uy = (func(pts + ey) - func(pts - ey)) / (2 * h)
    return 0.5 * (ux + 1j * uy)


def solve_cauchy(domain, g, grid=None, resolution=32, norm_resolution=32, weight=None, tol=1e-3):
    """Particular solution of ``dbar u = g`` by the Cauchy transform (n=1)."""
    if domain.n != 1:
        raise ConfigurationError("the dbar solver is implemented for n=1")
    weight = weight if weight is not None else zero_weight()
    rule = interior_rule(domain, resolution)
    grid = check_grid(domain) if grid is None else np.atleast_2d(np.asarray(grid, dtype=float))

    def particular(x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, 2)
        vals, _ = cauchy_transform(domain, g, flat, rule=rule)
        return vals.reshape(x.shape[:-1])

    u = particular(grid)
    resid = np.abs(_fd_dbar(particular, grid) - eval_field(g, grid).value)
    residual_sup = float(resid.max(initial=0.0))
    if residual_sup > tol:
        raise ResolutionError(f"dbar residual {residual_sup:.3g} exceeds {tol:g}",
                              suggested_resolution=2 * resolution)
    nrule = interior_rule(domain, norm_resolution)
    u_rule = particular(nrule.nodes)
    w = make_weight(weight)
    norm_sq = float(nrule.sum(np.abs(u_rule) ** 2 * np.exp(-w.value(nrule.nodes))))
    return DbarSolution(domain, g, particular, np.zeros(0, complex), weight, grid, u,
                        residual_sup, norm_sq, nrule, u_rule)


def _projection(z, u, wts, degree):
    A = z[:, None] ** np.arange(degree + 1)[None, :]
    sw = np.sqrt(wts)
    A = A * sw[:, None]
    scale = np.linalg.norm(A, axis=0)
    A = A / scale
    Q, R = linalg.qr(A, mode="economic")
    cond = np.linalg.cond(R)
    if not cond < 1e12:
        raise DegeneracyError(f"holomorphic Gram matrix ill-conditioned (cond {cond:.2g}); reduce holo_degree")
    y = linalg.solve_triangular(R, Q.conj().T @ (sw * u))
    return y / scale


def minimal_solution(sol, weight=None, holo_degree=20):
    """Subtract the weighted L^2 projection of ``u`` onto polynomials of degree ``<= holo_degree``."""
    if not 0 <= holo_degree <= 30:
        raise ConfigurationError("holo_degree must be in [0, 30]")
    weight = weight if weight is not None else sol.weight
    w = make_weight(weight)
    rule = sol.norm_rule
    ew = np.exp(-w.value(rule.nodes))
    wts = rule.weights * ew
    z = to_complex(rule.nodes)[:, 0]
    base = sol.u_rule + sol.holomorphic_part(rule.nodes)  # particular solution values
    coeffs = _projection(z, base, wts, holo_degree)
    poly = _polyval(z, coeffs)
    u_new = base - poly
    norm_sq = float(np.sum(wts * np.abs(u_new) ** 2))
    # effect of halving the degree, a proxy for the truncation error
    half = _projection(z, base, wts, holo_degree // 2)
    gap = float(np.sum(wts * np.abs(base - _polyval(z, half)) ** 2)) - norm_sq
    zg = to_complex(sol.grid)[:, 0]
    ug = sol.u + _polyval(zg, sol.coeffs) - _polyval(zg, coeffs)
    return DbarSolution(sol.domain, sol.g, sol.particular, coeffs, weight, sol.grid, ug,
                        sol.residual_sup, norm_sq, rule, u_new, max(gap, 0.0))


@dataclass(frozen=True)
class HormanderBoundCheck:
    mode: str
    lhs: float
    classical_rhs: float
    improved_rhs: float
    improved_factor: float
    factor_gap: float  # 1 - improved_factor, computed without cancellation
    f_norm_sq: float
    M_f: float
    delta: float
    delta0: float
    margin: float
    error: float
    verdict: str
    weight_label: str
    constants: object = field(repr=False, default=None)
    truncation_gap: float = 0.0

    @property
    def improves(self):
        return self.improved_rhs < self.classical_rhs

    def to_dict(self):
        d = {k: getattr(self, k) for k in ("mode", "lhs", "classical_rhs", "improved_rhs",
                                           "improved_factor", "factor_gap", "f_norm_sq", "M_f",
                                           "delta", "delta0", "margin", "error", "verdict",
                                           "weight_label", "truncation_gap")}
        d["constants"] = self.constants.to_dict() if self.constants is not None else None
        return d


def _improved_factor(f_norm_sq, x_num):
    """``||f|| / sqrt(||f||^2 + x_num)`` and ``1 -`` that factor."""
    if f_norm_sq <= 0:
        return 1.0, 0.0
    x = x_num / f_norm_sq
    return 1.0 / math.sqrt(1.0 + x), -math.expm1(-0.5 * math.log1p(x))


def check_improved_bound(domain, g, phi, psi=None, q=math.inf, mode=GENERAL, resolution=32,
                         norm_resolution=32, holo_degree=20, z0=None):
    """Solve, project to the minimal solution, and test the improved estimate."""
    if domain.n != 1:
        raise ConfigurationError("the improved estimate is checked for n=1")
    nrule = interior_rule(domain, norm_resolution)
    if mode == GENERAL:
        if psi is None:
            raise ConfigurationError("general mode needs psi")
        consts = C.hormander_constants(domain, phi, psi, q)
        norm_weight = phi + psi
    elif mode == FIXED_PSI:
        consts, psi = C.fixed_psi_constants(domain, phi, z0)
        norm_weight = phi
    else:
        raise ConfigurationError(f"unknown mode {mode!r}")
    wn = make_weight(norm_weight)
    hpsi = float(np.real(make_weight(psi).hessian[0, 0]))
    nodes = nrule.nodes
    ew = np.exp(-wn.value(nodes))
    gv = eval_field(g, nodes).value
    f_norm_sq = nrule.apply_values(np.abs(gv) ** 2 * ew,
                                             lambda x: np.abs(eval_field(g, x).value) ** 2 * np.exp(-wn.value(x)))

    if g.is_polynomial and not g.terms:
        lhs, lhs_err, gap = 0.0, 0.0, 0.0
    else:
        sol = solve_cauchy(domain, g, resolution=resolution, norm_resolution=norm_resolution,
                           weight=norm_weight)
        msol = minimal_solution(sol, norm_weight, holo_degree)
        lhs, gap = msol.norm_sq, msol.truncation_gap
        lhs_err = 64 * np.finfo(float).eps * lhs
    delta, delta0 = consts.delta.value, consts.delta0.value
    if mode == GENERAL:
        M = f_norm_sq.value / hpsi
        factor, fgap = _improved_factor(f_norm_sq.value, delta * delta0 * M)
        classical = M
        improved = factor * M
        err = f_norm_sq.error / hpsi
        label = "e^{-phi-psi}"
    else:
        R = domain.diameter
        factor, fgap = _improved_factor(1.0, delta * delta0)
        classical = math.e * R**2 * f_norm_sq.value
        improved = factor * classical
        err = math.e * R**2 * f_norm_sq.error
        label = "e^{-phi}"
    margin = improved - lhs
    total_err = err + lhs_err
    return HormanderBoundCheck(mode, lhs, classical, improved, factor, fgap, f_norm_sq.value,
                               f_norm_sq.value / hpsi if mode == GENERAL else f_norm_sq.value,
                               delta, delta0, margin, total_err, verdict_for(margin, total_err),
                               label, consts, gap)


@dataclass(frozen=True)
class HormanderInstance:
    domain: object
    g: object
    phi: object
    psi: Optional[object] = None
    q: float = math.inf
    mode: str = GENERAL


def hormander_instances():
    """The shipped ``(g, phi, psi)`` instances for the improved estimate."""
    from .fields import constant, monomial, quadratic_weight, linear_real_weight
    from .geometry import make_domain

    disc = make_domain("UnitDisc")
    ell = make_domain("Ellipse", [2.0, 1.0])
    one, zbar, z = constant(1.0), monomial([0], [1]), monomial([1], [0])
    return [
        HormanderInstance(disc, one, zero_weight(), quadratic_weight(1.0)),
        HormanderInstance(disc, zbar, quadratic_weight(0.5), quadratic_weight(1.0), 4.0),
        HormanderInstance(disc, z, linear_real_weight(0.5), quadratic_weight(2.0)),
        HormanderInstance(disc, constant(0.0), zero_weight(), quadratic_weight(1.0)),
        HormanderInstance(disc, one, zero_weight(), mode=FIXED_PSI),
        HormanderInstance(disc, z, quadratic_weight(0.5), mode=FIXED_PSI),
        HormanderInstance(ell, one, zero_weight(), quadratic_weight(0.25)),
        HormanderInstance(ell, zbar, zero_weight(), mode=FIXED_PSI),
    ]


def run_hormander(inst, resolution=32, holo_degree=20):
    return check_improved_bound(inst.domain, inst.g, inst.phi, inst.psi, inst.q, inst.mode,
                                resolution=resolution, holo_degree=holo_degree)
