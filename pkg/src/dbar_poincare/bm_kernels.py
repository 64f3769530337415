"""Bochner-Martinelli type integral operators and the reproduction formula.

With ``d = xi - z`` the kernels used here are

* ``Cauchy`` (n=1): ``1 / d = conj(d) / |d|^2``,
* ``FirstCoordinate``: ``conj(d_1) / |d|^{2n}``,
* ``FullBM``: ``sum_j h_j(xi) conj(d_j) / |d|^{2n}`` where ``h_j`` is
  ``df/dxi_bar_j`` in the interior and ``f drho/dxi_bar_j / |grad rho|`` on the
  boundary.

The reproduction formula, after reducing the kernel form to real measures, is

    f(z) = (n-1)!/pi^n * (boundary FullBM - interior FullBM).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, OutOfDomainError
from .fields import FieldSpec, eval_field
from .quadrature import boundary_rule_near, integrate_singular

CAUCHY = "Cauchy"
FIRST_COORDINATE = "FirstCoordinate"
FULL_BM = "FullBM"
VARIANTS = (CAUCHY, FIRST_COORDINATE, FULL_BM)


@dataclass(frozen=True)
class OperatorResult:
    values: np.ndarray  # complex, one per target
    targets: np.ndarray
    errors: np.ndarray
    near_boundary: np.ndarray = None  # bool flags (boundary operators only)


@dataclass(frozen=True)
class Reconstruction:
    values: np.ndarray
    exact: np.ndarray
    errors: np.ndarray  # quadrature error estimate per target
    max_rel_error: float
    max_abs_error: float
    boundary_term: np.ndarray
    interior_term: np.ndarray


def bm_prefactor(n):
    """(n-1)! / pi^n."""
    return math.factorial(n - 1) / math.pi**n


def _targets(domain, targets):
    t = np.atleast_2d(np.asarray(targets, dtype=float))
    if t.shape[-1] != domain.real_dim:
        raise ConfigurationError("targets must have 2n real coordinates")
    return t


def _check_variant(variant, n):
    if variant not in VARIANTS:
        raise ConfigurationError(f"unknown kernel variant {variant!r}")
    if variant == CAUCHY and n != 1:
        raise ConfigurationError("Cauchy kernel is only defined for n=1")


def _values(f, x):
    if isinstance(f, FieldSpec):
        return eval_field(f, x).value
    return np.asarray(f(x))


def _coord_kernel(n, j=0):
    # conj(d_j) / |d|^{2n}; for n=1 this is bitwise the Cauchy kernel conj(d)/|d|^2
    def kernel(xi, z):
        d = xi - z
        r2 = np.sum(d * d, axis=-1)
        dj = d[..., 2 * j] - 1j * d[..., 2 * j + 1]
        return dj / r2**n
    return kernel


def _full_interior_integrand(f, n):
    def integrand_kernel(xi, z):
        d = xi - z
        r2 = np.sum(d * d, axis=-1)
        dbar = eval_field(f, xi).dbar
        dconj = d[..., 0::2] - 1j * d[..., 1::2]
        return np.sum(dbar * dconj, axis=-1) / r2**n
    return integrand_kernel


def apply_interior_bm(domain, rule, f, variant, targets):
    """Interior operator at each target; singularity of order 2n-1."""
    n = domain.n
    _check_variant(variant, n)
    t = _targets(domain, targets)
    vals, errs = [], []
    s = 2 * n - 1
    for z in t:
        if variant == FULL_BM:
            if not isinstance(f, FieldSpec):
                raise ConfigurationError("FullBM needs a FieldSpec (uses dbar f)")
            res = integrate_singular(rule, z, s, lambda x: 1.0, _full_interior_integrand(f, n))
        else:
            res = integrate_singular(rule, z, s, lambda x: _values(f, x), _coord_kernel(n))
        vals.append(complex(res.value))
        errs.append(res.error)
    return OperatorResult(np.array(vals), t, np.array(errs))


def apply_boundary_bm(domain, rule, f, variant, targets):
    """Boundary operator at interior targets by plain rule application.

    Targets closer to the boundary than ``4 / resolution * diameter`` are
    flagged in ``near_boundary``.  For n=1 the trapezoid rule is refined per
    target so that the nearby pole of the kernel stays resolved; n=2 flagged
    targets keep the base rule and their error estimates are less reliable.
    """
    n = domain.n
    _check_variant(variant, n)
    t = _targets(domain, targets)
    h = 4.0 / rule.resolution * domain.diameter
    vals, errs, near = [], [], []
    for z in t:
        if not domain.rho(z) < 0:
            raise OutOfDomainError(f"target {z} is not inside the domain")
        if variant == FULL_BM:
            def func(x, z=z):
                d = x - z
                r2 = np.sum(d * d, axis=-1)
                dconj = d[..., 0::2] - 1j * d[..., 1::2]
                gx = domain.dbar_rho(x) / np.linalg.norm(domain.grad_rho(x), axis=-1, keepdims=True)
                return _values(f, x) * np.sum(dconj * gx, axis=-1) / r2**n
        else:
            kern = _coord_kernel(n)

            def func(x, z=z, kern=kern):
                return _values(f, x) * kern(x, z)
        res = boundary_rule_near(rule, z).apply(func)
        vals.append(complex(res.value))
        errs.append(res.error)
        near.append(bool(domain.distance_lower_bound(z) < h))
    return OperatorResult(np.array(vals), t, np.array(errs), np.array(near))


def reconstruct_bm(domain, rules, f, targets):
    """Rebuild ``f`` at ``targets`` from its boundary values and ``dbar f``.

    ``rules`` is ``(interior_rule, boundary_rule)``.
    """
    irule, brule = rules
    c = bm_prefactor(domain.n)
    t = _targets(domain, targets)
    b = apply_boundary_bm(domain, brule, f, FULL_BM, t)
    if f.is_holomorphic:
        ivals, ierrs = np.zeros(len(t), dtype=complex), np.zeros(len(t))
    else:
        i = apply_interior_bm(domain, irule, f, FULL_BM, t)
        ivals, ierrs = i.values, i.errors
    rec = c * (b.values - ivals)
    err = c * (b.errors + ierrs)
    exact = eval_field(f, t).value
    abs_err = np.abs(rec - exact)
    rel = abs_err / np.maximum(np.abs(exact), 1.0)  # relative, absolute below |f| = 1
    return Reconstruction(rec, exact, err, float(rel.max()), float(abs_err.max()),
                          c * b.values, c * ivals)


def reproduction_fields(n=1):
    """Fields for the reproduction self-test: z^2, zbar, z zbar, 1 - |z|^2 (n=1) or z1 zbar2."""
    from .fields import mixed_poly, monomial

    if n == 1:
        return [monomial([2], [0]), monomial([0], [1]), monomial([1], [1]),
                mixed_poly([((0,), (0,), 1.0), ((1,), (1,), -1.0)], 1)]
    return [monomial([1, 0], [0, 1])]
