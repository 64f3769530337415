"""Interior and boundary quadrature, including target-centred singular rules.

Every rule integrates a vectorised callable and returns a value together with
an error estimate.  Deterministic rules carry a half-resolution companion and
report ``|I_h - I_{h/2}|``; quasi-Monte Carlo rules are built from independent
scrambles and report the standard error over replicates.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.special import roots_jacobi, roots_legendre
from scipy.stats import qmc

from .errors import ConfigurationError, InfeasibleSingularityError, OutOfDomainError
from .geometry import boundary_param, outward_normal, sphere_area

_EPS = np.finfo(float).eps

POLAR_TENSOR = "PolarTensor"
RADIAL_SPHERICAL = "RadialSphericalProduct"
QMC = "QuasiMonteCarlo"
TRAPEZOID = "Trapezoid"
HOPF_PRODUCT = "HopfProduct"


class QuadResult(NamedTuple):
    value: complex
    error: float


@dataclass(frozen=True, eq=False)
class Rule:
    """Node/weight set.  ``groups`` labels QMC replicates (None if deterministic)."""

    domain: object
    nodes: np.ndarray
    weights: np.ndarray
    scheme: str
    resolution: int
    coarse: Optional["Rule"] = None
    groups: Optional[np.ndarray] = None
    n_groups: int = 0
    seed: int = 0

    @property
    def error_model(self):
        if self.groups is not None:
            return "replicate-standard-error"
        if self.coarse is not None:
            return "half-resolution-difference"
        return "none"

    @property
    def is_random(self):
        return self.groups is not None

    def __len__(self):
        return len(self.weights)

    def sum(self, values):
        """Weighted sum of node values (fixed order, no error estimate)."""
        v = np.asarray(values)
        return np.sum(self.weights * v)

    def apply(self, func: Callable) -> QuadResult:
        vals = np.asarray(func(self.nodes))
        return self.apply_values(vals, func)

    def apply_values(self, vals, func=None) -> QuadResult:
        wv = self.weights * vals
        value = np.sum(wv)
        floor = 64 * _EPS * float(np.sum(np.abs(wv)))
        if self.groups is not None:
            reps = self.n_groups * np.bincount(self.groups, weights=wv.real, minlength=self.n_groups)
            if np.iscomplexobj(wv):
                reps = reps + 1j * self.n_groups * np.bincount(
                    self.groups, weights=wv.imag, minlength=self.n_groups)
            se = float(np.std(reps, ddof=1) / math.sqrt(self.n_groups))
            return QuadResult(_scalar(value), max(se, floor))
        if self.coarse is not None and func is not None:
            cval = np.sum(self.coarse.weights * np.asarray(func(self.coarse.nodes)))
            return QuadResult(_scalar(value), max(float(abs(value - cval)), floor))
        return QuadResult(_scalar(value), floor)


@dataclass(frozen=True, eq=False)
class InteriorRule(Rule):
    pass


@dataclass(frozen=True, eq=False)
class BoundaryRule(Rule):
    normals: Optional[np.ndarray] = None
    tangents: Optional[np.ndarray] = None  # complex unit tangent, n = 1 only


def _scalar(v):
    v = complex(v) if np.iscomplexobj(v) else float(v)
    return v


def _gauss01(m):
    x, w = roots_legendre(m)
    return 0.5 * (x + 1.0), 0.5 * w


def _gauss_jacobi01(m, beta):
    """Nodes/weights on [0,1] for the weight t^beta."""
    if beta == 0:
        return _gauss01(m)
    x, w = roots_jacobi(m, 0.0, beta)
    return 0.5 * (x + 1.0), w * 2.0 ** (-beta - 1.0)


def _check_resolution(resolution):
    if int(resolution) < 8:
        raise ConfigurationError(f"resolution must be >= 8, got {resolution}")


def default_samples(domain, resolution):
    return max(4096, 2 * int(resolution) ** 3)


# -- interior rules ---------------------------------------------------------

def interior_rule(domain, resolution, scheme=None, samples=None, seed=0, replicates=16):
    """Interior rule on ``domain``.

    n=1 defaults to a polar tensor rule (Gauss-Legendre in radius times a
    uniform angle grid); n=2 defaults to scrambled Sobol points mapped onto the
    ball, with ``RadialSphericalProduct`` available as a deterministic option.
    """
    _check_resolution(resolution)
    if scheme is None:
        scheme = POLAR_TENSOR if domain.n == 1 else QMC
    return _interior(domain, int(resolution), scheme, samples, seed, replicates, True)


def _interior(domain, res, scheme, samples, seed, replicates, with_coarse):
    if scheme == QMC:
        samples = default_samples(domain, res) if samples is None else int(samples)
        u, groups, G = _sobol_replicates(domain.real_dim, samples, replicates, seed)
        nodes = _cube_to_domain(domain, u)
        w = np.full(len(nodes), domain.volume / len(nodes))
        return InteriorRule(domain, nodes, w, QMC, res, None, groups, G, seed)
    if scheme == POLAR_TENSOR:
        if domain.n != 1:
            raise ConfigurationError("PolarTensor is an n=1 scheme")
        nodes, w = _polar_tensor(domain, res)
    elif scheme == RADIAL_SPHERICAL:
        if domain.n != 2:
            raise ConfigurationError("RadialSphericalProduct is an n=2 scheme")
        nodes, w = _radial_spherical(domain, res)
    else:
        raise ConfigurationError(f"unknown interior scheme {scheme!r}")
    coarse = _interior(domain, res // 2, scheme, None, seed, replicates, False) if with_coarse else None
    return InteriorRule(domain, nodes, w, scheme, res, coarse)


def _polar_tensor(domain, res):
    r, wr = _gauss01(res)
    m = 2 * res
    th = 2.0 * np.pi * np.arange(m) / m
    a, b = domain._s
    R, T = np.meshgrid(r, th, indexing="ij")
    nodes = np.stack([domain._c[0] + a * R * np.cos(T), domain._c[1] + b * R * np.sin(T)], -1)
    w = (a * b * r * wr)[:, None] * np.full(m, 2.0 * np.pi / m)[None, :]
    return nodes.reshape(-1, 2), w.reshape(-1)


def _hopf_directions(m_v, m_xi):
    """Product rule on S^3: Gauss in v = sin^2(eta), uniform in both angles."""
    v, wv = _gauss01(m_v)
    xi = 2.0 * np.pi * np.arange(m_xi) / m_xi
    V, X1, X2 = np.meshgrid(v, xi, xi, indexing="ij")
    ce, se = np.sqrt(1.0 - V), np.sqrt(V)
    dirs = np.stack([ce * np.cos(X1), ce * np.sin(X1), se * np.cos(X2), se * np.sin(X2)], -1)
    w = 0.5 * wv[:, None, None] * np.full((m_xi, m_xi), (2.0 * np.pi / m_xi) ** 2)[None]
    return dirs.reshape(-1, 4), w.reshape(-1)


def _radial_spherical(domain, res):
    r, wr = _gauss_jacobi01(max(res // 2, 4), 3.0)
    dirs, wd = _hopf_directions(max(res // 2, 4), res)
    rad = domain._s[0]
    nodes = domain._c + rad * r[:, None, None] * dirs[None, :, :]
    w = rad**4 * wr[:, None] * wd[None, :]
    return nodes.reshape(-1, 4), w.reshape(-1)


def _sobol_replicates(dim, samples, replicates, seed):
    G = max(2, int(replicates))
    m = 1 << max(4, int(math.ceil(math.log2(max(samples, 1) / G))))
    seeds = np.random.SeedSequence(seed).spawn(G)
    blocks = [qmc.Sobol(d=dim, scramble=True, seed=np.random.default_rng(s)).random(m) for s in seeds]
    u = np.concatenate(blocks, axis=0)
    groups = np.repeat(np.arange(G), m)
    return u, groups, G


def _unit_sphere_from_cube(u):
    """Map ``(N, dim-1)`` cube points to uniformly distributed unit directions."""
    if u.shape[1] == 1:
        th = 2.0 * np.pi * u[:, 0]
        return np.stack([np.cos(th), np.sin(th)], -1)
    v, x1, x2 = u[:, 0], 2.0 * np.pi * u[:, 1], 2.0 * np.pi * u[:, 2]
    ce, se = np.sqrt(1.0 - v), np.sqrt(v)
    return np.stack([ce * np.cos(x1), ce * np.sin(x1), se * np.cos(x2), se * np.sin(x2)], -1)


def _cube_to_domain(domain, u):
    dim = domain.real_dim
    rad = u[:, 0] ** (1.0 / dim)
    dirs = _unit_sphere_from_cube(u[:, 1:])
    return domain._c + domain._s * rad[:, None] * dirs


# -- boundary rules ---------------------------------------------------------

def boundary_rule(domain, resolution):
    """Trapezoid rule on the boundary curve (n=1) or Hopf product rule on S^3 (n=2)."""
    _check_resolution(resolution)
    return _boundary(domain, int(resolution), True)


def _boundary(domain, res, with_coarse):
    coarse = _boundary(domain, res // 2, False) if with_coarse else None
    if domain.n == 1:
        t = 2.0 * np.pi * np.arange(res) / res
        pts, dens = boundary_param(domain, t)
        a, b = domain._s
        tang = (-a * np.sin(t) + 1j * b * np.cos(t)) / dens
        return BoundaryRule(domain, pts, dens * 2.0 * np.pi / res, TRAPEZOID, res, coarse,
                            normals=outward_normal(domain, pts), tangents=tang)
    dirs, wd = _hopf_directions(max(res // 2, 4), res)
    rad = domain._s[0]
    pts = domain._c + rad * dirs
    return BoundaryRule(domain, pts, rad**3 * wd, HOPF_PRODUCT, res, coarse,
                        normals=outward_normal(domain, pts))


# -- singular integrals -----------------------------------------------------

def target_rule(rule, target, s, with_coarse=True):
    """Rule in polar coordinates centred at ``target`` covering the whole domain.

    Weights absorb ``rho^{2n-1-s}`` exactly (Gauss-Jacobi, or inverse-CDF
    sampling for QMC) and are pre-multiplied by ``|xi - z|^s``, so integrating
    ``g * K`` with ``|K| ~ |xi - z|^{-s}`` sees only a bounded integrand.
    """
    domain = rule.domain
    z = np.asarray(target, dtype=float)
    beta = domain.real_dim - 1.0 - s
    if rule.is_random:
        return _target_qmc(domain, z, s, beta, len(rule.weights), rule.n_groups, rule.seed)
    return _target_det(domain, z, s, beta, rule.resolution, with_coarse)


def _target_det(domain, z, s, beta, res, with_coarse):
    coarse = _target_det(domain, z, s, beta, res // 2, False) if with_coarse else None
    if domain.n == 1:
        d = max(float(domain.distance_lower_bound(z)), 1e-12)
        m = max(2 * res, int(math.ceil(0.3 * res / math.sqrt(2.0 * d))))
        m = min(m + (m % 2), 1 << 15)
        th = 2.0 * np.pi * np.arange(m) / m
        dirs = np.stack([np.cos(th), np.sin(th)], -1)
        wd = np.full(m, 2.0 * np.pi / m)
        t, wt = _gauss_jacobi01(res, beta)
    else:
        dirs, wd = _hopf_directions(max(res // 2, 4), res)
        t, wt = _gauss_jacobi01(max(res // 2, 4), beta)
    R = domain.ray_length(z, dirs)
    rho = R[:, None] * t[None, :]
    nodes = z + rho[..., None] * dirs[:, None, :]
    w = (wd * R ** (beta + 1.0))[:, None] * wt[None, :] * rho**s
    return InteriorRule(domain, nodes.reshape(-1, domain.real_dim), w.reshape(-1),
                        "TargetPolar", res, coarse)


def _target_qmc(domain, z, s, beta, samples, replicates, seed):
    dim = domain.real_dim
    u, groups, G = _sobol_replicates(dim, samples, replicates, seed + 7919)
    dirs = _unit_sphere_from_cube(u[:, 1:])
    R = domain.ray_length(z, dirs)
    rho = R * u[:, 0] ** (1.0 / (beta + 1.0))
    nodes = z + rho[:, None] * dirs
    w = sphere_area(dim) * R ** (beta + 1.0) / (beta + 1.0) * rho**s / len(rho)
    return InteriorRule(domain, nodes, w, "TargetQMC", 0, None, groups, G, seed)


def distance_kernel(s):
    def kernel(xi, z):
        return np.linalg.norm(xi - z, axis=-1) ** (-s)
    return kernel


def integrate_singular(rule, target, s, integrand, kernel=None) -> QuadResult:
    """Integrate ``integrand(xi) * kernel(xi, z)`` where ``|kernel| <~ |xi - z|^{-s}``.

    ``kernel`` defaults to ``|xi - z|^{-s}``.  Requires ``s < 2n`` and an
    interior target.
    """
    domain = rule.domain
    if s >= domain.real_dim:
        raise InfeasibleSingularityError(f"|xi-z|^-{s} is not integrable in R^{domain.real_dim}")
    z = np.asarray(target, dtype=float)
    if not domain.rho(z) < 0:
        raise OutOfDomainError(f"target {z} is not inside the domain")
    if kernel is None:
        kernel = distance_kernel(s)
        if s <= 0:
            return rule.apply(lambda x: integrand(x) * kernel(x, z))
    tr = target_rule(rule, z, s)
    return tr.apply(lambda x: integrand(x) * kernel(x, z))


def boundary_rule_near(rule, target):
    """Boundary rule fine enough for kernels with a pole at distance ~d from the curve.

    For n=1 the trapezoid rule converges like ``exp(-M d)``, so ``M`` is raised
    to about ``32 / d``; n=2 rules are returned unchanged.
    """
    domain = rule.domain
    if domain.n != 1:
        return rule
    d = max(float(domain.distance_lower_bound(np.asarray(target, dtype=float))), 1e-9)
    m = int(math.ceil(32.0 / d))
    if m <= rule.resolution:
        return rule
    return boundary_rule(domain, min(m + (m % 2), 1 << 17))


@functools.lru_cache(maxsize=32)
def rules_for(domain, resolution=64, seed=0):
    """Cached ``(interior, boundary)`` pair used by the verifiers."""
    ir = interior_rule(domain, resolution, seed=seed)
    br = boundary_rule(domain, max(4 * resolution, 256) if domain.n == 1 else resolution)
    return ir, br
