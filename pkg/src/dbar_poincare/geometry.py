"""Bounded domains in C^n given by quadratic defining functions.

Points are real arrays of length ``2n`` ordered ``(x1, y1, x2, y2, ...)`` with
``z_j = x_j + i y_j``.  Every supported domain is an axis-aligned ellipsoid

    rho(x) = sum_k ((x_k - c_k) / s_k)^2 - 1,

so rho and all of its derivatives are available in closed form.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import ConfigurationError


class DomainKind(str, enum.Enum):
    UNIT_DISC = "UnitDisc"
    ELLIPSE = "Ellipse"
    UNIT_BALL = "UnitBall"
    SCALED_BALL = "ScaledBall"


def to_complex(x):
    """Real points ``(..., 2n)`` to complex coordinates ``(..., n)``."""
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


def to_real(z):
    """Complex coordinates ``(..., n)`` to real points ``(..., 2n)``."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def sphere_area(dim):
    """Surface area of the unit sphere in R^dim, 2 pi^{dim/2} / Gamma(dim/2)."""
    return 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0)


def ellipse_perimeter(a, b):
    val, _ = integrate.quad(
        lambda t: math.sqrt(a * a * math.sin(t) ** 2 + b * b * math.cos(t) ** 2),
        0.0, 2.0 * math.pi, epsabs=1e-13, epsrel=1e-13, limit=200,
    )
    return val


@dataclass(frozen=True)
class DefiningData:
    rho: float
    grad_rho: np.ndarray
    laplacian_rho: float
    complex_hessian: np.ndarray


@dataclass(frozen=True)
class DomainModel:
    """An immutable bounded domain ``{rho < 0}`` in C^n.

    ``center`` and ``semi_axes`` are real ``2n``-tuples describing the
    ellipsoid; ``volume``, ``boundary_area`` and ``diameter`` are filled in by
    :func:`make_domain`.
    """

    n: int
    kind: DomainKind
    rho_params: tuple
    center: tuple
    semi_axes: tuple
    volume: float
    boundary_area: float
    diameter: float
    _c: np.ndarray = field(init=False, repr=False, compare=False)
    _s: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_c", np.asarray(self.center, dtype=float))
        object.__setattr__(self, "_s", np.asarray(self.semi_axes, dtype=float))

    @property
    def real_dim(self):
        return 2 * self.n

    # -- defining function, vectorised over leading axes -------------------
    def rho(self, x):
        u = (np.asarray(x, dtype=float) - self._c) / self._s
        return np.sum(u * u, axis=-1) - 1.0

    def grad_rho(self, x):
        return 2.0 * (np.asarray(x, dtype=float) - self._c) / self._s**2

    def laplacian_rho(self):
        return float(np.sum(2.0 / self._s**2))

    def complex_hessian(self):
        """Constant matrix of d^2 rho / dz_j dzbar_k (diagonal here)."""
        sx, sy = self._s[0::2], self._s[1::2]
        return np.diag(0.5 * (1.0 / sx**2 + 1.0 / sy**2)).astype(complex)

    def dbar_rho(self, x):
        """d rho / d zbar_j = (rho_x + i rho_y) / 2, shape ``(..., n)``."""
        g = self.grad_rho(x)
        return 0.5 * (g[..., 0::2] + 1j * g[..., 1::2])

    def contains(self, x):
        return self.rho(x) < 0.0

    def ray_length(self, x, direction):
        """Distance from interior point(s) ``x`` to the boundary along unit ``direction``."""
        d = (np.asarray(x, dtype=float) - self._c) / self._s
        w = np.asarray(direction, dtype=float) / self._s
        A = np.sum(w * w, axis=-1)
        B = np.sum(d * w, axis=-1)
        C = np.sum(d * d, axis=-1) - 1.0
        return (-B + np.sqrt(B * B - A * C)) / A

    def distance_lower_bound(self, x):
        """-rho / sup|grad rho|, a lower bound for the distance to the boundary."""
        return -self.rho(x) * float(np.min(self._s)) / 2.0

    # -- derived scalars -------------------------------------------------
    @property
    def sup_grad_rho(self):
        return 2.0 / float(np.min(self._s))

    @property
    def inf_boundary_grad_rho(self):
        return 2.0 / float(np.max(self._s))

    @property
    def K(self):
        """(sup|grad rho| + sup|lap rho|) / inf_boundary |grad rho|."""
        return (self.sup_grad_rho + abs(self.laplacian_rho())) / self.inf_boundary_grad_rho

    @property
    def c0(self):
        """Smallest eigenvalue of the complex Hessian of rho (constant here)."""
        return float(np.min(np.linalg.eigvalsh(self.complex_hessian())))


def make_domain(kind, params=(), n=None):
    """Build a :class:`DomainModel`.

    ``UnitDisc``: no params.  ``Ellipse``: ``[a, b]``.  ``UnitBall``: ``n``
    (default 2).  ``ScaledBall``: ``[radius, *center]`` with the center given
    as ``2n`` real coordinates.
    """
    try:
        kind = DomainKind(kind)
    except ValueError:
        raise ConfigurationError(f"unsupported domain kind {kind!r}") from None
    params = tuple(float(p) for p in params)

    if kind is DomainKind.UNIT_DISC:
        if n not in (None, 1):
            raise ConfigurationError("UnitDisc lives in C^1")
        return DomainModel(1, kind, (), (0.0, 0.0), (1.0, 1.0),
                           math.pi, 2.0 * math.pi, 2.0)
    if kind is DomainKind.ELLIPSE:
        if n not in (None, 1):
            raise ConfigurationError("Ellipse lives in C^1")
        if len(params) != 2 or min(params) <= 0:
            raise ConfigurationError("Ellipse needs positive semi-axes [a, b]")
        a, b = params
        return DomainModel(1, kind, (a, b), (0.0, 0.0), (a, b),
                           math.pi * a * b, ellipse_perimeter(a, b), 2.0 * max(a, b))
    if kind is DomainKind.UNIT_BALL:
        n = 2 if n is None else int(n)
        return _ball(kind, n, 1.0, (0.0,) * (2 * n), ())
    # ScaledBall
    if len(params) < 3 or params[0] <= 0:
        raise ConfigurationError("ScaledBall needs [radius > 0, *center(2n reals)]")
    r, center = params[0], params[1:]
    if len(center) % 2:
        raise ConfigurationError("ScaledBall center must have 2n real coordinates")
    nn = len(center) // 2
    if n is not None and int(n) != nn:
        raise ConfigurationError("ScaledBall center length does not match n")
    return _ball(kind, nn, r, center, params)


def _ball(kind, n, r, center, params):
    if n not in (1, 2):
        raise ConfigurationError(f"complex dimension n={n} unsupported (n in {{1, 2}})")
    dim = 2 * n
    vol = sphere_area(dim) / dim * r**dim
    area = sphere_area(dim) * r ** (dim - 1)
    return DomainModel(n, kind, params, tuple(center), (r,) * dim, vol, area, 2.0 * r)


def eval_defining(domain, z):
    """rho, grad rho, Laplacian and complex Hessian at a single point."""
    z = np.asarray(z, dtype=float)
    return DefiningData(
        rho=float(domain.rho(z)),
        grad_rho=domain.grad_rho(z),
        laplacian_rho=domain.laplacian_rho(),
        complex_hessian=domain.complex_hessian(),
    )


def boundary_param(domain, t):
    """Boundary point(s) and surface density for parameter(s) ``t``.

    n=1: ``t`` in [0, 2pi), counterclockwise.  n=2: ``t = (eta, xi1, xi2)``
    Hopf coordinates, ``z1 = r cos(eta) e^{i xi1}``, ``z2 = r sin(eta) e^{i xi2}``
    with eta in [0, pi/2].  Integrating ``density dt`` reproduces dS.
    """
    c, s = domain._c, domain._s
    if domain.n == 1:
        t = np.asarray(t, dtype=float)
        a, b = s
        pts = np.stack([c[0] + a * np.cos(t), c[1] + b * np.sin(t)], axis=-1)
        dens = np.sqrt(a * a * np.sin(t) ** 2 + b * b * np.cos(t) ** 2)
        return pts, dens
    t = np.asarray(t, dtype=float)
    eta, x1, x2 = t[..., 0], t[..., 1], t[..., 2]
    r = s[0]
    pts = np.stack([
        c[0] + r * np.cos(eta) * np.cos(x1), c[1] + r * np.cos(eta) * np.sin(x1),
        c[2] + r * np.sin(eta) * np.cos(x2), c[3] + r * np.sin(eta) * np.sin(x2),
    ], axis=-1)
    dens = r**3 * np.sin(eta) * np.cos(eta)
    return pts, dens


def outward_normal(domain, x):
    g = domain.grad_rho(x)
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def sample_interior(domain, count, rng):
    """Uniform random points in the domain (rejection from the bounding box)."""
    out = []
    lo, hi = domain._c - domain._s, domain._c + domain._s
    need = count
    while need > 0:
        pts = rng.uniform(lo, hi, size=(max(2 * need, 16), domain.real_dim))
        pts = pts[domain.rho(pts) < 0]
        out.append(pts[:need])
        need -= len(pts[:need])
    return np.concatenate(out, axis=0)
