"""Test functions and weights with exact derivatives.

A field is a finite sum of monomials ``c z^alpha zbar^beta`` or a Gaussian
bump; weights are finite sums of ``c |z - z0|^2`` and ``a Re(z_1)`` atoms, so
their complex Hessians are constant matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, DegeneracyError
from .geometry import sample_interior, to_complex

POLY_FAMILIES = ("Monomial", "HoloPoly", "MixedPoly", "Constant")


class FieldValues(NamedTuple):
    value: np.ndarray  # (...,)
    dz: np.ndarray  # (..., n)   d f / d z_j
    dbar: np.ndarray  # (..., n)  d f / d zbar_j
    grad: np.ndarray  # (..., 2n) d f / d x_j, d f / d y_j interleaved


@dataclass(frozen=True)
class FieldSpec:
    family: str
    n: int
    terms: tuple = ()  # ((alpha, beta, coeff), ...) for polynomial families
    center: tuple = ()  # GaussianBump: complex center
    width: float = 0.0
    label: str = ""

    def __post_init__(self):
        for a, b, _ in self.terms:
            if len(a) != self.n or len(b) != self.n:
                raise ConfigurationError("multi-index length must equal n")
        if self.family == "GaussianBump" and not self.width > 0:
            raise ConfigurationError("GaussianBump width must be positive")

    @property
    def is_polynomial(self):
        return self.family in POLY_FAMILIES

    @property
    def is_holomorphic(self):
        return self.is_polynomial and all(not any(b) for _, b, _ in self.terms)

    def __add__(self, other):
        return mixed_poly(_merge(self.terms + other.terms), self.n)

    def __mul__(self, other):
        if isinstance(other, FieldSpec):
            prod = [(tuple(np.add(a1, a2)), tuple(np.add(b1, b2)), c1 * c2)
                    for a1, b1, c1 in self.terms for a2, b2, c2 in other.terms]
            return mixed_poly(_merge(prod), self.n)
        return FieldSpec(self.family, self.n, tuple((a, b, c * other) for a, b, c in self.terms),
                         self.center, self.width, self.label)

    __rmul__ = __mul__

    def to_dict(self):
        if self.family == "GaussianBump":
            return {"family": self.family, "n": self.n,
                    "center": [[c.real, c.imag] for c in self.center], "width": self.width}
        return {"family": self.family, "n": self.n,
                "terms": [{"alpha": list(a), "beta": list(b), "coeff": [c.real, c.imag]}
                          for a, b, c in self.terms]}


def _merge(terms):
    acc = {}
    for a, b, c in terms:
        key = (tuple(int(x) for x in a), tuple(int(x) for x in b))
        acc[key] = acc.get(key, 0) + complex(c)
    return tuple((a, b, c) for (a, b), c in sorted(acc.items()) if c != 0)


def monomial(alpha, beta, coeff=1.0):
    alpha, beta = tuple(int(x) for x in alpha), tuple(int(x) for x in beta)
    if min(alpha + beta, default=0) < 0:
        raise ConfigurationError("multi-indices must be non-negative")
    return FieldSpec("Monomial", len(alpha), ((alpha, beta, complex(coeff)),))


def holo_poly(coefficients, n=1):
    """``sum_k c_k z^k`` for n=1, or a ``{alpha: c}`` mapping for any n."""
    if isinstance(coefficients, dict):
        terms = [(tuple(a), (0,) * n, c) for a, c in coefficients.items()]
    else:
        if n != 1:
            raise ConfigurationError("list coefficients are only meaningful for n=1")
        terms = [((k,), (0,), c) for k, c in enumerate(coefficients)]
    return FieldSpec("HoloPoly", n, _merge(terms))


def mixed_poly(terms, n):
    if isinstance(terms, dict):
        terms = [(a, b, c) for (a, b), c in terms.items()]
    return FieldSpec("MixedPoly", n, _merge(terms))


def constant(c, n=1):
    return FieldSpec("Constant", n, _merge([((0,) * n, (0,) * n, c)]))


def gaussian_bump(center, width):
    center = tuple(complex(c) for c in np.atleast_1d(center))
    return FieldSpec("GaussianBump", len(center), center=center, width=float(width))


def defining_polynomial(domain):
    """rho of an axis-aligned ellipsoid written in z, zbar."""
    n = domain.n
    out = constant(-1.0, n)
    for j in range(n):
        cx, cy = domain._c[2 * j], domain._c[2 * j + 1]
        sx, sy = domain._s[2 * j], domain._s[2 * j + 1]
        e = tuple(int(k == j) for k in range(n))
        zero = (0,) * n
        # x - cx = (z + zbar)/2 - cx ;  y - cy = (z - zbar)/(2i) - cy
        X = mixed_poly([(e, zero, 0.5), (zero, e, 0.5), (zero, zero, -cx)], n)
        Y = mixed_poly([(e, zero, -0.5j), (zero, e, 0.5j), (zero, zero, -cy)], n)
        out = out + (X * X) * (1.0 / sx**2) + (Y * Y) * (1.0 / sy**2)
    return out


def vanishing_on_boundary(domain, poly):
    """``(-rho) * poly``: a field vanishing identically on the boundary."""
    return defining_polynomial(domain) * (-1.0) * poly


def _powers(z, kmax):
    """``z**k`` for k = 0..kmax stacked on a new leading axis."""
    out = np.empty((kmax + 1,) + z.shape, dtype=complex)
    out[0] = 1.0
    for k in range(1, kmax + 1):
        out[k] = out[k - 1] * z
    return out


def eval_field(spec, x):
    """Value and exact derivatives of ``spec`` at real point(s) ``x``."""
    x = np.asarray(x, dtype=float)
    z = to_complex(x)
    n = spec.n
    lead = z.shape[:-1]
    if spec.family == "GaussianBump":
        d = z - np.asarray(spec.center)
        w2 = spec.width**2
        g = np.exp(-np.sum(np.abs(d) ** 2, axis=-1) / w2)
        dbar = -d / w2 * g[..., None]
        dz = -np.conj(d) / w2 * g[..., None]
    else:
        g = np.zeros(lead, dtype=complex)
        dz = np.zeros(lead + (n,), dtype=complex)
        dbar = np.zeros(lead + (n,), dtype=complex)
        if spec.terms:
            amax = max(max(a) for a, _, _ in spec.terms)
            bmax = max(max(b) for _, b, _ in spec.terms)
            zp = _powers(z, amax)
            zbp = _powers(np.conj(z), bmax)
            for a, b, c in spec.terms:
                factors = [zp[a[j], ..., j] * zbp[b[j], ..., j] for j in range(n)]
                g = g + c * np.prod(factors, axis=0)
                for j in range(n):
                    others = np.prod([factors[k] for k in range(n) if k != j], axis=0) if n > 1 else 1.0
                    if b[j]:
                        dbar[..., j] += c * b[j] * zp[a[j], ..., j] * zbp[b[j] - 1, ..., j] * others
                    if a[j]:
                        dz[..., j] += c * a[j] * zp[a[j] - 1, ..., j] * zbp[b[j], ..., j] * others
    grad = np.empty(lead + (2 * n,), dtype=complex)
    grad[..., 0::2] = dz + dbar
    grad[..., 1::2] = 1j * (dz - dbar)
    return FieldValues(g, dz, dbar, grad)


# -- weights ---------------------------------------------------------------

@dataclass(frozen=True)
class WeightSpec:
    family: str
    n: int
    c: float = 0.0
    center: tuple = ()
    a: float = 0.0
    parts: tuple = ()

    def atoms(self):
        if self.family == "Sum":
            return tuple(x for p in self.parts for x in p.atoms())
        return (self,)

    def __add__(self, other):
        return weight_sum([self, other])

    def to_dict(self):
        if self.family == "Sum":
            return {"family": "Sum", "n": self.n, "parts": [p.to_dict() for p in self.parts]}
        if self.family == "Quadratic":
            return {"family": "Quadratic", "n": self.n, "c": self.c,
                    "center": [[z.real, z.imag] for z in self.center]}
        if self.family == "LinearReal":
            return {"family": "LinearReal", "n": self.n, "a": self.a}
        return {"family": "Zero", "n": self.n}


def zero_weight(n=1):
    return WeightSpec("Zero", n)


def quadratic_weight(c, center=None, n=1):
    center = (0j,) * n if center is None else tuple(complex(z) for z in np.atleast_1d(center))
    return WeightSpec("Quadratic", len(center), c=float(c), center=center)


def linear_real_weight(a, n=1):
    return WeightSpec("LinearReal", n, a=float(a))


def weight_sum(parts):
    parts = tuple(parts)
    return WeightSpec("Sum", parts[0].n, parts=parts)


@dataclass(frozen=True)
class Weight:
    """Evaluator for a weight: value, d/dz, constant complex Hessian."""

    spec: WeightSpec
    hessian: np.ndarray = field(repr=False)

    def value(self, x):
        z = to_complex(x)
        out = np.zeros(z.shape[:-1])
        for at in self.spec.atoms():
            if at.family == "Quadratic":
                out = out + at.c * np.sum(np.abs(z - np.asarray(at.center)) ** 2, axis=-1)
            elif at.family == "LinearReal":
                out = out + at.a * z[..., 0].real
        return out

    def dz(self, x):
        """d phi / d z_j."""
        z = to_complex(x)
        out = np.zeros(z.shape, dtype=complex)
        for at in self.spec.atoms():
            if at.family == "Quadratic":
                out = out + at.c * np.conj(z - np.asarray(at.center))
            elif at.family == "LinearReal":
                out[..., 0] += 0.5 * at.a
        return out

    def inverse_hessian(self):
        eig = np.linalg.eigvalsh(self.hessian)
        if eig.min() <= 1e-12:
            raise DegeneracyError("complex Hessian of the weight is singular")
        return np.linalg.inv(self.hessian)

    def quadratic_form(self):
        """``(C, g, k)`` with phi(x) = C |x|^2 + g . x + k in real coordinates."""
        C, k = 0.0, 0.0
        g = np.zeros(2 * self.spec.n)
        for at in self.spec.atoms():
            if at.family == "Quadratic":
                w = np.empty(2 * self.spec.n)
                w[0::2] = np.real(at.center)
                w[1::2] = np.imag(at.center)
                C += at.c
                g = g - 2.0 * at.c * w
                k += at.c * float(w @ w)
            elif at.family == "LinearReal":
                g[0] += at.a
        return C, g, k


def make_weight(spec):
    H = np.zeros((spec.n, spec.n), dtype=complex)
    for at in spec.atoms():
        if at.family == "Quadratic":
            H = H + at.c * np.eye(spec.n)
    return Weight(spec, H)


class PshReport(NamedTuple):
    classification: str  # "strictly-psh" | "psh" | "not-psh"
    min_eigenvalue: float


def check_psh(spec, domain, samples=32, seed=0):
    if samples < 10:
        raise ConfigurationError("check_psh needs at least 10 samples")
    w = make_weight(spec)
    pts = sample_interior(domain, samples, np.random.default_rng(seed))
    # Hessian is constant for every supported family; evaluate per sample anyway.
    lam = min(float(np.linalg.eigvalsh(w.hessian).min()) for _ in pts)
    if lam > 1e-12:
        cls = "strictly-psh"
    elif lam >= -1e-12:
        cls = "psh"
    else:
        cls = "not-psh"
    return PshReport(cls, lam)


def weight_range(weight, domain):
    """(inf, sup) of the weight over the closed domain."""
    C, g, k = weight.quadratic_form()
    phi = lambda x: C * np.sum(x * x, axis=-1) + x @ g + k
    cands = []
    if C != 0:
        xs = -g / (2.0 * C)
        if domain.rho(xs) <= 0:
            cands.append(float(phi(xs)))
    if domain.n == 2 or domain.kind.value in ("UnitDisc", "ScaledBall"):
        # sphere |x - c| = r: phi = const + r (2 C c + g) . u
        c, r = domain._c, float(domain._s[0])
        base = C * (float(c @ c) + r * r) + float(g @ c) + k
        lin = r * float(np.linalg.norm(2.0 * C * c + g))
        cands += [base - lin, base + lin]
    else:
        t = np.linspace(0.0, 2.0 * np.pi, 20001)
        a, b = domain._s
        pts = np.stack([domain._c[0] + a * np.cos(t), domain._c[1] + b * np.sin(t)], -1)
        v = phi(pts)
        cands += [float(v.min()), float(v.max())]
    return min(cands), max(cands)


def exp_weight_norms(weight, domain, q, scale=1.0, irule=None, brule=None):
    """``(||e^{scale phi}||_{Lq(Omega)}, ||e^{scale phi}||_{Lq(dOmega)})``.

    ``q = inf`` uses the exact range of phi over the closure.
    """
    if math.isinf(q):
        lo, hi = weight_range(weight, domain)
        top = math.exp(scale * hi) if scale >= 0 else math.exp(scale * lo)
        return top, top
    from .quadrature import boundary_rule, interior_rule

    irule = irule or interior_rule(domain, 64)
    brule = brule or boundary_rule(domain, 256)
    ni = float(irule.sum(np.exp(q * scale * weight.value(irule.nodes)))) ** (1.0 / q)
    nb = float(brule.sum(np.exp(q * scale * weight.value(brule.nodes)))) ** (1.0 / q)
    return ni, nb


# -- JSON ------------------------------------------------------------------

def _cplx(v):
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def field_from_dict(d):
    fam = d.get("family")
    n = int(d.get("n", 1))
    try:
        if fam == "GaussianBump":
            return gaussian_bump([_cplx(c) for c in d["center"]], d["width"])
        if fam in POLY_FAMILIES and "terms" in d:
            # the form written by FieldSpec.to_dict
            terms = [(t["alpha"], t["beta"], _cplx(t.get("coeff", 1.0))) for t in d["terms"]]
            return FieldSpec(fam, n, mixed_poly(terms, n).terms)
        if fam == "Constant":
            return constant(_cplx(d.get("c", 1.0)), n)
        if fam == "Monomial":
            return monomial(d["alpha"], d["beta"], _cplx(d.get("coeff", 1.0)))
        if fam == "HoloPoly":
            return holo_poly([_cplx(c) for c in d["coefficients"]], n)
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed field spec {d!r}: {exc}") from None
    raise ConfigurationError(f"unknown field family {fam!r}")


def weight_from_dict(d):
    fam = d.get("family")
    n = int(d.get("n", 1))
    try:
        if fam == "Zero":
            return zero_weight(n)
        if fam == "Quadratic":
            center = d.get("center")
            center = None if center is None else [_cplx(c) for c in center]
            return quadratic_weight(d["c"], center, n)
        if fam == "LinearReal":
            return linear_real_weight(d["a"], n)
        if fam == "Sum":
            return weight_sum([weight_from_dict(p) for p in d["parts"]])
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed weight spec {d!r}: {exc}") from None
    raise ConfigurationError(f"unknown weight family {fam!r}")
