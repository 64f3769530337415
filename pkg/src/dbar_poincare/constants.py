"""Explicit constants assembled step by step from the kernel and operator bounds.

Notation: ``N = 2n`` is the real dimension, ``omega_N`` the area of the unit
sphere in R^N, ``V = |Omega|`` and ``A = |dOmega|``.  ``M(a)`` and ``N(a)`` are
the suprema over targets of ``int_Omega |xi - z|^{-N+a}`` and
``int_dOmega |xi - z|^{-N+1+a} dS``.  Their explicit upper bounds are
:func:`kernel_bound_interior` and :func:`kernel_bound_boundary`.

Every assembled constant is a :class:`ConstantReport` whose ``chain`` lists
factors ``(tag, value, power)`` with ``report.value == prod value**power``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError, PshError, WindowError
from .geometry import sphere_area

INF = math.inf

UNWEIGHTED = "unweighted"
WEIGHTED = "weighted"
REAL = "real"


# -- provenance ------------------------------------------------------------

@dataclass(frozen=True)
class ChainEntry:
    tag: str
    value: float
    power: float = 1.0
    note: str = ""

    def to_dict(self):
        return {"tag": self.tag, "value": self.value, "power": self.power, "note": self.note}


@dataclass(frozen=True)
class ConstantReport:
    name: str
    value: float
    chain: tuple
    inputs: dict = field(default_factory=dict)
    parts: dict = field(default_factory=dict)

    def chain_product(self):
        logs = sum(e.power * math.log(e.value) for e in self.chain)
        return math.exp(logs)

    def check_chain(self, rtol=1e-12):
        prod = self.chain_product()
        return abs(prod - self.value) <= rtol * abs(self.value)

    def to_dict(self):
        return {
            "name": self.name,
            "value": self.value,
            "chain": [e.to_dict() for e in self.chain],
            "inputs": {k: _jsonable(v) for k, v in self.inputs.items()},
            "parts": {k: p.to_dict() for k, p in self.parts.items()},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _report(name, chain, inputs=None, parts=None):
    chain = tuple(chain)
    value = 1.0
    for e in chain:
        value *= e.value ** e.power
    if not (value > 0 and math.isfinite(value)):
        raise ConfigurationError(f"{name}: assembled value {value} is not positive and finite")
    return ConstantReport(name, value, chain, dict(inputs or {}), dict(parts or {}))


def _ref(tag, report, power=1.0):
    """Chain entry standing for a sub-report."""
    return ChainEntry(tag, report.value, power, report.name)


# -- kernel bounds -----------------------------------------------------------

def kernel_bound_interior(a, n_real, volume):
    """Upper bound ``(omega/a)(N V/omega)^{a/N}`` for ``sup_z int_D |x - z|^{-N+a}``."""
    if not 0 < a <= n_real:
        raise WindowError("0<a<=N", f"a={a}, N={n_real}")
    w = sphere_area(n_real)
    return w / a * (n_real * volume / w) ** (a / n_real)


def kernel_bound_boundary(a, n_real, volume, K):
    """Upper bound for ``sup_z int_dD |x - z|^{-N+1+a} dS`` on a C^2 domain.

    ``(K N omega/a)(N V/omega)^{a/N}(1 + V/omega)`` for ``0 < a <= N - 1``.
    """
    if n_real < 2 or not 0 < a <= n_real - 1:
        raise WindowError("0<a<=N-1", f"a={a}, N={n_real}")
    if not K > 0:
        raise ConfigurationError("K must be positive")
    w = sphere_area(n_real)
    return K * n_real * w / a * (n_real * volume / w) ** (a / n_real) * (1.0 + volume / w)


def _M(a, n, V):
    return ChainEntry(f"interior_kernel_bound[a={a:.12g}]", kernel_bound_interior(a, 2 * n, V))


def _N(a, n, V, K):
    return ChainEntry(f"boundary_kernel_bound[a={a:.12g}]", kernel_bound_boundary(a, 2 * n, V, K))


# -- exponent windows --------------------------------------------------------

def check_sobolev_window(n, p, q, r):
    if not 1 <= p < INF:
        raise WindowError("1<=p<inf", f"p={p}")
    if not 1 <= q < INF:
        raise WindowError("1<=q<inf", f"q={q}")
    if not 1 <= r < INF:
        raise WindowError("1<=r<inf", f"r={r}")
    if not q * (2 * n - p) < 2 * n * p:
        raise WindowError("q(2n-p)<2np", f"n={n}, p={p}, q={q}")
    if not q * (2 * n - 1) < 2 * n * r:
        raise WindowError("q(2n-1)<2nr", f"n={n}, q={q}, r={r}")


def check_max_modulus_window(n, p, q):
    if not 1 < p < INF:
        raise WindowError("1<p<inf", f"p={p}")
    if not 1 <= q < INF:
        raise WindowError("1<=q<inf", f"q={q}")
    if not q * (2 * n - 1) < 2 * n * p:
        raise WindowError("q(2n-1)<2np", f"n={n}, p={p}, q={q}")


def check_weighted_window(n, p, q):
    if not 1 < p < INF:
        raise WindowError("1<p<inf", f"p={p}")
    lo = max((2 * n - 1) * (p - 1), 2 * n * (p - 1) / p)
    if not lo < q:
        raise WindowError("max{(2n-1)(p-1),2n(p-1)/p}<q", f"n={n}, p={p}, q={q}")


@dataclass(frozen=True)
class ExponentSplit:
    """Auxiliary exponents of a Hoelder splitting.

    ``b`` shifts the kernel power between the factors; ``a_split``, ``q0`` and
    ``r0`` are the three-function Hoelder exponents (``q0 = inf`` when the two
    outer exponents coincide).
    """

    case: str
    n: int
    p: float
    q: float
    r: Optional[float]
    b: float
    a_split: Optional[float] = None
    q0: Optional[float] = None
    r0: Optional[float] = None
    kernel_a: tuple = ()  # the two kernel parameters a entering the bound


def _side(lo, x, hi, ineq):
    tol = 1e-12 * max(1.0, abs(hi))
    if not (x > lo and x <= hi + tol):
        raise WindowError(ineq, f"value {x}")


def interior_split(n, p, q):
    """Splitting for the interior operator with ``q >= p > 1``."""
    if not q >= p > 1:
        raise ConfigurationError("interior split needs q >= p > 1")
    M = max(-2 * n / q, 1 - 2 * n)
    b = 0.5 * (M + min((p - 2 * n) / p, 0.0))
    _side(0, 2 * n + q * b, 2 * n, "0<2n+qb<=2n")
    if p < 2 * n:
        # p - 2n - pb = (p - 2n - pM)/2, written to avoid cancellation near p = 1
        c = n * (p - 1) if M == 1 - 2 * n else 0.5 * (p - 2 * n - p * M)
    else:
        c = p - 2 * n - p * b
    _side(0, c, 2 * n * (p - 1), "0<p-2n-pb<=2n(p-1)")
    a = p / q
    q0 = INF if q == p else p / (1 - a)
    r0 = p / (p - 1)
    ka = (2 * n + q * b, n if (p < 2 * n and M == 1 - 2 * n) else c / (p - 1))
    return ExponentSplit("interior", n, p, q, None, b, a, q0, r0, ka)


def boundary_split(n, q, r):
    """Splitting for the boundary operator with ``q >= r > 1``."""
    if not q >= r > 1:
        raise ConfigurationError("boundary split needs q >= r > 1")
    M = max(-2 * n / q, 1 - 2 * n)
    b = 0.5 * (M + (1 - 2 * n) / r)
    _side(0, 2 * n + q * b, 2 * n, "0<2n+qb<=2n")
    # 1 - 2n - rb = (1 - 2n - rM)/2, exact on the branch M = 1 - 2n
    c = 0.5 * (2 * n - 1) * (r - 1) if M == 1 - 2 * n else 0.5 * (1 - 2 * n - r * M)
    _side(0, c, (2 * n - 1) * (r - 1), "0<1-2n-rb<=(2n-1)(r-1)")
    a = r / q
    q0 = INF if q == r else r / (1 - a)
    r0 = r / (r - 1)
    ka = (2 * n + q * b, (2 * n - 1) / 2 if M == 1 - 2 * n else c / (r - 1))
    return ExponentSplit("boundary", n, q, q, r, b, a, q0, r0, ka)


def weighted_interior_split(n, p, q):
    M = max(-2 * n / p, 1 - 2 * n)
    inf = math.isinf(q)
    qq = 1.0 if inf else (INF if q == 1 else q / (q - 1))
    last = 1 - 2 * n + (2 * n * (p - 1) / p if inf else 2 * n * (p - 1) * (q - 1) / (p * q))
    b = 0.5 * (M + min(last, 0.0))
    a1 = 2 * n + p * b
    if last < 0:
        # a2 = n + (1 - 2n - M) p q' / (2(p - 1)), free of the 0/0 at q = 1
        gap = 1 - 2 * n - M
        a2 = n + (0.0 if gap == 0 else 0.5 * gap * qq * p / (p - 1))
    else:
        a2 = 2 * n + qq * (-2 * n + 1 - b) * p / (p - 1)
    _side(0, a1, 2 * n, "0<2n+pb<=2n")
    _side(0, a2, 2 * n, "0<2n+q(-2n+1-b)p/((q-1)(p-1))<=2n")
    return ExponentSplit("weighted_interior", n, p, q, None, b, kernel_a=(a1, a2)), a1, a2


def weighted_boundary_split(n, p, q):
    M = max(-2 * n / p, 1 - 2 * n)
    inf = math.isinf(q)
    last = -(2 * n - 1) / p if inf else (2 * n - 1) * (1 - p - q) / (p * q)
    b = 0.5 * (M + min(last, 0.0))
    a1 = 2 * n + p * b
    if M == 1 - 2 * n:
        a3 = (2 * n - 1) / 2  # the numerator factors as (2n-1)(p-1)(q-1)/2
    elif inf:
        a3 = -0.5 * ((2 * n - 1) + p * M) / (p - 1)
    elif q == 1:
        raise WindowError("0<a3<=2n-1", f"n={n}, p={p}, q=1")
    else:
        a3 = 0.5 * ((2 * n - 1) * (1 - p - q) - p * q * M) / ((p - 1) * (q - 1))
    _side(0, a1, 2 * n, "0<2n+pb<=2n")
    _side(0, a3, 2 * n - 1, "0<a3<=2n-1")
    return ExponentSplit("weighted_boundary", n, p, q, None, b, kernel_a=(a1, a3)), a1, a3


# -- operator bounds ---------------------------------------------------------

def interior_operator_bound(n, p, q, volume):
    """``C`` with ``||B_Omega f||_q <= C ||f||_p`` for the interior operator."""
    V = volume
    inputs = {"n": n, "p": p, "q": q, "volume": V}
    if p == 1:
        a = 2 * n - q * (2 * n - 1)
        if not a > 0:
            raise WindowError("q(2n-p)<2np", f"n={n}, p=1, q={q}")
        return _report("interior_operator_bound", [
            ChainEntry("minkowski_integral_inequality", 1.0, 1.0, "p=1: sup over sources"),
            ChainEntry(f"interior_kernel_bound[a={a:.12g}]", kernel_bound_interior(a, 2 * n, V), 1.0 / q),
        ], inputs)
    chain = []
    qe = q
    if q < p:
        # ||g||_q <= |Omega|^{1/q - 1/p} ||g||_p, then bound at q = p
        chain.append(ChainEntry("holder_reduction", V, 1.0 / q - 1.0 / p, "q<p reduced to q=p"))
        qe = p
    sp = interior_split(n, p, qe)
    b = sp.b
    chain.append(ChainEntry(f"split_b={b:.12g}", 1.0, 1.0))
    M1 = _M(sp.kernel_a[0], n, V)
    M2 = _M(sp.kernel_a[1], n, V)
    chain += [ChainEntry(M1.tag, M1.value, 1.0 / qe), ChainEntry(M2.tag, M2.value, (p - 1) / p)]
    inputs["b"] = b
    return _report("interior_operator_bound", chain, inputs)


def boundary_operator_bound(n, q, r, volume, boundary_area, K):
    """``C`` with ``||B_dOmega f||_{L^q(Omega)} <= C ||f||_{L^r(dOmega)}``."""
    V, A = volume, boundary_area
    inputs = {"n": n, "q": q, "r": r, "volume": V, "boundary_area": A, "K": K}
    if r == 1:
        a = 2 * n - q * (2 * n - 1)
        if not a > 0:
            raise WindowError("q(2n-1)<2nr", f"n={n}, q={q}, r=1")
        return _report("boundary_operator_bound", [
            ChainEntry("minkowski_integral_inequality", 1.0, 1.0, "r=1: sup over boundary sources"),
            ChainEntry(f"interior_kernel_bound[a={a:.12g}]", kernel_bound_interior(a, 2 * n, V), 1.0 / q),
        ], inputs)
    chain = []
    qe = q
    if q < r:
        chain.append(ChainEntry("holder_reduction", V, 1.0 / q - 1.0 / r, "q<r reduced to q=r"))
        qe = r
    sp = boundary_split(n, qe, r)
    b = sp.b
    chain.append(ChainEntry(f"split_b={b:.12g}", 1.0, 1.0))
    M1 = _M(sp.kernel_a[0], n, V)
    N1 = _N(sp.kernel_a[1], n, V, K)
    chain += [
        ChainEntry(M1.tag, M1.value, 1.0 / qe),
        ChainEntry("boundary_area_factor", max(1.0, A), 1.0 / qe, "max(1,|dOmega|)"),
        ChainEntry(N1.tag, N1.value, (r - 1) / r),
    ]
    inputs["b"] = b
    return _report("boundary_operator_bound", chain, inputs)


def bm_operator_bounds(n, p, q, r, volume, boundary_area, K):
    """Interior and boundary operator-norm bounds after checking the windows."""
    check_sobolev_window(n, p, q, r)
    return (interior_operator_bound(n, p, q, volume),
            boundary_operator_bound(n, q, r, volume, boundary_area, K))


def weighted_operator_bounds(n, p, q, volume, boundary_area, K, weight_norms):
    """Weighted bound ``L = max(C_i, C_b) (W_Omega^{p-1} + W_dOmega^{p-1})``.

    ``C_i`` and ``C_b`` are the weight-free parts (reported in ``parts``);
    ``weight_norms`` are ``||e^{phi/(p-1)}||_q`` over the domain and its boundary.
    """
    check_weighted_window(n, p, q)
    W_in, W_bd = (float(w) for w in weight_norms)
    if not (math.isfinite(W_in) and math.isfinite(W_bd)) or min(W_in, W_bd) <= 0:
        raise ConfigurationError("weight norms must be positive and finite")
    V, A = volume, boundary_area
    ex = (p - 1.0) if math.isinf(q) else (q - 1.0) * (p - 1.0) / q

    spi, a1, a2 = weighted_interior_split(n, p, q)
    Ci = _report("weighted_interior_bound", [
        ChainEntry(f"split_b={spi.b:.12g}", 1.0), _M(a1, n, V),
        ChainEntry(_M(a2, n, V).tag, _M(a2, n, V).value, ex),
    ], {"b": spi.b})

    spb, a1b, a3 = weighted_boundary_split(n, p, q)
    Nb = _N(a3, n, V, K)
    Cb = _report("weighted_boundary_bound", [
        ChainEntry(f"split_b={spb.b:.12g}", 1.0), _M(a1b, n, V),
        ChainEntry("boundary_area_factor", max(1.0, A), 1.0, "max(1,|dOmega|)"),
        ChainEntry(Nb.tag, Nb.value, ex),
    ], {"b": spb.b})

    big = Ci if Ci.value >= Cb.value else Cb
    wsum = W_in ** (p - 1) + W_bd ** (p - 1)
    return _report("weighted_operator_bound", [
        _ref("max_weight_free_bound", big),
        ChainEntry("weight_norm_sum", wsum, 1.0, "W_Omega^{p-1} + W_dOmega^{p-1}"),
    ], {"n": n, "p": p, "q": q, "volume": V, "boundary_area": A, "K": K,
        "weight_norm_interior": W_in, "weight_norm_boundary": W_bd},
        {"interior": Ci, "boundary": Cb})


# -- Poincare deltas ---------------------------------------------------------

def bm_prefactor(n):
    """(n-1)!/(2 pi)^n times the 2^n measure factor, i.e. (n-1)!/pi^n."""
    return math.factorial(n - 1) / math.pi**n


def _prefactor_entries(n):
    return [
        ChainEntry("reproduction_prefactor", bm_prefactor(n), -1.0, "(n-1)!/(2pi)^n * 2^n"),
        ChainEntry("component_count", float(n), -1.0, "sum over n kernel components"),
    ]


def poincare_delta(domain, p, q=None, r=None, mode=UNWEIGHTED, weight=None,
                   weight_norms=None, q_weight=None):
    """Explicit delta for the dbar Poincare/Sobolev inequalities.

    ``unweighted`` / ``real``: exponents ``(p, q, r)``.  When ``p == q == r`` the
    report is for the integral form ``delta int|f|^p <= int|dbar f|^p + int_d |f|^p``
    (``inputs['form'] == 'integral'``); otherwise for the norm form
    ``delta ||f||_q <= ||dbar f||_p + ||f||_{L^r(d)}``.  In ``real`` mode
    ``dbar f`` is replaced by the real gradient.

    ``weighted``: exponent ``p`` and integrability exponent ``q_weight`` of the
    weight; the value is the full coefficient in front of ``int|f|^p e^{-phi}``.
    ``weight`` is an evaluator from :func:`fields.make_weight`; ``weight_norms``
    are computed by quadrature when omitted.
    """
    n = domain.n
    if mode == WEIGHTED:
        return _weighted_delta(domain, p, q_weight if q_weight is not None else q, weight, weight_norms)
    if mode not in (UNWEIGHTED, REAL):
        raise ConfigurationError(f"unknown mode {mode!r}")
    q = p if q is None else q
    r = p if r is None else r
    Bi, Bb = bm_operator_bounds(n, p, q, r, domain.volume, domain.boundary_area, domain.K)
    big = Bi if Bi.value >= Bb.value else Bb
    chain = _prefactor_entries(n) + [_ref("max_operator_bound", big, -1.0)]
    inputs = {"n": n, "p": p, "q": q, "r": r, "volume": domain.volume,
              "boundary_area": domain.boundary_area, "K": domain.K, "mode": mode}
    if mode == REAL:
        chain.append(ChainEntry("gradient_domination", 1.0, 1.0, "|dbar f| <= |grad f|/sqrt2 <= |grad f|"))
    if p == q == r:
        norm = _report("delta_norm_form", chain, inputs)
        inputs["form"] = "integral"
        chain = [_ref("delta_norm_form", norm, p),
                 ChainEntry("power_mean_split", 2.0, 1.0 - p, "(a+b)^p <= 2^{p-1}(a^p+b^p)")]
        return _report(f"poincare_delta[{mode}]", chain, inputs,
                       {"interior": Bi, "boundary": Bb, "norm_form": norm})
    inputs["form"] = "norm"
    return _report(f"poincare_delta[{mode}]", chain, inputs, {"interior": Bi, "boundary": Bb})


def _weighted_delta(domain, p, q, weight, weight_norms):
    from .fields import exp_weight_norms, weight_range

    if q is None:
        raise ConfigurationError("weighted mode needs the weight exponent q")
    check_weighted_window(domain.n, p, q)
    if weight_norms is None:
        if weight is None:
            raise ConfigurationError("weighted mode needs a weight or its norms")
        weight_norms = exp_weight_norms(weight, domain, q, 1.0 / (p - 1.0))
    if weight is not None:
        lo, _ = weight_range(weight, domain)
        sup_neg = math.exp(-lo)
    else:
        sup_neg = 1.0
    n = domain.n
    L = weighted_operator_bounds(n, p, q, domain.volume, domain.boundary_area, domain.K, weight_norms)
    base = _prefactor_entries(n)
    chain = [ChainEntry(e.tag, e.value, e.power * p, e.note) for e in base] + [
        ChainEntry("power_mean_split", 2.0, 1.0 - p, "(a+b)^p <= 2^{p-1}(a^p+b^p)"),
        ChainEntry("target_weight_sup", max(1.0, sup_neg), -1.0, "max(1, sup e^{-phi})"),
    ]
    big = L.parts["interior"] if L.parts["interior"].value >= L.parts["boundary"].value else L.parts["boundary"]
    delta = _report("weighted_delta", chain + [_ref("max_weight_free_bound", big, -1.0)],
                    {"n": n, "p": p, "q": q})
    coeff = _report("poincare_delta[weighted]", chain + [_ref("weighted_operator_bound", L, -1.0)],
                    {"n": n, "p": p, "q": q, "volume": domain.volume,
                     "boundary_area": domain.boundary_area, "K": domain.K,
                     "weight_norm_interior": weight_norms[0], "weight_norm_boundary": weight_norms[1],
                     "sup_exp_minus_weight": sup_neg, "form": "integral", "mode": WEIGHTED},
                    {"operator": L, "delta": delta})
    return coeff


def max_modulus_delta(domain, p, q):
    """delta for holomorphic f: ``delta ||f||_q <= ||f||_{L^p(d)}`` (norm form).

    When ``q == p`` the report is for the integral form ``delta int|f|^p <= int_d|f|^p``.
    """
    n = domain.n
    check_max_modulus_window(n, p, q)
    Bb = boundary_operator_bound(n, q, p, domain.volume, domain.boundary_area, domain.K)
    chain = _prefactor_entries(n) + [_ref("boundary_operator_bound", Bb, -1.0)]
    inputs = {"n": n, "p": p, "q": q, "volume": domain.volume,
              "boundary_area": domain.boundary_area, "K": domain.K}
    if q == p:
        norm = _report("delta_norm_form", chain, inputs)
        inputs["form"] = "integral"
        return _report("max_modulus_delta", [_ref("delta_norm_form", norm, p)], inputs,
                       {"boundary": Bb, "norm_form": norm})
    inputs["form"] = "norm"
    return _report("max_modulus_delta", chain, inputs, {"boundary": Bb})


# -- improved Hoermander constants ------------------------------------------

@dataclass(frozen=True)
class HormanderConstants:
    m1: ConstantReport
    m2: ConstantReport
    delta0: ConstantReport
    delta: ConstantReport

    def to_dict(self):
        return {k: getattr(self, k).to_dict() for k in ("m1", "m2", "delta0", "delta")}


def boundary_curvature_ratio(domain):
    """``min over the boundary of c0 / |grad rho|`` (closed form for ellipsoids)."""
    return domain.c0 / domain.sup_grad_rho


def _require_psh(spec, domain, strict):
    from .fields import check_psh

    rep = check_psh(spec, domain)
    ok = rep.classification == "strictly-psh" if strict else rep.classification != "not-psh"
    if not ok:
        kind = "strictly plurisubharmonic" if strict else "plurisubharmonic"
        raise PshError(f"weight is not {kind} (min eigenvalue {rep.min_eigenvalue:g})")


def hormander_constants(domain, phi, psi, q):
    """m1, m2, delta0 and delta of the improved L^2 estimate (weights as WeightSpec)."""
    from .fields import exp_weight_norms, make_weight

    n = domain.n
    if not 2 * n - 1 < q:
        raise WindowError("2n-1<q", f"n={n}, q={q}")
    _require_psh(phi, domain, strict=False)
    _require_psh(psi, domain, strict=True)
    total = make_weight(phi + psi)
    Wi, Wb = exp_weight_norms(total, domain, q, 1.0)
    m1 = _report("m1", [ChainEntry("exp_weight_norm_sum", Wi + Wb, -1.0,
                                   "||e^{phi+psi}||_q(Omega) + ||e^{phi+psi}||_q(dOmega)")],
                 {"norm_interior": Wi, "norm_boundary": Wb, "q": q})
    m2 = _report("m2", [ChainEntry("min_c0_over_grad_rho", boundary_curvature_ratio(domain))],
                 {"c0": domain.c0, "sup_boundary_grad_rho": domain.sup_grad_rho})
    d0 = _report("delta0", [_ref("m1", m1), ChainEntry("min_m2_1", min(m2.value, 1.0))])
    # the weighted delta at p = 2 with weight phi + psi and integrability exponent q
    wd = poincare_delta(domain, 2.0, mode=WEIGHTED, weight=total, weight_norms=(Wi, Wb), q_weight=q)
    delta = wd.parts["delta"]
    return HormanderConstants(m1, m2, d0, delta)


def fixed_psi_constants(domain, phi, z0=None):
    """delta0 and delta for the estimate with factor ``e R^2 / sqrt(1 + delta delta0)``.

    Uses ``psi = |z - z0|^2 / R^2`` (``z0`` defaults to the domain center) and
    ``q = inf``; ``delta`` is the improved-estimate delta divided by ``2e``.
    """
    from .fields import exp_weight_norms, make_weight, quadratic_weight

    n = domain.n
    R = domain.diameter
    center = domain._c[0::2] + 1j * domain._c[1::2] if z0 is None else np.atleast_1d(z0)
    psi = quadratic_weight(1.0 / R**2, center, n)
    base = hormander_constants(domain, phi, psi, INF)
    sup_e_phi, _ = exp_weight_norms(make_weight(phi), domain, INF, 1.0)
    ratio = boundary_curvature_ratio(domain)
    m1 = _report("m1", [ChainEntry("min_c0_over_grad_rho", ratio)])
    m2 = _report("m2", [ChainEntry("min_m1_1", min(ratio, 1.0))])
    d0 = _report("delta0", [_ref("m2", m2), ChainEntry("diameter", R, 2.0),
                            ChainEntry("sup_exp_weight", sup_e_phi, -1.0)],
                 {"R": R, "sup_exp_phi": sup_e_phi})
    delta = _report("delta", [_ref("improved_estimate_delta", base.delta),
                              ChainEntry("psi_range_factor", 2.0 * math.e, -1.0,
                                         "0 <= psi <= 1 on the closure")])
    return HormanderConstants(m1, m2, d0, delta), psi
