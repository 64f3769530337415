"""Empirical sharp constants by minimising the inequality quotient over a family.

The family is a list of basis fields ``b_k``; a candidate is
``f = e^s sum_k c_k b_k`` with complex ``c`` (stored as ``2K`` reals) and a
log-scale ``s`` that is only free when the quotient is not scale invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import constants as C
from .errors import ConfigurationError, DegenerateFamilyError
from .fields import eval_field, make_weight, zero_weight
from .quadrature import rules_for
from .verify import CASES, LP_POINCARE, MAX_MODULUS, REAL_SOBOLEV, WEIGHTED, _parse_exponents


@dataclass(frozen=True)
class SharpnessResult:
    tag: str
    analytic_delta: float
    empirical_inf: float
    minimizer: tuple  # complex coefficients
    scale: float
    restarts: int
    error: float
    evaluations: int
    trace: tuple = field(repr=False, default=())  # best-so-far quotient per evaluation
    form: str = "integral"
    constant: C.ConstantReport = field(repr=False, default=None)

    @property
    def dominates(self):
        return self.empirical_inf >= self.analytic_delta - 5.0 * self.error

    @property
    def margin(self):
        return self.empirical_inf - self.analytic_delta

    def to_dict(self):
        return {
            "tag": self.tag, "analytic_delta": self.analytic_delta,
            "empirical_inf": self.empirical_inf,
            "minimizer": [[c.real, c.imag] for c in self.minimizer], "scale": self.scale,
            "restarts": self.restarts, "error": self.error, "evaluations": self.evaluations,
            "form": self.form, "trace_first": self.trace[0] if self.trace else None,
            "trace_last": self.trace[-1] if self.trace else None,
            "constant": self.constant.to_dict() if self.constant is not None else None,
        }


class _Basis:
    """Basis values and derivative norms' ingredients at a rule's nodes."""

    def __init__(self, family, nodes):
        vals = [eval_field(b, nodes) for b in family]
        self.value = np.stack([v.value for v in vals], -1)  # (m, K)
        self.dbar = np.stack([v.dbar for v in vals], -1)  # (m, n, K)
        self.grad = np.stack([v.grad for v in vals], -1)  # (m, 2n, K)


class _Quotient:
    def __init__(self, case, domain, family, p, q, r, weight, rules, form):
        self.case, self.p, self.q, self.r, self.form = case, p, q, r, form
        ir, br = rules
        self.floor = 1e-12 * domain.volume
        self.levels = [self._level(family, ir, br, weight)]
        if ir.coarse is not None:
            self.levels.append(self._level(family, ir.coarse, br.coarse or br, weight))
        self.ir = ir

    def _level(self, family, ir, br, weight):
        wi = np.exp(-weight.value(ir.nodes)) if weight is not None else None
        wb = np.exp(-weight.value(br.nodes)) if weight is not None else None
        iw = ir.weights * (wi if wi is not None else 1.0)
        bw = br.weights * (wb if wb is not None else 1.0)
        return _Basis(family, ir.nodes), _Basis(family, br.nodes), iw, bw, ir

    def parts(self, c, level=0, group=None):
        bi, bb, iw, bw, rule = self.levels[level]
        if group is not None:
            mask = rule.groups == group
            iw = np.where(mask, iw * rule.n_groups, 0.0)
        p, q, r = self.p, self.q, self.r
        fi = bi.value @ c
        fb = bb.value @ c
        if self.case == REAL_SOBOLEV:
            d = np.sqrt(np.sum(np.abs(bi.grad @ c) ** 2, axis=-1))
        else:
            d = np.sqrt(np.sum(np.abs(bi.dbar @ c) ** 2, axis=-1))
        lhs = float(np.sum(iw * np.abs(fi) ** q))
        if self.case == MAX_MODULUS:
            dint = 0.0
        else:
            dint = float(np.sum(iw * d**p))
        bint = float(np.sum(bw * np.abs(fb) ** r))
        return lhs, dint, bint

    def __call__(self, c, level=0, group=None):
        with np.errstate(over="ignore", invalid="ignore"):
            lhs, dint, bint = self.parts(c, level, group)
        if not (math.isfinite(lhs) and math.isfinite(dint) and math.isfinite(bint)):
            return math.inf
        if not lhs >= self.floor:
            return math.inf
        p, q, r = self.p, self.q, self.r
        if self.form == "norm":
            num = (dint ** (1 / p) if dint > 0 else 0.0) + (bint ** (1 / r) if bint > 0 else 0.0)
            return num / lhs ** (1 / q)
        return (dint + bint) / lhs


def _case_exponents(case, exponents):
    p, q, r = _parse_exponents(case, exponents)
    if case == LP_POINCARE:
        q = r = p
    if case == WEIGHTED:
        # quotient exponents are all p; q is the weight-integrability exponent
        return p, p, p, q
    if case == MAX_MODULUS:
        return p, q, p, None
    return p, q, r, None


def analytic_constant(case, domain, exponents, weight=None):
    p, q, r, qw = _case_exponents(case, exponents)
    if case == MAX_MODULUS:
        return C.max_modulus_delta(domain, p, q)
    if case == WEIGHTED:
        w = weight if weight is not None else make_weight(zero_weight(domain.n))
        return C.poincare_delta(domain, p, mode=C.WEIGHTED, weight=w, q_weight=qw)
    mode = C.REAL if case == REAL_SOBOLEV else C.UNWEIGHTED
    return C.poincare_delta(domain, p, q, r, mode=mode)


def estimate_sharp_constant(case, domain, family, exponents, weight=None, budget=5000,
                            restarts=8, seed=0, resolution=64, form="auto", rules=None):
    """Minimise the inequality quotient over ``family`` by Nelder-Mead with restarts.

    ``budget`` is the evaluation budget per restart and must be at least
    ``200 * dim`` where ``dim`` is the number of free real parameters.
    ``form='auto'`` uses the same form as the analytic constant; ``'integral'``
    forces the integral quotient, which is not scale invariant for unequal
    exponents, so the log-scale becomes a free parameter.
    """
    if case not in CASES:
        raise ConfigurationError(f"unknown inequality case {case!r}")
    family = list(family)
    if not family:
        raise DegenerateFamilyError("empty family")
    if case == MAX_MODULUS and not all(b.is_holomorphic for b in family):
        raise ConfigurationError("MAX_MODULUS needs a holomorphic family")
    p, q, r, _ = _case_exponents(case, exponents)
    const = analytic_constant(case, domain, exponents, weight)
    cform = const.inputs.get("form", "integral")
    form = cform if form == "auto" else form
    if form not in ("integral", "norm"):
        raise ConfigurationError(f"unknown form {form!r}")
    homogeneous = form == "norm" or (case == MAX_MODULUS and p == q) or (p == q == r and case != MAX_MODULUS)
    K = len(family)
    dim = 2 * K + (0 if homogeneous else 1)
    if dim > 24:
        raise ConfigurationError("at most 24 free parameters")
    if budget < 200 * dim:
        raise DegenerateFamilyError(f"budget {budget} below 200*dim = {200 * dim}")

    rules = rules if rules is not None else rules_for(domain, resolution if domain.n == 1 else min(resolution, 32), seed)
    quot = _Quotient(case, domain, family, p, q, r if case != MAX_MODULUS else p, weight, rules, form)

    def unpack(x):
        c = x[0:2 * K:2] + 1j * x[1:2 * K:2]
        if homogeneous:
            # the quotient is scale invariant; normalising keeps powers finite
            nrm = np.linalg.norm(c)
            return (c / nrm if nrm > 0 else c), c, 0.0
        s = float(np.clip(x[2 * K], -30.0, 30.0))
        return c * math.exp(s), c, s

    trace = []
    best = [math.inf, None]

    def objective(x):
        cs, _, _ = unpack(x)
        val = quot(cs)
        if val < best[0]:
            best[0], best[1] = val, np.array(x)
        trace.append(best[0])
        return val if math.isfinite(val) else 1e300

    rng = np.random.default_rng(seed)
    for k in range(restarts):
        if k == 0:
            x0 = np.zeros(dim)
            x0[0] = 1.0
        else:
            x0 = rng.normal(size=dim)
            if not homogeneous:
                x0[-1] = rng.uniform(-2.0, 2.0)
        minimize(objective, x0, method="Nelder-Mead",
                 options={"maxfev": budget, "xatol": 1e-10, "fatol": 1e-14, "adaptive": dim > 4})
    if best[1] is None or not math.isfinite(best[0]):
        raise DegenerateFamilyError("no admissible candidate (all LHS below the floor)")
    cs, c, s = unpack(best[1])
    err = _quotient_error(quot, cs, best[0])
    return SharpnessResult(case, const.value, float(best[0]), tuple(complex(v) for v in c), s,
                           restarts, err, len(trace), tuple(trace), form, const)


def _quotient_error(quot, c, value):
    rule = quot.ir
    if rule.is_random:
        reps = [quot(c, 0, g) for g in range(rule.n_groups)]
        reps = [v for v in reps if math.isfinite(v)]
        if len(reps) < 2:
            return abs(value)
        return float(np.std(reps, ddof=1) / math.sqrt(len(reps)))
    if len(quot.levels) > 1:
        coarse = quot(c, 1)
        if math.isfinite(coarse):
            return max(abs(coarse - value), 64 * np.finfo(float).eps * abs(value))
    return 64 * np.finfo(float).eps * abs(value)
