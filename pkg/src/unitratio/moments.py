"""Closed-form moments of W and Z, and the identities behind them.

The integer-r sums alternate with coefficients of size ~ 2^(2rn), so they are
evaluated with the rational parts kept exact: for integer k the truncated
beta moments obey a positive recurrence in k whose coefficients are rational
in (alpha1, alpha2), and only two transcendental constants per shape remain.
"""

from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import NamedTuple

import numpy as np

from . import specfun
from .dists import Family, UnitDistSpec, endpoint_exponents, moment_numeric, pdf, sf
from .errors import DomainError, PreconditionError
from .quadrature import DEFAULT, QuadConfig, integrate_interval, integrate_semi_infinite
from .ratio import GammaRatioParams

log = logging.getLogger(__name__)

__all__ = [
    "CancellationWarning",
    "LaplaceMoments",
    "PartialLaplace",
    "laplace_moments",
    "partial_laplace_integrals",
    "mean_w_half",
    "mean_w_half_terms",
    "mean_w_half_equal_rates",
    "moment_w_integer_r",
    "mean_z_half",
    "moment_z_integer_r",
    "moment_z_integer_r_details",
    "xi",
    "truncated_moment_identity_check",
    "truncated_moment_sides",
    "Method",
    "MomentRequest",
    "MomentResult",
    "moment",
]


class CancellationWarning(RuntimeWarning):
    """An alternating sum lost more precision than the requested tolerance."""


class LaplaceMoments(NamedTuple):
    exp_x: float
    x_exp_x: float
    exp_y: float
    y_exp_y: float


class PartialLaplace(NamedTuple):
    first: float
    second: float


def laplace_moments(p: GammaRatioParams, x):
    """E[exp(-Xx)], E[X exp(-Xx)], E[exp(-Yx)], E[Y exp(-Yx)]."""
    if not x >= 0.0:
        raise DomainError("x must be nonnegative")
    a1, a2, l1, l2 = p.astuple()
    ex = math.exp(-a1 * math.log1p(x / l1))
    ey = math.exp(-a2 * math.log1p(x / l2))
    return LaplaceMoments(ex, a1 * ex / (x + l1), ey, a2 * ey / (x + l2))


def _partial_laplace_arrays(p, x):
    a1, a2, l1, l2 = p.astuple()
    s = a1 + a2
    x = np.asarray(x, dtype=np.float64)
    big = 2.0 * x + l1 + l2
    zeta = (x + l2) / big
    lead = a1 * math.log(l1) + a2 * math.log(l2)
    f1 = specfun.hyp2f1(s + 1.0, 1.0, a2 + 1.0, zeta)
    f2 = specfun.hyp2f1(s, 1.0, a2 + 1.0, zeta)
    first = np.exp(lead - specfun.log_beta(a1, a2 + 1.0) - (s + 1.0) * np.log(big)) * f1
    common = np.exp(lead - specfun.log_beta(a1, a2) - np.log(x + l2) - s * np.log(big))
    return first, common * f2, common


def partial_laplace_integrals(p: GammaRatioParams, x):
    """The two truncated Laplace-type double integrals, in closed form.

    first  = int_0^inf [int_0^u exp(-vx) dF_Y(v)] u exp(-ux) dF_X(u)
    second = int_0^inf [int_0^u v exp(-vx) dF_Y(v)] exp(-ux) dF_X(u)
    """
    if not x >= 0.0:
        raise DomainError("x must be nonnegative")
    first, f2_part, common = _partial_laplace_arrays(p, x)
    return PartialLaplace(float(first), float(f2_part - common))


def _check_ratio(rho, lo, hi, text):
    if not (lo < rho < hi):
        raise PreconditionError(f"requires {text} (got lambda2/lambda1={rho:.6g})")


def mean_w_half_terms(p: GammaRatioParams, q: QuadConfig = DEFAULT):
    """The five addends of E(W) at r = 1/2, in order."""
    rho = p.rate_ratio
    _check_ratio(rho, 1.0 / 3.0, 2.0, "1/3 < lambda2/lambda1 < 2")
    # the law depends on the rates only through their ratio
    p = GammaRatioParams(p.alpha1, p.alpha2, 1.0, rho)
    a1, a2, l1, l2 = p.astuple()
    s = a1 + a2
    lead = a1 * math.log(l1) + a2 * math.log(l2)
    lb = specfun.log_beta(a1, a2)
    rt = specfun.rational_tail_integral
    t1 = a2 * math.exp(lead + rt(1.0, l1, 1.0, l2, a1, a2 + 1.0, log=True))
    t2 = -a1 * math.exp(lead + rt(1.0, l1, 1.0, l2, a1 + 1.0, a2, log=True))
    t3 = 2.0 * integrate_semi_infinite(lambda x: _partial_laplace_arrays(p, x)[0], q,
                                       decay=s + 1.0).value
    t4 = -2.0 * integrate_semi_infinite(lambda x: _partial_laplace_arrays(p, x)[1], q,
                                        decay=s + 1.0).value
    t5 = 2.0 * math.exp(lead - lb + rt(1.0, l2, 2.0, l1 + l2, 1.0, s, log=True))
    return t1, t2, t3, t4, t5


def mean_w_half(p: GammaRatioParams, q: QuadConfig = DEFAULT, *, strict=True):
    """E(W) = E|X - Y| / (X + Y) for unequal rates, valid for 1/3 < lambda2/lambda1 < 2.

    Two of the five addends are one-dimensional integrals with no closed form;
    they are integrated over (0, inf).  With ``strict=False`` a rate ratio
    outside the validity region falls back to quadrature of the density.
    """
    if not strict and not (1.0 / 3.0 < p.rate_ratio < 2.0):
        return moment_numeric(UnitDistSpec(Family.W, p, 0.5), 1, q)
    return math.fsum(mean_w_half_terms(p, q))


def mean_w_half_equal_rates(alpha1, alpha2):
    """E(W) at r = 1/2 with lambda1 = lambda2, through two 2F1 values at 1/2."""
    a1, a2 = float(alpha1), float(alpha2)
    if not (a1 > 0.0 and a2 > 0.0):
        raise DomainError("shapes must be positive")
    s = a1 + a2
    f1 = specfun.hyp2f1(s + 1.0, 1.0, a2 + 1.0, 0.5)
    f2 = specfun.hyp2f1(s, 1.0, a2 + 1.0, 0.5)
    front = math.exp((1.0 - s) * math.log(2.0) - math.log(s) - specfun.log_beta(a1, a2))
    return (a2 - a1) / s + front * (1.0 + s / (2.0 * a2) * f1 - f2)


def mean_z_half(p: GammaRatioParams, q: QuadConfig = DEFAULT, *, strict=True):
    """E(Z) = 1 - 2 E[sqrt(XY) / (X + Y)] at r = 1/2, valid for lambda2/lambda1 < 2."""
    rho = p.rate_ratio
    if not rho < 2.0:
        if not strict:
            return moment_numeric(UnitDistSpec(Family.Z, p, 0.5), 1, q)
        _check_ratio(rho, 0.0, 2.0, "lambda2/lambda1 < 2")
    a1, a2 = p.alpha1, p.alpha2
    s = a1 + a2
    lg = specfun.log_gamma
    lv = (math.log(2.0) + a2 * math.log(rho) + lg(a1 + 0.5) + lg(a2 + 0.5)
          - math.log(s) - lg(a1) - lg(a2))
    return 1.0 - math.exp(lv) * specfun.hyp2f1(a2 + 0.5, s, s + 1.0, 1.0 - rho)


# --- xi and the integer-r sums --------------------------------------------

def _check_xi_arg(p):
    if not (math.isfinite(p) and p > -1.0):
        raise PreconditionError(f"xi requires p > -1 (got {p})")


def _xi_float(p, a1, a2):
    lb = specfun.log_beta(a1, a2)
    lo1, hi1 = specfun.reg_inc_beta_pair(0.5, a1 + p + 1.0, a2)
    lo2, _ = specfun.reg_inc_beta_pair(0.5, a1, a2 + p + 1.0)
    r1 = math.exp(specfun.log_beta(a1 + p + 1.0, a2) - lb)
    r2 = math.exp(specfun.log_beta(a1, a2 + p + 1.0) - lb)
    return (r1 * hi1 + r2 * lo2 - 0.5 ** (p + 1.0)) / (p + 1.0)


def _xi_combination(coefs, a1, a2):
    """Sum of c_k xi(k) over integer k >= 0, returning (value, error estimate).

    With J_k = E[V^(k+1); V > 1/2] and V ~ Beta(a1, a2),
    J_k = [(a1 + k) J_(k-1) + 2^-(s+k) / B(a1, a2)] / (s + k), J_(-1) = P(V > 1/2),
    and the same with a1 <-> a2 for the mirrored term.  Each J_k is therefore
    an exact rational combination of P(V > 1/2), P(V < 1/2) and 2^-s / B.
    """
    A1, A2 = Fraction(a1), Fraction(a2)
    S = A1 + A2
    c1, e1, c2, e2 = Fraction(1), Fraction(0), Fraction(1), Fraction(0)
    acc_p, acc_pc, acc_q, acc_c = Fraction(0), Fraction(0), Fraction(0), Fraction(0)
    for k in range(max(coefs) + 1):
        half_k = Fraction(1, 2 ** k)
        c1 = (A1 + k) * c1 / (S + k)
        e1 = ((A1 + k) * e1 + half_k) / (S + k)
        c2 = (A2 + k) * c2 / (S + k)
        e2 = ((A2 + k) * e2 + half_k) / (S + k)
        ck = coefs.get(k, 0)
        if ck:
            b = Fraction(ck, k + 1)
            acc_p += b * c1
            acc_pc += b * c2
            acc_q += b * (e1 + e2)
            acc_c += b * half_k / 2
    below, above = specfun.reg_inc_beta_pair(0.5, a1, a2)
    qconst = math.exp(-(a1 + a2) * math.log(2.0) - specfun.log_beta(a1, a2))
    parts = [above * float(acc_p), below * float(acc_pc), qconst * float(acc_q), -float(acc_c)]
    value = math.fsum(parts)
    # the three transcendental constants carry ~1e-14 relative error each
    err = 1e-14 * sum(abs(t) for t in parts[:3]) + 4.0 * np.finfo(float).eps * abs(value)
    return value, err


def xi(p, alpha1, alpha2):
    """xi(p) = int_(1/2)^1 y^p [1 - F(y) + F(1 - y)] dy for an equal-rate ratio."""
    a1, a2 = float(alpha1), float(alpha2)
    if not (a1 > 0.0 and a2 > 0.0):
        raise DomainError("shapes must be positive")
    _check_xi_arg(p)
    if float(p).is_integer() and p >= 0:
        return _xi_combination({int(p): 1}, a1, a2)[0]
    return _xi_float(float(p), a1, a2)


def _check_integer(name, v):
    if isinstance(v, bool) or int(v) != v or v < 1:
        raise PreconditionError(f"requires {name} to be a positive integer (got {v})")
    return int(v)


def _warn_if_lossy(value, err, what):
    if err > 1e-6 * abs(value):
        warnings.warn(f"{what}: alternating sum cancellation, estimated relative error "
                      f"{err / abs(value) if value else float('inf'):.2g}",
                      CancellationWarning, stacklevel=3)


def _w_coefficients(r, n):
    top = 2 * r * n - 1
    return {k: 4 * r * n * comb(top, k) * 2 ** k * (-1) ** (top - k) for k in range(top + 1)}


def _float_sum(coefs, a1, a2):
    terms = [c * _xi_float(float(k), a1, a2) for k, c in coefs.items()]
    value = math.fsum(terms)
    return value, 1e-14 * sum(abs(t) for t in terms)


def moment_w_integer_r(alpha1, alpha2, r, n, *, exact=True):
    """E(W^n) for integer r and equal rates, as a finite sum of xi values.

    ``exact=False`` sums the float xi values directly (compensated), which is
    the textbook evaluation; it warns once the alternating sum has cancelled
    beyond 1e-6 relative.
    """
    r = _check_integer("r", r)
    n = _check_integer("n", n)
    a1, a2 = float(alpha1), float(alpha2)
    coefs = _w_coefficients(r, n)
    value, err = _xi_combination(coefs, a1, a2) if exact else _float_sum(coefs, a1, a2)
    _warn_if_lossy(value, err, "moment_w_integer_r")
    return value


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_pow(p, e):
    out = [1]
    for _ in range(e):
        out = _poly_mul(out, p)
    return out


def _z_coefficients_binomial(r, n):
    # z = 1 - (4y(1-y))^r, dz = 4r (2y - 1)(4y(1-y))^(r-1) dy
    quad = [0, 4, -4]
    q_r = _poly_pow(quad, r)
    one_minus = [1 - q_r[0]] + [-c for c in q_r[1:]]
    poly = _poly_mul(_poly_mul([-1, 2], _poly_pow(quad, r - 1)), _poly_pow(one_minus, n - 1))
    return {m: 4 * r * n * c for m, c in enumerate(poly) if c}


def _z_coefficients_multinomial(r, n):
    # expansion of sum_k C(n-1,k)(-1)^k 2^(rk) (2y^2 - y + 1)^(rk), term by term
    coefs = {}
    for k in range(n):
        base = comb(n - 1, k) * (-1) ** k * 2 ** (r * k)
        rk = r * k
        for i in range(rk + 1):
            for j in range(rk - i + 1):
                l = rk - i - j
                mult = factorial(rk) // (factorial(i) * factorial(j) * factorial(l))
                m = 2 * i + j
                coefs[m] = coefs.get(m, 0) + 4 * r * n * base * mult * 2 ** i * (-1) ** j
    return {m: c for m, c in coefs.items() if c}


@dataclass(frozen=True)
class ZMomentArbitration:
    value: float
    chosen: str
    binomial: float
    multinomial: float
    numeric: float

    @property
    def binomial_error(self):
        return abs(self.binomial - self.numeric)

    @property
    def multinomial_error(self):
        return abs(self.multinomial - self.numeric)


def moment_z_integer_r_details(alpha1, alpha2, r, n, q: QuadConfig = DEFAULT):
    """Evaluate both expansions of E(Z^n) and pick the one the quadrature confirms.

    ``multinomial`` expands the change-of-variables factor written as
    [1 - 2^r (2y^2 - y + 1)^r]^(n-1) with the xi argument 2i + j;
    ``binomial`` re-derives the factor from z = 1 - (4y(1-y))^r, including the
    Jacobian (2y - 1)(4y(1-y))^(r-1).
    """
    r = _check_integer("r", r)
    n = _check_integer("n", n)
    a1, a2 = float(alpha1), float(alpha2)
    vb, eb = _xi_combination(_z_coefficients_binomial(r, n), a1, a2)
    vm, _ = _xi_combination(_z_coefficients_multinomial(r, n), a1, a2)
    num = moment_numeric(UnitDistSpec.make(Family.Z, a1, a2, 1.0, 1.0, r), n, q)
    chosen = "binomial" if abs(vb - num) <= abs(vm - num) else "multinomial"
    value = vb if chosen == "binomial" else vm
    tol = 1e-6 * abs(num)
    if abs(vb - vm) > tol:
        log.info("E(Z^%d), r=%d, alpha=(%g, %g): binomial %.12g, multinomial %.12g, "
                 "quadrature %.12g -> %s", n, r, a1, a2, vb, vm, num, chosen)
    if abs(value - num) > tol:
        log.warning("neither expansion of E(Z^%d) matches quadrature (%.12g vs %.12g)",
                    n, value, num)
    if chosen == "binomial":
        _warn_if_lossy(vb, eb, "moment_z_integer_r")
    return ZMomentArbitration(value, chosen, vb, vm, num)


def moment_z_integer_r(alpha1, alpha2, r, n, q: QuadConfig = DEFAULT):
    """E(Z^n) for integer r and equal rates (see :func:`moment_z_integer_r_details`)."""
    return moment_z_integer_r_details(alpha1, alpha2, r, n, q).value


# --- truncated moment identity ----------------------------------------------

class TruncatedMomentSides(NamedTuple):
    lhs: float
    rhs: float

    @property
    def residual(self):
        return abs(self.lhs - self.rhs)


def truncated_moment_sides(spec: UnitDistSpec, p, eps, delta, q: QuadConfig = DEFAULT):
    """Both sides of E(U^p 1{eps<U<delta}) = eps^p P(U>eps) - delta^p P(U>delta)
    + p int_eps^delta u^(p-1) P(U>u) du."""
    if not p > 0.0:
        raise DomainError("p must be positive")
    if not (0.0 <= eps < delta):
        raise DomainError("requires 0 <= eps < delta")
    a, b = min(eps, 1.0), min(delta, 1.0)
    if a >= b:
        return TruncatedMomentSides(0.0, 0.0)
    b0, b1 = endpoint_exponents(spec)

    def sf_at(u):
        return 1.0 if u <= 0.0 else 0.0 if u >= 1.0 else sf(spec, u)

    lhs = integrate_interval(lambda u, uc: u ** p * pdf(spec, u, uc), a, b, b0 + p, b1, q).value
    tail = integrate_interval(lambda u, uc: u ** (p - 1.0) * sf(spec, u, q, uc), a, b,
                              p - 1.0, 0.0, q).value
    rhs = a ** p * sf_at(a) - b ** p * sf_at(b) + p * tail
    return TruncatedMomentSides(lhs, rhs)


def truncated_moment_identity_check(spec: UnitDistSpec, p, eps, delta, q: QuadConfig = DEFAULT):
    """Residual |LHS - RHS| of the truncated moment identity."""
    return truncated_moment_sides(spec, p, eps, delta, q).residual


# --- method dispatch --------------------------------------------------------

class Method(str, enum.Enum):
    AUTO = "auto"
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class MomentRequest:
    spec: UnitDistSpec
    order: int = 1
    method: Method = Method.AUTO

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        _check_integer("order", self.order)


@dataclass(frozen=True)
class MomentResult:
    value: float
    method: Method
    formula: str


def _closed_form(spec, n, q):
    """Return (value, formula name) or raise PreconditionError naming the constraint."""
    p = spec.params
    r = spec.r
    if n == 1 and r == 0.5:
        if spec.family is Family.W:
            if p.equal_rates:
                return mean_w_half_equal_rates(p.alpha1, p.alpha2), "mean_w_half_equal_rates"
            return mean_w_half(p, q), "mean_w_half"
        return mean_z_half(p, q), "mean_z_half"
    if float(r).is_integer():
        if not p.equal_rates:
            raise PreconditionError("integer-r moment sums require lambda1 == lambda2")
        if spec.family is Family.W:
            return moment_w_integer_r(p.alpha1, p.alpha2, int(r), n), "moment_w_integer_r"
        return moment_z_integer_r(p.alpha1, p.alpha2, int(r), n, q), "moment_z_integer_r"
    raise PreconditionError("closed forms cover r = 1/2 with order 1, or integer r with "
                            "equal rates")


def moment(req: MomentRequest, q: QuadConfig = DEFAULT):
    """Dispatch a moment request; ``auto`` prefers a closed form when one applies."""
    if req.method is Method.QUADRATURE:
        return MomentResult(moment_numeric(req.spec, req.order, q), Method.QUADRATURE,
                            "moment_numeric")
    try:
        value, name = _closed_form(req.spec, req.order, q)
    except PreconditionError:
        if req.method is Method.CLOSED_FORM:
            raise
        return MomentResult(moment_numeric(req.spec, req.order, q), Method.QUADRATURE,
                            "moment_numeric")
    return MomentResult(value, Method.CLOSED_FORM, name)
