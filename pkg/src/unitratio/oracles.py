"""Slow, independent reference computations for the test suite.

Nothing here is on a main code path.  Integrals go through SciPy's QUADPACK
wrappers rather than the package's own Gauss-Kronrod routine, and the
preimage intervals are solved directly instead of through w_sub / z_sub.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from .dists import Family, UnitDistSpec, sample
from .errors import ConvergenceError, DomainError
from .quadrature import DEFAULT, QuadConfig
from .ratio import GammaRatioParams, ratio_pdf

__all__ = [
    "Functional",
    "MCEstimate",
    "interval_prob",
    "mc_estimate",
    "nested_quadrature_xi",
    "nested_quadrature_partial_laplace",
]


def _quad(f, a, b, cfg: QuadConfig, points=None):
    if b <= a:
        return 0.0
    val, err, *rest = integrate.quad(f, a, b, epsabs=cfg.abs_tol * 1e-3, epsrel=cfg.rel_tol,
                                     limit=cfg.max_subdiv, points=points, full_output=1)
    if len(rest) > 1 and err > max(cfg.abs_tol, cfg.rel_tol * abs(val)):
        raise ConvergenceError(f"QUADPACK: {rest[1]}"[:200], estimate=val, error=err)
    return val


def _fold_bounds(spec: UnitDistSpec, a, b):
    """d-range with S_r or T_r of x in (a, b) iff |1 - 2x| in (d_lo, d_hi)."""
    r = spec.r
    if spec.family is Family.W:
        # |1-2x|^(2r) in (a, b)
        return a ** (0.5 / r), b ** (0.5 / r)
    # 1 - (1 - d^2)^r in (a, b)  <=>  d^2 in (1 - (1-a)^(1/r), 1 - (1-b)^(1/r))
    lo = math.sqrt(-math.expm1(math.log1p(-a) / r)) if a > 0.0 else 0.0
    hi = math.sqrt(-math.expm1(math.log1p(-b) / r)) if b < 1.0 else 1.0
    return lo, hi


def interval_prob(spec: UnitDistSpec, a, b, q: QuadConfig = DEFAULT):
    """P(a < U < b) for U distributed as W or Z, by integrating the ratio density
    over the two preimage intervals.  (a, b) is first clipped to (0, 1)."""
    if not a < b:
        raise DomainError("need a < b")
    a, b = max(a, 0.0), min(b, 1.0)
    if not a < b:
        return 0.0
    d_lo, d_hi = _fold_bounds(spec, a, b)
    p = spec.params

    def f(x):
        if x <= 0.0 or x >= 1.0:
            return 0.0
        return ratio_pdf(x, p)

    left = _quad(f, 0.5 * (1.0 - d_hi), 0.5 * (1.0 - d_lo), q)
    right = _quad(f, 0.5 * (1.0 + d_lo), 0.5 * (1.0 + d_hi), q)
    return min(max(left + right, 0.0), 1.0)


@dataclass(frozen=True)
class Functional:
    """What :func:`mc_estimate` averages: ``mean``, ``raw_moment`` or ``interval``."""

    kind: str
    order: int = 1
    a: float = 0.0
    b: float = 1.0

    @classmethod
    def mean(cls):
        return cls("mean")

    @classmethod
    def raw_moment(cls, n):
        if int(n) != n or n < 1:
            raise DomainError("moment order must be a positive integer")
        return cls("raw_moment", order=int(n))

    @classmethod
    def interval(cls, a, b):
        if not a < b:
            raise DomainError("need a < b")
        return cls("interval", a=float(a), b=float(b))

    def __call__(self, u):
        if self.kind == "mean":
            return u
        if self.kind == "raw_moment":
            return u ** self.order
        if self.kind == "interval":
            return ((u > self.a) & (u < self.b)).astype(np.float64)
        raise DomainError(f"unknown functional {self.kind!r}")


class MCEstimate(NamedTuple):
    estimate: float
    std_error: float


def mc_estimate(spec: UnitDistSpec, functional: Functional, n_draws, seed=0):
    """Monte Carlo average of ``functional`` over draws of the family."""
    if int(n_draws) != n_draws or n_draws < 1000:
        raise DomainError("n_draws must be an integer >= 1000")
    vals = functional(sample(spec, int(n_draws), seed).values)
    return MCEstimate(float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(vals.size)))


def nested_quadrature_xi(p, alpha1, alpha2, q: QuadConfig = DEFAULT):
    """int_{1/2}^1 y^p [1 - int_{1-y}^y beta(v; alpha1, alpha2) dv] dy, both levels by QUADPACK."""
    if not p > -1.0:
        raise DomainError("p must exceed -1")
    lb = special.betaln(alpha1, alpha2)

    def dens(v):
        if v <= 0.0 or v >= 1.0:
            return 0.0
        return math.exp((alpha1 - 1.0) * math.log(v) + (alpha2 - 1.0) * math.log1p(-v) - lb)

    def outer(y):
        inner = _quad(dens, 1.0 - y, y, q, points=[0.5] if y > 0.5 else None)
        return y ** p * max(1.0 - inner, 0.0)

    return _quad(outer, 0.5, 1.0, q)


def nested_quadrature_partial_laplace(p: GammaRatioParams, x, q: QuadConfig = DEFAULT):
    """The two truncated Laplace integrals by nested quadrature of their definitions.

    first  = int_0^inf [int_0^u exp(-vx) f_Y(v) dv] u exp(-ux) f_X(u) du
    second = int_0^inf [int_0^u v exp(-vx) f_Y(v) dv] exp(-ux) f_X(u) du
    """
    a1, a2, l1, l2 = p.astuple()
    c1 = a1 * math.log(l1) - special.gammaln(a1)
    c2 = a2 * math.log(l2) - special.gammaln(a2)

    def fx(u):
        return math.exp(c1 + (a1 - 1.0) * math.log(u) - l1 * u) if u > 0.0 else 0.0

    def fy(v):
        return math.exp(c2 + (a2 - 1.0) * math.log(v) - l2 * v) if v > 0.0 else 0.0

    def inner(u, k):
        return _quad(lambda v: v ** k * math.exp(-v * x) * fy(v), 0.0, u, q)

    def outer(u, k):
        if u <= 0.0:
            return 0.0
        w = u if k == 0 else 1.0
        return inner(u, k) * w * math.exp(-u * x) * fx(u)

    # split the outer range at a few gamma means so QUADPACK sees the bulk
    scale = max(a1 / l1, a2 / l2, 1.0)
    cuts = [0.0, scale, 4.0 * scale, 16.0 * scale]
    vals = []
    for k in (0, 1):
        parts = [_quad(lambda u: outer(u, k), lo, hi, q) for lo, hi in zip(cuts, cuts[1:])]
        tail, _ = integrate.quad(lambda u: outer(u, k), cuts[-1], np.inf,
                                 epsabs=q.abs_tol * 1e-3, epsrel=q.rel_tol, limit=q.max_subdiv)
        vals.append(math.fsum(parts + [tail]))
    return tuple(vals)
