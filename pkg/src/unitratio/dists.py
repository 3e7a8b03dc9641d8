"""The W and Z families on (0, 1).

With U = X / (X + Y) for independent gammas X ~ Gamma(alpha1, lambda1) and
Y ~ Gamma(alpha2, lambda2),

    W = S_r(U) = |1 - 2U|^(2r)        Z = T_r(U) = 1 - [4U(1-U)]^r

Both maps fold (0, 1) about 1/2, so the law of W (or Z) at u collects the
ratio density at the two preimages y and 1 - y.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ._backend import kernels
from ._kernels_numpy import log_accurate
from .errors import ConvergenceError, DomainError
from .quadrature import DEFAULT, QuadConfig, integrate_unit
from .ratio import GammaRatioParams, TransformPower, as_power, ratio_cdf_pair

__all__ = [
    "Family",
    "UnitDistSpec",
    "SampleBatch",
    "pdf",
    "logpdf",
    "cdf",
    "sf",
    "quantile",
    "sample",
    "gamma_variates",
    "moment_numeric",
    "total_mass",
    "endpoint_exponents",
]


class Family(str, enum.Enum):
    W = "W"
    Z = "Z"

    @classmethod
    def parse(cls, v):
        if isinstance(v, cls):
            return v
        try:
            return cls(str(v).upper())
        except ValueError:
            raise DomainError(f"family must be 'W' or 'Z', got {v!r}") from None


@dataclass(frozen=True)
class UnitDistSpec:
    family: Family
    params: GammaRatioParams
    r: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        if not isinstance(self.params, GammaRatioParams):
            raise DomainError("params must be a GammaRatioParams")
        object.__setattr__(self, "r", as_power(self.r))

    @classmethod
    def make(cls, family, alpha1, alpha2, lambda1=1.0, lambda2=1.0, r=1.0):
        return cls(family, GammaRatioParams(alpha1, alpha2, lambda1, lambda2), r)

    @property
    def power(self):
        return TransformPower(self.r)

    def theta(self):
        return (*self.params.astuple(), self.r)

    def with_params(self, params):
        return UnitDistSpec(self.family, params, self.r)

    def pdf(self, u):
        return pdf(self, u)

    def logpdf(self, u):
        return logpdf(self, u)

    def cdf(self, u, q=DEFAULT):
        return cdf(self, u, q)

    def sf(self, u, q=DEFAULT):
        return sf(self, u, q)

    def quantile(self, prob, q=DEFAULT):
        return quantile(self, prob, q)

    def sample(self, n, seed=0):
        return sample(self, n, seed)


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray
    seed: int
    spec: UnitDistSpec = field(repr=False)

    def __post_init__(self):
        if not np.all((self.values > 0.0) & (self.values < 1.0)):
            raise ValueError("sample values must lie strictly inside (0, 1)")

    def __len__(self):
        return self.values.size

    def __iter__(self):
        return iter(self.values.tolist())


def _unit_arg(u, uc=None):
    ua = np.asarray(u, dtype=np.float64)
    if uc is None:
        if np.any(~((ua > 0.0) & (ua < 1.0))):
            raise DomainError("argument must lie strictly inside (0, 1)")
        uca = 1.0 - ua
    else:
        # with an explicit complement, u may round to 1 while 1 - u stays exact
        uca = np.asarray(uc, dtype=np.float64)
        if np.any(~((ua > 0.0) & (uca > 0.0) & (ua <= 1.0) & (uca <= 1.0))):
            raise DomainError("argument must lie strictly inside (0, 1)")
    shape = np.broadcast_shapes(ua.shape, uca.shape)
    ua, uca = np.broadcast_to(ua, shape), np.broadcast_to(uca, shape)
    return ua.shape, np.require(ua, requirements='CW').ravel(), np.require(uca, requirements='CW').ravel()


def _ret(vals, shape, like):
    return float(vals[0]) if np.ndim(like) == 0 else vals.reshape(shape)


def _logpdf_flat(spec, u, uc):
    kern = kernels.logpdf_w if spec.family is Family.W else kernels.logpdf_z
    return kern(u, uc, *spec.params.astuple(), spec.r)


def logpdf(spec: UnitDistSpec, u, uc=None):
    """Log density; ``uc`` may carry 1 - u when known to better precision."""
    shape, ua, uca = _unit_arg(u, uc)
    return _ret(_logpdf_flat(spec, ua, uca), shape, u)


def pdf(spec: UnitDistSpec, u, uc=None):
    """Density of W or Z at u in (0, 1)."""
    shape, ua, uca = _unit_arg(u, uc)
    return _ret(np.exp(_logpdf_flat(spec, ua, uca)), shape, u)


def _preimages(spec, u, uc):
    """Upper and lower preimages (x, 1 - x) of u, each at full precision."""
    r = spec.r
    if spec.family is Family.W:
        lw = log_accurate(u, uc)
        t = np.exp(lw / (2.0 * r))
        return 0.5 * (1.0 + t), -0.5 * np.expm1(lw / (2.0 * r))
    lzc = log_accurate(uc, u)
    q = np.sqrt(-np.expm1(lzc / r))
    return 0.5 * (1.0 + q), np.exp(lzc / r - np.log(2.0 * (1.0 + q)))


def _cdf_sf(spec, x, xc):
    # P(xc < U < x) and its complement, both without cancellation in the tails
    f_hi, s_hi = ratio_cdf_pair(x, spec.params, xc)
    f_lo, _ = ratio_cdf_pair(xc, spec.params, x)
    lower = f_hi - f_lo
    upper = s_hi + f_lo
    return np.clip(lower, 0.0, 1.0), np.clip(upper, 0.0, 1.0)


def cdf(spec: UnitDistSpec, u, q: QuadConfig = DEFAULT, uc=None):
    """CDF at u: F(y) - F(1 - y) with y the upper preimage and F the ratio CDF.

    ``q`` is accepted for interface symmetry; the ratio CDF is evaluated
    exactly through the incomplete beta function, so no quadrature runs here.
    """
    shape, ua, uca = _unit_arg(u, uc)
    x, xc = _preimages(spec, ua, uca)
    lo, _ = _cdf_sf(spec, x, xc)
    return _ret(lo, shape, u)


def sf(spec: UnitDistSpec, u, q: QuadConfig = DEFAULT, uc=None):
    """Survival function 1 - cdf, accurate when it is small."""
    shape, ua, uca = _unit_arg(u, uc)
    x, xc = _preimages(spec, ua, uca)
    _, hi = _cdf_sf(spec, x, xc)
    return _ret(hi, shape, u)


def _from_fold(spec, t):
    # t = 2x - 1 in [0, 1] parametrises the upper preimage; return u
    if spec.family is Family.W:
        return t ** (2.0 * spec.r)
    return -math.expm1(spec.r * math.log1p(-t * t))


def _fold_cdf(spec, t):
    x = np.array([0.5 * (1.0 + t)])
    xc = np.array([0.5 * (1.0 - t)])
    return float(_cdf_sf(spec, x, xc)[0][0])


def quantile(spec: UnitDistSpec, prob, q: QuadConfig = DEFAULT, *, maxiter=200):
    """Inverse CDF by Brent's method on the folded variable t = |2U - 1|.

    cdf is a monotone function of t on [0, 1] with value 0 at t = 0 and 1 at
    t = 1, so the bracket always contains the root, including quantiles that
    fall below 1e-12 in u.
    """
    pa = np.asarray(prob, dtype=np.float64)
    if np.any(~((pa > 0.0) & (pa < 1.0))):
        raise DomainError("probability must lie strictly inside (0, 1)")
    out = np.empty(pa.size)
    for i, p in enumerate(pa.ravel()):
        def g(t, p=p):
            return _fold_cdf(spec, t) - p
        try:
            t, info = brentq(g, 0.0, 1.0, xtol=1e-17, rtol=8.9e-16, maxiter=maxiter,
                             full_output=True, disp=False)
        except RuntimeError as exc:  # pragma: no cover - brentq raises only with disp=True
            raise ConvergenceError(str(exc)) from exc
        if not info.converged:
            raise ConvergenceError(f"quantile search for p={p} did not converge in {maxiter} "
                                   "iterations", estimate=_from_fold(spec, t),
                                   bracket=(0.0, 1.0))
        u = _from_fold(spec, t)
        out[i] = min(max(u, np.nextafter(0.0, 1.0)), np.nextafter(1.0, 0.0))
    return float(out[0]) if pa.ndim == 0 else out.reshape(pa.shape)


def gamma_variates(rng, shape, n):
    """Standard gamma draws (rate 1) by the Marsaglia-Tsang squeeze method.

    Shapes below one are boosted: G(a) = G(a + 1) * U^(1/a).
    """
    boost = shape < 1.0
    a = shape + 1.0 if boost else shape
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = int(1.1 * (n - filled)) + 16
        x = rng.standard_normal(m)
        v = 1.0 + c * x
        u = rng.random(m)
        ok = v > 0.0
        v = np.where(ok, v * v * v, 1.0)
        x2 = x * x
        accept = ok & ((u < 1.0 - 0.0331 * x2 * x2)
                       | (np.log(u) < 0.5 * x2 + d * (1.0 - v + np.log(v))))
        draws = (d * v)[accept][: n - filled]
        out[filled:filled + draws.size] = draws
        filled += draws.size
    if boost:
        out *= np.exp(np.log(rng.random(n)) / shape)
    return out


_SEED_MAX = 2 ** 64


def sample(spec: UnitDistSpec, n, seed=0):
    """Draw n values through the representation W = S_r(U) or Z = T_r(U)."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if int(seed) != seed or not (0 <= seed < _SEED_MAX):
        raise DomainError("seed must be an unsigned 64-bit integer")
    n, seed = int(n), int(seed)
    rng = np.random.default_rng(seed)
    p = spec.params
    x = gamma_variates(rng, p.alpha1, n) / p.lambda1
    y = gamma_variates(rng, p.alpha2, n) / p.lambda2
    tot = x + y
    u, uc = x / tot, y / tot
    if spec.family is Family.W:
        vals = np.abs(u - uc) ** (2.0 * spec.r)
    else:
        vals = -np.expm1(spec.r * np.log(4.0 * u * uc))
    # exact 0 or 1 can only come from ties or underflow; keep the open support
    vals = np.clip(vals, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
    return SampleBatch(vals, seed, spec)


def endpoint_exponents(spec: UnitDistSpec):
    """Exponents beta0, beta1 with pdf ~ u^beta0 at 0 and (1-u)^beta1 at 1."""
    amin = min(spec.params.alpha1, spec.params.alpha2)
    if spec.family is Family.W:
        return 0.5 / spec.r - 1.0, amin - 1.0
    return -0.5, amin / spec.r - 1.0


def _moment(spec, n, q):
    b0, b1 = endpoint_exponents(spec)

    def f(u, uc):
        return u ** n * np.exp(_logpdf_flat(spec, u, uc))

    return integrate_unit(f, b0 + n, b1, q).value


def moment_numeric(spec: UnitDistSpec, n=1, q: QuadConfig = DEFAULT):
    """E(U^n) for the family by graded adaptive quadrature, split at 1/2."""
    if int(n) != n or n < 1:
        raise DomainError(f"moment order must be a positive integer, got {n!r}")
    return _moment(spec, int(n), q)


def total_mass(spec: UnitDistSpec, q: QuadConfig = DEFAULT):
    """Integral of the density over (0, 1); 1 up to quadrature error."""
    return _moment(spec, 0, q)
