"""Special functions used by the distribution code.

All functions accept scalars or array-likes and return a float for scalar input.
Evaluation is delegated to the active kernel backend (see ``_backend``).
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ._backend import kernels
from .errors import ConvergenceError, DomainError, PreconditionError

__all__ = [
    "HypArgs",
    "log_gamma",
    "digamma",
    "log_beta",
    "beta",
    "reg_inc_beta",
    "reg_inc_beta_pair",
    "lower_inc_gamma",
    "hyp2f1",
    "rational_tail_integral",
]


def _as_array(*args):
    arrs = [np.asarray(a, dtype=np.float64) for a in args]
    shape = np.broadcast_shapes(*(a.shape for a in arrs))
    arrs = [np.broadcast_to(a, shape) for a in arrs]
    scalar = arrs[0].ndim == 0
    shape = arrs[0].shape
    return scalar, shape, [np.require(a, requirements='CW').ravel() for a in arrs]


def _finish(scalar, shape, out):
    out = np.asarray(out).reshape(shape)
    return float(out) if scalar else out


def _require_positive(name, v):
    if not np.all(np.isfinite(v)) or np.any(v <= 0.0):
        raise DomainError(f"{name} must be positive and finite")


def log_gamma(x):
    """Natural log of the gamma function for x > 0."""
    scalar, shape, (xv,) = _as_array(x)
    _require_positive("x", xv)
    return _finish(scalar, shape, kernels.lgamma(xv))


def digamma(x):
    """Digamma function psi(x) = Gamma'(x) / Gamma(x) for x > 0."""
    scalar, shape, (xv,) = _as_array(x)
    _require_positive("x", xv)
    return _finish(scalar, shape, kernels.digamma(xv))


def log_beta(a, b):
    scalar, shape, (av, bv) = _as_array(a, b)
    _require_positive("a", av)
    _require_positive("b", bv)
    out = kernels.lgamma(av) + kernels.lgamma(bv) - kernels.lgamma(av + bv)
    return _finish(scalar, shape, out)


def beta(a, b):
    """Complete beta function B(a, b), computed through log-gamma."""
    return np.exp(log_beta(a, b)) if np.ndim(a) or np.ndim(b) else math.exp(log_beta(a, b))


def reg_inc_beta_pair(x, a, b, xc=None):
    """Return ``(I_x(a, b), 1 - I_x(a, b))`` with both tails at full precision.

    ``xc`` may carry 1 - x when the caller knows it more accurately than
    ``1 - x`` would give.
    """
    if xc is None:
        xc = 1.0 - np.asarray(x, dtype=np.float64)
    scalar, shape, (xv, xcv, av, bv) = _as_array(x, xc, a, b)
    _require_positive("a", av)
    _require_positive("b", bv)
    if np.any((xv < 0.0) | (xv > 1.0)) or np.any(np.isnan(xv)):
        raise DomainError("x must lie in [0, 1]")
    lo, hi = kernels.betainc_pair(av, bv, xv, xcv)
    if np.any(np.isnan(lo)):
        raise ConvergenceError("incomplete beta continued fraction did not converge")
    if scalar:
        return float(lo[0]), float(hi[0])
    return lo.reshape(shape), hi.reshape(shape)


def reg_inc_beta(x, a, b):
    """Regularized incomplete beta function I_x(a, b)."""
    return reg_inc_beta_pair(x, a, b)[0]


def lower_inc_gamma(s, x):
    """Lower incomplete gamma function gamma(s, x) (not regularized)."""
    scalar, shape, (sv, xv) = _as_array(s, x)
    _require_positive("s", sv)
    if np.any(xv < 0.0) or np.any(np.isnan(xv)):
        raise DomainError("x must be nonnegative")
    p, _ = kernels.gammainc_reg_pair(sv, xv)
    return _finish(scalar, shape, p * np.exp(kernels.lgamma(sv)))


class HypArgs(NamedTuple):
    """Arguments of the Gauss hypergeometric function 2F1(a, b; c; z)."""

    a: float
    b: float
    c: float
    z: float

    def validate(self):
        if self.c <= 0 and float(self.c).is_integer():
            raise DomainError("c must not be zero or a negative integer")
        if not self.z < 1.0:
            raise DomainError("2F1 is only evaluated for z < 1")
        return self


def hyp2f1(a, b, c, z):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.

    Uses the power series directly for 0 <= z < 1 and the Pfaff
    transformation for z < 0, so every summed series has argument in [0, 1).
    """
    scalar, shape, (av, bv, cv, zv) = _as_array(a, b, c, z)
    bad_c = (cv <= 0.0) & (cv == np.round(cv))
    if np.any(bad_c):
        raise DomainError("c must not be zero or a negative integer")
    if np.any(~(zv < 1.0)):
        raise DomainError("2F1 is only evaluated for z < 1")
    out = kernels.hyp2f1(av, bv, cv, zv)
    if np.any(np.isnan(out)):
        raise ConvergenceError("2F1 series exceeded 1e6 terms")
    return _finish(scalar, shape, out)


def _log_rtail_prefactor(a, b, c, p, q):
    return (q - 1.0) * math.log(a) - (p + q - 1.0) * math.log(b) - q * math.log(c) \
        - math.log(p + q - 1.0)


def rational_tail_integral(a, b, c, e, p, q, *, log=False):
    """Closed form of the integral of 1 / ((a x + b)^p (c x + e)^q) over (0, inf).

    Requires a, b, c, e > 0, a e <= 2 b c and p + q > 1.  With ``log=True`` the
    natural log of the value is returned (the integrand is positive).
    """
    for name, v in (("a", a), ("b", b), ("c", c), ("e", e)):
        if not (math.isfinite(v) and v > 0.0):
            raise PreconditionError(f"{name} must be positive (got {v})")
    # a*e = 2*b*c puts the 2F1 argument at -1, still inside the accepted range
    if not a * e <= 2.0 * b * c:
        raise PreconditionError(f"requires a*e <= 2*b*c (got a*e={a * e}, 2*b*c={2 * b * c})")
    if not p + q > 1.0:
        raise PreconditionError(f"requires p + q > 1 (got {p + q})")
    z = 1.0 - (a * e) / (b * c)
    lv = _log_rtail_prefactor(a, b, c, p, q) + math.log(hyp2f1(q, p + q - 1.0, p + q, z))
    return lv if log else math.exp(lv)
