"""Maximum likelihood for W and Z samples.

The density depends on the rates only through lambda2 / lambda1, so the
five-parameter likelihood is flat along (lambda1, lambda2) -> (c lambda1,
c lambda2).  The default profile pins lambda1 = 1.  The density is also
unchanged by relabelling (alpha1, lambda1) <-> (alpha2, lambda2); fitted
estimates are reported with alpha1 <= alpha2.
"""

from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from ._backend import kernels
from .dists import Family, UnitDistSpec
from .errors import DegenerateDataError, DomainError, SingularHessianError
from .ratio import GammaRatioParams, w_sub, z_sub

log = logging.getLogger(__name__)

__all__ = [
    "ThetaVector",
    "Profile",
    "FitResult",
    "LoglikSentinelWarning",
    "LOGLIK_SENTINEL",
    "loglik",
    "loglik_flagged",
    "score",
    "fit",
    "std_errors",
    "initial_theta",
    "initial_candidates",
    "parse_fit_report",
]

NAMES = ("alpha1", "alpha2", "lambda1", "lambda2", "r")
LOGLIK_SENTINEL = -1e300
DEGENERACY_NOTE = ("log-likelihood is flat along joint rate scaling "
                   "(lambda1, lambda2) -> (c*lambda1, c*lambda2); only lambda2/lambda1 is identified")


class LoglikSentinelWarning(RuntimeWarning):
    """The log-likelihood was -inf or nan and has been replaced by a sentinel."""


@dataclass(frozen=True)
class ThetaVector:
    alpha1: float
    alpha2: float
    lambda1: float
    lambda2: float
    r: float

    def __post_init__(self):
        for name in NAMES:
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, float(v))

    @classmethod
    def from_array(cls, a):
        return cls(*(float(v) for v in a))

    @classmethod
    def from_spec(cls, spec: UnitDistSpec):
        return cls(*spec.theta())

    def as_array(self):
        return np.array([getattr(self, n) for n in NAMES])

    def params(self):
        return GammaRatioParams(self.alpha1, self.alpha2, self.lambda1, self.lambda2)

    def spec(self, family):
        return UnitDistSpec(family, self.params(), self.r)

    def canonical(self, lambda1=None):
        """Label-swapped to alpha1 <= alpha2; rates rescaled so lambda1 equals ``lambda1``."""
        a1, a2, l1, l2, r = self.as_array()
        if a1 > a2:
            a1, a2, l1, l2 = a2, a1, l2, l1
        if lambda1 is not None:
            l1, l2 = lambda1, l2 * lambda1 / l1
        return ThetaVector(a1, a2, l1, l2, r)


class Profile(str, enum.Enum):
    FULL = "full"
    LAMBDA1_FIXED = "lambda1_fixed"

    @classmethod
    def parse(cls, v):
        if isinstance(v, cls):
            return v
        return cls(str(v).replace("-", "_"))


@dataclass(frozen=True)
class FitResult:
    theta_hat: ThetaVector
    loglik: float
    converged: bool
    iterations: int
    gradient_norm: float
    constraint_profile: Profile
    std_errors: np.ndarray | None = None
    degenerate: bool = False
    message: str = ""
    start_logliks: tuple = field(default=(), repr=False)

    def report(self):
        """Flat key=value document under a ``[result]`` header (floats in repr form)."""
        lines = ["[result]"]
        for name in NAMES:
            lines.append(f"{name}={getattr(self.theta_hat, name)!r}")
        lines.append(f"loglik={self.loglik!r}")
        lines.append(f"converged={str(self.converged).lower()}")
        lines.append(f"iterations={self.iterations}")
        lines.append(f"gradient_norm={self.gradient_norm!r}")
        lines.append(f"profile={self.constraint_profile.value}")
        lines.append(f"degenerate={str(self.degenerate).lower()}")
        if self.std_errors is None:
            lines.append("std_errors=none")
        else:
            for name, v in zip(NAMES, self.std_errors):
                lines.append(f"se_{name}={float(v)!r}")
        if self.message:
            lines.append(f"message={self.message}")
        return "\n".join(lines) + "\n"


def parse_fit_report(text):
    """Read the ``[result]`` block of a fit report back into (ThetaVector, dict)."""
    fields = {}
    inside = False
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("[") and line.endswith("]"):
            inside = line == "[result]"
            continue
        if inside and "=" in line:
            k, v = line.split("=", 1)
            fields[k] = v
    theta = ThetaVector(*(float(fields[n]) for n in NAMES))
    return theta, fields


def _as_data(data):
    x = np.ascontiguousarray(data, dtype=np.float64).ravel()
    if x.size == 0:
        raise DomainError("data must be nonempty")
    bad = np.nonzero(~((x > 0.0) & (x < 1.0)))[0]
    if bad.size:
        raise DomainError(f"data[{bad[0]}] = {x[bad[0]]!r} lies outside (0, 1)")
    return x, np.ascontiguousarray(1.0 - x)


def _kernel(family):
    return kernels.loglik_grad_w if Family.parse(family) is Family.W else kernels.loglik_grad_z


def _eval(family, u, uc, theta_arr):
    ll, g = _kernel(family)(u, uc, *(float(v) for v in theta_arr))
    return float(ll), np.asarray(g, dtype=np.float64)


def loglik_flagged(family, data, theta: ThetaVector):
    """Return (loglik, flagged); flagged is True when the sentinel replaced -inf/nan."""
    u, uc = _as_data(data)
    ll, _ = _eval(family, u, uc, theta.as_array())
    if not math.isfinite(ll):
        return LOGLIK_SENTINEL, True
    return ll, False


def loglik(family, data, theta: ThetaVector):
    """Sum over the sample of log f(u_i; theta)."""
    ll, flagged = loglik_flagged(family, data, theta)
    if flagged:
        warnings.warn("log-likelihood is not finite; returning sentinel", LoglikSentinelWarning,
                      stacklevel=2)
    return ll


# "analytic" or "central"; the latter differentiates loglik numerically and
# exists to cross-check the analytic kernel partials
SCORE_METHOD = "analytic"


def _central_score(family, u, uc, theta_arr, rel_h=1e-6):
    g = np.empty(5)
    for i in range(5):
        h = rel_h * theta_arr[i]
        up, dn = theta_arr.copy(), theta_arr.copy()
        up[i] += h
        dn[i] -= h
        g[i] = (_eval(family, u, uc, up)[0] - _eval(family, u, uc, dn)[0]) / (2.0 * h)
    return g


def score(family, data, theta: ThetaVector, method=None):
    """Gradient of :func:`loglik` with respect to (alpha1, alpha2, lambda1, lambda2, r)."""
    method = method or SCORE_METHOD
    u, uc = _as_data(data)
    if method == "central":
        return _central_score(family, u, uc, theta.as_array())
    if method != "analytic":
        raise ValueError(f"unknown score method {method!r}")
    return _eval(family, u, uc, theta.as_array())[1]


_INIT_R_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)


def _matched_beta(y):
    m, v = float(np.mean(y)), float(np.var(y))
    k = m * (1.0 - m) / v - 1.0 if v > 0.0 else 1.0
    k = k if k > 0.0 else 1.0
    return (float(np.clip(m * k, 0.01, 500.0)), float(np.clip((1.0 - m) * k, 0.01, 500.0)))


def _matched_symmetric(y):
    v = float(np.mean((y - 0.5) ** 2))
    a = float(np.clip(0.5 * (0.25 / v - 1.0), 0.01, 500.0)) if v > 0.0 else 1.0
    return a, a


def initial_candidates(family, data):
    """Moment-matching starts with equal rates, best first.

    For each r on a coarse grid the data are mapped back to their upper
    preimages y.  Two Beta laws are moment-matched: one to y itself, one to
    the symmetrised sample {y, 1 - y} (the fold hides the side of 1/2 a draw
    came from).  For each matching rule the grid point with the highest
    log-likelihood is kept (ties go to r nearest 1).
    """
    family = Family.parse(family)
    u, uc = _as_data(data)
    if np.all(u == u[0]):
        raise DegenerateDataError("all data values are identical")
    sub = w_sub if family is Family.W else z_sub
    grid = sorted(_INIT_R_GRID, key=lambda v: abs(math.log(v)))
    out = []
    for rule in (_matched_symmetric, _matched_beta):
        best, best_ll = ThetaVector(1.0, 1.0, 1.0, 1.0, 1.0), -math.inf
        for r in grid:
            th = ThetaVector(*rule(sub(u, r)), 1.0, 1.0, r)
            ll, _ = _eval(family, u, uc, th.as_array())
            if math.isfinite(ll) and ll > best_ll:
                best, best_ll = th, ll
        out.append((best_ll, best))
    out.sort(key=lambda c: -c[0])
    return [th for _, th in out]


def initial_theta(family, data):
    """The heuristic start used as start 0 by :func:`fit`."""
    return initial_candidates(family, data)[0]


_LOG_BOUND = 14.0


class _Objective:
    """Negative mean log-likelihood in log-parameters over the free coordinates."""

    def __init__(self, family, u, uc, free, base):
        self.family, self.u, self.uc = family, u, uc
        self.free = np.asarray(free)
        self.base = np.asarray(base, dtype=np.float64)
        self.n = u.size

    def theta(self, phi):
        th = self.base.copy()
        th[self.free] = np.exp(phi)
        return th

    def full(self, phi):
        th = self.theta(phi)
        ll, g = _eval(self.family, self.u, self.uc, th)
        return ll, g, th

    def __call__(self, phi):
        ll, g, th = self.full(phi)
        if not (math.isfinite(ll) and np.all(np.isfinite(g))):
            return 1e10, np.zeros(phi.size)
        return -ll / self.n, -(g * th)[self.free] / self.n

    def log_grad(self, phi):
        ll, g, th = self.full(phi)
        return (g * th)[self.free]

    def hessian(self, phi, h=1e-5):
        d = phi.size
        hmat = np.empty((d, d))
        for i in range(d):
            e = np.zeros(d)
            e[i] = h
            hmat[:, i] = (self.log_grad(phi + e) - self.log_grad(phi - e)) / (2.0 * h)
        return 0.5 * (hmat + hmat.T)


def _newton_polish(obj, phi, gtol, max_steps=30):
    ll, g, th = obj.full(phi)
    steps = 0
    for steps in range(1, max_steps + 1):
        gth = g[obj.free]
        if np.max(np.abs(gth)) < gtol:
            break
        glog = (g * th)[obj.free]
        hmat = obj.hessian(phi)
        step = -np.linalg.lstsq(hmat, glog, rcond=1e-10)[0]
        if not np.all(np.isfinite(step)) or glog @ step <= 0.0:
            step = 1e-3 * glog / max(1.0, np.max(np.abs(glog)))
        improved = False
        for _ in range(30):
            cand = np.clip(phi + step, -_LOG_BOUND, _LOG_BOUND)
            ll_c, g_c, th_c = obj.full(cand)
            if math.isfinite(ll_c) and ll_c >= ll - 1e-12 * abs(ll):
                improved = ll_c > ll or np.max(np.abs(g_c[obj.free])) < np.max(np.abs(gth))
                if improved:
                    phi, ll, g, th = cand, ll_c, g_c, th_c
                break
            step = 0.5 * step
        if not improved:
            break
    return phi, ll, g, steps


def _one_start(obj, phi0, gtol, maxiter):
    bounds = [(-_LOG_BOUND, _LOG_BOUND)] * phi0.size
    res = minimize(obj, phi0, jac=True, method="L-BFGS-B", bounds=bounds,
                   options={"maxiter": maxiter, "ftol": 1e-15, "gtol": 1e-12})
    phi, ll, g, steps = _newton_polish(obj, np.asarray(res.x), gtol)
    return phi, ll, g, int(res.nit) + steps, res


def fit(family, data, profile="lambda1_fixed", init: ThetaVector | None = None, *,
        starts=5, seed=0, gtol=1e-6, maxiter=1000, compute_std_errors=True, fixed=None):
    """Maximise the log-likelihood over positive theta.

    Optimisation runs on log-parameters: L-BFGS-B with the analytic score,
    then Newton steps on a finite-difference Hessian of the score.  Start 0 is
    ``init`` or the best heuristic candidate; without ``init`` start 1 is
    the other candidate of :func:`initial_candidates`.  The remaining starts
    perturb start 0 by a log-uniform factor in [1/1.5, 1.5] per coordinate.  ``fixed`` maps
    parameter names to values held constant (on top of the profile).
    """
    family = Family.parse(family)
    profile = Profile.parse(profile)
    u, uc = _as_data(data)
    if np.all(u == u[0]):
        raise DegenerateDataError("all data values are identical")
    seeds = [init] if init is not None else initial_candidates(family, u)
    held = dict(fixed or {})
    if profile is Profile.LAMBDA1_FIXED:
        held.setdefault("lambda1", 1.0)
    free = [i for i, n in enumerate(NAMES) if n not in held]

    def pinned_log(th):
        a = th.as_array()
        if "lambda1" in held and "lambda2" not in held:
            a[3] *= float(held["lambda1"]) / a[2]  # keep the identified ratio
        for name, v in held.items():
            a[NAMES.index(name)] = float(v)
        return a, np.log(a[free])

    base, phi0 = pinned_log(seeds[0])
    obj = _Objective(family, u, uc, free, base)
    rng = np.random.default_rng(seed)
    best = None
    lls = []
    for k in range(max(1, int(starts))):
        if k < len(seeds):
            start = pinned_log(seeds[k])[1]
        else:
            start = phi0 + rng.uniform(-math.log(1.5), math.log(1.5), phi0.size)
        phi, ll, g, iters, _ = _one_start(obj, np.clip(start, -_LOG_BOUND, _LOG_BOUND), gtol,
                                          maxiter)
        lls.append(ll)
        if best is None or ll > best[1] + 1e-9 * abs(ll):
            best = (phi, ll, g, iters)
    phi, ll, g, iters = best
    th = obj.theta(phi)
    gnorm = float(np.max(np.abs(g[free])))
    degenerate = profile is Profile.FULL and {"lambda1", "lambda2"}.isdisjoint(held)
    converged = gnorm < gtol
    pinned = held.get("lambda1")
    theta = ThetaVector.from_array(th)
    if "alpha1" not in held and "alpha2" not in held:
        theta = theta.canonical(pinned if profile is Profile.LAMBDA1_FIXED else None)
    messages = []
    if degenerate:
        messages.append(DEGENERACY_NOTE)
        warnings.warn(DEGENERACY_NOTE, RuntimeWarning, stacklevel=2)
    if np.any(np.abs(phi) > _LOG_BOUND - 4.0):
        messages.append("estimate drifted toward the parameter boundary; the likelihood "
                        "supremum may not be attained in the interior")
    if not converged:
        messages.append(f"score norm {gnorm:.3g} above tolerance {gtol:g}")
    ses = None
    if compute_std_errors and converged:
        try:
            ses = std_errors(family, u, theta, profile=profile, fixed=held)
        except SingularHessianError as exc:
            messages.append(f"standard errors unavailable: {exc}")
    return FitResult(theta, ll, converged, iters, gnorm, profile, ses, degenerate,
                     "; ".join(messages), tuple(lls))


def std_errors(family, data, theta_hat: ThetaVector, *, profile="lambda1_fixed", fixed=None,
               rel_h=1e-5, singular_tol=1e-8):
    """Observed-information standard errors for the five parameters.

    Held parameters (lambda1 under the default profile) get nan.  Raises
    :class:`SingularHessianError` when the Hessian of the free block is
    numerically singular, as it is under the full profile.
    """
    family = Family.parse(family)
    profile = Profile.parse(profile)
    u, uc = _as_data(data)
    held = dict(fixed or {})
    if profile is Profile.LAMBDA1_FIXED:
        held.setdefault("lambda1", theta_hat.lambda1)
    free = [i for i, n in enumerate(NAMES) if n not in held]
    th = theta_hat.as_array()
    d = len(free)
    hmat = np.empty((d, d))
    for col, i in enumerate(free):
        h = rel_h * th[i]
        up, dn = th.copy(), th.copy()
        up[i] += h
        dn[i] -= h
        hmat[:, col] = ((_eval(family, u, uc, up)[1] - _eval(family, u, uc, dn)[1])[free]
                        / (2.0 * h))
    hmat = 0.5 * (hmat + hmat.T)
    scale = np.sqrt(np.abs(np.diag(hmat)))
    if np.any(scale == 0.0):
        raise SingularHessianError("Hessian has a zero diagonal entry")
    norm = hmat / np.outer(scale, scale)
    eig = np.linalg.eigvalsh(norm)
    if np.min(np.abs(eig)) < singular_tol * np.max(np.abs(eig)) or np.max(eig) >= 0.0:
        raise SingularHessianError(
            f"observed information is singular or indefinite (eigenvalues of the normalised "
            f"Hessian from {eig.min():.3g} to {eig.max():.3g})")
    cov = np.linalg.inv(-hmat)
    out = np.full(5, np.nan)
    out[free] = np.sqrt(np.diag(cov))
    return out
