"""Compiled scalar kernels. Array entry points mirror ``_kernels_numpy``."""

import math

import numba as nb
import numpy as np

from ._constants import (
    DIGAMMA_COEF,
    HALF_LOG_2PI,
    LGAMMA1P_COEF,
    STIRLING_COEF,
)

_jit = nb.njit(cache=True, nogil=True)

EPS = 2.220446049250313e-16
TINY = 1e-300
MAX_CF_ITER = 10_000
MAX_SERIES_TERMS = 1_000_000
CF_TOL = 3e-16


@_jit
def _lgamma1p_series(e):
    acc = 0.0
    p = e
    for k in range(LGAMMA1P_COEF.shape[0]):
        acc += LGAMMA1P_COEF[k] * p
        p *= e
    return acc


@_jit
def lgamma_scalar(x):
    if not x > 0.0:
        return np.nan
    acc = 0.0
    if x < 0.7:
        acc = -math.log(x)
        x = x + 1.0
    if abs(x - 1.0) <= 0.3:
        return acc + _lgamma1p_series(x - 1.0)
    if abs(x - 2.0) <= 0.3:
        return acc + math.log1p(x - 2.0) + _lgamma1p_series(x - 2.0)
    if x < 10.0:
        prod = 1.0
        while x < 10.0:
            prod *= x
            x += 1.0
        acc -= math.log(prod)
    inv = 1.0 / x
    inv2 = inv * inv
    corr = 0.0
    p = inv
    for k in range(STIRLING_COEF.shape[0]):
        corr += STIRLING_COEF[k] * p
        p *= inv2
    return acc + (x - 0.5) * math.log(x) - x + HALF_LOG_2PI + corr


@_jit
def digamma_scalar(x):
    if not x > 0.0:
        return np.nan
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    corr = 0.0
    p = inv2
    for k in range(DIGAMMA_COEF.shape[0]):
        corr += DIGAMMA_COEF[k] * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - corr


@_jit
def lbeta_scalar(a, b):
    return lgamma_scalar(a) + lgamma_scalar(b) - lgamma_scalar(a + b)


@_jit
def _betacf(a, b, x):
    # modified Lentz evaluation of the incomplete beta continued fraction
    fpmin = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, MAX_CF_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_TOL:
            return h
    return np.nan


@_jit
def betainc_pair_scalar(a, b, x, xc):
    """(I_x(a, b), 1 - I_x(a, b)); ``xc`` must equal 1 - x to full precision."""
    if x <= 0.0:
        return 0.0, 1.0
    if xc <= 0.0:
        return 1.0, 0.0
    log_front = a * math.log(x) + b * math.log(xc) - lbeta_scalar(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        v = math.exp(log_front) * _betacf(a, b, x) / a
        return v, 1.0 - v
    v = math.exp(log_front) * _betacf(b, a, xc) / b
    return 1.0 - v, v


@_jit
def _hyp2f1_series(a, b, c, z):
    term = 1.0
    total = 1.0
    comp = 0.0
    for n in range(MAX_SERIES_TERMS):
        ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        term *= ratio
        # Kahan step keeps long positive series at full precision near z -> 1
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if term == 0.0:
            return total
        ar = abs(ratio)
        if ar < 1.0 and abs(term) <= EPS * 0.5 * abs(total) * (1.0 - ar):
            return total
    return np.nan


@_jit
def hyp2f1_scalar(a, b, c, z):
    if z >= 1.0:
        return np.nan
    if z == 0.0:
        return 1.0
    if z < 0.0:
        # Pfaff: maps (-inf, 0) onto (0, 1) so the series never alternates
        w = z / (z - 1.0)
        if c - b < 0.0 and c - a >= 0.0:
            a, b = b, a
        return math.exp(-a * math.log1p(-z)) * _hyp2f1_series(a, c - b, c, w)
    return _hyp2f1_series(a, b, c, z)


@_jit
def gammainc_reg_pair_scalar(s, x):
    """Regularized (P, Q) of the incomplete gamma function."""
    if x <= 0.0:
        return 0.0, 1.0
    log_front = s * math.log(x) - x - lgamma_scalar(s)
    if x < s + 1.0:
        ap = s
        term = 1.0 / s
        total = term
        for _ in range(MAX_CF_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * 1e-17:
                break
        p = total * math.exp(log_front)
        return p, 1.0 - p
    fpmin = 1e-300
    bb = x + 1.0 - s
    c = 1.0 / fpmin
    d = 1.0 / bb
    h = d
    for i in range(1, MAX_CF_ITER + 1):
        an = -i * (i - s)
        bb += 2.0
        d = an * d + bb
        if abs(d) < fpmin:
            d = fpmin
        c = bb + an / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_TOL:
            break
    q = math.exp(log_front) * h
    return 1.0 - q, q


@_jit
def _log_d(x, xc, l1, l2):
    return math.log(x / l2 + xc / l1)


@_jit
def ratio_logpdf_scalar(v, vc, a1, a2, l1, l2, lb):
    s = a1 + a2
    return ((a1 - 1.0) * math.log(v) + (a2 - 1.0) * math.log(vc)
            - a2 * math.log(l1) - a1 * math.log(l2) - lb
            - s * _log_d(v, vc, l1, l2))


@_jit
def _log_g(lx, lxc, x, xc, a1, a2, l1, l2):
    s = a1 + a2
    lh1 = (a1 - 1.0) * lx + (a2 - 1.0) * lxc - s * _log_d(x, xc, l1, l2)
    lh2 = (a1 - 1.0) * lxc + (a2 - 1.0) * lx - s * _log_d(xc, x, l1, l2)
    m = max(lh1, lh2)
    return m + math.log(math.exp(lh1 - m) + math.exp(lh2 - m)), lh1, lh2


@_jit
def _w_point(u, uc):
    if uc < 0.5:
        return math.log1p(-uc)
    return math.log(u)


@_jit
def _z_point(u, uc):
    if u < 0.5:
        return math.log1p(-u)
    return math.log(uc)


@_jit
def logpdf_w_scalar(u, uc, a1, a2, l1, l2, r, lb):
    lw = _w_point(u, uc)
    t = math.exp(lw / (2.0 * r))
    tc = -math.expm1(lw / (2.0 * r))
    x = 0.5 * (1.0 + t)
    xc = 0.5 * tc
    lg, _, _ = _log_g(math.log(x), math.log(xc), x, xc, a1, a2, l1, l2)
    return (-math.log(4.0 * r) - a2 * math.log(l1) - a1 * math.log(l2) - lb
            + (0.5 / r - 1.0) * lw + lg)


@_jit
def logpdf_z_scalar(u, uc, a1, a2, l1, l2, r, lb):
    u = max(u, TINY)
    lzc = _z_point(u, uc)
    oms = -math.expm1(lzc / r)
    q = math.sqrt(oms)
    x = 0.5 * (1.0 + q)
    lxc = lzc / r - math.log(2.0 * (1.0 + q))
    xc = math.exp(lxc)
    lg, _, _ = _log_g(math.log(x), lxc, x, xc, a1, a2, l1, l2)
    return (-math.log(4.0 * r) - a2 * math.log(l1) - a1 * math.log(l2) - lb
            + (1.0 / r - 1.0) * lzc - 0.5 * math.log(oms) + lg)


@_jit
def _common_grad(a1, a2, l1, l2, x, xc, lx, lxc, lh1, lh2, lg, g):
    s = a1 + a2
    w1 = math.exp(lh1 - lg)
    w2 = math.exp(lh2 - lg)
    d1 = x / l2 + xc / l1
    d2 = xc / l2 + x / l1
    ld1 = math.log(d1)
    ld2 = math.log(d2)
    g[0] += w1 * (lx - ld1) + w2 * (lxc - ld2)
    g[1] += w1 * (lxc - ld1) + w2 * (lx - ld2)
    g[2] += s / (l1 * l1) * (w1 * xc / d1 + w2 * x / d2)
    g[3] += s / (l2 * l2) * (w1 * x / d1 + w2 * xc / d2)
    return w1, w2, d1, d2


@_jit
def loglik_grad_w(u, uc, a1, a2, l1, l2, r):
    n = u.shape[0]
    lb = lbeta_scalar(a1, a2)
    s = a1 + a2
    k = 1.0 / l2 - 1.0 / l1
    g = np.zeros(5)
    ll = 0.0
    for i in range(n):
        lw = _w_point(u[i], uc[i])
        t = math.exp(lw / (2.0 * r))
        tc = -math.expm1(lw / (2.0 * r))
        x = 0.5 * (1.0 + t)
        xc = 0.5 * tc
        lx = math.log(x)
        lxc = math.log(xc)
        lg, lh1, lh2 = _log_g(lx, lxc, x, xc, a1, a2, l1, l2)
        ll += (0.5 / r - 1.0) * lw + lg
        w1, w2, d1, d2 = _common_grad(a1, a2, l1, l2, x, xc, lx, lxc, lh1, lh2, lg, g)
        dx = -t * lw / (4.0 * r * r)
        dlx = dx / x
        dlxc = t * lw / (2.0 * r * r * tc)
        dh1 = (a1 - 1.0) * dlx + (a2 - 1.0) * dlxc - s * k * dx / d1
        dh2 = (a1 - 1.0) * dlxc + (a2 - 1.0) * dlx + s * k * dx / d2
        g[4] += -lw / (2.0 * r * r) + w1 * dh1 + w2 * dh2
    ll += n * (-math.log(4.0 * r) - a2 * math.log(l1) - a1 * math.log(l2) - lb)
    psi_s = digamma_scalar(s)
    g[0] += n * (-math.log(l2) - digamma_scalar(a1) + psi_s)
    g[1] += n * (-math.log(l1) - digamma_scalar(a2) + psi_s)
    g[2] += -n * a2 / l1
    g[3] += -n * a1 / l2
    g[4] += -n / r
    return ll, g


@_jit
def loglik_grad_z(u, uc, a1, a2, l1, l2, r):
    n = u.shape[0]
    lb = lbeta_scalar(a1, a2)
    s = a1 + a2
    k = 1.0 / l2 - 1.0 / l1
    g = np.zeros(5)
    ll = 0.0
    for i in range(n):
        lzc = _z_point(max(u[i], TINY), uc[i])
        sp = math.exp(lzc / r)
        oms = -math.expm1(lzc / r)
        q = math.sqrt(oms)
        x = 0.5 * (1.0 + q)
        lxc = lzc / r - math.log(2.0 * (1.0 + q))
        xc = math.exp(lxc)
        lx = math.log(x)
        lg, lh1, lh2 = _log_g(lx, lxc, x, xc, a1, a2, l1, l2)
        ll += (1.0 / r - 1.0) * lzc - 0.5 * math.log(oms) + lg
        w1, w2, d1, d2 = _common_grad(a1, a2, l1, l2, x, xc, lx, lxc, lh1, lh2, lg, g)
        dx = sp * lzc / (4.0 * q * r * r)
        dlx = dx / x
        dlxc = -(1.0 + q) * lzc / (2.0 * q * r * r)
        dh1 = (a1 - 1.0) * dlx + (a2 - 1.0) * dlxc - s * k * dx / d1
        dh2 = (a1 - 1.0) * dlxc + (a2 - 1.0) * dlx + s * k * dx / d2
        g[4] += (-lzc / (r * r) - 0.5 * sp * lzc / (r * r * oms)
                 + w1 * dh1 + w2 * dh2)
    ll += n * (-math.log(4.0 * r) - a2 * math.log(l1) - a1 * math.log(l2) - lb)
    psi_s = digamma_scalar(s)
    g[0] += n * (-math.log(l2) - digamma_scalar(a1) + psi_s)
    g[1] += n * (-math.log(l1) - digamma_scalar(a2) + psi_s)
    g[2] += -n * a2 / l1
    g[3] += -n * a1 / l2
    g[4] += -n / r
    return ll, g


# ---------------------------------------------------------------- array entry points

@_jit
def _lgamma_arr(x):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        out[i] = lgamma_scalar(x[i])
    return out


@_jit
def _digamma_arr(x):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        out[i] = digamma_scalar(x[i])
    return out


@_jit
def _betainc_pair_arr(a, b, x, xc):
    n = x.shape[0]
    lo = np.empty(n)
    hi = np.empty(n)
    for i in range(n):
        lo[i], hi[i] = betainc_pair_scalar(a[i], b[i], x[i], xc[i])
    return lo, hi


@_jit
def _hyp2f1_arr(a, b, c, z):
    out = np.empty_like(z)
    for i in range(z.shape[0]):
        out[i] = hyp2f1_scalar(a[i], b[i], c[i], z[i])
    return out


@_jit
def _gammainc_reg_pair_arr(s, x):
    n = x.shape[0]
    p = np.empty(n)
    q = np.empty(n)
    for i in range(n):
        p[i], q[i] = gammainc_reg_pair_scalar(s[i], x[i])
    return p, q


@_jit
def _ratio_logpdf_arr(v, vc, a1, a2, l1, l2):
    lb = lbeta_scalar(a1, a2)
    out = np.empty_like(v)
    for i in range(v.shape[0]):
        out[i] = ratio_logpdf_scalar(v[i], vc[i], a1, a2, l1, l2, lb)
    return out


@_jit
def _logpdf_w_arr(u, uc, a1, a2, l1, l2, r):
    lb = lbeta_scalar(a1, a2)
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        out[i] = logpdf_w_scalar(u[i], uc[i], a1, a2, l1, l2, r, lb)
    return out


@_jit
def _logpdf_z_arr(u, uc, a1, a2, l1, l2, r):
    lb = lbeta_scalar(a1, a2)
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        out[i] = logpdf_z_scalar(u[i], uc[i], a1, a2, l1, l2, r, lb)
    return out


def lgamma(x):
    return _lgamma_arr(x)


def digamma(x):
    return _digamma_arr(x)


def betainc_pair(a, b, x, xc):
    return _betainc_pair_arr(a, b, x, xc)


def hyp2f1(a, b, c, z):
    return _hyp2f1_arr(a, b, c, z)


def gammainc_reg_pair(s, x):
    return _gammainc_reg_pair_arr(s, x)


def ratio_logpdf(v, vc, a1, a2, l1, l2):
    return _ratio_logpdf_arr(v, vc, a1, a2, l1, l2)


def logpdf_w(u, uc, a1, a2, l1, l2, r):
    return _logpdf_w_arr(u, uc, a1, a2, l1, l2, r)


def logpdf_z(u, uc, a1, a2, l1, l2, r):
    return _logpdf_z_arr(u, uc, a1, a2, l1, l2, r)
