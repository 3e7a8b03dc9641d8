"""Vectorised numpy kernels; same entry points and results as ``_kernels_numba``."""

import numpy as np

from ._constants import (
    DIGAMMA_COEF,
    HALF_LOG_2PI,
    LGAMMA1P_COEF,
    STIRLING_COEF,
)

EPS = 2.220446049250313e-16
TINY = 1e-300
FPMIN = 1e-300
MAX_CF_ITER = 10_000
MAX_SERIES_TERMS = 1_000_000
CF_TOL = 3e-16


def _horner_odd(coef, inv, inv2):
    acc = np.zeros_like(inv)
    for c in coef[::-1]:
        acc = acc * inv2 + c
    return acc * inv


def _lgamma1p_series(e):
    acc = np.zeros_like(e)
    for c in LGAMMA1P_COEF[::-1]:
        acc = (acc + c) * e
    return acc


def lgamma(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.full_like(x, np.nan)
    ok = x > 0.0
    xv = x[ok]
    acc = np.where(xv < 0.7, -np.log(np.where(xv < 0.7, xv, 1.0)), 0.0)
    xv = np.where(xv < 0.7, xv + 1.0, xv)

    res = np.empty_like(xv)
    near1 = np.abs(xv - 1.0) <= 0.3
    near2 = np.abs(xv - 2.0) <= 0.3
    rest = ~(near1 | near2)
    res[near1] = _lgamma1p_series(xv[near1] - 1.0)
    e2 = xv[near2] - 2.0
    res[near2] = np.log1p(e2) + _lgamma1p_series(e2)

    y = xv[rest].copy()
    prod = np.ones_like(y)
    low = y < 10.0
    while low.any():
        prod[low] *= y[low]
        y[low] += 1.0
        low = y < 10.0
    inv = 1.0 / y
    corr = _horner_odd(STIRLING_COEF, inv, inv * inv)
    res[rest] = (y - 0.5) * np.log(y) - y + HALF_LOG_2PI + corr - np.log(prod)

    out[ok] = acc + res
    return out


def digamma(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.full_like(x, np.nan)
    ok = x > 0.0
    y = x[ok].copy()
    acc = np.zeros_like(y)
    low = y < 10.0
    while low.any():
        acc[low] -= 1.0 / y[low]
        y[low] += 1.0
        low = y < 10.0
    inv2 = 1.0 / (y * y)
    corr = np.zeros_like(y)
    for c in DIGAMMA_COEF[::-1]:
        corr = (corr + c) * inv2
    out[ok] = acc + np.log(y) - 0.5 / y - corr
    return out


def _lbeta(a, b):
    return lgamma(a) + lgamma(b) - lgamma(a + b)


def _clip_tiny(v):
    return np.where(np.abs(v) < FPMIN, FPMIN, v)


def _betacf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 / _clip_tiny(1.0 - qab * x / qap)
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for m in range(1, MAX_CF_ITER + 1):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            return h
        aa_, bb_, xx = a[idx], b[idx], x[idx]
        cc, dd = c[idx], d[idx]
        m2 = 2 * m
        aa = m * (bb_ - m) * xx / ((qam[idx] + m2) * (aa_ + m2))
        dd = 1.0 / _clip_tiny(1.0 + aa * dd)
        cc = _clip_tiny(1.0 + aa / cc)
        hh = h[idx] * dd * cc
        aa = -(aa_ + m) * (qab[idx] + m) * xx / ((aa_ + m2) * (qap[idx] + m2))
        dd = 1.0 / _clip_tiny(1.0 + aa * dd)
        cc = _clip_tiny(1.0 + aa / cc)
        delta = dd * cc
        h[idx] = hh * delta
        c[idx] = cc
        d[idx] = dd
        active[idx[np.abs(delta - 1.0) < CF_TOL]] = False
    h[active] = np.nan
    return h


def betainc_pair(a, b, x, xc):
    a, b, x, xc = (np.asarray(v, dtype=np.float64) for v in (a, b, x, xc))
    lo = np.zeros_like(x)
    hi = np.ones_like(x)
    top = xc <= 0.0
    lo[top] = 1.0
    hi[top] = 0.0
    inner = (x > 0.0) & ~top
    ai, bi, xi, xci = a[inner], b[inner], x[inner], xc[inner]
    log_front = ai * np.log(xi) + bi * np.log(xci) - _lbeta(ai, bi)
    direct = xi < (ai + 1.0) / (ai + bi + 2.0)
    v = np.empty_like(xi)
    v[direct] = (np.exp(log_front[direct]) * _betacf(ai[direct], bi[direct], xi[direct])
                 / ai[direct])
    flip = ~direct
    v[flip] = (np.exp(log_front[flip]) * _betacf(bi[flip], ai[flip], xci[flip])
               / bi[flip])
    lo_i = np.where(direct, v, 1.0 - v)
    hi_i = np.where(direct, 1.0 - v, v)
    lo[inner] = lo_i
    hi[inner] = hi_i
    return lo, hi


def _hyp2f1_series(a, b, c, z):
    term = np.ones_like(z)
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    active = np.ones(z.shape, dtype=bool)
    for n in range(MAX_SERIES_TERMS):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            return total
        ratio = (a[idx] + n) * (b[idx] + n) / ((c[idx] + n) * (n + 1.0)) * z[idx]
        tm = term[idx] * ratio
        y = tm - comp[idx]
        t = total[idx] + y
        comp[idx] = (t - total[idx]) - y
        total[idx] = t
        term[idx] = tm
        ar = np.abs(ratio)
        done = (tm == 0.0) | ((ar < 1.0) & (np.abs(tm) <= EPS * 0.5 * np.abs(t) * (1.0 - ar)))
        active[idx[done]] = False
    total[active] = np.nan
    return total


def hyp2f1(a, b, c, z):
    a, b, c, z = (np.asarray(v, dtype=np.float64) for v in (a, b, c, z))
    out = np.full_like(z, np.nan)
    out[z == 0.0] = 1.0
    pos = (z > 0.0) & (z < 1.0)
    out[pos] = _hyp2f1_series(a[pos], b[pos], c[pos], z[pos])
    neg = z < 0.0
    if neg.any():
        zn = z[neg]
        w = zn / (zn - 1.0)
        an, bn, cn = a[neg], b[neg], c[neg]
        swap = (cn - bn < 0.0) & (cn - an >= 0.0)
        an, bn = np.where(swap, bn, an), np.where(swap, an, bn)
        out[neg] = np.exp(-an * np.log1p(-zn)) * _hyp2f1_series(an, cn - bn, cn, w)
    return out


def gammainc_reg_pair(s, x):
    s, x = (np.asarray(v, dtype=np.float64) for v in (s, x))
    p = np.zeros_like(x)
    q = np.ones_like(x)
    pos = x > 0.0
    log_front = np.zeros_like(x)
    log_front[pos] = s[pos] * np.log(x[pos]) - x[pos] - lgamma(s[pos])

    ser = pos & (x < s + 1.0)
    if ser.any():
        ss, xs = s[ser], x[ser]
        ap = ss.copy()
        term = 1.0 / ss
        total = term.copy()
        active = np.ones(ss.shape, dtype=bool)
        for _ in range(MAX_CF_ITER):
            if not active.any():
                break
            ap[active] += 1.0
            term[active] *= xs[active] / ap[active]
            total[active] += term[active]
            active &= ~(np.abs(term) < np.abs(total) * 1e-17)
        pv = total * np.exp(log_front[ser])
        p[ser] = pv
        q[ser] = 1.0 - pv

    cf = pos & ~ser
    if cf.any():
        ss, xs = s[cf], x[cf]
        bb = xs + 1.0 - ss
        c = np.full_like(xs, 1.0 / FPMIN)
        d = 1.0 / bb
        h = d.copy()
        active = np.ones(xs.shape, dtype=bool)
        for i in range(1, MAX_CF_ITER + 1):
            if not active.any():
                break
            k = active
            an = -i * (i - ss[k])
            bb[k] += 2.0
            dd = 1.0 / _clip_tiny(an * d[k] + bb[k])
            cc = _clip_tiny(bb[k] + an / c[k])
            delta = dd * cc
            h[k] *= delta
            d[k] = dd
            c[k] = cc
            done = np.zeros_like(active)
            done[np.nonzero(k)[0][np.abs(delta - 1.0) < CF_TOL]] = True
            active &= ~done
        qv = np.exp(log_front[cf]) * h
        p[cf] = 1.0 - qv
        q[cf] = qv
    return p, q


def _log_d(x, xc, l1, l2):
    return np.log(x / l2 + xc / l1)


def ratio_logpdf(v, vc, a1, a2, l1, l2):
    lb = _lbeta(np.float64(a1), np.float64(a2))
    return ((a1 - 1.0) * np.log(v) + (a2 - 1.0) * np.log(vc)
            - a2 * np.log(l1) - a1 * np.log(l2) - lb
            - (a1 + a2) * _log_d(v, vc, l1, l2))


def _log_g(lx, lxc, x, xc, a1, a2, l1, l2):
    s = a1 + a2
    lh1 = (a1 - 1.0) * lx + (a2 - 1.0) * lxc - s * _log_d(x, xc, l1, l2)
    lh2 = (a1 - 1.0) * lxc + (a2 - 1.0) * lx - s * _log_d(xc, x, l1, l2)
    return np.logaddexp(lh1, lh2), lh1, lh2


def log_accurate(x, xc):
    """log(x) given x and xc = 1 - x, using log1p when x is close to 1."""
    out = np.empty_like(x)
    near = xc < 0.5
    out[near] = np.log1p(-xc[near])
    out[~near] = np.log(x[~near])
    return out


def _w_points(u, uc, r):
    lw = log_accurate(u, uc)
    t = np.exp(lw / (2.0 * r))
    tc = -np.expm1(lw / (2.0 * r))
    x = 0.5 * (1.0 + t)
    xc = 0.5 * tc
    return lw, t, tc, x, xc, np.log(xc)


def _z_points(u, uc, r):
    u = np.maximum(u, TINY)
    lzc = log_accurate(uc, u)
    sp = np.exp(lzc / r)
    oms = -np.expm1(lzc / r)
    q = np.sqrt(oms)
    x = 0.5 * (1.0 + q)
    lxc = lzc / r - np.log(2.0 * (1.0 + q))
    return lzc, sp, oms, q, x, np.exp(lxc), lxc


def _const(n, a1, a2, l1, l2, r):
    lb = _lbeta(np.float64(a1), np.float64(a2))
    return n * (-np.log(4.0 * r) - a2 * np.log(l1) - a1 * np.log(l2) - lb)


def logpdf_w(u, uc, a1, a2, l1, l2, r):
    lw, _, _, x, xc, lxc = _w_points(u, uc, r)
    lg, _, _ = _log_g(np.log(x), lxc, x, xc, a1, a2, l1, l2)
    return _const(1, a1, a2, l1, l2, r) + (0.5 / r - 1.0) * lw + lg


def logpdf_z(u, uc, a1, a2, l1, l2, r):
    lzc, _, oms, _, x, xc, lxc = _z_points(u, uc, r)
    lg, _, _ = _log_g(np.log(x), lxc, x, xc, a1, a2, l1, l2)
    return (_const(1, a1, a2, l1, l2, r) + (1.0 / r - 1.0) * lzc
            - 0.5 * np.log(oms) + lg)


def _grad_common(a1, a2, l1, l2, x, xc, lx, lxc, lh1, lh2, lg, dx, dlx, dlxc):
    s = a1 + a2
    k = 1.0 / l2 - 1.0 / l1
    w1 = np.exp(lh1 - lg)
    w2 = np.exp(lh2 - lg)
    d1 = x / l2 + xc / l1
    d2 = xc / l2 + x / l1
    ld1 = np.log(d1)
    ld2 = np.log(d2)
    g = np.empty(5)
    g[0] = np.sum(w1 * (lx - ld1) + w2 * (lxc - ld2))
    g[1] = np.sum(w1 * (lxc - ld1) + w2 * (lx - ld2))
    g[2] = s / (l1 * l1) * np.sum(w1 * xc / d1 + w2 * x / d2)
    g[3] = s / (l2 * l2) * np.sum(w1 * x / d1 + w2 * xc / d2)
    dh1 = (a1 - 1.0) * dlx + (a2 - 1.0) * dlxc - s * k * dx / d1
    dh2 = (a1 - 1.0) * dlxc + (a2 - 1.0) * dlx + s * k * dx / d2
    return g, w1 * dh1 + w2 * dh2


def _grad_const(g, n, a1, a2, l1, l2, r):
    psi = digamma(np.array([a1, a2, a1 + a2]))
    g[0] += n * (-np.log(l2) - psi[0] + psi[2])
    g[1] += n * (-np.log(l1) - psi[1] + psi[2])
    g[2] -= n * a2 / l1
    g[3] -= n * a1 / l2
    g[4] -= n / r
    return g


def loglik_grad_w(u, uc, a1, a2, l1, l2, r):
    n = u.shape[0]
    lw, t, tc, x, xc, lxc = _w_points(u, uc, r)
    lx = np.log(x)
    lg, lh1, lh2 = _log_g(lx, lxc, x, xc, a1, a2, l1, l2)
    ll = np.sum((0.5 / r - 1.0) * lw + lg) + _const(n, a1, a2, l1, l2, r)
    dx = -t * lw / (4.0 * r * r)
    g, dr = _grad_common(a1, a2, l1, l2, x, xc, lx, lxc, lh1, lh2, lg,
                         dx, dx / x, t * lw / (2.0 * r * r * tc))
    g[4] = np.sum(-lw / (2.0 * r * r) + dr)
    return ll, _grad_const(g, n, a1, a2, l1, l2, r)


def loglik_grad_z(u, uc, a1, a2, l1, l2, r):
    n = u.shape[0]
    lzc, sp, oms, q, x, xc, lxc = _z_points(u, uc, r)
    lx = np.log(x)
    lg, lh1, lh2 = _log_g(lx, lxc, x, xc, a1, a2, l1, l2)
    ll = (np.sum((1.0 / r - 1.0) * lzc - 0.5 * np.log(oms) + lg)
          + _const(n, a1, a2, l1, l2, r))
    dx = sp * lzc / (4.0 * q * r * r)
    g, dr = _grad_common(a1, a2, l1, l2, x, xc, lx, lxc, lh1, lh2, lg,
                         dx, dx / x, -(1.0 + q) * lzc / (2.0 * q * r * r))
    g[4] = np.sum(-lzc / (r * r) - 0.5 * sp * lzc / (r * r * oms) + dr)
    return ll, _grad_const(g, n, a1, a2, l1, l2, r)
