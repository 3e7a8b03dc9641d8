import math

import numpy as np
import pytest
from scipy import integrate, stats

from unitratio.errors import DomainError
from unitratio.quadrature import QuadConfig
from unitratio.ratio import (GammaRatioParams, TransformPower, g_kernel, ratio_cdf,
                             ratio_cdf_pair, ratio_logpdf, ratio_pdf, s_transform, t_transform,
                             w_sub, z_sub)

V = np.linspace(0.005, 0.995, 100)


def brute_ratio_pdf(v, a1, a2, l1, l2):
    # the textbook form with rates in the numerator
    lb = math.lgamma(a1) + math.lgamma(a2) - math.lgamma(a1 + a2)
    return math.exp(a1 * math.log(l1) + a2 * math.log(l2) + (a1 - 1) * math.log(v)
                    + (a2 - 1) * math.log1p(-v) - (a1 + a2) * math.log(l1 * v + l2 * (1 - v))
                    - lb)


class TestParams:
    @pytest.mark.parametrize("kw", [dict(alpha1=0), dict(alpha2=-1), dict(lambda1=float("inf")),
                                    dict(lambda2=float("nan"))])
    def test_invalid(self, kw):
        base = dict(alpha1=1.0, alpha2=1.0, lambda1=1.0, lambda2=1.0)
        base.update(kw)
        with pytest.raises(DomainError):
            GammaRatioParams(**base)

    def test_ratio_and_scaling(self):
        p = GammaRatioParams(2, 3, 2, 5)
        assert p.rate_ratio == 2.5
        assert p.scaled(10).rate_ratio == pytest.approx(2.5)
        assert not p.equal_rates and GammaRatioParams(1, 2, 3, 3).equal_rates

    def test_power(self):
        assert float(TransformPower(2)) == 2.0
        with pytest.raises(DomainError):
            TransformPower(0)


class TestTransforms:
    @pytest.mark.parametrize("r", [0.3, 1.0, 2.5])
    def test_zero_at_half(self, r):
        assert s_transform(0.5, r) == 0.0
        assert t_transform(0.5, r) == 0.0

    def test_examples(self):
        assert s_transform(0.25, 1) == pytest.approx(0.25, abs=1e-16)
        assert t_transform(0.25, 1) == pytest.approx(0.25, abs=1e-16)
        x = 0.146447
        assert t_transform(x, 0.5) == pytest.approx(1 - math.sqrt(4 * x * (1 - x)), rel=1e-14)
        assert t_transform(x, 0.5) == pytest.approx(0.292893, abs=1e-6)

    @pytest.mark.parametrize("r", [0.3, 1.0, 3.0])
    def test_symmetric(self, r):
        x = np.linspace(0.01, 0.49, 49)
        xc = 1 - x
        np.testing.assert_array_equal(s_transform(x, r, xc), s_transform(xc, r, x))
        np.testing.assert_array_equal(t_transform(x, r, xc), t_transform(xc, r, x))

    @pytest.mark.parametrize("r", [0.3, 0.5, 1.0, 2.0])
    def test_inverse_branches(self, r):
        w = np.linspace(0.01, 0.99, 50)
        np.testing.assert_allclose(s_transform((1 - w ** (0.5 / r)) / 2, r), w, rtol=1e-12)
        np.testing.assert_allclose(s_transform(w_sub(w, r), r), w, rtol=1e-12)
        np.testing.assert_allclose(t_transform(z_sub(w, r), r), w, rtol=1e-10)

    def test_subs(self):
        # w^(1/(2r)) = w at r = 1/2, so (1 + 0.25) / 2
        assert w_sub(0.25, 0.5) == pytest.approx(0.625, rel=1e-15)
        assert w_sub(0.25, 1.0) == pytest.approx(0.75, rel=1e-15)
        assert w_sub(1e-300, 1.0) == pytest.approx(0.5)
        assert w_sub(0.5, 1) == pytest.approx((1 + 0.5 ** 0.5) / 2, rel=1e-15)
        assert z_sub(1e-300, 1.0) == pytest.approx(0.5)
        assert z_sub(0.75, 0.5) == pytest.approx((1 + math.sqrt(1 - 0.0625)) / 2, rel=1e-15)
        u = np.linspace(0.01, 0.99, 99)
        np.testing.assert_allclose(w_sub(u, 1.0), z_sub(u, 1.0), rtol=1e-15)

    @pytest.mark.parametrize("r", [0.3, 1.0, 3.0])
    def test_monotone(self, r):
        u = np.linspace(0.001, 0.999, 500)
        assert np.all(np.diff(w_sub(u, r)) > 0)
        assert np.all(np.diff(z_sub(u, r)) > 0)

    @pytest.mark.parametrize("f", [s_transform, t_transform, w_sub, z_sub])
    @pytest.mark.parametrize("x", [0.0, 1.0, -0.1])
    def test_domain(self, f, x):
        with pytest.raises(DomainError):
            f(x, 1.0)


class TestRatioPdf:
    def test_uniform(self):
        np.testing.assert_allclose(ratio_pdf(V, GammaRatioParams(1, 1, 3, 3)), 1.0, rtol=1e-14)

    @pytest.mark.parametrize("a1,a2", [(0.5, 0.5), (2, 3), (5, 1), (0.7, 4.2)])
    def test_beta_recovery(self, a1, a2):
        got = ratio_pdf(V, GammaRatioParams(a1, a2, 2.0, 2.0))
        np.testing.assert_allclose(got, stats.beta.pdf(V, a1, a2), rtol=1e-12)

    @pytest.mark.parametrize("v", [0.1, 0.3, 0.77])
    def test_against_textbook_form(self, v):
        p = GammaRatioParams(2, 3, 1, 2)
        assert ratio_pdf(v, p) == pytest.approx(brute_ratio_pdf(v, *p.astuple()), rel=1e-13)

    def test_histogram_oracle(self):
        rng = np.random.default_rng(7)
        n = 10 ** 7
        x = rng.gamma(2.0, 1.0, n)
        y = rng.gamma(3.0, 0.5, n)
        v = x / (x + y)
        frac = np.mean((v > 0.295) & (v < 0.305))
        expected = ratio_pdf(0.3, GammaRatioParams(2, 3, 1, 2))
        se = math.sqrt(frac * (1 - frac) / n) / 0.01
        assert abs(frac / 0.01 - expected) < 4 * se + 1e-4

    @pytest.mark.parametrize("c", [0.1, 10.0])
    def test_scale_invariance(self, c):
        p = GammaRatioParams(1.5, 2.5, 1.0, 3.0)
        np.testing.assert_allclose(ratio_pdf(V, p.scaled(c)), ratio_pdf(V, p), rtol=1e-12)

    @pytest.mark.parametrize("a1", [0.5, 1, 2, 5])
    @pytest.mark.parametrize("a2", [0.5, 1, 2, 5])
    @pytest.mark.parametrize("rho", [0.5, 1, 3])
    def test_normalised(self, a1, a2, rho):
        p = GammaRatioParams(a1, a2, 1.0, rho)
        assert ratio_cdf_pair(1.0, p)[0] == 1.0
        val, _ = integrate.quad(lambda v: ratio_pdf(v, p), 0, 1, epsabs=1e-13, limit=200)
        assert val == pytest.approx(1.0, abs=1e-9)

    def test_log_consistency(self):
        p = GammaRatioParams(2, 3, 1, 2)
        np.testing.assert_allclose(np.exp(ratio_logpdf(V, p)), ratio_pdf(V, p), rtol=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            ratio_pdf(0.0, GammaRatioParams(1, 1))
        with pytest.raises(DomainError):
            ratio_pdf(1.0, GammaRatioParams(0.5, 0.5))


class TestRatioCdf:
    def test_examples(self):
        assert ratio_cdf(0.5, GammaRatioParams(3, 3, 2, 2)) == pytest.approx(0.5, abs=1e-14)
        np.testing.assert_allclose(ratio_cdf(V, GammaRatioParams(1, 1)), V, rtol=1e-14)

    def test_two_schemes_agree(self):
        p = GammaRatioParams(2, 3, 1, 2)
        exact = ratio_cdf(0.7, p)
        quad = ratio_cdf(0.7, p, QuadConfig(rel_tol=1e-12), method="quad")
        ref, _ = integrate.quad(lambda v: ratio_pdf(v, p), 0, 0.7, epsabs=0, epsrel=1e-13)
        assert abs(exact - quad) <= 1e-10
        assert abs(exact - ref) <= 1e-10

    @pytest.mark.parametrize("a1,a2,rho", [(0.5, 2, 0.3), (3, 0.4, 5), (1, 1, 2)])
    @pytest.mark.parametrize("v", [1e-3, 0.2, 0.5, 0.9, 0.999])
    def test_quad_matches_exact_singular(self, a1, a2, rho, v):
        p = GammaRatioParams(a1, a2, 1, rho)
        assert abs(ratio_cdf(v, p, method="quad") - ratio_cdf(v, p)) <= 1e-10

    def test_pair_sums_to_one(self):
        lo, hi = ratio_cdf_pair(V, GammaRatioParams(2, 5, 1, 3))
        np.testing.assert_allclose(lo + hi, 1.0, atol=1e-15)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            ratio_cdf(0.5, GammaRatioParams(1, 1), method="simpson")


class TestGKernel:
    def test_equal_rates(self):
        a1, a2 = 2.5, 0.7
        x = np.linspace(0.05, 0.95, 19)
        expected = x ** (a1 - 1) * (1 - x) ** (a2 - 1) + (1 - x) ** (a1 - 1) * x ** (a2 - 1)
        np.testing.assert_allclose(g_kernel(x, GammaRatioParams(a1, a2)), expected, rtol=1e-13)

    @pytest.mark.parametrize("a1,a2", [(1, 1), (2, 3), (0.5, 4)])
    def test_half(self, a1, a2):
        assert g_kernel(0.5, GammaRatioParams(a1, a2)) == pytest.approx(
            2 * 0.5 ** (a1 + a2 - 2), rel=1e-14)

    def test_brute(self):
        a1, a2, l1, l2, x = 2.0, 1.0, 1.0, 2.0, 0.75

        def h(t):
            return t ** (a1 - 1) * (1 - t) ** (a2 - 1) / (t / l2 + (1 - t) / l1) ** (a1 + a2)
        assert g_kernel(x, GammaRatioParams(a1, a2, l1, l2)) == pytest.approx(h(x) + h(1 - x),
                                                                                rel=1e-14)

    def test_symmetric(self):
        p = GammaRatioParams(2, 3.5, 1, 4)
        x = np.linspace(0.05, 0.45, 9)
        np.testing.assert_allclose(g_kernel(x, p), g_kernel(1 - x, p), rtol=1e-13)
