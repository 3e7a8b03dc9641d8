import math

import numpy as np
import pytest

from unitratio.errors import ConvergenceError
from unitratio.quadrature import (QuadConfig, grading_power, integrate, integrate_interval,
                                  integrate_semi_infinite, integrate_unit)


def test_config_validation():
    QuadConfig(rel_tol=1e-6, abs_tol=1e-9, max_subdiv=10)
    for kw in (dict(rel_tol=0.0), dict(abs_tol=1.0), dict(max_subdiv=5), dict(max_subdiv=20.5)):
        with pytest.raises(ValueError):
            QuadConfig(**kw)


def test_polynomial_exact():
    res = integrate(lambda x: x ** 7 - 3 * x ** 2, 0.0, 2.0)
    assert res.converged
    assert res.value == pytest.approx(2 ** 8 / 8 - 8, rel=1e-14)


def test_oscillatory():
    res = integrate(np.sin, 0.0, 20.0 * math.pi, QuadConfig(rel_tol=1e-12, abs_tol=1e-11))
    assert abs(res.value) < 1e-11


def test_breakpoints_kink():
    res = integrate(lambda x: np.abs(x - 0.3), 0.0, 1.0, breakpoints=[0.3])
    assert res.value == pytest.approx(0.045 + 0.245, rel=1e-14)
    assert res.intervals <= 4


def test_failure_is_reported():
    cfg = QuadConfig(rel_tol=1e-14, abs_tol=1e-16, max_subdiv=10)
    with pytest.raises(ConvergenceError) as info:
        integrate(lambda x: np.sin(1.0 / x), 1e-4, 1.0, cfg)
    assert info.value.estimate is not None and info.value.error > 0
    res = integrate(lambda x: np.sin(1.0 / x), 1e-4, 1.0, cfg, raise_on_fail=False)
    assert not res.converged


@pytest.mark.parametrize("beta", [-0.9, -0.5, 0.0, 1.5])
def test_grading(beta):
    m = grading_power(beta)
    assert m == (1.0 if beta >= 0 else pytest.approx(1 / (beta + 1)))


@pytest.mark.parametrize("b0,b1", [(-0.9, 0.0), (-0.5, -0.7), (0.0, -0.95), (2.0, 3.0)])
def test_unit_singular_endpoints(b0, b1):
    def f(u, uc):
        return u ** b0 * uc ** b1
    res = integrate_unit(f, b0, b1)
    exact = math.exp(math.lgamma(b0 + 1) + math.lgamma(b1 + 1) - math.lgamma(b0 + b1 + 2))
    assert res.value == pytest.approx(exact, rel=1e-10)


def test_unit_uses_complement():
    # 1 - u would lose everything near u = 1; uc carries it
    res = integrate_unit(lambda u, uc: -np.log(uc), 0.0, -0.01)
    assert res.value == pytest.approx(1.0, rel=1e-11)


@pytest.mark.parametrize("a,b", [(0.0, 0.3), (0.2, 0.9), (0.6, 1.0)])
def test_interval(a, b):
    res = integrate_interval(lambda u, uc: 0.5 / np.sqrt(u), a, b, -0.5, 0.0)
    assert res.value == pytest.approx(math.sqrt(b) - math.sqrt(a), rel=1e-11)


def test_interval_validation():
    with pytest.raises(ValueError):
        integrate_interval(lambda u, uc: u, 0.5, 0.5)


@pytest.mark.parametrize("decay", [1.2, 2.0, 4.0])
def test_semi_infinite(decay):
    res = integrate_semi_infinite(lambda x: (1 + x) ** -decay, decay=decay)
    assert res.value == pytest.approx(1 / (decay - 1), rel=1e-10)
