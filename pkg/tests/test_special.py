"""Kernel accuracy against independent quadrature oracles.

The oracles integrate the defining representations directly (rearranged to
keep the integrand in floating-point range), so they share no code with
the series/continued-fraction kernels they check.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from crsnoma import bessel_k1, expint_ei
from crsnoma.special import EULER_GAMMA


def k1_oracle(x: float) -> float:
    # K1(x) = int_0^inf e^(-x cosh t) cosh t dt, scaled by e^-x inside
    val, _ = integrate.quad(
        lambda t: math.exp(-x * (math.cosh(t) - 1.0)) * math.cosh(t),
        0.0, 60.0, epsabs=1e-300, epsrel=1e-13, limit=400,
    )
    return math.exp(-x) * val


def ei_oracle(x: float) -> float:
    # Ei(x) = -int_{-x}^inf e^-t / t dt; substitute t = -x + u
    t = -x
    val, _ = integrate.quad(
        lambda u: math.exp(-u) / (t + u), 0.0, np.inf,
        epsabs=1e-300, epsrel=1e-13, limit=400,
    )
    return -math.exp(-t) * val


# oracle-computed reference values, frozen before the kernels were written
K1_AT_1 = 0.6019072301972346
K1_AT_5 = 4.044613445452164e-03
EI_AT_M1 = -0.21938393439552026
EI_AT_M10 = -4.156968929685325e-06


def test_k1_frozen_values():
    assert bessel_k1(1.0) == pytest.approx(K1_AT_1, abs=1e-9)
    assert bessel_k1(5.0) == pytest.approx(K1_AT_5, abs=1e-11)


def test_k1_small_argument_asymptote():
    # x*K1(x) -> 1 as x -> 0+
    assert abs(1e-6 * bessel_k1(1e-6) - 1.0) < 1e-5


def test_k1_small_x_law():
    # |x K1(x) - 1| <= 5 x^2 |ln x| on (0, 0.01]
    for x in np.logspace(-6, np.log10(0.01), 50):
        assert abs(x * bessel_k1(x) - 1.0) <= 5.0 * x * x * abs(math.log(x))


def test_k1_oracle_agreement():
    for x in np.logspace(np.log10(1e-6), np.log10(50.0), 400):
        o = k1_oracle(float(x))
        assert abs(bessel_k1(float(x)) - o) <= 1e-10 * o


def test_k1_monotone_decreasing_and_log_convex():
    xs = np.logspace(-5, np.log10(50.0), 300)
    vals = np.array([bessel_k1(float(x)) for x in xs])
    assert np.all(np.diff(vals) < 0.0)
    logv = np.log(vals)
    # second divided differences of log K1 on the irregular grid
    for i in range(1, len(xs) - 1):
        d1 = (logv[i] - logv[i - 1]) / (xs[i] - xs[i - 1])
        d2 = (logv[i + 1] - logv[i]) / (xs[i + 1] - xs[i])
        assert (d2 - d1) / (xs[i + 1] - xs[i - 1]) >= -1e-9


def test_k1_limits_and_underflow():
    assert bessel_k1(1e-8) > 1e7          # -> infinity as x -> 0+
    assert bessel_k1(700.0) > 0.0
    assert bessel_k1(800.0) == 0.0        # documented underflow, not an error


@pytest.mark.parametrize("x", [0.0, -1.0, -1e-9])
def test_k1_domain_error(x):
    with pytest.raises(ValueError):
        bessel_k1(x)


def test_ei_frozen_values():
    assert expint_ei(-1.0) == pytest.approx(EI_AT_M1, abs=1e-9)
    assert expint_ei(-10.0) == pytest.approx(EI_AT_M10, abs=1e-10)


def test_ei_small_argument_form():
    # Ei(-x) ~ EULER_GAMMA + ln(x) for small x
    expected = EULER_GAMMA + math.log(1e-8)
    assert expint_ei(-1e-8) == pytest.approx(expected, abs=1e-4)


def test_ei_oracle_agreement():
    for x in -np.logspace(np.log10(1e-6), np.log10(50.0), 400):
        o = ei_oracle(float(x))
        m = expint_ei(float(x))
        assert abs(m - o) <= max(1e-10 * abs(o), 1e-14)


def test_ei_negative_and_monotone():
    xs = -np.logspace(np.log10(1e-6), np.log10(50.0), 200)
    vals = np.array([expint_ei(float(x)) for x in xs])
    assert np.all(vals < 0.0)
    # decreasing in |x| means increasing along this (descending) x ordering
    assert np.all(np.diff(vals) > 0.0)


@pytest.mark.parametrize("x", [0.0, 1.0, 1e-9])
def test_ei_domain_error(x):
    with pytest.raises(ValueError):
        expint_ei(x)
