"""Analytical machinery: CCDFs of the two bottleneck SNRs and ergodic rates.

Conventions fixed here once:

* ``ccdf_x_*`` describe X = min of the two SNRs that bound the first
  symbol (destination combining vs relay decoding). X is capped at a1/a2
  almost surely, so both CCDFs vanish for x >= a1/a2.
* ``ccdf_y`` takes the UN-normalized argument, i.e. y on the same scale as
  the instantaneous second-symbol SNRs; the 1/rho factors inside the
  formula implement the normalization, so the function matches the
  simulated distribution of min{gamma_d_x2, gamma_r_x2} directly.
* The coefficient written as gamma in the Y-formula is named
  ``gamma_coeff`` to avoid collision with the SNR symbols.

The exact CCDF of X and the semi-analytic first-symbol rate are evaluated
by adaptive quadrature (absolute tolerance 1e-10, semi-infinite limits
transformed internally); everything else is closed form on top of the
bessel_k1 / expint_ei kernels.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .channel import ChannelVariances
from .link import PowerAllocation, SnrPoint, varsigma
from .special import EULER_GAMMA, bessel_k1, expint_ei

_LN2 = math.log(2.0)
_EXP_GUARD = 700.0  # |exponent| beyond this underflows exp to exactly 0


@dataclass(frozen=True)
class AnalysisParams:
    """Bundle of allocation, channel variances and SNR point.

    The derived coefficients of the closed forms are exposed as properties
    so call sites never re-derive them inconsistently.
    """

    alloc: PowerAllocation
    variances: ChannelVariances
    snr: SnrPoint

    @property
    def varsigma_sq(self) -> float:
        return varsigma(self.alloc) ** 2

    @property
    def xi(self) -> float:
        return math.sqrt(1.0 / (self.varsigma_sq * self.variances.alpha_rd))

    @property
    def phi1(self) -> float:
        a = self.alloc
        return math.sqrt(self.varsigma_sq * self.variances.alpha_sd / (a.a2 * a.a4))

    @property
    def gamma_coeff(self) -> float:
        a, v = self.alloc, self.variances
        return math.sqrt(a.a1 * a.a3 / (v.alpha_sd * v.alpha_rd)) / self.varsigma_sq

    @property
    def eta(self) -> float:
        a, v = self.alloc, self.variances
        zeta = (a.a1 * v.alpha_sd + a.a3 * v.alpha_rd) / (
            self.varsigma_sq * v.alpha_sd * v.alpha_rd
        ) + 1.0 / (a.a2 * v.alpha_sr)
        return zeta / self.snr.rho

    @property
    def mu(self) -> float:
        # decay rate of the first-symbol CCDF envelope
        a, v = self.alloc, self.variances
        return (a.a2 / v.alpha_rd + a.a4 / v.alpha_sd) / (self.varsigma_sq * self.snr.rho)


def _vectorize(fn, x, p):
    if np.ndim(x) == 0:
        return fn(float(x), p)
    return np.array([fn(float(v), p) for v in np.ravel(x)]).reshape(np.shape(x))


def ccdf_x_highsnr(x, p: AnalysisParams):
    """High-SNR Bessel-form CCDF of the first-symbol bottleneck SNR.

    Exactly 0 for x >= a1/a2 (the relay decoding bound) and tends to 1 as
    x -> 0+. Accepts a scalar or an array of evaluation points.
    """
    return _vectorize(_ccdf_x_highsnr_scalar, x, p)


def _ccdf_x_highsnr_scalar(x: float, p: AnalysisParams) -> float:
    if x < 0.0:
        raise ValueError(f"CCDF argument must be nonnegative, got {x}")
    a = p.alloc
    if x >= a.a1 / a.a2:
        return 0.0
    if x == 0.0:
        return 1.0
    v = p.variances
    s2, rho = p.varsigma_sq, p.snr.rho
    expo = -a.a2 * x / (s2 * rho * v.alpha_rd) - a.a4 * x / (s2 * rho * v.alpha_sd)
    z = 2.0 * p.xi * x / (rho * p.phi1)
    k = bessel_k1(z)
    if k == 0.0 or expo < -_EXP_GUARD:
        return 0.0
    val = 2.0 * x / (s2 * rho * p.xi * p.phi1 * v.alpha_rd) * math.exp(expo) * k
    return min(1.0, max(0.0, val))


def ccdf_x_exact(x, p: AnalysisParams):
    """Exact CCDF of the first-symbol bottleneck SNR, by quadrature.

    Keeps the relay noise term the high-SNR form drops, so it separates
    approximation error from Monte Carlo noise. Returns 0 once the relay
    bound a1 - a2*x is not positive.
    """
    return _vectorize(_ccdf_x_exact_scalar, x, p)


def _ccdf_x_exact_scalar(x: float, p: AnalysisParams) -> float:
    if x < 0.0:
        raise ValueError(f"CCDF argument must be nonnegative, got {x}")
    a, v = p.alloc, p.variances
    if a.a1 - a.a2 * x <= 0.0:
        return 0.0
    if x == 0.0:
        return 1.0
    s2, rho = p.varsigma_sq, p.snr.rho
    relay_expo = -x / ((a.a1 - a.a2 * x) * rho * v.alpha_sr)
    if relay_expo < -_EXP_GUARD:
        return 0.0
    lo = a.a2 * x / (s2 * rho)

    def integrand(u):
        expo = -a.a4 * u * x / ((s2 * rho * u - a.a2 * x) * v.alpha_sd) - u / v.alpha_rd
        if expo < -_EXP_GUARD:
            return 0.0
        return math.exp(expo)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, abserr = integrate.quad(integrand, lo, np.inf, epsabs=1e-10, limit=400)
        except integrate.IntegrationWarning as exc:
            raise RuntimeError(
                f"CCDF quadrature did not converge at x={x} "
                f"(rho={rho}, alloc=({a.a1}, {a.a3})): {exc}"
            ) from exc
    val = math.exp(relay_expo) * val / v.alpha_rd
    return min(1.0, max(0.0, val))


def ccdf_y(y, p: AnalysisParams):
    """CCDF of the second-symbol bottleneck SNR min{gamma_d_x2, gamma_r_x2}.

    Exact for Rayleigh fading (the Bessel form comes from the harmonic-mean
    distribution of the two destination links). Non-increasing, 1 at 0+.
    """
    return _vectorize(_ccdf_y_scalar, y, p)


def _ccdf_y_scalar(y: float, p: AnalysisParams) -> float:
    if y < 0.0:
        raise ValueError(f"CCDF argument must be nonnegative, got {y}")
    if y == 0.0:
        return 1.0
    z = 2.0 * p.gamma_coeff * y / p.snr.rho
    expo = -p.eta * y
    k = bessel_k1(z)
    if k == 0.0 or expo < -_EXP_GUARD:
        return 0.0
    val = z * math.exp(expo) * k
    return min(1.0, max(0.0, val))


def rate_x1_semianalytic(p: AnalysisParams) -> float:
    """First-symbol ergodic rate: relay-bound rate minus the CCDF deficit.

    Integrates (1 - ccdf_x_highsnr(x)) / (1 + x) over [0, a1/a2] by
    adaptive quadrature; always <= 0.5*log2(1 + a1/a2).
    """
    a = p.alloc
    cap = a.a1 / a.a2

    def integrand(x):
        return (1.0 - _ccdf_x_highsnr_scalar(x, p)) / (1.0 + x)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            corr, _ = integrate.quad(integrand, 0.0, cap, epsabs=1e-10, limit=400)
        except integrate.IntegrationWarning as exc:
            raise RuntimeError(
                f"rate quadrature did not converge (rho={p.snr.rho}, "
                f"alloc=({a.a1}, {a.a3})): {exc}"
            ) from exc
    return 0.5 * math.log2(1.0 + cap) - corr / (2.0 * _LN2)


def rate_x1_approx(p: AnalysisParams) -> float:
    """Closed-form first-symbol rate via exponential integrals.

    High-SNR limit is 0.5*log2(a1/a2); the semi-analytic rate tends to
    0.5*log2(1 + a1/a2) instead. The O(1) gap 0.5*log2(1 + a2/a1) is an
    accepted property of this form, so the two operations are kept
    distinct rather than reconciled.
    """
    a = p.alloc
    mu = p.mu
    bracket = expint_ei(-mu * a.a1 / a.a2) - expint_ei(-mu)
    return math.exp(mu) * bracket / (2.0 * _LN2)


def rate_x2_closed(p: AnalysisParams) -> float:
    """Closed-form second-symbol rate, -e^eta Ei(-eta) / (2 ln 2)."""
    eta = p.eta
    if eta > _EXP_GUARD:
        # asymptotic -e^x Ei(-x) ~ 1/x - 1/x^2 + 2/x^3, avoids exp overflow
        return (1.0 / eta - 1.0 / eta**2 + 2.0 / eta**3) / (2.0 * _LN2)
    return -math.exp(eta) * expint_ei(-eta) / (2.0 * _LN2)


def ergodic_sr_closed(p: AnalysisParams) -> float:
    """Closed-form ergodic sum rate: rate_x1_approx + rate_x2_closed."""
    return rate_x1_approx(p) + rate_x2_closed(p)


def highsnr_allocation_term(a1: float, a3: float, v: ChannelVariances) -> float:
    """SNR-independent part of the high-SNR sum-rate expansion.

    This is the objective the power-allocation stationarity conditions
    differentiate; it takes raw (a1, a3) so optimizers can roam all of
    (0,1)^2 without allocation-ordering validation.
    """
    a2, a4 = 1.0 - a1, 1.0 - a3
    s2 = (math.sqrt(a1 * a4) + math.sqrt(a2 * a3)) ** 2
    arg = (
        a1 * s2 * v.alpha_sd * v.alpha_rd * v.alpha_sr
        / (a2 * v.alpha_sr * (a1 * v.alpha_sd + a3 * v.alpha_rd)
           + s2 * v.alpha_sd * v.alpha_rd)
    )
    return 0.5 * math.log2(arg) - EULER_GAMMA / (2.0 * _LN2)


def ergodic_sr_highsnr(p: AnalysisParams) -> float:
    """Affine-in-log2(rho) sum-rate approximation used as optimization objective."""
    return (
        highsnr_allocation_term(p.alloc.a1, p.alloc.a3, p.variances)
        + 0.5 * math.log2(p.snr.rho)
    )
