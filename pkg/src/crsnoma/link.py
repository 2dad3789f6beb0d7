"""Instantaneous SNRs and achievable rates for a single channel realization.

Covers both the two-stage superposition scheme (source split a1/a2, relay
split a3/a4, destination combining of the two slots) and the conventional
single-stage relaying baseline (destination decodes the first slot directly,
relay forwards the second symbol at full power).

All operations accept scalar betas or numpy arrays (vectorized batches) and
are pure functions. Rates are in bits/s/Hz; the 1/2 prefactor accounts for
the two time slots per transmission.
"""

from dataclasses import dataclass, field

import numpy as np

_COUPLING_TOL = 1e-12


@dataclass(frozen=True)
class PowerAllocation:
    """Power fractions (a1, a2) at the source and (a3, a4) at the relay.

    a1 + a2 = 1 and a3 + a4 = 1 within 1e-12; a1 > a2 is required so the
    first symbol can be decoded by treating the second as noise.
    """

    a1: float
    a2: float
    a3: float
    a4: float

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if abs(self.a1 + self.a2 - 1.0) > _COUPLING_TOL:
            raise ValueError(f"a1 + a2 must equal 1, got {self.a1 + self.a2}")
        if abs(self.a3 + self.a4 - 1.0) > _COUPLING_TOL:
            raise ValueError(f"a3 + a4 must equal 1, got {self.a3 + self.a4}")
        if not self.a1 > self.a2:
            raise ValueError(
                f"SIC decoding order requires a1 > a2 (got a1={self.a1}, a2={self.a2})"
            )

    @classmethod
    def split(cls, a1: float, a3: float) -> "PowerAllocation":
        """Build from the two free fractions, deriving a2 = 1-a1, a4 = 1-a3."""
        return cls(a1=a1, a2=1.0 - a1, a3=a3, a4=1.0 - a3)


@dataclass(frozen=True)
class SnrPoint:
    """Transmit SNR rho = P_t/sigma^2, carried in linear and dB form."""

    rho: float
    rho_db: float

    def __post_init__(self):
        if not self.rho > 0.0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if abs(self.rho_db - 10.0 * np.log10(self.rho)) > 1e-9:
            raise ValueError(
                f"inconsistent SNR point: rho={self.rho} vs rho_db={self.rho_db}"
            )

    @classmethod
    def from_db(cls, rho_db: float) -> "SnrPoint":
        return cls(rho=10.0 ** (rho_db / 10.0), rho_db=rho_db)

    @classmethod
    def from_linear(cls, rho: float) -> "SnrPoint":
        return cls(rho=rho, rho_db=10.0 * float(np.log10(rho)))


@dataclass(frozen=True)
class RatePair:
    """Per-symbol achievable rates and their sum, bits/s/Hz."""

    c_x1: object
    c_x2: object
    c_sum: object = field(default=None)

    def __post_init__(self):
        if self.c_sum is None:
            object.__setattr__(self, "c_sum", self.c_x1 + self.c_x2)


def varsigma(alloc: PowerAllocation) -> float:
    """Combining gain sqrt(a1 a4) + sqrt(a2 a3); lies in (0, 1]."""
    return float(np.sqrt(alloc.a1 * alloc.a4) + np.sqrt(alloc.a2 * alloc.a3))


def relay_snrs(real, alloc: PowerAllocation, snr: SnrPoint):
    """SNRs of the two symbols at the relay after SIC.

    gamma_r_x1 = beta_sr a1 rho / (beta_sr a2 rho + 1) (bounded by a1/a2);
    gamma_r_x2 = beta_sr a2 rho.
    """
    b = np.asarray(real.beta_sr, dtype=float)
    g1 = b * alloc.a1 * snr.rho / (b * alloc.a2 * snr.rho + 1.0)
    g2 = b * alloc.a2 * snr.rho
    if g1.ndim == 0:
        return float(g1), float(g2)
    return g1, g2


def dest_snrs(real, alloc: PowerAllocation, snr: SnrPoint):
    """Post-combining SNRs of the two symbols at the destination.

    gamma_d_x1 = rho ς² b_sd b_rd / (a4 b_rd + a2 b_sd) and gamma_d_x2 the
    same with (a3, a1) weights. Both are 0 when b_sd b_rd = 0; the
    measure-zero case b_sd = b_rd = 0 also returns (0, 0) by convention
    (the correct limiting rate) rather than NaN.
    """
    bsd = np.asarray(real.beta_sd, dtype=float)
    brd = np.asarray(real.beta_rd, dtype=float)
    s2 = varsigma(alloc) ** 2
    num = s2 * bsd * brd
    den1 = alloc.a4 * brd + alloc.a2 * bsd
    den2 = alloc.a3 * brd + alloc.a1 * bsd
    with np.errstate(invalid="ignore", divide="ignore"):
        g1 = np.where(den1 > 0.0, snr.rho * (num / np.where(den1 > 0.0, den1, 1.0)), 0.0)
        g2 = np.where(den2 > 0.0, snr.rho * (num / np.where(den2 > 0.0, den2, 1.0)), 0.0)
    if g1.ndim == 0:
        return float(g1), float(g2)
    return g1, g2


def instantaneous_rates(real, alloc: PowerAllocation, snr: SnrPoint) -> RatePair:
    """Min-of-two-hops rates for the two-stage scheme."""
    gr1, gr2 = relay_snrs(real, alloc, snr)
    gd1, gd2 = dest_snrs(real, alloc, snr)
    c1 = 0.5 * np.log2(1.0 + np.minimum(gd1, gr1))
    c2 = 0.5 * np.log2(1.0 + np.minimum(gd2, gr2))
    if np.ndim(c1) == 0:
        return RatePair(c_x1=float(c1), c_x2=float(c2))
    return RatePair(c_x1=c1, c_x2=c2)


def baseline_crs_noma_rates(real, a1: float, snr: SnrPoint) -> RatePair:
    """Rates of the single-stage relaying baseline at source split a1/(1-a1).

    Slot 1: destination decodes x1 directly treating x2 as noise while the
    relay decodes x1 then x2 by SIC; slot 2: the relay forwards x2 at full
    power. Hence
      c_x1 = 1/2 log2(1 + min{a1 rho b_sd/(a2 rho b_sd + 1),
                              a1 rho b_sr/(a2 rho b_sr + 1)})
      c_x2 = 1/2 log2(1 + min{a2 rho b_sr, rho b_rd}).
    """
    if not 0.5 < a1 < 1.0:
        raise ValueError(f"baseline requires a1 in (0.5, 1), got {a1}")
    a2 = 1.0 - a1
    bsd = np.asarray(real.beta_sd, dtype=float)
    bsr = np.asarray(real.beta_sr, dtype=float)
    brd = np.asarray(real.beta_rd, dtype=float)
    rho = snr.rho
    g_direct = a1 * rho * bsd / (a2 * rho * bsd + 1.0)
    g_relay = a1 * rho * bsr / (a2 * rho * bsr + 1.0)
    c1 = 0.5 * np.log2(1.0 + np.minimum(g_direct, g_relay))
    c2 = 0.5 * np.log2(1.0 + np.minimum(a2 * rho * bsr, rho * brd))
    if np.ndim(c1) == 0:
        return RatePair(c_x1=float(c1), c_x2=float(c2))
    return RatePair(c_x1=c1, c_x2=c2)
