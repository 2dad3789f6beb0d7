"""Two-stage power-allocation NOMA dual-hop relay: simulation and analysis."""

from .allocation import (AllocationSolution, ResidualPair, baseline_grid_search,
                         grid_search, residuals, suboptimal_solve)
from .analysis import (AnalysisParams, ccdf_x_exact, ccdf_x_highsnr, ccdf_y,
                       ergodic_sr_closed, ergodic_sr_highsnr,
                       highsnr_allocation_term, rate_x1_approx,
                       rate_x1_semianalytic, rate_x2_closed)
from .channel import (ChannelRealization, ChannelVariances, make_rng, sample,
                      sample_batch, substream)
from .link import (PowerAllocation, RatePair, SnrPoint, baseline_crs_noma_rates,
                   dest_snrs, instantaneous_rates, relay_snrs, varsigma)
from .montecarlo import (CHUNK, EmpiricalCdf, MonteCarloConfig, SweepResult,
                         SweepRow, empirical_cdf_y, estimate_sum_rate, sweep)
from .special import bessel_k1, expint_ei

__all__ = [
    "AllocationSolution", "AnalysisParams", "CHUNK", "ChannelRealization",
    "ChannelVariances", "EmpiricalCdf", "MonteCarloConfig", "PowerAllocation",
    "RatePair", "ResidualPair", "SnrPoint", "SweepResult", "SweepRow",
    "baseline_crs_noma_rates", "baseline_grid_search", "bessel_k1",
    "ccdf_x_exact", "ccdf_x_highsnr", "ccdf_y", "dest_snrs", "empirical_cdf_y",
    "ergodic_sr_closed", "ergodic_sr_highsnr", "estimate_sum_rate", "expint_ei",
    "grid_search", "highsnr_allocation_term", "instantaneous_rates", "make_rng",
    "rate_x1_approx", "rate_x1_semianalytic", "rate_x2_closed", "relay_snrs",
    "residuals", "sample", "sample_batch", "substream", "suboptimal_solve",
    "sweep", "varsigma",
]

__version__ = "0.1.0"
