"""Power-allocation optimizers: stationarity root solver and grid search.

The stationarity residuals (r1, r2) are the two closed-form conditions for
a critical point of the high-SNR sum-rate's allocation term; each equals
-a1*Psi times the corresponding partial derivative of
:func:`crsnoma.analysis.highsnr_allocation_term`, so a common root is a
stationary point and the residual signs are the negated gradient signs.

For many channel-variance triples (including both built-in presets) the
allocation term is strictly increasing in a1 everywhere on (0,1)^2, so no
stationary point exists. The solver then falls back to the best point of
the default 0.01 lattice under the SIC constraint a1 > 0.5 and flags the
solution as unconverged instead of failing.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from .analysis import AnalysisParams, ergodic_sr_closed, highsnr_allocation_term
from .channel import ChannelVariances, sample_batch, substream
from .link import PowerAllocation, SnrPoint, instantaneous_rates, baseline_crs_noma_rates

_DEFAULT_STEP = 0.01
_ROOT_TOL = 1e-8
_MC_CHUNK = 50_000


@dataclass(frozen=True)
class ResidualPair:
    r1: float
    r2: float

    @property
    def norm(self) -> float:
        return math.hypot(self.r1, self.r2)


@dataclass(frozen=True)
class AllocationSolution:
    a1: float
    a3: float
    objective: float
    method: str                    # "grid-exhaustive" or "root-suboptimal"
    residual_norm: float = math.nan
    converged: bool = True
    note: str = ""

    @property
    def meets_sic_order(self) -> bool:
        return self.a1 > 0.5


def residuals(a1: float, a3: float, v: ChannelVariances) -> ResidualPair:
    """Left-hand sides of the two stationarity conditions at (a1, a3).

    Singular at a1 or a3 in {0, 1} (the phi terms blow up), so endpoints
    are rejected.
    """
    if not (0.0 < a1 < 1.0 and 0.0 < a3 < 1.0):
        raise ValueError(f"residuals need interior (a1, a3), got ({a1}, {a3})")
    phi1 = math.sqrt((1.0 - a3) / a1) - math.sqrt(a3 / (1.0 - a1))
    phi2 = math.sqrt((1.0 - a1) / a3) - math.sqrt(a1 / (1.0 - a3))
    psi = math.sqrt(a1 * (1.0 - a3)) + math.sqrt((1.0 - a1) * a3)
    asd, asr, ard = v.alpha_sd, v.alpha_sr, v.alpha_rd
    den = psi**2 * ard * asd + (1.0 - a1) * (a3 * ard + a1 * asd) * asr
    r1 = (
        a1 * psi * (phi1 * psi * ard * asd + asr * asd - a3 * asr * ard - 2.0 * a1 * asd * asr)
        / den
        - a1 * phi1
        - psi
    )
    r2 = a1 * psi * (phi2 * psi * ard * asd + (1.0 - a1) * ard * asr) / den - a1 * phi2
    return ResidualPair(r1=r1, r2=r2)


def _residual_vec(point, v):
    r = residuals(point[0], point[1], v)
    return np.array([r.r1, r.r2])


def _newton(v: ChannelVariances, start, max_iter=80) -> Optional[Tuple[float, float]]:
    # damped Newton with central-difference Jacobian, confined to (0,1)^2
    eps = 1e-9
    x = np.clip(np.asarray(start, dtype=float), eps, 1.0 - eps)
    r = _residual_vec(x, v)
    for _ in range(max_iter):
        nrm = np.linalg.norm(r)
        if nrm <= _ROOT_TOL:
            return float(x[0]), float(x[1])
        h = 1e-7
        jac = np.empty((2, 2))
        for j in range(2):
            xp, xm = x.copy(), x.copy()
            xp[j] = min(xp[j] + h, 1.0 - eps)
            xm[j] = max(xm[j] - h, eps)
            jac[:, j] = (_residual_vec(xp, v) - _residual_vec(xm, v)) / (xp[j] - xm[j])
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        for _ in range(40):
            x_new = x + lam * step
            if np.all((x_new > eps) & (x_new < 1.0 - eps)):
                r_new = _residual_vec(x_new, v)
                if np.linalg.norm(r_new) < nrm:
                    x, r = x_new, r_new
                    break
            lam *= 0.5
        else:
            return None
    if np.linalg.norm(r) <= _ROOT_TOL:
        return float(x[0]), float(x[1])
    return None


def _continuation_root(v: ChannelVariances, n_a3=97, n_a1=193) -> Optional[Tuple[float, float]]:
    # bisection-style continuation: trace the r1 = 0 curve over an a3 grid
    # (bisecting in a1 wherever r1 changes sign), then bisect r2 along it.
    a3_grid = np.linspace(0.01, 0.99, n_a3)
    a1_grid = np.linspace(0.005, 0.995, n_a1)

    def r1_zero_in_a1(a3):
        vals = np.array([residuals(a1, a3, v).r1 for a1 in a1_grid])
        sign_flip = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
        if sign_flip.size == 0:
            return None
        lo, hi = a1_grid[sign_flip[0]], a1_grid[sign_flip[0] + 1]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if residuals(lo, a3, v).r1 * residuals(mid, a3, v).r1 <= 0.0:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    curve = [(a3, r1_zero_in_a1(a3)) for a3 in a3_grid]
    curve = [(a3, a1) for a3, a1 in curve if a1 is not None]
    if len(curve) < 2:
        return None
    r2_along = [residuals(a1, a3, v).r2 for a3, a1 in curve]
    flips = np.nonzero(np.diff(np.sign(r2_along)) != 0)[0]
    if flips.size == 0:
        return None
    lo3, hi3 = curve[flips[0]][0], curve[flips[0] + 1][0]
    for _ in range(60):
        mid3 = 0.5 * (lo3 + hi3)
        a1_mid = r1_zero_in_a1(mid3)
        if a1_mid is None:
            return None
        a1_lo = r1_zero_in_a1(lo3)
        if residuals(a1_lo, lo3, v).r2 * residuals(a1_mid, mid3, v).r2 <= 0.0:
            hi3 = mid3
        else:
            lo3 = mid3
    a3_root = 0.5 * (lo3 + hi3)
    a1_root = r1_zero_in_a1(a3_root)
    return (a1_root, a3_root) if a1_root is not None else None


def _lattice(step: float) -> np.ndarray:
    m = round(1.0 / step) - 1
    return np.round(step * np.arange(1, m + 1), 12)


def suboptimal_solve(v: ChannelVariances, start: Optional[Tuple[float, float]] = None,
                     snr: Optional[SnrPoint] = None) -> AllocationSolution:
    """Solve the two stationarity conditions for (a1, a3).

    Tries damped Newton from `start` (plus a fixed set of interior starts),
    then a bisection continuation along a3. If no root exists in (0,1)^2,
    returns the best 0.01-lattice point of the high-SNR allocation term
    with a1 > 0.5, flagged via ``converged=False``.

    The conditions contain no SNR, so the returned point is independent of
    `snr`; it only selects the scale on which `objective` is reported.
    """
    starts = []
    if start is not None:
        starts.append(tuple(start))
    starts += [(0.75, 0.25), (0.6, 0.4), (0.9, 0.1), (0.55, 0.7), (0.8, 0.6)]
    root = None
    for s in starts:
        root = _newton(v, s)
        if root is not None:
            break
    if root is None:
        root = _continuation_root(v)

    def objective_at(a1, a3):
        obj = highsnr_allocation_term(a1, a3, v)
        if snr is not None:
            obj += 0.5 * math.log2(snr.rho)
        return obj

    if root is not None:
        a1r, a3r = root
        res = residuals(a1r, a3r, v)
        note = "" if a1r > 0.5 else "root violates SIC ordering a1 > 0.5"
        return AllocationSolution(
            a1=a1r, a3=a3r, objective=objective_at(a1r, a3r),
            method="root-suboptimal", residual_norm=res.norm,
            converged=True, note=note,
        )

    # no stationary point: exhaust the default lattice on the high-SNR term
    grid = _lattice(_DEFAULT_STEP)
    a1s = grid[grid > 0.5]
    best = None
    for a1 in a1s:
        for a3 in grid:
            val = highsnr_allocation_term(float(a1), float(a3), v)
            if best is None or val > best[0]:
                best = (val, float(a1), float(a3))
    _, a1b, a3b = best
    return AllocationSolution(
        a1=a1b, a3=a3b, objective=objective_at(a1b, a3b),
        method="root-suboptimal", residual_norm=residuals(a1b, a3b, v).norm,
        converged=False,
        note="no stationarity root in (0,1)^2; best 0.01-lattice point of the "
             "high-SNR objective under a1 > 0.5",
    )


ObjectiveSpec = Union[str, Callable[[float, float], float]]


def grid_search(v: ChannelVariances, snr: SnrPoint, objective: ObjectiveSpec = "closed-form",
                step: float = _DEFAULT_STEP, n_realizations: int = 20_000,
                seed: int = 0) -> AllocationSolution:
    """Exhaustive search for (a1, a3) over the lattice {step, ..., 1-step}^2.

    Only candidates with a1 > 0.5 are admitted (SIC ordering). Objectives:
    ``"closed-form"`` evaluates the closed-form ergodic sum rate at `snr`;
    ``"monte-carlo"`` estimates the simulated sum rate with a fixed
    per-candidate stream (seed-keyed, common across candidates) so the
    argmax is reproducible; a callable f(a1, a3) is used as-is.

    Ties break deterministically to the smallest a1, then smallest a3.
    """
    if not 0.0 < step <= 0.1:
        raise ValueError(f"step must lie in (0, 0.1], got {step}")
    grid = _lattice(step)
    a1s = grid[grid > 0.5]
    a3s = grid

    if objective == "closed-form":
        values = np.empty((a1s.size, a3s.size))
        for i, a1 in enumerate(a1s):
            for j, a3 in enumerate(a3s):
                p = AnalysisParams(PowerAllocation.split(float(a1), float(a3)), v, snr)
                values[i, j] = ergodic_sr_closed(p)
    elif objective == "monte-carlo":
        values = _mc_grid_values(v, snr, a1s, a3s, n_realizations, seed)
    elif callable(objective):
        values = np.array([[objective(float(a1), float(a3)) for a3 in a3s] for a1 in a1s])
    else:
        raise ValueError(f"unknown objective {objective!r}")

    # first occurrence of the max in C order = smallest a1, then smallest a3
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    a1b, a3b = float(a1s[i]), float(a3s[j])
    return AllocationSolution(
        a1=a1b, a3=a3b, objective=float(values[i, j]), method="grid-exhaustive",
        residual_norm=residuals(a1b, a3b, v).norm, converged=True,
    )


def _mc_grid_values(v, snr, a1s, a3s, n, seed):
    """Mean simulated sum rate for every lattice candidate, common stream."""
    allocs = [PowerAllocation.split(float(a1), float(a3)) for a1 in a1s for a3 in a3s]
    sums = np.zeros(len(allocs))
    done = 0
    k = 0
    while done < n:
        size = min(_MC_CHUNK, n - done)
        real = _draw_chunk(v, seed, k, size)
        for i, alloc in enumerate(allocs):
            sums[i] += float(np.sum(instantaneous_rates(real, alloc, snr).c_sum))
        done += size
        k += 1
    means = sums / n
    return means.reshape(len(a1s), len(a3s))


def baseline_grid_search(v: ChannelVariances, snr: SnrPoint, step: float = _DEFAULT_STEP,
                         n_realizations: int = 20_000, seed: int = 0) -> Tuple[float, float]:
    """Best source split a1 for the baseline scheme by simulated exhaustive search.

    Shares the candidate stream with :func:`grid_search`'s monte-carlo
    objective so scheme comparisons use common random numbers. Returns
    (a1_opt, mean sum rate).
    """
    a1s = _lattice(step)
    a1s = a1s[a1s > 0.5]
    sums = np.zeros(a1s.size)
    done = 0
    k = 0
    n = n_realizations
    while done < n:
        size = min(_MC_CHUNK, n - done)
        real = _draw_chunk(v, seed, k, size)
        for i, a1 in enumerate(a1s):
            rates = baseline_crs_noma_rates(real, float(a1), snr)
            sums[i] += float(np.sum(rates.c_sum))
        done += size
        k += 1
    means = sums / n
    i = int(np.argmax(means))
    return float(a1s[i]), float(means[i])


def mc_sum_rate_at(v: ChannelVariances, snr: SnrPoint, a1: float, a3: float,
                   n_realizations: int = 20_000, seed: int = 0) -> float:
    """Simulated mean sum rate at a fixed allocation, same stream as the searches."""
    alloc = PowerAllocation.split(a1, a3)
    total = 0.0
    done = 0
    k = 0
    while done < n_realizations:
        size = min(_MC_CHUNK, n_realizations - done)
        real = _draw_chunk(v, seed, k, size)
        total += float(np.sum(instantaneous_rates(real, alloc, snr).c_sum))
        done += size
        k += 1
    return total / n_realizations


def _draw_chunk(v, seed, k, size):
    return sample_batch(v, substream(seed, k), size)
