"""Monte Carlo ensembles over frequency disorder and the linear fidelity model."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from namrspin.chain_model import ResonatorSpec, sample_errors, trial_stream
from namrspin.errors import DomainError, FitError
from namrspin.spin_dynamics import MAX_SPINS, gate_fidelity

DEFAULT_TRIALS = 200


@dataclass(frozen=True)
class EnsembleResult:
    n: int
    delta_max: float
    trials: int
    mean_f: float
    std_f: float
    seed: int


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    pearson_r: float


def _trial_fidelities(spec: ResonatorSpec, t_g: float, seed: int, key: tuple, trials) -> list[float]:
    return [gate_fidelity(spec, sample_errors(spec, trial_stream(seed, *key, k)), t_g) for k in trials]


def ensemble_fidelity(spec: ResonatorSpec, t_g: float, trials: int, seed: int, *,
                      stream_key: tuple = (), workers: int | None = None) -> EnsembleResult:
    """Mean and unbiased spread of the gate fidelity over ``trials`` disorder draws.

    Trial ``k`` draws from the substream ``(seed, *stream_key, k)``. With
    ``workers > 1`` trials are split across processes; the result is
    identical to the serial run because aggregation always walks the trials
    in index order.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if workers and workers > 1 and trials > 1:
        chunks = [range(i, trials, workers) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_trial_fidelities, [spec] * workers, [t_g] * workers,
                                  [seed] * workers, [stream_key] * workers, chunks))
        fids = [0.0] * trials
        for chunk, part in zip(chunks, parts):
            for k, f in zip(chunk, part):
                fids[k] = f
    else:
        fids = _trial_fidelities(spec, t_g, seed, stream_key, range(trials))
    mean = math.fsum(fids) / trials
    std = math.sqrt(math.fsum((f - mean) ** 2 for f in fids) / (trials - 1)) if trials > 1 else 0.0
    return EnsembleResult(spec.n, spec.delta_max, trials, mean, std, seed)


def sweep_fidelity_vs_n(template: ResonatorSpec, n_range, delta_list, t_g: float, trials: int,
                        seed: int, *, workers: int | None = None) -> list[EnsembleResult]:
    """One ensemble per ``(n, delta_max)`` cell, rows ordered by ``n`` then ``delta_max``."""
    n_range = list(n_range)
    if any(not 2 <= n <= MAX_SPINS for n in n_range):
        raise DomainError(f"chain lengths must lie in [2, {MAX_SPINS}]")
    rows = []
    for n in n_range:
        for d_idx, delta in enumerate(delta_list):
            spec = template.with_changes(n=n, delta_max=delta)
            rows.append(ensemble_fidelity(spec, t_g, trials, seed, stream_key=(n, d_idx), workers=workers))
    return rows


def linear_fit(points) -> FitResult:
    """Ordinary least squares line through ``(x, y)`` points and the signed Pearson r."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise FitError("need at least two (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    if np.ptp(x) == 0:
        raise FitError("x values are all equal; slope is undefined")
    if np.ptp(y) == 0:
        return FitResult(0.0, float(y[0]), 0.0)
    res = stats.linregress(x, y)
    return FitResult(float(res.slope), float(res.intercept), float(np.clip(res.rvalue, -1.0, 1.0)))


def max_chain_length(fit: FitResult, f0: float) -> int:
    """Largest chain length whose fitted fidelity stays above ``f0``."""
    if fit.slope >= 0:
        raise DomainError("fidelity must decrease with chain length for a bound to exist")
    if f0 >= fit.intercept:
        raise DomainError(f"target fidelity {f0} is not below the intercept {fit.intercept}")
    ratio = (fit.intercept - f0) / -fit.slope
    nearest = round(ratio)
    # f0 built as intercept - k*|slope| must give k despite rounding in the subtraction
    if abs(ratio - nearest) <= 1e-9 * max(1.0, abs(ratio)):
        return int(nearest)
    return math.floor(ratio)
