"""Estimators used to check simulated paths against analytic results."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as sps

from .errors import InsufficientDataError, NonPositiveDataError, OffGridLagError, ZeroVarianceError
from .levy import SamplePath

__all__ = [
    "sample_autocov",
    "sample_acf",
    "loglog_slope",
    "Moments",
    "ensemble_moments",
    "jackknife_cov",
    "increment_cov_mc",
    "KSResult",
    "ks_two_sample",
    "MIN_KS_SAMPLE",
]

MIN_KS_SAMPLE = 1000


def sample_autocov(series, max_lag: int) -> np.ndarray:
    """Biased sample autocovariance ``(1/n) sum (x_t - xbar)(x_{t+k} - xbar)``, k = 0..max_lag.

    The 1/n normalisation keeps the sequence positive semi-definite.
    """
    x = np.asarray(series, dtype=float)
    max_lag = int(max_lag)
    if x.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if max_lag < 0:
        raise ValueError("max_lag must be non-negative")
    n = x.shape[0]
    if n <= 4 * max_lag or n < 2:
        raise InsufficientDataError(f"series of length {n} is too short for max_lag={max_lag}")
    xc = x - x.mean()
    nfft = 1 << int(np.ceil(np.log2(2 * n)))
    f = np.fft.rfft(xc, nfft)
    acov = np.fft.irfft(f * np.conj(f), nfft)[: max_lag + 1] / n
    return acov


def sample_acf(series, max_lag: int) -> np.ndarray:
    """Sample autocorrelation at lags 0..max_lag with biased normalisation.

    Examples
    --------
    >>> sample_acf([1.0, -1.0] * 8, 1).round(4).tolist()
    [1.0, -0.9375]
    """
    acov = sample_autocov(series, max_lag)
    if not acov[0] > 1e-300:
        raise ZeroVarianceError("series has zero variance; the ACF is undefined")
    acf = acov / acov[0]
    acf[0] = 1.0
    return np.clip(acf, -1.0, 1.0)


def loglog_slope(x, y) -> tuple[float, float]:
    """Least-squares slope of ``log y`` on ``log x`` and its standard error."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d sequences of equal length")
    if x.shape[0] < 3:
        raise InsufficientDataError("a log-log fit needs at least 3 points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise NonPositiveDataError("log-log regression needs strictly positive data")
    fit = sps.linregress(np.log(x), np.log(y))
    return float(fit.slope), float(fit.stderr)


@dataclass(frozen=True)
class Moments:
    n: int
    mean: float
    se_mean: float
    var: float
    se_var: float


def ensemble_moments(samples) -> Moments:
    """Sample mean and variance with their standard errors.

    ``se_var`` uses the asymptotic formula ``sqrt((m4 - s^4) / n)`` with the
    fourth central moment ``m4``.
    """
    x = np.asarray(samples, dtype=float)
    n = x.shape[0]
    if n < 2:
        raise InsufficientDataError("need at least two samples")
    mean = x.mean()
    var = x.var(ddof=1)
    m4 = np.mean((x - mean) ** 4)
    return Moments(n, float(mean), float(np.sqrt(var / n)), float(var), float(np.sqrt(max(m4 - var**2, 0.0) / n)))


def jackknife_cov(x, y) -> tuple[float, float]:
    """Unbiased sample covariance and its leave-one-out jackknife standard error."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[0]
    if n < 3 or y.shape[0] != n:
        raise InsufficientDataError("jackknife covariance needs at least 3 paired samples")
    x = x - x.mean()
    y = y - y.mean()
    sx, sy, sxy = x.sum(), y.sum(), (x * y).sum()
    est = sxy / (n - 1)
    loo = (sxy - x * y - (sx - x) * (sy - y) / (n - 1)) / (n - 2)
    se = np.sqrt((n - 1) / n * np.sum((loo - loo.mean()) ** 2))
    return float(est), float(se)


def increment_cov_mc(paths: Sequence[SamplePath] | np.ndarray, r: float, h: float, s: float = 0.0, grid=None):
    """Across-path covariance of ``X_{s+(h+1)r} - X_{s+hr}`` and ``X_{s+r} - X_s``.

    ``paths`` is a sequence of paths sharing one grid, or a 2-d array of
    values (one row per path) together with ``grid``.  Returns the estimate
    and its jackknife standard error.
    """
    if isinstance(paths, np.ndarray):
        values = paths
        if grid is None:
            raise ValueError("an array of values needs its grid")
    else:
        if len(paths) == 0:
            raise InsufficientDataError("empty ensemble")
        grid = paths[0].grid
        if any(p.grid != grid for p in paths):
            raise ValueError("all paths must share one grid")
        values = np.array([p.values for p in paths])
    times = [s, s + r, s + h * r, s + (h + 1) * r]
    try:
        idx = [grid.index_of(t) for t in times]
    except Exception as exc:
        raise OffGridLagError(f"lag times {times} are not all on the grid") from exc
    first = values[:, idx[1]] - values[:, idx[0]]
    later = values[:, idx[3]] - values[:, idx[2]]
    return jackknife_cov(later, first)


@dataclass(frozen=True)
class KSResult:
    statistic: float
    pvalue: float
    alpha: float
    passed: bool
    mean: tuple[float, float]
    var: tuple[float, float]


def ks_two_sample(x, y, alpha: float = 0.01) -> KSResult:
    """Two-sample Kolmogorov-Smirnov test with asymptotic p-value.

    ``passed`` means the equality hypothesis is not rejected at ``alpha``.
    Both samples need at least :data:`MIN_KS_SAMPLE` points.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if min(x.shape[0], y.shape[0]) < MIN_KS_SAMPLE:
        raise InsufficientDataError(f"KS comparison needs at least {MIN_KS_SAMPLE} samples per side")
    res = sps.ks_2samp(x, y, method="asymp")
    return KSResult(
        float(res.statistic),
        float(res.pvalue),
        alpha,
        bool(res.pvalue >= alpha),
        (float(x.mean()), float(y.mean())),
        (float(x.var(ddof=1)), float(y.var(ddof=1))),
    )
