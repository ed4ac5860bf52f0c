"""Fractional subordinators built by Volterra convolution of a driving subordinator.

For the modified Mandelbrot-van-Ness kernel

    S^{a,d}_t = int f_{a,d}(t, u) dS_u,     f_{a,d}(t, u) = g(-u) - g(t - u),
    g(x) = (a + x_+)^d,

with ``S`` a two-sided subordinator.  The infinite past is truncated at
``-M``.  Three discretisations are available on the same driver realization:

``stochastic_riemann``
    Left-endpoint sum ``sum_k f(t, u_k) (S_{u_{k+1}} - S_{u_k})`` over the
    extended grid ``[-M, t]``.
``parts_integral``
    The integration-by-parts form

        -f(t, -M) S_{-M} + d int ((a + (-s)_+)^(d-1) - (a + (t-s)_+)^(d-1)) S_s ds
                         - d a^(d-1) int_0^t S_s ds

    with trapezoidal weights.  Without truncation the boundary term vanishes.
``exact``
    ``sum_j f(t, tau_j) Z_j`` over the exact jump times and sizes of the
    driver, plus the drift contribution in closed form.  No grid error.

Because ``E(S_1)`` is known, the expected contribution of the discarded past,
``E(S_1) int_{-inf}^{-M} f(t, u) du``, is added back by default
(``tail_compensation``).  The residual error is then a centred random
variable with variance ``Var(S_1) int_{-inf}^{-M} f^2 = O(M^(2d-1))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np
from scipy import integrate, signal

from .errors import (
    CumulantUnavailableError,
    DivergesError,
    GridError,
    HorizonTooShortError,
    InvalidSpecError,
    KernelGridIncompatibleError,
)
from .kernels import KernelFamily, KernelSpec, kernel_array, kernel_integral, kernel_power_integral
from .levy import JumpRecord, LevySpec, PathGrid, SamplePath, simulate_levy, two_sided

__all__ = [
    "Scheme",
    "FracSubConfig",
    "frac_path",
    "frac_path_from_driver",
    "driver_grid",
    "simulate_driver",
    "truncated_mass",
    "frac_mean",
    "frac_cumulant",
    "with_scheme",
    "with_step",
]

Scheme = Literal["stochastic_riemann", "parts_integral", "exact"]
_SCHEMES = ("stochastic_riemann", "parts_integral", "exact")

# entries of the (output x jump cell) kernel matrix evaluated per block
_BLOCK = 1 << 21
# above this many kernel evaluations the convolution is done by FFT
_DIRECT_LIMIT = 4_000_000


@dataclass(frozen=True)
class FracSubConfig:
    """Everything needed to build one fractional subordinator path.

    Parameters
    ----------
    kernel : KernelSpec
        ModifiedMvN for the stationary construction, MG for the one-sided
        variant.  MvN is accepted only with ``pathological=True``.
    driver : LevySpec
        The driving subordinator ``S`` (for FICOGARCH, the spec returned by
        ``L.squared_jumps()``).
    grid : PathGrid
        Output grid.  Two-sided kernels need 0 on the grid; MG needs
        ``t_start >= 0``.
    past_horizon : float, optional
        Truncation point ``M`` of the infinite past; defaults to ``200 a``.
        Rounded up to a whole number of grid steps.
    scheme : {"stochastic_riemann", "parts_integral", "exact"}
    tail_compensation : bool
        Add the expected contribution of jumps before ``-M``.
    pathological : bool
        Allow the unmodified MvN kernel with d < 0, whose paths are
        discontinuous and unbounded.
    """

    kernel: KernelSpec
    driver: LevySpec
    grid: PathGrid
    past_horizon: float | None = None
    scheme: Scheme = "stochastic_riemann"
    tail_compensation: bool = True
    pathological: bool = False
    horizon: float = field(init=False)

    def __post_init__(self):
        self.driver.require_subordinator()
        if self.scheme not in _SCHEMES:
            raise InvalidSpecError(f"unknown scheme {self.scheme!r}; choose one of {_SCHEMES}")
        fam = self.kernel.family
        g = self.grid
        if fam is KernelFamily.MG:
            k = g.t_start / g.step
            if g.t_start < 0:
                raise KernelGridIncompatibleError("the MG kernel is one-sided; the grid must start at t >= 0")
            if abs(k - round(k)) > 1e-9 * max(1.0, k):
                raise KernelGridIncompatibleError("MG grid must lie on the lattice step * N")
            if self.scheme == "parts_integral":
                raise KernelGridIncompatibleError("parts_integral is only defined for the modified MvN kernel")
            object.__setattr__(self, "horizon", 0.0)
            return
        if fam is KernelFamily.MVN:
            if not self.pathological:
                raise InvalidSpecError("the unmodified MvN kernel is only available with pathological=True")
            if self.scheme == "parts_integral":
                raise KernelGridIncompatibleError("parts_integral is only defined for the modified MvN kernel")
        if g.origin_index is None:
            raise GridError("two-sided kernels need t = 0 on the output grid")
        m = self.past_horizon
        if m is None:
            m = 200.0 * (self.kernel.a if self.kernel.a is not None else 1.0)
        if not m > 0:
            raise HorizonTooShortError("past_horizon must be positive")
        if m < -g.t_start - 1e-12 * g.step:
            raise HorizonTooShortError(f"past_horizon {m} is shorter than |t_start| = {-g.t_start}")
        object.__setattr__(self, "horizon", math.ceil(m / g.step - 1e-9) * g.step)


def driver_grid(cfg: FracSubConfig) -> PathGrid:
    """Grid on which the driver must be given: ``[-M, t_end]`` (``[0, t_end]`` for MG)."""
    g = cfg.grid
    if cfg.kernel.family is KernelFamily.MG:
        return PathGrid.from_span(0.0, max(g.t_end, g.step), g.step)
    n_past = int(round(cfg.horizon / g.step))
    n_future = max(int(round(g.t_end / g.step)), 1)
    return PathGrid(-n_past * g.step, g.step, n_past + n_future + 1)


def simulate_driver(cfg: FracSubConfig, seed: int) -> SamplePath:
    """Driver path on :func:`driver_grid`, two-sided unless the kernel is MG."""
    grid = driver_grid(cfg)
    if cfg.kernel.family is KernelFamily.MG:
        return simulate_levy(cfg.driver, grid, seed)
    return two_sided(cfg.driver, grid, seed)


def frac_path(cfg: FracSubConfig, seed: int, return_driver: bool = False):
    """Simulate ``S^{a,d}`` (or the MG variant) on ``cfg.grid``.

    The driver realization depends only on ``seed`` and the driver grid, so
    configurations that differ only in ``scheme`` see the same driver.

    Examples
    --------
    >>> from ficogarch.levy import LevySpec, PathGrid
    >>> cfg = FracSubConfig(KernelSpec.modified(1.0, -0.25), LevySpec(),
    ...                     PathGrid.from_span(0.0, 1.0, 0.5), past_horizon=2.0)
    >>> frac_path(cfg, seed=1).values.tolist()
    [0.0, 0.0, 0.0]
    """
    driver = simulate_driver(cfg, seed)
    out = frac_path_from_driver(cfg, driver)
    return (out, driver) if return_driver else out


def frac_path_from_driver(cfg: FracSubConfig, driver: SamplePath) -> SamplePath:
    """Apply the configured scheme to a given driver path.

    ``driver`` must live on :func:`driver_grid` (or a grid containing it with
    the same step) and, for the ``exact`` scheme, carry its jump record.
    """
    want = driver_grid(cfg)
    if driver.grid != want:
        driver = driver.restrict(want)
    fam = cfg.kernel.family
    if cfg.scheme == "exact":
        values = _exact(cfg, driver)
    elif fam is KernelFamily.MODIFIED_MVN:
        values = _riemann_modified(cfg, driver) if cfg.scheme == "stochastic_riemann" else _parts(cfg, driver)
    else:
        values = _riemann_midpoint(cfg, driver)
    return SamplePath(cfg.grid, values, "continuous")


# ---------------------------------------------------------------------------
# schemes


def _output_slice(cfg: FracSubConfig, dgrid: PathGrid) -> slice:
    i = dgrid.index_of(cfg.grid.t_start)
    return slice(i, i + cfg.grid.n_points)


def _compensation(cfg: FracSubConfig, t: np.ndarray) -> np.ndarray:
    if not cfg.tail_compensation or cfg.kernel.family is KernelFamily.MG:
        return np.zeros_like(t)
    return cfg.driver.mean() * truncated_mass(cfg.kernel, t, cfg.horizon)


def _direct_sum(spec: KernelSpec, t_out: np.ndarray, where: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """``sum_j f(t, where_j) weights_j`` for every t in ``t_out``, blockwise."""
    out = np.zeros(t_out.shape[0])
    if where.shape[0] == 0:
        return out
    rows = max(1, _BLOCK // where.shape[0])
    for lo in range(0, t_out.shape[0], rows):
        ts = t_out[lo : lo + rows]
        if spec.family is KernelFamily.MG:
            block = np.array([kernel_array(spec, float(t), where) for t in ts])
        else:
            block = kernel_array(spec, ts[:, None], where[None, :])
        out[lo : lo + rows] = block @ weights
    return out


def _riemann_modified(cfg: FracSubConfig, driver: SamplePath) -> np.ndarray:
    spec = cfg.kernel
    u = driver.times
    ds = np.diff(driver.values)
    sl = _output_slice(cfg, driver.grid)
    t_out = u[sl]
    nz = np.flatnonzero(ds)
    if t_out.shape[0] * nz.shape[0] <= _DIRECT_LIMIT:
        vals = _direct_sum(spec, t_out, u[nz], ds[nz])
    else:
        # f(t_m, u_k) = G[o - k] - G[m - k] with G[j] = g(j step) and o the origin index,
        # so S^{a,d}_m = a^d S_m - (P[m] - P[o]) with P[m] = sum_{k<m} G[m-k] dS_k
        a, d, h = spec.a, spec.d, driver.grid.step
        n = u.shape[0]
        gp = (a + h * np.arange(1, n)) ** d
        conv = signal.fftconvolve(ds, gp)[: n - 1]
        p = np.concatenate(([0.0], conv))
        o = driver.grid.origin_index
        vals = (a**d * driver.values - (p - p[o]))[sl]
    return vals + _compensation(cfg, t_out)


def _parts(cfg: FracSubConfig, driver: SamplePath) -> np.ndarray:
    a, d = cfg.kernel.a, cfg.kernel.d
    grid = driver.grid
    h, n, o = grid.step, grid.n_points, grid.origin_index
    s_vals = driver.values
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    ws = w * s_vals
    # first integral: Q[o] - Q[m] with Q[m] = sum_k ws_k H[m-k], H[j] = (a + (j h)_+)^(d-1)
    hp = (a + h * np.arange(1, n)) ** (d - 1.0)
    causal = np.concatenate(([0.0], signal.fftconvolve(ws, hp)[: n - 1]))
    tail = np.concatenate((np.cumsum(ws[::-1])[::-1], [0.0]))[:n]
    q = causal + a ** (d - 1.0) * tail
    first = d * (q[o] - q)
    # second integral: signed cumulative trapezoid of S from the origin
    cum = np.concatenate(([0.0], integrate.cumulative_trapezoid(s_vals, dx=h)))
    second = -d * a ** (d - 1.0) * (cum - cum[o])
    sl = _output_slice(cfg, grid)
    t_out = grid.times[sl]
    boundary = -kernel_array(cfg.kernel, t_out, grid.t_start) * s_vals[0]
    return (first + second)[sl] + boundary + _compensation(cfg, t_out)


def _riemann_midpoint(cfg: FracSubConfig, driver: SamplePath) -> np.ndarray:
    # MG and MvN are singular at grid points, so kernels are taken at cell midpoints
    u = driver.times
    ds = np.diff(driver.values)
    sl = _output_slice(cfg, driver.grid)
    t_out = u[sl]
    nz = np.flatnonzero(ds)
    mids = u[nz] + 0.5 * driver.grid.step
    if cfg.kernel.family is KernelFamily.MG:
        out = np.array([kernel_array(cfg.kernel, float(t), mids[mids < t]) @ ds[nz][mids < t] for t in t_out])
    else:
        out = _direct_sum(cfg.kernel, t_out, mids, ds[nz])
    return out + _compensation(cfg, t_out)


def _exact(cfg: FracSubConfig, driver: SamplePath) -> np.ndarray:
    jumps = driver.jumps if driver.jumps is not None else JumpRecord.empty()
    grid = driver.grid
    sl = _output_slice(cfg, grid)
    t_out = grid.times[sl]
    keep = jumps.times > grid.t_start
    vals = _direct_sum(cfg.kernel, t_out, jumps.times[keep], jumps.sizes[keep])
    drift = cfg.driver.drift
    if drift:
        vals = vals + drift * (_full_mass(cfg.kernel, t_out) - truncated_mass(cfg.kernel, t_out, cfg.horizon))
    return vals + _compensation(cfg, t_out)


# ---------------------------------------------------------------------------
# deterministic kernel masses


def truncated_mass(spec: KernelSpec, t, horizon: float):
    """``int_{-inf}^{-M} f(t, u) du`` in closed form (zero for MG).

    Modified MvN: ``((a + t + M)^(d+1) - (a + M)^(d+1)) / (d + 1)``.
    MvN: ``-((t + M)^(d+1) - M^(d+1)) / ((d + 1) Gamma(d + 1))``.
    """
    t = np.asarray(t, dtype=float)
    d = spec.d
    if spec.family is KernelFamily.MG:
        return np.zeros_like(t)
    base = horizon + (spec.a if spec.family is KernelFamily.MODIFIED_MVN else 0.0)
    diff = base ** (d + 1.0) * np.expm1((d + 1.0) * np.log1p(t / base)) / (d + 1.0)
    if spec.family is KernelFamily.MODIFIED_MVN:
        return diff
    return -diff / math.gamma(d + 1.0)


def _full_mass(spec: KernelSpec, t: np.ndarray) -> np.ndarray:
    if spec.family is KernelFamily.MODIFIED_MVN:
        return spec.a**spec.d * t
    if spec.family is KernelFamily.MVN:
        return np.zeros_like(t)
    # MG kernel: f(t, t x) = t^d f(1, x), so the mass scales as t^(d+1)
    return kernel_integral(spec, 1.0, tol=1e-12) * np.abs(t) ** (spec.d + 1.0)


# ---------------------------------------------------------------------------
# moments


def frac_mean(cfg: FracSubConfig, t: float, rtol: float = 1e-10) -> float:
    """``E(S^{a,d}_t) = E(S_1) int f(t, u) du`` by adaptive quadrature.

    For the modified kernel the integral equals ``a^d t``; this function does
    not use that identity so that it can serve as a check on it.
    """
    if t == 0:
        return 0.0
    return cfg.driver.mean() * kernel_integral(cfg.kernel, t, tol=1e-14, rtol=rtol)


def frac_cumulant(cfg: FracSubConfig, k: int, t: float, rtol: float = 1e-10) -> float:
    """k-th cumulant ``kappa_k(S_1) int f(t, u)^k du``."""
    if int(k) != k or k < 1:
        raise ValueError("cumulant order must be a positive integer")
    k = int(k)
    try:
        kappa = cfg.driver.cumulant(k)
    except (AttributeError, NotImplementedError, OverflowError) as exc:
        raise CumulantUnavailableError(f"cumulant {k} of the driver is unavailable") from exc
    if not math.isfinite(kappa):
        raise CumulantUnavailableError(f"cumulant {k} of the driver is not finite")
    if t == 0:
        return 0.0
    try:
        mass = kernel_power_integral(cfg.kernel, t, float(k), tol=1e-14, rtol=rtol, signed=True)
    except DivergesError as exc:
        raise CumulantUnavailableError(f"the kernel is not in L^{k}, so cumulant {k} does not exist") from exc
    return kappa * mass


def with_scheme(cfg: FracSubConfig, scheme: Scheme) -> FracSubConfig:
    return replace(cfg, scheme=scheme)


def with_step(cfg: FracSubConfig, step: float) -> FracSubConfig:
    """Same configuration on a grid with the same span and a new step."""
    g = cfg.grid
    return replace(cfg, grid=PathGrid.from_span(g.t_start, g.t_end, step), past_horizon=cfg.horizon or None)
