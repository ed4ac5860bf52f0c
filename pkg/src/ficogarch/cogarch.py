"""COGARCH(1,1), FICOGARCH(1,d,1) and the state-space FICOGARCH(p,d,q).

All volatility models share the price equation ``dG_t = sigma_{t-} dL_t``.
The squared volatility of the fractional models solves

    d sigma^2_t = -beta_1 (sigma^2_t - alpha_0) dt + alpha_1 sigma^2_t dS^{a,d}_t,

whose pathwise solution is

    sigma^2_t = exp(-X_t) (sigma^2_0 + alpha_0 beta_1 int_0^t exp(X_s) ds),
    X_t = beta_1 t - alpha_1 S^{a,d}_t.

On a grid the integral is advanced with the trapezoidal rule in the
numerically stable form ``J_{k+1} = e^{-dX_k} J_k + (step/2)(e^{-dX_k} + 1)``
with ``J_k = int_0^{t_k} exp(-(X_{t_k} - X_s)) ds``, so no exponential of the
running level of X is ever formed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy import linalg

from .errors import (
    InsufficientDataError,
    InvalidSpecError,
    MomentConditionError,
    NegativeVolatilityWarning,
    OrderConstraintError,
)
from .fracsub import FracSubConfig, Scheme, frac_path_from_driver
from .kernels import KernelFamily, KernelSpec
from .levy import JumpRecord, LevySpec, PathGrid, SamplePath, quadratic_variation_discrete, two_sided
from .stats import KSResult, ks_two_sample

__all__ = [
    "FicogarchParams",
    "PQParams",
    "VolatilityPath",
    "companion_matrix",
    "affine_scan",
    "cogarch11",
    "cogarch11_euler",
    "simulate_fractional_driver",
    "ficogarch_1d1",
    "ficogarch_from_driver",
    "ficogarch_euler",
    "ficogarch_pdq",
    "sde_residual",
    "stationary_check",
    "StationarityReport",
]


def _check_fourth_moment(driver: LevySpec) -> None:
    if driver.jumps is None:
        return
    law = driver.jumps.size_dist
    try:
        m4 = law.moment(4)
    except (AttributeError, NotImplementedError, OverflowError) as exc:
        raise MomentConditionError("the jump law does not declare a finite fourth moment") from exc
    if not math.isfinite(m4):
        raise MomentConditionError("the jump law has an infinite fourth moment")


@dataclass(frozen=True)
class FicogarchParams:
    """Parameters of a COGARCH(1,1) or FICOGARCH(1,d,1) model.

    Parameters
    ----------
    alpha0, alpha1, beta1 : float
        Positive model constants.
    driver : LevySpec
        The Lévy process ``L``; the volatility is driven by its squared jumps.
    kernel : KernelSpec, optional
        Modified MvN kernel of the fractional subordinator.  Not used by the
        classic COGARCH(1,1).
    sigma0_sq : float or "stationary"
        Initial squared volatility.  ``"stationary"`` draws it from the
        two-sided construction.
    G0 : float
        Initial price.
    """

    alpha0: float
    alpha1: float
    beta1: float
    driver: LevySpec
    kernel: KernelSpec | None = None
    sigma0_sq: float | Literal["stationary"] = "stationary"
    G0: float = 0.0

    def __post_init__(self):
        for name in ("alpha0", "alpha1", "beta1"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise InvalidSpecError(f"{name} must be positive, got {v}")
        if self.kernel is not None and self.kernel.family is not KernelFamily.MODIFIED_MVN:
            raise InvalidSpecError("FICOGARCH uses the modified MvN kernel")
        if self.sigma0_sq != "stationary" and not (isinstance(self.sigma0_sq, (int, float)) and self.sigma0_sq > 0):
            raise InvalidSpecError(f"sigma0_sq must be positive or 'stationary', got {self.sigma0_sq!r}")
        _check_fourth_moment(self.driver)

    @property
    def subordinator(self) -> LevySpec:
        """The driving subordinator ``[L, L]^(D)``."""
        return self.driver.squared_jumps()

    @property
    def decay_rate(self) -> float:
        """Mean drift of X per unit time, ``beta1 - alpha1 a^d E(S_1)``.

        The stationary solution exists only when this is positive.
        """
        a_d = 1.0 if self.kernel is None else self.kernel.a**self.kernel.d
        return self.beta1 - self.alpha1 * a_d * self.subordinator.mean()

    def stationary_mean(self) -> float:
        """``E(sigma^2) = alpha0 beta1 / (beta1 - alpha1 a^d E(S_1))`` in the stationary regime."""
        k = self.decay_rate
        if not k > 0:
            raise InvalidSpecError("parameters admit no stationary solution (beta1 <= alpha1 a^d E(S_1))")
        return self.alpha0 * self.beta1 / k


def companion_matrix(b_vec: Sequence[float]) -> np.ndarray:
    """State matrix with ones on the superdiagonal and last row ``-(b_q, ..., b_1)``.

    For ``q = 1`` this is the scalar ``-b_1``.
    """
    b = np.asarray(b_vec, dtype=float)
    q = b.shape[0]
    m = np.zeros((q, q))
    m[:-1, 1:] = np.eye(q - 1)
    m[-1, :] = -b[::-1]
    return m


@dataclass(frozen=True)
class PQParams:
    """FICOGARCH(p,d,q) parameters in state-space form.

    ``sigma^2_t = alpha0 + a_vec . Y_t`` with
    ``dY = B Y dt + e_q (alpha0 + a_vec . Y) dS^{a,d}``.
    """

    alpha0: float
    a_vec: tuple[float, ...]
    b_vec: tuple[float, ...]
    driver: LevySpec
    kernel: KernelSpec
    Y0: tuple[float, ...] | None = None
    G0: float = 0.0

    def __post_init__(self):
        a = tuple(float(x) for x in self.a_vec)
        b = tuple(float(x) for x in self.b_vec)
        object.__setattr__(self, "a_vec", a)
        object.__setattr__(self, "b_vec", b)
        q = len(b)
        if q < 1 or len(a) != q:
            raise OrderConstraintError("a_vec and b_vec must both have length q >= 1")
        if b[-1] == 0:
            raise OrderConstraintError("beta_q must be non-zero")
        nz = [i for i, x in enumerate(a) if x != 0]
        if not nz:
            raise OrderConstraintError("at least alpha_1 must be non-zero (p >= 1)")
        if self.Y0 is not None and len(self.Y0) != q:
            raise OrderConstraintError("Y0 must have length q")
        if not self.alpha0 > 0:
            raise InvalidSpecError("alpha0 must be positive")
        if self.kernel.family is not KernelFamily.MODIFIED_MVN:
            raise InvalidSpecError("FICOGARCH uses the modified MvN kernel")
        _check_fourth_moment(self.driver)

    @property
    def p(self) -> int:
        return max(i for i, x in enumerate(self.a_vec) if x != 0) + 1

    @property
    def q(self) -> int:
        return len(self.b_vec)

    @property
    def B(self) -> np.ndarray:
        return companion_matrix(self.b_vec)


@dataclass
class VolatilityPath:
    """Simulated price and volatility on a grid starting at t = 0."""

    grid: PathGrid
    sigma_sq: np.ndarray
    X: np.ndarray
    G: np.ndarray
    driver_path: SamplePath
    levy_path: SamplePath | None = None
    negative_variance: bool = False
    info: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def dG(self) -> np.ndarray:
        return np.concatenate(([0.0], np.diff(self.G)))

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "t": self.times,
            "G": self.G,
            "dG": self.dG,
            "sigma2": self.sigma_sq,
            "Sad": self.driver_path.values,
            "X": self.X,
        }


# ---------------------------------------------------------------------------
# numerics


def affine_scan(A: np.ndarray, B: np.ndarray, x0: float, block: int = 256) -> np.ndarray:
    """Solve ``x_{k+1} = A_k x_k + B_k`` for positive ``A_k``; returns ``x_0 .. x_n``.

    Within blocks of ``block`` steps the recursion is unrolled with cumulative
    log-products, re-based at the start of every block so exponentials stay
    in range.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    n = A.shape[0]
    out = np.empty(n + 1)
    out[0] = x0
    x = float(x0)
    for lo in range(0, n, block):
        a = A[lo : lo + block]
        b = B[lo : lo + block]
        logp = np.cumsum(np.log(a))  # log prod_{j<=k} a_j
        # x_{k+1} = P_k (x + sum_{i<=k} b_i / P_i)
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.exp(logp) * (x + np.cumsum(b * np.exp(-logp)))
        if not np.all(np.isfinite(vals)):
            vals = np.empty_like(a)
            for i in range(a.shape[0]):
                x = a[i] * x + b[i]
                vals[i] = x
        out[lo + 1 : lo + 1 + a.shape[0]] = vals
        x = float(vals[-1])
    return out


def _cell_of(grid: PathGrid, times: np.ndarray) -> np.ndarray:
    """Index k of the cell (t_k, t_{k+1}] containing each time."""
    return np.searchsorted(grid.times, times, side="left") - 1


def _price(grid: PathGrid, levy: SamplePath, sigma_at_jump: np.ndarray, sigma_grid: np.ndarray, G0: float) -> np.ndarray:
    """``G = G0 + int sigma_{s-} dL_s`` on the grid.

    Jumps use the supplied pre-jump volatility at their exact times; the
    continuous part of L uses left-point volatility per cell.
    """
    jumps = levy.jumps if levy.jumps is not None else JumpRecord.empty()
    inc_L = np.diff(levy.values)
    n = grid.n_points
    jump_sum = np.zeros(n - 1)
    weighted = np.zeros(n - 1)
    if len(jumps):
        cells = _cell_of(grid, jumps.times)
        jump_sum = np.bincount(cells, weights=jumps.sizes, minlength=n - 1)[: n - 1]
        weighted = np.bincount(cells, weights=sigma_at_jump * jumps.sizes, minlength=n - 1)[: n - 1]
    cont = inc_L - jump_sum
    dG = sigma_grid[:-1] * cont + weighted
    return G0 + np.concatenate(([0.0], np.cumsum(dG)))


# ---------------------------------------------------------------------------
# classic COGARCH(1,1)


def cogarch11(params: FicogarchParams, levy_path: SamplePath, sigma0_sq: float | None = None) -> VolatilityPath:
    """Exact COGARCH(1,1) path on the grid of ``levy_path``.

    Between jumps ``sigma^2`` relaxes to ``alpha0`` at rate ``beta1``; at a
    jump of size z it is multiplied by ``1 + alpha1 z^2``.  Composing these
    maps reproduces the explicit solution with
    ``X_t = beta1 t - sum log(1 + alpha1 dL^2)`` without grid error.

    ``levy_path`` must start at t = 0 and carry its jump record.
    """
    grid = levy_path.grid
    if grid.t_start != 0:
        raise InvalidSpecError("COGARCH(1,1) paths start at t = 0")
    s0 = params.sigma0_sq if sigma0_sq is None else sigma0_sq
    if s0 == "stationary":
        s0 = params.stationary_mean()
    if not s0 > 0:
        raise InvalidSpecError("initial squared volatility must be positive")
    a0, a1, b1 = params.alpha0, params.alpha1, params.beta1
    jumps = levy_path.jumps if levy_path.jumps is not None else JumpRecord.empty()
    h = grid.step
    n = grid.n_points
    A = np.full(n - 1, math.exp(-b1 * h))
    Bc = np.full(n - 1, a0 * -math.expm1(-b1 * h))
    cells = _cell_of(grid, jumps.times)
    mult = 1.0 + a1 * jumps.sizes**2
    # compose the affine maps of cells that contain jumps
    sigma_jump = np.empty(len(jumps))
    for k in np.unique(cells):
        sel = np.flatnonzero(cells == k)
        t_prev = grid.times[k]
        a_k, b_k = 1.0, 0.0
        for j in sel:
            e = math.exp(-b1 * (jumps.times[j] - t_prev))
            a_k, b_k = e * a_k, e * b_k + a0 * (1.0 - e)
            a_k, b_k = mult[j] * a_k, mult[j] * b_k
            t_prev = jumps.times[j]
        e = math.exp(-b1 * (grid.times[k + 1] - t_prev))
        A[k], Bc[k] = e * a_k, e * b_k + a0 * (1.0 - e)
    sig = affine_scan(A, Bc, s0)
    # pre-jump volatility at each jump time, replaying the cell from its left end
    for k in np.unique(cells):
        x = sig[k]
        t_prev = grid.times[k]
        for j in np.flatnonzero(cells == k):
            e = math.exp(-b1 * (jumps.times[j] - t_prev))
            x = e * x + a0 * (1.0 - e)
            sigma_jump[j] = x
            x *= mult[j]
            t_prev = jumps.times[j]
    log_mult = np.bincount(cells, weights=np.log(mult), minlength=n - 1)[: n - 1]
    X = b1 * grid.times - np.concatenate(([0.0], np.cumsum(log_mult)))
    G = _price(grid, levy_path, np.sqrt(sigma_jump), np.sqrt(sig), params.G0)
    sq = quadratic_variation_discrete(levy_path)
    return VolatilityPath(grid, sig, X, G, sq, levy_path, info={"sigma0_sq": float(s0)})


def cogarch11_euler(params: FicogarchParams, levy_path: SamplePath, sigma0_sq: float) -> np.ndarray:
    """Euler scheme ``s_{k+1} = s_k - beta1 (s_k - alpha0) h + alpha1 s_k dS_k`` for COGARCH(1,1).

    ``dS_k`` is the sum of squared jumps in cell k.  An independent check on
    :func:`cogarch11`.
    """
    grid = levy_path.grid
    sq = quadratic_variation_discrete(levy_path)
    dS = np.diff(sq.values)
    h = grid.step
    A = 1.0 - params.beta1 * h + params.alpha1 * dS
    B = np.full_like(A, params.beta1 * params.alpha0 * h)
    if np.all(A > 0):
        return affine_scan(A, B, sigma0_sq)
    out = np.empty(grid.n_points)
    out[0] = sigma0_sq
    for k in range(grid.n_points - 1):
        out[k + 1] = A[k] * out[k] + B[k]
    return out


# ---------------------------------------------------------------------------
# FICOGARCH(1,d,1)


@dataclass(frozen=True)
class FractionalDriver:
    """One realization of L, S = [L, L]^(D) and S^{a,d} on a common grid."""

    levy: SamplePath
    subordinator: SamplePath
    frac: SamplePath
    vol_horizon: float


def simulate_fractional_driver(
    kernel: KernelSpec,
    driver: LevySpec,
    grid: PathGrid,
    seed: int,
    past_horizon: float | None = None,
    vol_horizon: float = 0.0,
    scheme: Scheme = "stochastic_riemann",
) -> FractionalDriver:
    """Two-sided L on ``[-(vol_horizon + M), t_end]`` and S^{a,d} on ``[-vol_horizon, t_end]``.

    The realization depends only on ``seed``, the step, the two horizons and
    ``t_end``; models sharing these see identical paths.
    """
    if grid.t_start != 0:
        raise InvalidSpecError("model grids start at t = 0")
    h = grid.step
    m_frac = 200.0 * kernel.a if past_horizon is None else past_horizon
    n_vol = int(math.ceil(vol_horizon / h - 1e-9))
    n_frac = max(int(math.ceil(m_frac / h - 1e-9)), 1)
    vol_grid = PathGrid(-n_vol * h, h, n_vol + grid.n_points)
    cfg = FracSubConfig(kernel, driver.squared_jumps(), vol_grid, (n_vol + n_frac) * h, scheme)
    full = PathGrid(-(n_vol + n_frac) * h, h, n_vol + n_frac + grid.n_points)
    levy = two_sided(driver, full, seed)
    sq = quadratic_variation_discrete(levy)
    frac = frac_path_from_driver(cfg, sq)
    return FractionalDriver(levy, sq, frac, n_vol * h)


def _default_vol_horizon(params: FicogarchParams) -> float:
    # e^{-kappa M} = e^{-10}: the missing past weighs about 5e-5 of the level
    return 10.0 / params.decay_rate


def ficogarch_1d1(
    params: FicogarchParams,
    grid: PathGrid,
    seed: int,
    past_horizon: float | None = None,
    vol_horizon: float | None = None,
    scheme: Scheme = "stochastic_riemann",
) -> VolatilityPath:
    """Simulate FICOGARCH(1,d,1) on ``grid`` (which must start at 0).

    Parameters
    ----------
    past_horizon : float, optional
        Truncation ``M`` of the fractional integral; default ``200 a``.
    vol_horizon : float, optional
        Length of the pre-sample used for the stationary initialization;
        default ``10 / (beta1 - alpha1 a^d E(S_1))``.  Ignored when
        ``sigma0_sq`` is a number.
    scheme : str
        Discretization of S^{a,d}, see :mod:`ficogarch.fracsub`.
    """
    if params.kernel is None:
        raise InvalidSpecError("FICOGARCH needs a kernel")
    stationary = params.sigma0_sq == "stationary"
    if stationary:
        if not params.decay_rate > 0:
            raise InvalidSpecError("parameters admit no stationary solution (beta1 <= alpha1 a^d E(S_1))")
        vh = _default_vol_horizon(params) if vol_horizon is None else vol_horizon
    else:
        vh = 0.0
    drv = simulate_fractional_driver(params.kernel, params.driver, grid, seed, past_horizon, vh, scheme)
    return ficogarch_from_driver(params, drv)


def ficogarch_from_driver(params: FicogarchParams, drv: FractionalDriver, sigma0_sq: float | None = None) -> VolatilityPath:
    """Explicit-solution volatility and price on a given driver realization."""
    fgrid = drv.frac.grid
    h = fgrid.step
    i0 = fgrid.origin_index
    t = fgrid.times
    X = params.beta1 * t - params.alpha1 * drv.frac.values
    X = X - X[i0]
    dX = np.diff(X)
    A = np.exp(-dX)
    B = 0.5 * h * (A + 1.0)
    a0b1 = params.alpha0 * params.beta1
    s0 = params.sigma0_sq if sigma0_sq is None else sigma0_sq
    info: dict = {"step": h, "vol_horizon": drv.vol_horizon}
    if s0 == "stationary":
        # J from -vol_horizon with J = 0 gives the truncated stationary solution everywhere
        J = affine_scan(A, B, 0.0)
        sig_all = a0b1 * J
        s0 = float(sig_all[i0])
        # heuristic size of the discarded past: level at -M decays like e^{-kappa (t+M)}
        info["stationary_truncation_bound"] = float(a0b1 * math.exp(X[0]) / params.decay_rate)
        sig = sig_all[i0:]
    else:
        J = affine_scan(A[i0:], B[i0:], 0.0)
        sig = np.exp(-X[i0:]) * s0 + a0b1 * J
    info["sigma0_sq"] = float(s0)
    grid = PathGrid(0.0, h, fgrid.n_points - i0)
    frac = SamplePath(grid, drv.frac.values[i0:], "continuous")
    levy = drv.levy.restrict(grid)
    # sigma^2 is continuous, so the pre-jump value is interpolated linearly
    jt = levy.jumps.times if levy.jumps is not None else np.empty(0)
    sig_jump = np.sqrt(np.interp(jt, grid.times, sig))
    G = _price(grid, levy, sig_jump, np.sqrt(sig), params.G0)
    return VolatilityPath(grid, sig, X[i0:], G, frac, levy, info=info)


def ficogarch_euler(params: FicogarchParams, frac: SamplePath, sigma0_sq: float) -> np.ndarray:
    """Euler scheme for the volatility SDE on a given S^{a,d} path starting at t = 0."""
    dS = np.diff(frac.values)
    h = frac.grid.step
    A = 1.0 - params.beta1 * h + params.alpha1 * dS
    B = np.full_like(A, params.alpha0 * params.beta1 * h)
    return affine_scan(A, B, sigma0_sq)


def sde_residual(params: FicogarchParams, sigma_sq: np.ndarray, frac: SamplePath, jump_times=None) -> np.ndarray:
    """Per-cell residual ``d sigma^2 + beta1 (sigma^2 - alpha0) h - alpha1 sigma^2 dS^{a,d}``.

    Left-point evaluation, so the residual of the exact solution is of order
    ``h^2`` per cell where S^{a,d} is smooth.  Cells containing one of
    ``jump_times`` (where S^{a,d} has a kink) are returned as NaN.
    """
    h = frac.grid.step
    s = np.asarray(sigma_sq)
    r = np.diff(s) + params.beta1 * (s[:-1] - params.alpha0) * h - params.alpha1 * s[:-1] * np.diff(frac.values)
    if jump_times is not None and len(jump_times):
        cells = _cell_of(frac.grid, np.asarray(jump_times))
        cells = cells[(cells >= 0) & (cells < r.shape[0])]
        r[cells] = np.nan
    return r


# ---------------------------------------------------------------------------
# FICOGARCH(p,d,q)


def ficogarch_pdq(
    params: PQParams,
    grid: PathGrid,
    seed: int,
    past_horizon: float | None = None,
    scheme: Scheme = "stochastic_riemann",
    driver: FractionalDriver | None = None,
) -> VolatilityPath:
    """Euler state recursion ``Y_{n+1} = Y_n + B Y_n h + e_q (alpha0 + a.Y_n) dS^{a,d}_n``.

    ``sigma^2 = alpha0 + a.Y``.  Non-positive variance is not an error: a
    :class:`NegativeVolatilityWarning` is emitted and
    ``path.negative_variance`` is set; the price then uses ``sqrt(max(sigma^2, 0))``.
    """
    drv = driver or simulate_fractional_driver(params.kernel, params.driver, grid, seed, past_horizon, 0.0, scheme)
    frac = drv.frac
    i0 = frac.grid.origin_index
    dS = np.diff(frac.values[i0:])
    h = frac.grid.step
    q = params.q
    Bm = params.B
    a = np.asarray(params.a_vec)
    Y = np.zeros(q) if params.Y0 is None else np.asarray(params.Y0, dtype=float)
    step = np.eye(q) + h * Bm
    n = dS.shape[0]
    Ys = np.empty((n + 1, q))
    Ys[0] = Y
    for k in range(n):
        lvl = params.alpha0 + a @ Y
        Y = step @ Y
        Y[-1] += lvl * dS[k]
        Ys[k + 1] = Y
    sig = params.alpha0 + Ys @ a
    negative = bool(np.any(sig <= 0))
    if negative:
        warnings.warn("FICOGARCH(p,d,q) squared volatility became non-positive", NegativeVolatilityWarning, stacklevel=2)
    out_grid = PathGrid(0.0, h, n + 1)
    levy = drv.levy.restrict(out_grid)
    sig_pos = np.maximum(sig, 0.0)
    jt = levy.jumps.times if levy.jumps is not None else np.empty(0)
    G = _price(out_grid, levy, np.sqrt(np.interp(jt, out_grid.times, sig_pos)), np.sqrt(sig_pos), params.G0)
    X = np.full(n + 1, np.nan)
    path = VolatilityPath(out_grid, sig, X, G, SamplePath(out_grid, frac.values[i0:], "continuous"), levy, negative)
    path.info["state"] = Ys
    return path


def state_decay(B: np.ndarray, Y0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Matrix-exponential solution ``expm(B t) Y0`` of ``Y' = B Y``."""
    return np.array([linalg.expm(B * t) @ Y0 for t in times])


# ---------------------------------------------------------------------------
# stationarity


@dataclass(frozen=True)
class StationarityReport:
    variable: str
    t1: float
    t2: float
    n_paths: int
    ks: KSResult

    @property
    def passed(self) -> bool:
        return self.ks.passed


def stationary_check(
    paths: Sequence[VolatilityPath],
    t1: float,
    t2: float,
    variable: Literal["sigma_sq", "dG"] = "sigma_sq",
    window: float = 1.0,
    alpha: float = 0.01,
) -> StationarityReport:
    """Compare the cross-sectional law at two times with a two-sample KS test.

    ``variable="sigma_sq"`` compares ``sigma^2_{t1}`` with ``sigma^2_{t2}``;
    ``"dG"`` compares the price increments ``G_{t+window} - G_t``.
    """
    if len(paths) < 1000:
        raise InsufficientDataError(f"stationarity check needs at least 1000 paths, got {len(paths)}")
    grid = paths[0].grid

    def sample(t):
        i = grid.index_of(t)
        if variable == "sigma_sq":
            return np.array([p.sigma_sq[i] for p in paths])
        j = grid.index_of(t + window)
        return np.array([p.G[j] - p.G[i] for p in paths])

    if variable not in ("sigma_sq", "dG"):
        raise ValueError(f"unknown variable {variable!r}")
    x, y = sample(t1), sample(t2)
    if np.array_equal(x, y):
        # identical samples (e.g. a deterministic path): distance 0 by definition
        ks = KSResult(0.0, 1.0, alpha, True, (float(x.mean()),) * 2, (float(x.var(ddof=1)),) * 2)
    else:
        ks = ks_two_sample(x, y, alpha)
    return StationarityReport(variable, t1, t2, len(paths), ks)
