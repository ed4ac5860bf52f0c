"""Finite-activity Lévy processes and subordinators on uniform grids.

Paths are generated from exact jump times (exponential inter-arrivals).  Each
jump is attributed to the first grid point at or after its time, and the exact
jump list travels with the path so that quantities such as the discrete
quadratic variation can be computed without grid error.

Seeding
-------
A user seed never drives a generator directly.  It is expanded with
:class:`numpy.random.SeedSequence` using a ``spawn_key`` that names the
sub-stream::

    (0,)      positive-time half of a path (also the one-sided path)
    (1,)      negative-time half of a two-sided path
    (2, i)    seed of the i-th member of an ensemble

Within a stream the draw order is fixed: Gaussian increments first, then jump
inter-arrival times, then jump sizes.  Changing any of this changes every
path, so treat it as part of the public contract.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Literal, Sequence, TypeVar

import numpy as np

from .errors import GridError, InvalidSpecError, JumpOutsideGridError
from .io import read_columns, write_columns

__all__ = [
    "Normal",
    "Exponential",
    "Constant",
    "Squared",
    "CompoundPoisson",
    "LevySpec",
    "PathGrid",
    "JumpRecord",
    "SamplePath",
    "stream",
    "path_seed",
    "ensemble",
    "simulate_levy",
    "two_sided",
    "quadratic_variation_discrete",
]

POSITIVE_STREAM = 0
NEGATIVE_STREAM = 1
ENSEMBLE_STREAM = 2


def stream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the named sub-stream ``key`` of ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def path_seed(seed: int, index: int) -> int:
    """Integer seed of ensemble member ``index`` derived from a base seed."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(ENSEMBLE_STREAM, int(index)))
    return int(ss.generate_state(2, dtype=np.uint64)[0] >> np.uint64(1))


T = TypeVar("T")


def ensemble(fn: Callable[[int], T], seed: int, n_paths: int, n_jobs: int = 1) -> list[T]:
    """Evaluate ``fn(path_seed(seed, i))`` for ``i = 0 .. n_paths - 1``.

    Results are returned in index order regardless of ``n_jobs``, so the
    ensemble is reproducible however it is scheduled.  With ``n_jobs > 1``
    the members run in a process pool and ``fn`` must be picklable.
    """
    seeds = [path_seed(seed, i) for i in range(n_paths)]
    if n_jobs <= 1:
        return [fn(s) for s in seeds]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, seeds, chunksize=max(1, n_paths // (4 * n_jobs))))


# ---------------------------------------------------------------------------
# jump laws


@dataclass(frozen=True)
class Normal:
    mean: float = 0.0
    var: float = 1.0

    def __post_init__(self):
        if not self.var >= 0:
            raise InvalidSpecError(f"Normal jump variance must be >= 0, got {self.var}")

    @property
    def nonnegative(self) -> bool:
        return self.var == 0 and self.mean >= 0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.mean + math.sqrt(self.var) * rng.standard_normal(n)

    def moment(self, k: int) -> float:
        # m_k = mu m_{k-1} + (k-1) s^2 m_{k-2}
        m_prev, m = 1.0, self.mean
        if k == 0:
            return 1.0
        for j in range(2, k + 1):
            m_prev, m = m, self.mean * m + (j - 1) * self.var * m_prev
        return m


@dataclass(frozen=True)
class Exponential:
    rate: float = 1.0

    def __post_init__(self):
        if not self.rate > 0:
            raise InvalidSpecError(f"Exponential jump rate must be > 0, got {self.rate}")

    nonnegative = True

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.exponential(1.0 / self.rate, n)

    def moment(self, k: int) -> float:
        return math.factorial(k) / self.rate**k


@dataclass(frozen=True)
class Constant:
    value: float = 1.0

    @property
    def nonnegative(self) -> bool:
        return self.value >= 0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.full(n, float(self.value))

    def moment(self, k: int) -> float:
        return float(self.value) ** k


@dataclass(frozen=True)
class Squared:
    """Law of ``Z**2`` for ``Z`` drawn from ``base``; the jumps of ``[L, L]``."""

    base: Normal | Exponential | Constant

    nonnegative = True

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.base.sample(rng, n) ** 2

    def moment(self, k: int) -> float:
        return self.base.moment(2 * k)


JumpLaw = Normal | Exponential | Constant | Squared


@dataclass(frozen=True)
class CompoundPoisson:
    rate: float
    size_dist: JumpLaw = field(default_factory=Normal)

    def __post_init__(self):
        if not self.rate > 0:
            raise InvalidSpecError(f"compound Poisson rate must be > 0, got {self.rate}")


@dataclass(frozen=True)
class LevySpec:
    """Finite-activity Lévy process ``L_t = drift*t + sqrt(gaussian_var)*W_t + sum of jumps``.

    ``drift`` is the drift of the continuous part, i.e. jumps are not
    compensated.
    """

    drift: float = 0.0
    gaussian_var: float = 0.0
    jumps: CompoundPoisson | None = None

    def __post_init__(self):
        if not self.gaussian_var >= 0:
            raise InvalidSpecError(f"gaussian_var must be >= 0, got {self.gaussian_var}")
        if not math.isfinite(self.drift):
            raise InvalidSpecError("drift must be finite")

    @property
    def is_subordinator(self) -> bool:
        jumps_ok = self.jumps is None or self.jumps.size_dist.nonnegative
        return self.gaussian_var == 0 and self.drift >= 0 and jumps_ok

    def require_subordinator(self) -> None:
        if not self.is_subordinator:
            raise InvalidSpecError(
                "a subordinator needs gaussian_var = 0, drift >= 0 and non-negative jumps"
            )

    def cumulant(self, k: int) -> float:
        """k-th cumulant of ``L_1``."""
        if k < 1:
            raise ValueError("cumulant order must be >= 1")
        jump_part = 0.0 if self.jumps is None else self.jumps.rate * self.jumps.size_dist.moment(k)
        if k == 1:
            return self.drift + jump_part
        if k == 2:
            return self.gaussian_var + jump_part
        return jump_part

    def mean(self) -> float:
        return self.cumulant(1)

    def variance(self) -> float:
        return self.cumulant(2)

    def squared_jumps(self) -> "LevySpec":
        """Spec of the discrete quadratic variation ``[L, L]^(D)``."""
        if self.jumps is None:
            return LevySpec()
        return LevySpec(jumps=CompoundPoisson(self.jumps.rate, Squared(self.jumps.size_dist)))


# ---------------------------------------------------------------------------
# grids and paths


@dataclass(frozen=True)
class PathGrid:
    t_start: float
    step: float
    n_points: int

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise GridError(f"grid step must be positive, got {self.step}")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise GridError(f"grid needs at least 2 points, got {self.n_points}")
        object.__setattr__(self, "n_points", int(self.n_points))

    @classmethod
    def from_span(cls, t_start: float, t_end: float, step: float) -> "PathGrid":
        n = (t_end - t_start) / step
        n_cells = int(round(n))
        if abs(n - n_cells) > 1e-9 * max(1.0, abs(n)):
            raise GridError(f"span [{t_start}, {t_end}] is not a multiple of step {step}")
        return cls(float(t_start), float(step), n_cells + 1)

    @property
    def t_end(self) -> float:
        return self.t_start + (self.n_points - 1) * self.step

    @cached_property
    def times(self) -> np.ndarray:
        t = self.t_start + self.step * np.arange(self.n_points)
        i0 = self.origin_index
        if i0 is not None:
            t[i0] = 0.0
        t.setflags(write=False)
        return t

    @property
    def origin_index(self) -> int | None:
        """Index of the grid point at t = 0, or None if 0 is not on the grid."""
        k = -self.t_start / self.step
        i = int(round(k))
        if 0 <= i < self.n_points and abs(k - i) <= 1e-9 * max(1.0, abs(k)):
            return i
        return None

    def index_of(self, t: float) -> int:
        k = (t - self.t_start) / self.step
        i = int(round(k))
        if not (0 <= i < self.n_points) or abs(k - i) > 1e-8 * max(1.0, abs(k)):
            raise GridError(f"time {t} is not a grid point")
        return i


@dataclass(frozen=True)
class JumpRecord:
    times: np.ndarray
    sizes: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        z = np.asarray(self.sizes, dtype=float)
        if t.shape != z.shape or t.ndim != 1:
            raise ValueError("jump times and sizes must be 1-d arrays of equal length")
        order = np.argsort(t, kind="stable")
        object.__setattr__(self, "times", t[order])
        object.__setattr__(self, "sizes", z[order])

    def __len__(self) -> int:
        return self.times.shape[0]

    @classmethod
    def empty(cls) -> "JumpRecord":
        return cls(np.empty(0), np.empty(0))


@dataclass
class SamplePath:
    grid: PathGrid
    values: np.ndarray
    kind: Literal["cadlag", "continuous"] = "cadlag"
    jumps: JumpRecord | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n_points,):
            raise ValueError("values must have one entry per grid point")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("path values must be finite")

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    def at(self, t: float) -> float:
        return float(self.values[self.grid.index_of(t)])

    def restrict(self, grid: PathGrid) -> "SamplePath":
        """Sub-path on ``grid``, which must be a contiguous window of this grid."""
        if not math.isclose(grid.step, self.grid.step, rel_tol=1e-12):
            raise GridError("restriction grid must share the step")
        i = self.grid.index_of(grid.t_start)
        j = i + grid.n_points
        if j > self.grid.n_points:
            raise GridError("restriction grid exceeds the path span")
        jumps = None
        if self.jumps is not None:
            keep = (self.jumps.times > grid.t_start) & (self.jumps.times <= grid.t_end)
            jumps = JumpRecord(self.jumps.times[keep], self.jumps.sizes[keep])
        return SamplePath(grid, self.values[i:j].copy(), self.kind, jumps)

    def to_csv(self, dest=None) -> None:
        write_columns(dest, {"t": self.times, "value": self.values})

    @classmethod
    def from_csv(cls, src, kind: Literal["cadlag", "continuous"] = "cadlag") -> "SamplePath":
        cols = read_columns(src)
        t = cols["t"]
        if t.shape[0] < 2:
            raise GridError("a path needs at least 2 rows")
        step = (t[-1] - t[0]) / (t.shape[0] - 1)
        return cls(PathGrid(float(t[0]), float(step), t.shape[0]), cols["value"], kind)


# ---------------------------------------------------------------------------
# simulation


def _arrival_times(rate: float, horizon: float, rng: np.random.Generator) -> np.ndarray:
    """Event times of a rate-``rate`` Poisson process on (0, horizon)."""
    mean = rate * horizon
    chunk = int(mean + 6.0 * math.sqrt(mean) + 16)
    out = []
    last = 0.0
    while True:
        t = last + np.cumsum(rng.exponential(1.0 / rate, chunk))
        inside = t[t < horizon]
        out.append(inside)
        if inside.shape[0] < chunk:
            break
        last = t[-1]
    return np.concatenate(out)


def _one_sided_parts(spec: LevySpec, n_cells: int, step: float, rng: np.random.Generator):
    """Continuous part on ``n_cells + 1`` grid points plus exact jumps on (0, n_cells*step)."""
    k = np.arange(n_cells + 1)
    cont = spec.drift * step * k
    if spec.gaussian_var > 0:
        dw = rng.standard_normal(n_cells) * math.sqrt(spec.gaussian_var * step)
        cont = cont + np.concatenate(([0.0], np.cumsum(dw)))
    if spec.jumps is None:
        return cont, np.empty(0), np.empty(0)
    times = _arrival_times(spec.jumps.rate, n_cells * step, rng)
    sizes = spec.jumps.size_dist.sample(rng, times.shape[0])
    return cont, times, sizes


def _jump_part(grid: PathGrid, jumps: JumpRecord, origin: int) -> np.ndarray:
    """Cumulative jump sum on the grid, zero at index ``origin``.

    A jump counts at the first grid point whose time is >= the jump time.
    """
    times = grid.times
    if len(jumps) and (jumps.times[0] <= times[0] or jumps.times[-1] > times[-1]):
        raise JumpOutsideGridError("jump record extends beyond the grid span")
    idx = np.searchsorted(times, jumps.times, side="left")
    per_point = np.bincount(idx, weights=jumps.sizes, minlength=grid.n_points)
    cum = np.cumsum(per_point)
    return cum - cum[origin]


def simulate_levy(spec: LevySpec, grid: PathGrid, seed: int) -> SamplePath:
    """One-sided path started at 0 at ``grid.t_start``.

    The returned path carries its exact jump list in ``path.jumps``.

    Examples
    --------
    >>> p = simulate_levy(LevySpec(drift=1.0), PathGrid.from_span(0, 1, 0.5), seed=0)
    >>> p.values.tolist()
    [0.0, 0.5, 1.0]
    """
    rng = stream(seed, POSITIVE_STREAM)
    cont, jt, js = _one_sided_parts(spec, grid.n_points - 1, grid.step, rng)
    jumps = JumpRecord(grid.t_start + jt, js)
    values = cont + _jump_part(grid, jumps, 0)
    kind = "cadlag" if spec.jumps is not None else "continuous"
    return SamplePath(grid, values, kind, jumps)


def two_sided(spec: LevySpec, grid: PathGrid, seed: int) -> SamplePath:
    """Two-sided process ``L_t = -L1_{(-t)-}`` for t < 0 and ``L2_t`` for t >= 0.

    ``L1`` and ``L2`` are independent copies drawn from the negative and
    positive sub-streams of ``seed``; the positive half coincides with
    :func:`simulate_levy` on ``[0, t_end]`` for the same seed.
    """
    i0 = grid.origin_index
    if i0 is None or i0 == 0 or i0 == grid.n_points - 1:
        raise GridError("two-sided grid must contain 0 strictly inside its span")
    step = grid.step
    cont_pos, jt_pos, js_pos = _one_sided_parts(spec, grid.n_points - 1 - i0, step, stream(seed, POSITIVE_STREAM))
    cont_neg, jt_neg, js_neg = _one_sided_parts(spec, i0, step, stream(seed, NEGATIVE_STREAM))
    cont = np.concatenate((-cont_neg[:0:-1], cont_pos))
    jumps = JumpRecord(np.concatenate((-jt_neg, jt_pos)), np.concatenate((js_neg, js_pos)))
    values = cont + _jump_part(grid, jumps, i0)
    kind = "cadlag" if spec.jumps is not None else "continuous"
    return SamplePath(grid, values, kind, jumps)


def quadratic_variation_discrete(levy_path: SamplePath, jump_record: JumpRecord | None = None) -> SamplePath:
    """Running sum of squared jumps, anchored at 0 at t = 0 (or at t_start).

    For a two-sided path the result is the two-sided subordinator
    ``S_t = sum_{0<s<=t} (dL_s)^2`` for t >= 0 and ``-sum_{t<s<=0} (dL_s)^2``
    for t < 0.  The squared jumps are attached as the jump record.
    """
    record = levy_path.jumps if jump_record is None else jump_record
    if record is None:
        record = JumpRecord.empty()
    grid = levy_path.grid
    origin = grid.origin_index if grid.origin_index is not None else 0
    sq = JumpRecord(record.times, record.sizes**2)
    values = _jump_part(grid, sq, origin)
    return SamplePath(grid, values, "cadlag", sq)


def cell_increments(path: SamplePath) -> np.ndarray:
    return np.diff(path.values)


def sample_paths_at(paths: Sequence[SamplePath], times: Sequence[float]) -> np.ndarray:
    """Matrix of path values, one row per path, one column per requested time."""
    if not paths:
        return np.empty((0, len(times)))
    idx = [paths[0].grid.index_of(t) for t in times]
    return np.array([p.values[idx] for p in paths])
