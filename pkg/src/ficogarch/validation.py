"""Acceptance criteria as executable checks.

Each ``criterion_*`` function returns a :class:`CriterionResult` recording the
target, the observed value, the tolerance and whether the check passed.  The
``full`` budget uses the ensemble sizes stated for acceptance; ``quick``
shrinks ensembles for smoke runs and is not an acceptance result.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .cogarch import (
    FicogarchParams,
    PQParams,
    ficogarch_1d1,
    ficogarch_pdq,
    sde_residual,
    simulate_fractional_driver,
    ficogarch_from_driver,
    stationary_check,
)
from .covariance import c_integral, closed_form_f_squared, increment_cov_exact
from .errors import DivergesError, UnknownSuiteError
from .fracsub import FracSubConfig, frac_cumulant, frac_mean, frac_path, with_scheme
from .kernels import Integrability, KernelSpec, classify_integrability, kernel_norm
from .levy import CompoundPoisson, LevySpec, Normal, PathGrid, path_seed
from .stats import ensemble_moments, increment_cov_mc, loglog_slope, sample_acf

__all__ = ["CriterionResult", "CRITERIA", "SUITES", "run_criterion", "run_suite", "format_report"]

Budget = Literal["quick", "full"]

# drivers used throughout: L ~ CP(5, N(0, 1/2)) and L ~ CP(0.4, N(0, 1)); S = [L, L]
FIG2_LEVY = LevySpec(jumps=CompoundPoisson(5.0, Normal(0.0, 0.5)))
FIG1_LEVY = LevySpec(jumps=CompoundPoisson(0.4, Normal(0.0, 1.0)))
FIG2_PARAMS = dict(alpha0=0.0195, alpha1=0.0105, beta1=0.0513)
BASE_SEED = 20240611


@dataclass
class CriterionResult:
    id: int
    name: str
    target: str
    observed: str
    tolerance: str
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (
            f"[{mark}] {self.id:2d} {self.name}: target {self.target}; observed {self.observed}; "
            f"tolerance {self.tolerance} ({self.seconds:.1f} s)"
        )


def _size(budget: Budget, full: int, quick: int) -> int:
    return full if budget == "full" else quick


# ---------------------------------------------------------------------------
# covariance analytics


def criterion_1(budget: Budget = "full") -> CriterionResult:
    t0 = time.perf_counter()
    worst = 0.0
    for a in (0.1, 1.0, 10.0):
        for d in (-0.45, -0.25, -0.05):
            for t in (0.1, 1.0, 10.0, 100.0):
                cf = closed_form_f_squared(a, d, t)
                q = kernel_norm(KernelSpec.modified(a, d), t, 2.0, tol=1e-13, rtol=1e-11)
                worst = max(worst, abs(cf - q) / q)
    secs = time.perf_counter() - t0
    return CriterionResult(
        1,
        "closed form of int f^2 vs quadrature (36 points)",
        "agreement with quadrature, runtime < 10 s",
        f"max relative error {worst:.2e}, runtime {secs:.2f} s",
        "1e-6",
        worst <= 1e-6 and secs < 10.0,
    )


def criterion_2(budget: Budget = "full") -> CriterionResult:
    target = math.gamma(0.75) / (math.gamma(1.5) * math.sin(math.pi / 4)) + 2.0
    got = c_integral(1.0, -0.25, 1e6)
    return CriterionResult(
        2,
        "c(t) at t = 1e6 against the stated limit",
        f"{target:.6f}",
        f"{got:.6f}",
        "1e-3",
        abs(got - target) <= 1e-3,
        details={"target": target, "observed": got},
    )


def criterion_3(budget: Budget = "full") -> CriterionResult:
    h = np.logspace(2, 4, 41)
    slopes = {}
    for d in (-0.45, -0.25, -0.05):
        g = [increment_cov_exact(1.0, d, 1.0, 1.0, x) for x in h]
        slopes[d] = loglog_slope(h, g)[0]
    ok = all(abs(s - (d - 1)) <= 0.05 for d, s in slopes.items())
    return CriterionResult(
        3,
        "covariance decay exponent over h in [1e2, 1e4]",
        ", ".join(f"d={d}: {d - 1:.2f}" for d in slopes),
        ", ".join(f"d={d}: {s:.3f}" for d, s in slopes.items()),
        "0.05",
        ok,
        details={"slopes": slopes},
    )


def criterion_5(budget: Budget = "full") -> CriterionResult:
    t0 = time.perf_counter()
    lags = np.arange(2, 10_001) if budget == "full" else np.unique(np.logspace(np.log10(2), 4, 200).round())
    worst = math.inf
    for d in (-0.45, -0.25, -0.05):
        vals = [increment_cov_exact(1.0, d, 1.0, 1.0, float(h)) for h in lags]
        worst = min(worst, min(vals))
    return CriterionResult(
        5,
        "positive increment covariance for h in [2, 1e4]",
        "gamma > 0",
        f"min gamma {worst:.3e} over {len(lags)} lags x 3 d",
        "strict",
        worst > 0,
        time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# fractional subordinator


def _mc_values(a: float, d: float, times: list[float], n_paths: int, seed: int, horizon: float = 500.0) -> np.ndarray:
    t_end = max(times)
    cfg = FracSubConfig(
        KernelSpec.modified(a, d), FIG2_LEVY.squared_jumps(), PathGrid.from_span(0.0, t_end, 1.0), horizon, "exact"
    )
    idx = [cfg.grid.index_of(t) for t in times]
    return np.array([frac_path(cfg, path_seed(seed, i)).values[idx] for i in range(n_paths)])


def criterion_4(budget: Budget = "full") -> CriterionResult:
    n = _size(budget, 20_000, 4_000)
    lags = (2, 5, 10)
    vals = _mc_values(1.0, -0.25, [0.0, 1.0] + [float(x) for x in lags] + [x + 1.0 for x in lags], n, BASE_SEED + 4)
    grid = PathGrid.from_span(0.0, 11.0, 1.0)
    full = np.zeros((n, grid.n_points))
    cols = [0, 1] + list(lags) + [x + 1 for x in lags]
    full[:, cols] = vals
    var_s1 = FIG2_LEVY.squared_jumps().variance()
    rows, ok = [], True
    for h in lags:
        est, se = increment_cov_mc(full, 1.0, h, grid=grid)
        exact = increment_cov_exact(1.0, -0.25, var_s1, 1.0, h)
        z = (est - exact) / se
        ok &= abs(z) <= 3
        rows.append(f"h={h}: {est:.5f}+-{se:.5f} vs {exact:.5f} (z={z:+.2f})")
    return CriterionResult(
        4,
        f"Monte Carlo increment covariance ({n} paths, driver variance convention)",
        "increment_cov_exact",
        "; ".join(rows),
        "3 jackknife SE",
        bool(ok),
    )


def criterion_6(budget: Budget = "full") -> CriterionResult:
    n = _size(budget, 10_000, 2_000)
    times = [1.0, 5.0]
    vals = _mc_values(1.0, -0.25, times, n, BASE_SEED + 6)
    cfg = FracSubConfig(KernelSpec.modified(1.0, -0.25), FIG2_LEVY.squared_jumps(), PathGrid.from_span(0.0, 5.0, 1.0))
    rows, ok = [], True
    for j, t in enumerate(times):
        m = ensemble_moments(vals[:, j])
        mean, var = frac_mean(cfg, t), frac_cumulant(cfg, 2, t)
        zm, zv = (m.mean - mean) / m.se_mean, (m.var - var) / m.se_var
        ok &= abs(zm) <= 3 and abs(zv) <= 3
        rows.append(f"t={t:g}: mean z={zm:+.2f}, var z={zv:+.2f}")
    return CriterionResult(6, f"mean and variance of S^(a,d)_t ({n} paths)", "frac_mean, frac_cumulant(2)", "; ".join(rows), "3 SE", bool(ok))


_STEPS = (0.02, 0.01, 0.005)


def _fig1_cfg(step: float) -> FracSubConfig:
    return FracSubConfig(KernelSpec.modified(1.0, -0.25), FIG1_LEVY.squared_jumps(), PathGrid.from_span(0.0, 10.0, step), 200.0)


def criterion_7(budget: Budget = "full") -> CriterionResult:
    n = _size(budget, 20, 5)
    ratios = []
    for i in range(n):
        gaps = []
        for h in _STEPS:
            cfg = _fig1_cfg(h)
            r = frac_path(cfg, BASE_SEED + 700 + i).values
            p = frac_path(with_scheme(cfg, "parts_integral"), BASE_SEED + 700 + i).values
            gaps.append(np.max(np.abs(r - p)))
        ratios += [gaps[0] / gaps[1], gaps[1] / gaps[2]]
    ratios = np.array(ratios)
    ok = bool(np.all(np.abs(ratios - 2.0) <= 0.5))
    return CriterionResult(
        7,
        f"Riemann vs integration-by-parts sup-gap halving ({n} seeds)",
        "gap ratio 2 per step halving",
        f"ratios in [{ratios.min():.3f}, {ratios.max():.3f}]",
        "+-25%",
        ok,
    )


def criterion_8(budget: Budget = "full") -> CriterionResult:
    n = _size(budget, 1000, 100)
    mono = True
    shrink = []
    for i in range(n):
        mx = []
        for h in _STEPS:
            v = frac_path(_fig1_cfg(h), BASE_SEED + 800 + i).values
            inc = np.diff(v)
            mono &= bool(np.all(inc >= 0))
            mx.append(inc.max())
        shrink += [1 - mx[1] / mx[0], 1 - mx[2] / mx[1]]
    shrink = np.array(shrink)
    ok = mono and bool(np.all(shrink >= 0.4))
    return CriterionResult(
        8,
        f"monotone paths and shrinking cell increments ({n} seeds)",
        "non-decreasing; shrink >= 40% per halving",
        f"non-decreasing={mono}; min shrink {shrink.min():.3f}",
        "0.40",
        ok,
    )


def criterion_9(budget: Budget = "full") -> CriterionResult:
    ts = [1.0, 2.0, 4.0, 8.0, 16.0]
    slopes = {}
    for d in (-0.25, 0.25):
        cfg = FracSubConfig(KernelSpec.mg(d), FIG2_LEVY.squared_jumps(), PathGrid.from_span(0.0, 16.0, 1.0))
        slopes[d] = loglog_slope(ts, [frac_mean(cfg, t) for t in ts])[0]
    ok = all(abs(s - (2 * d + 1)) <= 0.02 for d, s in slopes.items())
    return CriterionResult(
        9,
        "MG mean growth exponent",
        ", ".join(f"d={d}: {2 * d + 1:.2f}" for d in slopes),
        ", ".join(f"d={d}: {s:.4f}" for d, s in slopes.items()),
        "0.02",
        ok,
        details={"slopes": slopes},
    )


# ---------------------------------------------------------------------------
# kernels


def integrability_matrix() -> list[tuple[KernelSpec, float, Integrability]]:
    """(kernel, p, expected class) cells from the integrability statements."""
    cells = []
    for d in (-0.4, -0.25, 0.25, 0.4):
        for p in (1.0, 2.0):
            cells.append((KernelSpec.mg(d), p, Integrability.INTEGRABLE))
    for d in (-0.25, 0.25):
        cells.append((KernelSpec.mvn(d), 2.0, Integrability.INTEGRABLE))
        cells.append((KernelSpec.mvn(d), 1.0, Integrability.INTEGRABLE if d < 0 else Integrability.NON_INTEGRABLE))
    for d in (-0.45, -0.25, -0.05):
        for p in (0.5, 0.75, 0.9, 1.0, 2.0):
            ok = p > 1.0 / abs(d - 1.0)
            cells.append((KernelSpec.modified(1.0, d), p, Integrability.INTEGRABLE if ok else Integrability.NON_INTEGRABLE))
    return cells


def criterion_10(budget: Budget = "full") -> CriterionResult:
    bad = []
    cells = integrability_matrix()
    for spec, p, expected in cells:
        got = classify_integrability(spec, p)
        try:
            kernel_norm(spec, 1.0, p, tol=1e-6)
            raised = False
        except DivergesError:
            raised = True
        if got is not expected or raised != (expected is Integrability.NON_INTEGRABLE):
            bad.append(f"{spec.family.value}(d={spec.d}) p={p}")
    return CriterionResult(
        10,
        f"integrability classification ({len(cells)} cells)",
        "all cells match, diverges exactly on non-integrable cells",
        "all match" if not bad else "mismatch: " + ", ".join(bad),
        "exact",
        not bad,
    )


# ---------------------------------------------------------------------------
# FICOGARCH


def _fig2_params(d: float, **kw) -> FicogarchParams:
    return FicogarchParams(**FIG2_PARAMS, driver=FIG2_LEVY, kernel=KernelSpec.modified(1.0, d), **kw)


def criterion_11(budget: Budget = "full") -> CriterionResult:
    n = _size(budget, 2000, 1000)
    params = _fig2_params(-0.4)
    grid = PathGrid.from_span(0.0, 151.0, 0.1)
    paths = [ficogarch_1d1(params, grid, path_seed(BASE_SEED + 11, i)) for i in range(n)]
    rs = stationary_check(paths, 50.0, 150.0, "sigma_sq")
    rg = stationary_check(paths, 50.0, 150.0, "dG", window=1.0)
    return CriterionResult(
        11,
        f"stationarity of sigma^2 and dG at t = 50, 150 ({n} paths)",
        "KS not rejected at 1%",
        f"sigma^2: D={rs.ks.statistic:.4f} p={rs.ks.pvalue:.3f}; dG: D={rg.ks.statistic:.4f} p={rg.ks.pvalue:.3f}",
        "alpha = 0.01",
        rs.passed and rg.passed,
    )


def criterion_12(budget: Budget = "full") -> CriterionResult:
    n = _size(budget, 100, 20)
    grid = PathGrid.from_span(0.0, 2000.0, 0.1)
    mean_acf = {}
    for d in (-0.01, -0.4):
        params = _fig2_params(d)
        acfs = []
        for i in range(n):
            v = ficogarch_1d1(params, grid, path_seed(BASE_SEED + 12, i))
            acfs.append(sample_acf(np.sqrt(v.sigma_sq[::10]), 50))
        mean_acf[d] = np.mean(acfs, axis=0)
    diff = mean_acf[-0.01][10:51] - mean_acf[-0.4][10:51]
    return CriterionResult(
        12,
        f"ACF of sigma, d=-0.01 above d=-0.4 at lags 10-50 ({n} seeds)",
        "pointwise larger",
        f"min difference {diff.min():+.4f}",
        "> 0",
        bool(np.all(diff > 0)),
    )


def criterion_13(budget: Budget = "full") -> CriterionResult:
    params = _fig2_params(-0.4, sigma0_sq=0.0195)
    sups = []
    for h in (0.04, 0.02, 0.01):
        v = ficogarch_1d1(params, PathGrid.from_span(0.0, 20.0, h), BASE_SEED + 13, scheme="exact")
        r = sde_residual(params, v.sigma_sq, v.driver_path, v.levy_path.jumps.times)
        sups.append(np.nanmax(np.abs(r)))
    ratios = [sups[0] / sups[1], sups[1] / sups[2]]
    return CriterionResult(
        13,
        "SDE residual of the explicit solution",
        "halving ratio 4",
        ", ".join(f"{x:.3f}" for x in ratios),
        "+-30%",
        all(abs(x - 4.0) <= 1.2 for x in ratios),
    )


def criterion_14(budget: Budget = "full") -> CriterionResult:
    kernel = KernelSpec.modified(1.0, -0.4)
    p11 = _fig2_params(-0.4, sigma0_sq=FIG2_PARAMS["alpha0"])
    pq = PQParams(FIG2_PARAMS["alpha0"], (FIG2_PARAMS["alpha1"],), (FIG2_PARAMS["beta1"],), FIG2_LEVY, kernel)
    gaps = []
    for h in (0.04, 0.02, 0.01):
        grid = PathGrid.from_span(0.0, 20.0, h)
        drv = simulate_fractional_driver(kernel, FIG2_LEVY, grid, BASE_SEED + 14, scheme="exact")
        a = ficogarch_from_driver(p11, drv)
        b = ficogarch_pdq(pq, grid, 0, driver=drv)
        gaps.append(np.max(np.abs(a.sigma_sq - b.sigma_sq)))
    ratios = [gaps[0] / gaps[1], gaps[1] / gaps[2]]
    return CriterionResult(
        14,
        "p=q=1 state-space model vs FICOGARCH(1,d,1)",
        "sup-gap ratio 2 per halving",
        f"gaps {', '.join(f'{g:.2e}' for g in gaps)}; ratios {', '.join(f'{x:.3f}' for x in ratios)}",
        "+-25%",
        all(abs(x - 2.0) <= 0.5 for x in ratios),
    )


CRITERIA: dict[int, Callable[[Budget], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
    13: criterion_13,
    14: criterion_14,
}

SUITES: dict[str, tuple[int, ...]] = {
    "kernels": (10,),
    "covariance": (1, 2, 3, 5),
    "fracsub": (4, 6, 7, 8, 9),
    "ficogarch": (11, 12, 13, 14),
}
SUITES["all"] = tuple(sorted(i for ids in list(SUITES.values()) for i in ids))


def run_criterion(cid: int, budget: Budget = "full") -> CriterionResult:
    t0 = time.perf_counter()
    res = CRITERIA[cid](budget)
    if not res.seconds:
        res.seconds = time.perf_counter() - t0
    return res


def run_suite(suite: str = "all", budget: Budget = "quick", on_result: Callable | None = None) -> list[CriterionResult]:
    if suite not in SUITES:
        raise UnknownSuiteError(f"unknown suite {suite!r}; choose one of {sorted(SUITES)}")
    if budget not in ("quick", "full"):
        raise ValueError(f"unknown budget {budget!r}")
    out = []
    for cid in SUITES[suite]:
        res = run_criterion(cid, budget)
        if on_result is not None:
            on_result(res)
        out.append(res)
    return out


def format_report(results: list[CriterionResult]) -> str:
    lines = [r.line() for r in results]
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} criteria passed")
    return "\n".join(lines)
