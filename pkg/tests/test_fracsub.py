import numpy as np
import pytest

from ficogarch.covariance import closed_form_f_squared
from ficogarch.errors import (
    CumulantUnavailableError,
    GridError,
    HorizonTooShortError,
    InvalidSpecError,
    KernelGridIncompatibleError,
)
from ficogarch.fracsub import (
    FracSubConfig,
    driver_grid,
    frac_cumulant,
    frac_mean,
    frac_path,
    frac_path_from_driver,
    simulate_driver,
    truncated_mass,
    with_scheme,
    with_step,
)
from ficogarch.kernels import KernelSpec
from ficogarch.levy import CompoundPoisson, Exponential, LevySpec, Normal, PathGrid, path_seed
from ficogarch.stats import ensemble_moments, loglog_slope

QV = LevySpec(jumps=CompoundPoisson(0.4, Normal(0.0, 1.0))).squared_jumps()
QV2 = LevySpec(jumps=CompoundPoisson(5.0, Normal(0.0, 0.5))).squared_jumps()
MOD = KernelSpec.modified(1.0, -0.25)


def cfg_for(step=0.01, scheme="stochastic_riemann", t_end=10.0, **kw):
    return FracSubConfig(MOD, QV, PathGrid.from_span(0.0, t_end, step), kw.pop("past_horizon", 200.0), scheme, **kw)


# ---------------------------------------------------------------------------
# configuration


def test_horizon_rounded_up_to_whole_steps():
    cfg = FracSubConfig(MOD, QV, PathGrid.from_span(0, 1, 0.25), past_horizon=1.1)
    assert cfg.horizon == pytest.approx(1.25)
    assert FracSubConfig(KernelSpec.modified(2.0, -0.2), QV, PathGrid.from_span(0, 1, 0.5)).horizon == 400.0


def test_driver_must_be_subordinator():
    with pytest.raises(InvalidSpecError):
        FracSubConfig(MOD, LevySpec(jumps=CompoundPoisson(1.0, Normal())), PathGrid.from_span(0, 1, 0.5))


def test_unknown_scheme():
    with pytest.raises(InvalidSpecError):
        cfg_for(scheme="midpoint")


def test_mvn_needs_pathological_flag():
    g = PathGrid.from_span(0, 1, 0.5)
    with pytest.raises(InvalidSpecError):
        FracSubConfig(KernelSpec.mvn(-0.2), QV, g)
    FracSubConfig(KernelSpec.mvn(-0.2), QV, g, pathological=True)


@pytest.mark.parametrize(
    "grid,scheme",
    [(PathGrid.from_span(-1, 1, 0.5), "stochastic_riemann"), (PathGrid.from_span(0.25, 1.25, 0.5), "stochastic_riemann"), (PathGrid.from_span(0, 1, 0.5), "parts_integral")],
)
def test_mg_grid_constraints(grid, scheme):
    with pytest.raises(KernelGridIncompatibleError):
        FracSubConfig(KernelSpec.mg(0.2), QV, grid, scheme=scheme)


def test_two_sided_kernel_needs_origin():
    with pytest.raises(GridError):
        FracSubConfig(MOD, QV, PathGrid.from_span(0.3, 1.3, 0.5))


def test_horizon_shorter_than_grid_start():
    with pytest.raises(HorizonTooShortError):
        FracSubConfig(MOD, QV, PathGrid.from_span(-5, 1, 0.5), past_horizon=2.0)


def test_driver_grid_spans_past():
    g = driver_grid(cfg_for(step=0.5, past_horizon=3.0, t_end=2.0))
    assert g.t_start == -3.0 and g.t_end == 2.0


# ---------------------------------------------------------------------------
# paths


def test_path_is_zero_at_origin_and_non_decreasing():
    p = frac_path(cfg_for(), 5)
    assert p.values[0] == 0.0
    assert np.all(np.diff(p.values) >= 0)


def test_same_seed_same_driver_across_schemes():
    cfg = cfg_for(step=0.05)
    p1, d1 = frac_path(cfg, 9, return_driver=True)
    _, d2 = frac_path(with_scheme(cfg, "parts_integral"), 9, return_driver=True)
    assert np.array_equal(d1.values, d2.values)
    assert np.array_equal(p1.values, frac_path_from_driver(cfg, simulate_driver(cfg, 9)).values)


def test_no_jumps_gives_zero_path():
    cfg = FracSubConfig(MOD, LevySpec(), PathGrid.from_span(0, 2, 0.5), 4.0)
    np.testing.assert_array_equal(frac_path(cfg, 1).values, 0.0)


def test_drift_only_driver_gives_mean_path():
    # S_t = t exactly, so S^{a,d}_t = int f(t, u) du = t a^d
    cfg = FracSubConfig(MOD, LevySpec(drift=1.0), PathGrid.from_span(0, 4, 0.01), 50.0, "parts_integral")
    np.testing.assert_allclose(frac_path(cfg, 1).values, cfg.grid.times, atol=5e-3)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_schemes_converge_at_first_order(seed):
    gaps = []
    for h in (0.02, 0.01, 0.005):
        c = cfg_for(step=h)
        r = frac_path(c, seed).values
        p = frac_path(with_scheme(c, "parts_integral"), seed).values
        gaps.append(np.max(np.abs(r - p)))
    assert gaps[0] / gaps[1] == pytest.approx(2.0, rel=0.25)
    assert gaps[1] / gaps[2] == pytest.approx(2.0, rel=0.25)


def test_exact_scheme_is_limit_of_riemann():
    c = cfg_for(step=0.005)
    ex = frac_path(with_scheme(c, "exact"), 4).values
    rs = frac_path(c, 4).values
    rs2 = frac_path(with_step(c, 0.0025), 4).values[::2]
    assert np.max(np.abs(rs2 - ex)) < np.max(np.abs(rs - ex))


def test_fft_and_direct_paths_agree():
    # a long grid pushes the Riemann scheme onto its FFT branch
    long = FracSubConfig(MOD, QV2, PathGrid.from_span(0, 400, 0.1), 200.0)
    short = FracSubConfig(MOD, QV2, PathGrid.from_span(0, 10, 0.1), 200.0)
    a = frac_path(long, 3, return_driver=True)
    b = frac_path_from_driver(short, a[1])
    np.testing.assert_allclose(a[0].values[:101], b.values, rtol=1e-10, atol=1e-10)


def test_mg_path_one_sided():
    cfg = FracSubConfig(KernelSpec.mg(0.25), QV2, PathGrid.from_span(0, 5, 0.05))
    p = frac_path(cfg, 2)
    assert p.values[0] == 0.0 and np.all(np.isfinite(p.values))


# ---------------------------------------------------------------------------
# moments


@pytest.mark.parametrize("t", [0.5, 1.0, 7.0])
def test_mean_is_t_a_to_the_d_times_mean_of_driver(t):
    spec = KernelSpec.modified(2.0, -0.3)
    cfg = FracSubConfig(spec, QV2, PathGrid.from_span(0, 1, 0.5))
    assert frac_mean(cfg, t) == pytest.approx(QV2.mean() * t * 2.0**-0.3, rel=1e-9)


@pytest.mark.parametrize("t", [0.5, 1.0, 5.0])
def test_variance_matches_closed_form(t):
    cfg = FracSubConfig(MOD, QV2, PathGrid.from_span(0, 1, 0.5))
    assert frac_cumulant(cfg, 2, t) == pytest.approx(QV2.variance() * closed_form_f_squared(1.0, -0.25, t), rel=1e-8)


def test_higher_cumulants_scale_with_driver_cumulants():
    cfg = FracSubConfig(MOD, QV2, PathGrid.from_span(0, 1, 0.5))
    from ficogarch.kernels import kernel_power_integral

    ref = QV2.cumulant(3) * kernel_power_integral(MOD, 1.0, 3.0, tol=1e-13, signed=True)
    assert frac_cumulant(cfg, 3, 1.0) == pytest.approx(ref, rel=1e-8)


def test_cumulant_unavailable_for_non_integrable_power():
    cfg = FracSubConfig(KernelSpec.mvn(0.25), QV2, PathGrid.from_span(0, 1, 0.5), pathological=True)
    with pytest.raises(CumulantUnavailableError):
        frac_cumulant(cfg, 1, 1.0)


@pytest.mark.parametrize("d", [-0.25, 0.25])
def test_mg_mean_and_variance_growth(d):
    # f^MG(t, t x) = t^d f^MG(1, x): mean ~ t^(d+1), variance ~ t^(2d+1)
    cfg = FracSubConfig(KernelSpec.mg(d), QV2, PathGrid.from_span(0, 16, 1.0))
    ts = [1.0, 2.0, 4.0, 8.0, 16.0]
    m = [frac_mean(cfg, t) for t in ts]
    v = [frac_cumulant(cfg, 2, t) for t in ts]
    assert loglog_slope(ts, m)[0] == pytest.approx(d + 1, abs=1e-8)
    assert loglog_slope(ts, v)[0] == pytest.approx(2 * d + 1, abs=1e-8)


def test_truncated_mass_closed_form():
    a, d, t, m = 1.0, -0.25, 3.0, 50.0
    ref = ((a + t + m) ** (d + 1) - (a + m) ** (d + 1)) / (d + 1)
    assert truncated_mass(MOD, t, m) == pytest.approx(ref, rel=1e-13)
    assert truncated_mass(KernelSpec.mg(0.1), t, m) == 0.0


def test_tail_compensation_removes_truncation_bias():
    # d close to 0: most kernel mass lies beyond the horizon
    spec = KernelSpec.modified(1.0, -0.02)
    drv = LevySpec(jumps=CompoundPoisson(4.0, Exponential(1.0)))
    g = PathGrid.from_span(0, 2, 1.0)
    on = FracSubConfig(spec, drv, g, 20.0, "exact")
    off = FracSubConfig(spec, drv, g, 20.0, "exact", tail_compensation=False)
    n = 3000
    x_on = np.array([frac_path(on, path_seed(3, i)).values[-1] for i in range(n)])
    x_off = np.array([frac_path(off, path_seed(3, i)).values[-1] for i in range(n)])
    mean = frac_mean(on, 2.0)
    m_on = ensemble_moments(x_on)
    assert abs(m_on.mean - mean) < 4 * m_on.se_mean
    assert x_off.mean() < mean - 10 * m_on.se_mean


def test_monte_carlo_moments_small_ensemble():
    cfg = FracSubConfig(MOD, QV2, PathGrid.from_span(0, 5, 1.0), 300.0, "exact")
    x = np.array([frac_path(cfg, path_seed(17, i)).values[[1, 5]] for i in range(2000)])
    for j, t in enumerate((1.0, 5.0)):
        m = ensemble_moments(x[:, j])
        assert abs(m.mean - frac_mean(cfg, t)) < 4 * m.se_mean
        assert abs(m.var - frac_cumulant(cfg, 2, t)) < 4 * m.se_var
