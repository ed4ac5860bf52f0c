import math
import warnings

import numpy as np
import pytest
from scipy import linalg

from ficogarch.cogarch import (
    FicogarchParams,
    PQParams,
    affine_scan,
    cogarch11,
    cogarch11_euler,
    companion_matrix,
    ficogarch_1d1,
    ficogarch_euler,
    ficogarch_from_driver,
    ficogarch_pdq,
    sde_residual,
    simulate_fractional_driver,
    state_decay,
    stationary_check,
)
from ficogarch.errors import (
    InsufficientDataError,
    InvalidSpecError,
    MomentConditionError,
    NegativeVolatilityWarning,
    OrderConstraintError,
)
from ficogarch.kernels import KernelSpec
from ficogarch.levy import (
    CompoundPoisson,
    JumpRecord,
    LevySpec,
    Normal,
    PathGrid,
    SamplePath,
    simulate_levy,
)

L = LevySpec(jumps=CompoundPoisson(5.0, Normal(0.0, 0.5)))
K = KernelSpec.modified(1.0, -0.4)
A0, A1, B1 = 0.0195, 0.0105, 0.0513


def params(**kw):
    kw.setdefault("kernel", K)
    return FicogarchParams(A0, A1, B1, L, **kw)


# ---------------------------------------------------------------------------
# parameters


def test_decay_rate_and_stationary_mean():
    p = params()
    kappa = B1 - A1 * 1.0 ** -0.4 * 2.5
    assert p.decay_rate == pytest.approx(kappa)
    assert p.stationary_mean() == pytest.approx(A0 * B1 / kappa)
    # a != 1 enters through a^d
    q = params(kernel=KernelSpec.modified(2.0, -0.4))
    assert q.decay_rate == pytest.approx(B1 - A1 * 2.0**-0.4 * 2.5)


def test_no_stationary_solution():
    p = FicogarchParams(A0, 0.1, B1, L, K)
    assert p.decay_rate < 0
    with pytest.raises(InvalidSpecError):
        p.stationary_mean()
    with pytest.raises(InvalidSpecError):
        ficogarch_1d1(p, PathGrid.from_span(0, 1, 0.1), 0)


@pytest.mark.parametrize("field", ["alpha0", "alpha1", "beta1"])
def test_parameters_must_be_positive(field):
    kw = dict(alpha0=A0, alpha1=A1, beta1=B1)
    kw[field] = 0.0
    with pytest.raises(InvalidSpecError):
        FicogarchParams(driver=L, **kw)


def test_kernel_must_be_modified():
    with pytest.raises(InvalidSpecError):
        FicogarchParams(A0, A1, B1, L, KernelSpec.mg(0.2))


def test_fourth_moment_required():
    class Heavy:
        def moment(self, k):
            return math.inf if k >= 4 else 1.0

    bad = LevySpec(jumps=CompoundPoisson(1.0, Heavy()))
    with pytest.raises(MomentConditionError):
        FicogarchParams(A0, A1, B1, bad)


# ---------------------------------------------------------------------------
# numerics


def test_affine_scan_matches_loop():
    rng = np.random.default_rng(0)
    A = rng.uniform(0.5, 1.5, 1000)
    B = rng.normal(size=1000)
    ref = [2.0]
    for a, b in zip(A, B):
        ref.append(a * ref[-1] + b)
    np.testing.assert_allclose(affine_scan(A, B, 2.0, block=64), ref, rtol=1e-10, atol=1e-10)


def test_affine_scan_survives_extreme_products():
    A = np.full(600, 10.0)
    out = affine_scan(A, np.zeros(600), 1e-300, block=600)
    assert np.all(np.isfinite(out[:400]))


# ---------------------------------------------------------------------------
# COGARCH(1,1)


def test_cogarch_without_jumps_relaxes_exponentially():
    g = PathGrid.from_span(0, 10, 0.5)
    lp = SamplePath(g, np.zeros(g.n_points), jumps=JumpRecord.empty())
    v = cogarch11(params(kernel=None), lp, sigma0_sq=0.05)
    np.testing.assert_allclose(v.sigma_sq, A0 + (0.05 - A0) * np.exp(-B1 * g.times), rtol=1e-13)
    np.testing.assert_allclose(v.X, B1 * g.times)


def test_cogarch_single_jump_hand_values():
    # sigma^2 stays at alpha0 until the jump, is multiplied by 1 + alpha1 z^2, then decays
    lp = SamplePath(PathGrid.from_span(0, 1, 0.5), [0, 0, 2.0], jumps=JumpRecord([0.7], [2.0]))
    v = cogarch11(FicogarchParams(A0, A1, B1, L, sigma0_sq=A0), lp)
    np.testing.assert_allclose(v.sigma_sq, [0.0195, 0.0195, 0.0203065], rtol=2e-6)
    np.testing.assert_allclose(v.X, [0.0, 0.02565, 0.010158], rtol=2e-5, atol=1e-12)
    # price jumps by sigma_{0.7-} * 2
    assert v.G[-1] == pytest.approx(2.0 * math.sqrt(A0), rel=1e-12)


def test_cogarch_two_jumps_in_one_cell():
    lp = SamplePath(PathGrid.from_span(0, 1, 1.0), [0, 0.0], jumps=JumpRecord([0.2, 0.6], [1.0, -1.0]))
    v = cogarch11(FicogarchParams(A0, A1, B1, L, sigma0_sq=0.03), lp)
    x = 0.03
    for t0, t1 in ((0.0, 0.2), (0.2, 0.6)):
        x = A0 + (x - A0) * math.exp(-B1 * (t1 - t0))
        x *= 1 + A1
    x = A0 + (x - A0) * math.exp(-B1 * 0.4)
    assert v.sigma_sq[-1] == pytest.approx(x, rel=1e-13)


def test_cogarch_needs_origin():
    lp = simulate_levy(L, PathGrid.from_span(0.5, 1.5, 0.5), 0)
    with pytest.raises(InvalidSpecError):
        cogarch11(params(kernel=None), lp, 0.02)


def test_cogarch_euler_converges_first_order():
    fine = simulate_levy(L, PathGrid.from_span(0, 20, 0.005), 7)
    errs = []
    for k in (4, 2, 1):
        g = PathGrid.from_span(0, 20, 0.005 * k)
        lp = SamplePath(g, fine.values[::k], jumps=fine.jumps)
        exact = cogarch11(params(kernel=None), lp, 0.02).sigma_sq
        errs.append(np.max(np.abs(cogarch11_euler(params(kernel=None), lp, 0.02) - exact)))
    assert errs[0] / errs[1] == pytest.approx(2.0, rel=0.3)
    assert errs[1] / errs[2] == pytest.approx(2.0, rel=0.3)


# ---------------------------------------------------------------------------
# FICOGARCH(1,d,1)


def test_ficogarch_path_basic_properties():
    v = ficogarch_1d1(params(), PathGrid.from_span(0, 20, 0.1), 3)
    assert v.grid.t_start == 0.0 and v.sigma_sq.shape == (201,)
    assert np.all(v.sigma_sq > 0)
    assert v.X[0] == 0.0 and v.G[0] == 0.0
    assert set(v.columns()) == {"t", "G", "dG", "sigma2", "Sad", "X"}
    assert v.info["vol_horizon"] == pytest.approx(10 / params().decay_rate, abs=0.1)


def test_ficogarch_reproducible():
    g = PathGrid.from_span(0, 10, 0.1)
    a = ficogarch_1d1(params(), g, 5)
    b = ficogarch_1d1(params(), g, 5)
    assert np.array_equal(a.sigma_sq, b.sigma_sq) and np.array_equal(a.G, b.G)


def test_ficogarch_matches_euler_as_step_shrinks():
    p = params(sigma0_sq=A0)
    errs = []
    for h in (0.04, 0.02, 0.01):
        v = ficogarch_1d1(p, PathGrid.from_span(0, 20, h), 8, scheme="exact")
        errs.append(np.max(np.abs(v.sigma_sq - ficogarch_euler(p, v.driver_path, A0))))
    assert errs[0] > errs[1] > errs[2]


def test_sde_residual_second_order():
    p = params(sigma0_sq=A0)
    sups = []
    for h in (0.04, 0.02, 0.01):
        v = ficogarch_1d1(p, PathGrid.from_span(0, 20, h), 13, scheme="exact")
        r = sde_residual(p, v.sigma_sq, v.driver_path, v.levy_path.jumps.times)
        sups.append(np.nanmax(np.abs(r)))
    assert sups[0] / sups[1] == pytest.approx(4.0, rel=0.3)
    assert sups[1] / sups[2] == pytest.approx(4.0, rel=0.3)


def test_stationary_start_uses_shared_driver():
    g = PathGrid.from_span(0, 5, 0.1)
    drv = simulate_fractional_driver(K, L, g, 4, vol_horizon=50.0)
    v = ficogarch_from_driver(params(), drv)
    assert v.info["sigma0_sq"] == pytest.approx(v.sigma_sq[0])
    w = ficogarch_from_driver(params(), drv, sigma0_sq=v.sigma_sq[0])
    np.testing.assert_allclose(w.sigma_sq, v.sigma_sq, rtol=1e-10)


def test_stationary_check_needs_1000_paths():
    v = ficogarch_1d1(params(), PathGrid.from_span(0, 2, 0.5), 0)
    with pytest.raises(InsufficientDataError):
        stationary_check([v] * 10, 0.5, 1.5)


def test_stationary_check_on_deterministic_paths():
    g = PathGrid.from_span(0, 2, 0.5)
    lp = SamplePath(g, np.zeros(g.n_points), jumps=JumpRecord.empty())
    v = cogarch11(params(kernel=None), lp, A0)
    rep = stationary_check([v] * 1000, 1.0, 1.0)
    assert rep.passed and rep.ks.statistic == 0.0
    with pytest.raises(ValueError):
        stationary_check([v] * 1000, 0.5, 1.0, variable="other")


def test_ergodic_mean_growth_rate():
    # X_t / t -> beta1 - alpha1 a^d E(S_1) along a long path
    v = ficogarch_1d1(params(sigma0_sq=A0), PathGrid.from_span(0, 4000, 0.5), 1)
    assert v.X[-1] / v.times[-1] == pytest.approx(params().decay_rate, abs=0.006)


# ---------------------------------------------------------------------------
# FICOGARCH(p,d,q)


def test_companion_matrix_layout():
    m = companion_matrix([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(m, [[0, 1, 0], [0, 0, 1], [-3, -2, -1]])
    np.testing.assert_array_equal(companion_matrix([0.5]), [[-0.5]])
    # characteristic polynomial z^3 + b1 z^2 + b2 z + b3
    np.testing.assert_allclose(np.poly(m), [1, 1, 2, 3])


def test_state_decay_matches_expm_and_euler():
    B = companion_matrix([1.5, 0.6])
    Y0 = np.array([1.0, -0.5])
    ts = np.linspace(0, 5, 6)
    out = state_decay(B, Y0, ts)
    np.testing.assert_allclose(out[3], linalg.expm(3 * B) @ Y0)
    # a driver without jumps leaves Y' = B Y; Euler converges to the exponential
    p = PQParams(0.01, (1.0, 0.0), (1.5, 0.6), LevySpec(), K, Y0=tuple(Y0))
    g = PathGrid.from_span(0, 5, 0.001)
    v = ficogarch_pdq(p, g, 0)
    np.testing.assert_allclose(v.info["state"][-1], out[-1], atol=2e-3)


@pytest.mark.parametrize(
    "a,b,Y0",
    [((), (), None), ((0.1,), (0.2, 0.3), None), ((0.1, 0.2), (0.2, 0.0), None), ((0.0, 0.0), (0.2, 0.3), None), ((0.1,), (0.2,), (1.0, 2.0))],
)
def test_order_constraints(a, b, Y0):
    with pytest.raises(OrderConstraintError):
        PQParams(A0, a, b, L, K, Y0=Y0)


def test_pq_orders():
    p = PQParams(A0, (0.1, 0.2, 0.0), (1.0, 2.0, 3.0), L, K)
    assert (p.p, p.q) == (2, 3)


def test_pdq_reduces_to_1d1_at_first_order():
    p11 = params(sigma0_sq=A0)
    pq = PQParams(A0, (A1,), (B1,), L, K)
    gaps = []
    for h in (0.04, 0.02, 0.01):
        grid = PathGrid.from_span(0, 20, h)
        drv = simulate_fractional_driver(K, L, grid, 14, scheme="exact")
        gaps.append(np.max(np.abs(ficogarch_from_driver(p11, drv).sigma_sq - ficogarch_pdq(pq, grid, 0, driver=drv).sigma_sq)))
    assert gaps[0] / gaps[1] == pytest.approx(2.0, rel=0.25)
    assert gaps[1] / gaps[2] == pytest.approx(2.0, rel=0.25)


def test_negative_volatility_is_flagged_not_raised():
    # oscillating state with a large negative loading drives alpha0 + a.Y below zero
    p = PQParams(0.01, (1.0, -5.0), (0.1, 4.0), L, K, Y0=(0.0, 1.0))
    with pytest.warns(NegativeVolatilityWarning):
        v = ficogarch_pdq(p, PathGrid.from_span(0, 5, 0.01), 2)
    assert v.negative_variance
    assert np.all(np.isfinite(v.G))


def test_positive_pdq_emits_no_warning():
    p = PQParams(A0, (A1,), (B1,), L, K)
    with warnings.catch_warnings():
        warnings.simplefilter("error", NegativeVolatilityWarning)
        v = ficogarch_pdq(p, PathGrid.from_span(0, 5, 0.05), 2)
    assert not v.negative_variance
