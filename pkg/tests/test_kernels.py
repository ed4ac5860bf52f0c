import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ficogarch.errors import DivergesError, InvalidSpecError, SingularPointError
from ficogarch.kernels import (
    Integrability,
    KernelSpec,
    classify_integrability,
    hyp2f1,
    hyp2f1_mg,
    kernel_array,
    kernel_integral,
    kernel_norm,
    kernel_power_integral,
    kernel_value,
    mg_constant,
)
from ficogarch.validation import integrability_matrix

# ---------------------------------------------------------------------------
# 2F1(-d, d; d+1; z)


def test_hyp2f1_golden():
    # mpmath.hyp2f1(-0.25, 0.25, 1.25, -1)
    assert hyp2f1(-0.25, 0.25, 1.25, -1.0) == pytest.approx(1.0423938920291564, rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(d=st.floats(-0.49, 0.49), z=st.floats(-1e6, 0.0))
def test_hyp2f1_against_mpmath(d, z):
    ref = float(mp.hyp2f1(-d, d, d + 1, z))
    assert hyp2f1_mg(d, z) == pytest.approx(ref, rel=1e-12, abs=1e-14)


def test_hyp2f1_rejects_other_patterns_and_positive_z():
    with pytest.raises(ValueError):
        hyp2f1(0.1, 0.2, 1.3, -0.5)
    with pytest.raises(ValueError):
        hyp2f1_mg(0.25, 0.5)


def test_hyp2f1_at_d_zero_is_one():
    np.testing.assert_array_equal(hyp2f1_mg(0.0, np.array([-3.0, 0.0])), [1.0, 1.0])


# ---------------------------------------------------------------------------
# kernel values


@pytest.mark.parametrize("d", [-0.25, 0.25])
@pytest.mark.parametrize("s", [0.01, 0.2, 0.7, 0.99])
def test_mg_kernel_against_mpmath(d, s):
    t = 1.0
    ref = mg_constant(d) * (t - s) ** d * mp.hyp2f1(-d, d, d + 1, (s - t) / s)
    assert kernel_value(KernelSpec.mg(d), t, s) == pytest.approx(float(ref), rel=1e-13)


def test_mg_at_d_zero_is_constant_one():
    np.testing.assert_allclose(kernel_value(KernelSpec.mg(0.0), 2.0, np.array([0.3, 1.0, 1.9])), 1.0)


def test_modified_kernel_golden_and_bounds():
    spec = KernelSpec.modified(1.0, -0.25)
    # 1 - 2^(-1/4)
    assert kernel_value(spec, 1.0, 0.0) == pytest.approx(1 - 2**-0.25, rel=1e-15)
    s = np.linspace(-50, 5, 2001)
    v = kernel_value(spec, 3.0, s)
    assert np.all(v >= 0) and np.all(v <= 1.0)
    np.testing.assert_array_equal(v[s > 3.0], 0.0)


def test_mvn_kernel_value():
    spec = KernelSpec.mvn(-0.25)
    ref = ((1 - (-2.0)) ** -0.25 - (2.0) ** -0.25) / math.gamma(0.75)
    assert kernel_value(spec, 1.0, -2.0) == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize(
    "spec,t,s",
    [
        (KernelSpec.mg(0.25), 1.0, 0.0),
        (KernelSpec.mg(-0.25), 1.0, 1.0),
        (KernelSpec.mvn(-0.25), 1.0, 0.0),
        (KernelSpec.mvn(-0.25), 1.0, 1.0),
    ],
)
def test_singular_points(spec, t, s):
    with pytest.raises(SingularPointError):
        kernel_value(spec, t, s)


def test_mg_outside_support_rejected():
    with pytest.raises(ValueError):
        kernel_value(KernelSpec.mg(0.1), 1.0, 1.5)


@pytest.mark.parametrize(
    "make",
    [lambda: KernelSpec.mg(0.5), lambda: KernelSpec.mvn(0.0), lambda: KernelSpec.modified(1.0, 0.1), lambda: KernelSpec.modified(0.0, -0.2)],
)
def test_invalid_kernel_specs(make):
    with pytest.raises(InvalidSpecError):
        make()


def test_mvn_l1_flag():
    assert KernelSpec.mvn(-0.2).l1_integrable
    assert not KernelSpec.mvn(0.2).l1_integrable


# ---------------------------------------------------------------------------
# norms and integrals


@pytest.mark.parametrize("d", [-0.4, -0.25, 0.25, 0.4])
def test_mg_unit_l2_norm(d):
    # c_d normalises the MG kernel to unit L^2 norm at t = 1
    assert kernel_norm(KernelSpec.mg(d), 1.0, 2.0, tol=1e-10) == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize(
    "d,ref",
    [(-0.25, 0.956697836301383790542571076602), (0.25, 0.950461179775252500323762158178)],
)
def test_mg_signed_integral(d, ref):
    # mpmath quadrature of c_d (1-s)^d 2F1(-d, d; d+1; (s-1)/s) over (0, 1)
    assert kernel_integral(KernelSpec.mg(d), 1.0, tol=1e-12) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("d", [-0.25, 0.25])
def test_mvn_l2_norm_closed_form(d):
    ref = 1.0 / (math.gamma(2 * d + 2) * math.sin(math.pi * (d + 0.5)))
    assert kernel_norm(KernelSpec.mvn(d), 1.0, 2.0, tol=1e-12) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("a", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("d", [-0.45, -0.25, -0.05])
@pytest.mark.parametrize("t", [0.5, 3.0])
def test_modified_kernel_mass(a, d, t):
    # the tails telescope: int f_{a,d}(t, s) ds = t a^d
    assert kernel_integral(KernelSpec.modified(a, d), t, tol=1e-12) == pytest.approx(t * a**d, rel=1e-9)


def test_mvn_mass_zero_for_negative_d():
    assert kernel_integral(KernelSpec.mvn(-0.25), 1.0, tol=1e-10) == pytest.approx(0.0, abs=1e-8)


def test_norm_scales_with_t_for_mvn():
    # self-similarity: f^MvN(t, t u) = t^d f^MvN(1, u), so int f^2(t, .) = t^(2d+1) int f^2(1, .)
    d = 0.25
    spec = KernelSpec.mvn(d)
    r = kernel_norm(spec, 4.0, 2.0, tol=1e-12) / kernel_norm(spec, 1.0, 2.0, tol=1e-12)
    assert r == pytest.approx(4.0 ** (2 * d + 1), rel=1e-8)


def test_zero_time_gives_zero():
    assert kernel_norm(KernelSpec.modified(1.0, -0.25), 0.0, 2.0) == 0.0


@pytest.mark.parametrize("spec,p", [(KernelSpec.mvn(0.25), 1.0), (KernelSpec.modified(1.0, -0.25), 0.75), (KernelSpec.mg(-0.4), 3.0)])
def test_diverging_norms_raise(spec, p):
    with pytest.raises(DivergesError):
        kernel_norm(spec, 1.0, p)


def test_power_integral_error_estimate():
    v, err = kernel_power_integral(KernelSpec.modified(1.0, -0.05), 1.0, 1.0, tol=1e-10, full_output=True)
    assert abs(v - 1.0) <= max(err, 1e-10) * 10
    assert err <= 1e-9


# ---------------------------------------------------------------------------
# integrability classification


@pytest.mark.parametrize(
    "spec,p,expected",
    [
        (KernelSpec.mg(-0.4), 2.0, Integrability.INTEGRABLE),
        (KernelSpec.mg(0.25), 1.0, Integrability.INTEGRABLE),
        (KernelSpec.mvn(0.25), 2.0, Integrability.INTEGRABLE),
        (KernelSpec.mvn(0.25), 1.0, Integrability.NON_INTEGRABLE),
        (KernelSpec.mvn(-0.25), 1.0, Integrability.INTEGRABLE),
        (KernelSpec.modified(1.0, -0.25), 0.8, Integrability.NON_INTEGRABLE),
        (KernelSpec.modified(1.0, -0.25), 0.81, Integrability.INTEGRABLE),
    ],
)
def test_classification_examples(spec, p, expected):
    assert classify_integrability(spec, p) is expected


def test_classification_matrix_consistent_with_quadrature():
    for spec, p, expected in integrability_matrix():
        assert classify_integrability(spec, p) is expected
        if expected is Integrability.INTEGRABLE:
            assert math.isfinite(kernel_norm(spec, 1.0, p, tol=1e-6))
        else:
            with pytest.raises(DivergesError):
                kernel_norm(spec, 1.0, p)


@settings(max_examples=40, deadline=None)
@given(d=st.floats(-0.49, -0.01), p=st.floats(0.3, 3.0))
def test_modified_threshold_property(d, p):
    ok = classify_integrability(KernelSpec.modified(1.0, d), p) is Integrability.INTEGRABLE
    assert ok == (p * (1 - d) > 1)


def test_kernel_array_vectorised_matches_scalar():
    spec = KernelSpec.modified(2.0, -0.3)
    s = np.array([-10.0, -1.0, 0.0, 0.5, 2.0])
    np.testing.assert_allclose(kernel_array(spec, 1.0, s), [kernel_value(spec, 1.0, x) for x in s])
