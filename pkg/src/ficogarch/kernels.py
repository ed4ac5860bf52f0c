"""Fractional Volterra kernels: Molchan-Golosov, Mandelbrot-van-Ness and the
shifted (modified) Mandelbrot-van-Ness kernel, with their L^p norms.

The modified kernel is used unnormalised,

    f_{a,d}(t, s) = (a + (-s)_+)^d - (a + (t - s)_+)^d,      d < 0 < a,

which is non-negative for t >= 0 and bounded by a^d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate

from .errors import DivergesError, InvalidSpecError, SingularPointError, ToleranceNotMetError

__all__ = [
    "KernelFamily",
    "KernelSpec",
    "Integrability",
    "hyp2f1",
    "hyp2f1_mg",
    "mg_constant",
    "mvn_constant",
    "kernel_value",
    "kernel_array",
    "classify_integrability",
    "kernel_norm",
    "kernel_integral",
    "kernel_power_integral",
]


class KernelFamily(str, Enum):
    MG = "MG"
    MVN = "MvN"
    MODIFIED_MVN = "ModifiedMvN"


class Integrability(str, Enum):
    INTEGRABLE = "integrable"
    NON_INTEGRABLE = "non_integrable"


@dataclass(frozen=True)
class KernelSpec:
    family: KernelFamily
    d: float
    a: float | None = None

    def __post_init__(self):
        fam = KernelFamily(self.family)
        object.__setattr__(self, "family", fam)
        d = float(self.d)
        if fam is KernelFamily.MG:
            if not -0.5 < d < 0.5:
                raise InvalidSpecError(f"MG kernel needs d in (-0.5, 0.5), got {d}")
        elif fam is KernelFamily.MVN:
            if not -0.5 < d < 0.5 or d == 0:
                raise InvalidSpecError(f"MvN kernel needs d in (-0.5, 0.5) without 0, got {d}")
        else:
            if not -0.5 < d < 0:
                raise InvalidSpecError(f"modified MvN kernel needs d in (-0.5, 0), got {d}")
            if self.a is None or not self.a > 0:
                raise InvalidSpecError(f"modified MvN kernel needs a shift a > 0, got {self.a}")
        if fam is not KernelFamily.MODIFIED_MVN and self.a is not None:
            raise InvalidSpecError("the shift a only applies to the modified MvN kernel")

    @classmethod
    def mg(cls, d: float) -> "KernelSpec":
        return cls(KernelFamily.MG, d)

    @classmethod
    def mvn(cls, d: float) -> "KernelSpec":
        return cls(KernelFamily.MVN, d)

    @classmethod
    def modified(cls, a: float, d: float) -> "KernelSpec":
        return cls(KernelFamily.MODIFIED_MVN, d, a)

    @property
    def l1_integrable(self) -> bool:
        return classify_integrability(self, 1.0) is Integrability.INTEGRABLE


# ---------------------------------------------------------------------------
# Gauss hypergeometric function, restricted to 2F1(-d, d; d+1; z), z <= 0


def _gauss_series(a: float, b: float, c: float, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for n in range(5000):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * x
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _connection_coef(d: float) -> float:
    # Gamma(d+1) Gamma(-2d) / Gamma(-d), with Gamma(-2d)/Gamma(-d) = Gamma(1-2d) / (2 Gamma(1-d))
    # so that tiny |d| does not overflow
    return math.gamma(d + 1.0) * math.gamma(1.0 - 2.0 * d) / (2.0 * math.gamma(1.0 - d))


def _f_pfaff(d: float, z: np.ndarray) -> np.ndarray:
    """2F1(-d, 1; d+1; w) at w = z / (z - 1), for z <= 0."""
    z = np.asarray(z, dtype=float)
    w = z / (z - 1.0)
    out = np.empty_like(w)
    low = w <= 0.5
    if np.any(low):
        out[low] = _gauss_series(-d, 1.0, d + 1.0, w[low])
    if np.any(~low):
        x = 1.0 / (1.0 - z[~low])  # = 1 - w, formed without cancellation
        # connection formula around w = 1 (2d is never an integer for d != 0)
        coef = _connection_coef(d)
        out[~low] = 0.5 * _gauss_series(-d, 1.0, 1.0 - 2.0 * d, x) + coef * x ** (2.0 * d) * (1.0 - x) ** (-d)
    return out


def hyp2f1_mg(d: float, z):
    """``2F1(-d, d; d+1; z)`` for ``d`` in (-0.5, 0.5) and ``z <= 0``.

    The Pfaff transformation maps z to ``w = z / (z - 1)`` in [0, 1); for
    w > 1/2 the connection formula around w = 1 is used so every series is
    summed with ratio at most 1/2.
    """
    if not -0.5 < d < 0.5:
        raise ValueError(f"d must lie in (-0.5, 0.5), got {d}")
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr > 0) or np.any(np.isnan(z_arr)):
        raise ValueError("2F1 argument must satisfy z <= 0")
    if d == 0:
        out = np.ones_like(z_arr)
    else:
        out = (1.0 - z_arr) ** d * _f_pfaff(d, z_arr)
    return float(out) if out.ndim == 0 else out


def hyp2f1(a: float, b: float, c: float, z):
    """Gauss hypergeometric function for the parameter pattern ``(-d, d, d+1)``.

    Only the specialisation needed by the Molchan-Golosov kernel is
    supported; anything else raises :class:`ValueError`.
    """
    d = float(b)
    if abs(a + d) > 1e-14 or abs(c - d - 1.0) > 1e-14:
        raise ValueError(f"parameters ({a}, {b}, {c}) do not match the pattern (-d, d, d+1)")
    return hyp2f1_mg(d, z)


# ---------------------------------------------------------------------------
# kernel evaluation


def mg_constant(d: float) -> float:
    return math.sqrt((2 * d + 1) * math.gamma(1 - d) / (math.gamma(1 + d) * math.gamma(1 - 2 * d)))


def mvn_constant(d: float) -> float:
    return 1.0 / math.gamma(d + 1.0)


def _pos(x):
    return np.maximum(x, 0.0)


def _mg_array(d: float, t: float, s: np.ndarray) -> np.ndarray:
    if d == 0:
        return np.full_like(s, mg_constant(0.0))
    x = s / t
    out = np.empty_like(s)
    hi = x >= 0.5
    # F(-d, 1; d+1; 1 - x): direct series for x >= 1/2, connection formula below
    if np.any(hi):
        out[hi] = _gauss_series(-d, 1.0, d + 1.0, 1.0 - x[hi])
    if np.any(~hi):
        xl = x[~hi]
        coef = _connection_coef(d)
        out[~hi] = 0.5 * _gauss_series(-d, 1.0, 1.0 - 2.0 * d, xl) + coef * xl ** (2 * d) * (1.0 - xl) ** (-d)
    with np.errstate(divide="ignore"):
        return mg_constant(d) * ((t - s) * t / s) ** d * out


def _power_difference(x1: np.ndarray, gap: np.ndarray, d: float) -> np.ndarray:
    """``(x1 + gap)**d - x1**d`` without cancellation when ``gap << x1``."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return x1**d * np.expm1(d * np.log1p(gap / x1))


def kernel_array(spec: KernelSpec, t: float, s) -> np.ndarray:
    """Vectorised kernel evaluation without singular-point checks.

    At singular points the returned value is whatever the floating-point
    formula gives (typically ``inf`` or ``nan``).
    """
    s = np.asarray(s, dtype=float)
    d = spec.d
    if spec.family is KernelFamily.MODIFIED_MVN:
        a = spec.a
        x1 = a + _pos(-s)
        gap = np.where((s < 0) & (s < t), t, _pos(t - s) - _pos(-s))
        return -_power_difference(x1, gap, d)
    if spec.family is KernelFamily.MVN:
        x1 = _pos(-s)
        x2 = _pos(t - s)
        with np.errstate(divide="ignore", invalid="ignore"):
            raw = np.where(x2 > 0, x2**d, 0.0) - np.where(x1 > 0, x1**d, 0.0)
            both = (x1 > 0) & (x2 > 0)
            stable = np.where(both, _power_difference(np.where(both, x1, 1.0), t, d), raw)
        return mvn_constant(d) * stable
    out = np.zeros_like(s)
    inside = (s > 0) & (s <= t)
    if np.any(inside):
        out[inside] = _mg_array(d, t, s[inside])
    return out


def kernel_value(spec: KernelSpec, t: float, s):
    """Kernel ``f(t, s)`` with precondition and singular-point checks.

    Examples
    --------
    >>> round(kernel_value(KernelSpec.modified(1.0, -0.25), 1.0, 0.0), 6)
    0.159104
    """
    s_arr = np.asarray(s, dtype=float)
    d = spec.d
    if spec.family is KernelFamily.MG:
        if t < 0 or np.any(s_arr < 0) or np.any(s_arr > t):
            raise ValueError("MG kernel is defined for 0 <= s <= t")
        if d != 0 and np.any(s_arr == 0):
            raise SingularPointError("MG kernel is singular at s = 0")
        if d < 0 and np.any(s_arr == t):
            raise SingularPointError("MG kernel is singular at s = t for d < 0")
    elif spec.family is KernelFamily.MVN and d < 0:
        if np.any(s_arr == t) or np.any(s_arr == 0):
            raise SingularPointError("MvN kernel with d < 0 is singular at s = 0 and s = t")
    elif spec.family is KernelFamily.MODIFIED_MVN and t < 0:
        raise ValueError("modified MvN evaluation requires t >= 0")
    out = kernel_array(spec, t, s_arr)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# integrability and norms


def classify_integrability(spec: KernelSpec, p: float) -> Integrability:
    """Whether ``s -> f(t, s)`` lies in L^p.

    MG: compact support, endpoint singularities of order |d|, so p|d| < 1.
    MvN: tail |s|^(d-1) needs p(1-d) > 1; for d < 0 the singularities of
    order d need pd > -1.  Modified MvN: bounded, only the tail matters.
    """
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    d = spec.d
    if spec.family is KernelFamily.MG:
        ok = p * abs(d) < 1
    elif spec.family is KernelFamily.MVN:
        ok = p * (1 - d) > 1 and (d > 0 or p * d > -1)
    else:
        ok = p > 1.0 / abs(d - 1.0)
    return Integrability.INTEGRABLE if ok else Integrability.NON_INTEGRABLE


def _tail_cutoff(spec: KernelSpec, t: float, p: float, tol: float, inner: float) -> tuple[float, float, float]:
    """Cut-off T*, estimate and half-width for the integral of |f|^p over (-inf, -T*).

    By the mean value theorem ``|d t| c x_max^(d-1) <= |f(t, s)| <= |d t| c x_min^(d-1)``
    with ``x_min, x_max`` the two shifted distances from s; T* is chosen so the
    upper bound is below ``tol / 2``.
    """
    d = spec.d
    c = mvn_constant(d) if spec.family is KernelFamily.MVN else 1.0
    shift = min(0.0, t) + (spec.a if spec.family is KernelFamily.MODIFIED_MVN else 0.0)
    expo = p * (1.0 - d) - 1.0
    amp = (c * abs(d) * abs(t)) ** p
    if amp == 0:
        return inner, 0.0, 0.0
    # smallest cut-off that makes either the tail itself or the gap between its two
    # bounds (about amp |t| x^-(expo+1) / 2) smaller than tol / 4; the second stays
    # moderate when expo -> 0, where the first would overflow
    log_x_tail = -(math.log(0.25 * tol * expo / amp)) / expo
    log_x_gap = math.log(2.0 * amp * max(abs(t), 1e-300) / (0.25 * tol)) / (expo + 1.0)
    x = math.exp(min(log_x_tail, log_x_gap, 700.0))
    cut = max(x - shift, 2.0 * inner)
    upper = amp * (cut + shift) ** (-expo) / expo
    lower = amp * (cut + shift + abs(t)) ** (-expo) / expo
    return cut, 0.5 * (upper + lower), 0.5 * (upper - lower)


def kernel_power_integral(
    spec: KernelSpec,
    t: float,
    p: float,
    tol: float = 1e-8,
    rtol: float = 0.0,
    signed: bool = False,
    full_output: bool = False,
):
    """``int f(t, s)^p ds`` (``signed=True``) or ``int |f(t, s)|^p ds``.

    Adaptive Gauss-Kronrod quadrature (QUADPACK) over the bulk of the
    support; for the two-sided kernels the far past is integrated after the
    substitution ``s = -B exp(x)`` up to a cut-off T* beyond which the
    analytic tail bounds are within ``tol / 2`` of each other; their midpoint
    is added as the tail estimate.  The accepted error is
    ``tol + rtol * |value|``.
    """
    if classify_integrability(spec, p) is Integrability.NON_INTEGRABLE:
        raise DivergesError(f"{spec.family.value} kernel with d={spec.d} is not in L^{p}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if t == 0:
        return (0.0, 0.0) if full_output else 0.0

    if signed:
        def power(v):
            return v**p
    else:
        def power(v):
            return np.abs(v) ** p

    def integrand(s):
        return float(power(kernel_array(spec, t, np.asarray(s, dtype=float))))

    pieces: list[tuple[float, float]] = []
    opts = dict(epsabs=0.0, epsrel=max(rtol, 1e-13), limit=400)

    def quad(f, lo, hi, epsabs):
        val, err = integrate.quad(f, lo, hi, **{**opts, "epsabs": epsabs})
        pieces.append((val, err))

    if spec.family is KernelFamily.MG:
        if t < 0:
            raise ValueError("MG kernel integrals need t >= 0")
        quad(integrand, 0.0, 0.5 * t, tol / 4)
        quad(integrand, 0.5 * t, t, tol / 4)
        tail = tail_err = 0.0
    else:
        a0 = spec.a if spec.a is not None else 0.0
        inner = 2.0 * max(abs(t), a0, 1.0)
        lo_mid, hi_mid = min(0.0, t), max(0.0, t)
        quad(integrand, -inner, lo_mid, tol / 8)
        quad(integrand, lo_mid, hi_mid, tol / 8)
        cut, tail, tail_err = _tail_cutoff(spec, t, p, tol, inner)
        if signed:
            # the far-past sign of f is the sign of -d*t for MvN and of t for the modified kernel
            sgn = np.sign(kernel_array(spec, t, np.array(-cut))).item()
            tail *= sgn ** p if p == int(p) else 1.0
        if cut > inner:
            span = math.log(cut / inner)

            def far(x):
                e = inner * math.exp(x)
                return integrand(-e) * e

            # split the log range so the Kronrod rule resolves both ends
            edges = np.linspace(0.0, span, int(min(max(span, 1.0), 40)) + 1)
            for lo, hi in zip(edges[:-1], edges[1:]):
                quad(far, float(lo), float(hi), tol / (8 * (len(edges) - 1)))

    value = sum(v for v, _ in pieces) + tail
    err = sum(e for _, e in pieces) + tail_err
    if err > tol + rtol * abs(value):
        raise ToleranceNotMetError(f"estimated error {err:.3g} exceeds tolerance {tol:.3g}")
    return (value, err) if full_output else value


def kernel_norm(spec: KernelSpec, t: float, p: float, tol: float = 1e-8, rtol: float = 0.0) -> float:
    """``int |f(t, s)|^p ds`` over the real line.

    Raises :class:`DivergesError` when ``(spec, p)`` is not integrable and
    :class:`ToleranceNotMetError` when the error estimate exceeds the
    requested tolerance.
    """
    return kernel_power_integral(spec, t, p, tol=tol, rtol=rtol)


def kernel_integral(spec: KernelSpec, t: float, tol: float = 1e-8, rtol: float = 0.0) -> float:
    """Signed integral ``int f(t, s) ds``."""
    return kernel_power_integral(spec, t, 1.0, tol=tol, rtol=rtol, signed=True)
