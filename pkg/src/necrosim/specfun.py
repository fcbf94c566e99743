r"""Modified Bessel functions :math:`I_m(x)` and :math:`K_m(x)` of integer order.

Evaluation strategy
-------------------
``I_m``
    Power series :math:`\sum_k (x/2)^{2k+m} / (k!(k+m)!)` for every order. All
    terms are positive, so there is no cancellation; the leading factor is
    carried in log space and the partial sum is rescaled when it grows large,
    which keeps high orders at small arguments (and vice versa) finite. Beyond
    ``x > 2000`` the Hankel expansion is used when :math:`m^2 \ll x`.
``K_0, K_1``
    Series with logarithmic terms for ``x < 2``; Steed's continued fraction
    (CF2, as in Temme's method) for ``x >= 2``, returned exponentially scaled.
``K_m``, ``m >= 2``
    Upward recurrence :math:`K_{j+1} = K_{j-1} + (2j/x) K_j`, run on the
    ratios :math:`K_{j+1}/K_j` so that large orders never overflow before the
    final exponentiation.

Derivatives use :math:`I_0' = I_1`, :math:`K_0' = -K_1` and, for ``m >= 1``,
:math:`I_m' = (I_{m-1} + I_{m+1})/2`, :math:`K_m' = -(K_{m-1} + K_{m+1})/2`.

The unscaled functions raise :class:`BesselRangeError` instead of returning
``inf`` (or a denormal zero) when the result leaves the double range.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "BesselDomainError",
    "BesselRangeError",
    "bessel_i",
    "bessel_k",
    "bessel_i_scaled",
    "bessel_k_scaled",
    "log_bessel_i",
    "log_bessel_k",
    "bessel_i_prime",
    "bessel_k_prime",
]

EULER_GAMMA = 0.57721566490153286061
_EPS = 1e-17
_SERIES_X_MAX = 2000.0
_SMALL_K_SWITCH = 2.0
# log of the largest/smallest normal doubles
_LOG_MAX = 709.7
_LOG_MIN = -708.0

FAULT_ENV = "NECROSIM_FAULT"


class BesselDomainError(ValueError):
    """Argument outside the domain of the requested function."""


class BesselRangeError(OverflowError):
    """Result is not representable as a normal double."""


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _check_order(m) -> int:
    if int(m) != m:
        raise BesselDomainError(f"integer order required, got {m!r}")
    return abs(int(m))


def _fault_factor() -> float:
    # Negative-path hook for the verification suite only.
    return 1.0 + 1e-6 if os.environ.get(FAULT_ENV, "") == "bessel" else 1.0


# --------------------------------------------------------------------------
# I_m


def _log_i_series(m: int, x: np.ndarray) -> np.ndarray:
    """log I_m(x) from the power series, x > 0."""
    q = 0.25 * x * x
    log_t0 = m * np.log(0.5 * x) - math.lgamma(m + 1)
    term = np.ones_like(x)
    total = np.ones_like(x)
    offset = np.zeros_like(x)
    k = 0
    while True:
        ratio = q / ((k + 1.0) * (k + 1.0 + m))
        term = term * ratio
        total = total + term
        k += 1
        big = total > 1e250
        if np.any(big):
            term = np.where(big, term * 1e-250, term)
            total = np.where(big, total * 1e-250, total)
            offset = np.where(big, offset + 250 * math.log(10.0), offset)
        if np.all((ratio < 1.0) & (term <= _EPS * total)):
            break
    return log_t0 + offset + np.log(total)


def _log_i_asymptotic(m: int, x: np.ndarray) -> np.ndarray:
    """log I_m(x) via the Hankel expansion; valid for m**2 << x."""
    mu = 4.0 * m * m
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 60):
        term = -term * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        total = total + term
        if np.all(np.abs(term) <= _EPS * np.abs(total)):
            break
    return x - 0.5 * np.log(2.0 * np.pi * x) + np.log(total)


def _log_i(m: int, x: np.ndarray) -> np.ndarray:
    if np.any(x < 0) or np.any(~np.isfinite(x)):
        raise BesselDomainError("bessel_i requires finite x >= 0")
    out = np.empty_like(x)
    zero = x == 0.0
    out[zero] = 0.0 if m == 0 else -np.inf
    small = (~zero) & (x <= _SERIES_X_MAX)
    if np.any(small):
        out[small] = _log_i_series(m, x[small])
    large = x > _SERIES_X_MAX
    if np.any(large):
        if m * m > 0.05 * np.min(x[large]):
            raise BesselRangeError(f"I_{m}(x) for x > {_SERIES_X_MAX} needs m**2 << x")
        out[large] = _log_i_asymptotic(m, x[large])
    return out


def log_bessel_i(m, x):
    """Natural logarithm of I_m(x); ``-inf`` for ``m >= 1`` at ``x = 0``."""
    m = _check_order(m)
    arr, scalar = _as_array(x)
    out = _log_i(m, np.atleast_1d(arr).astype(float))
    return float(out[0]) if scalar else out.reshape(arr.shape)


def bessel_i_scaled(m, x):
    """``exp(-x) * I_m(x)``."""
    m = _check_order(m)
    arr, scalar = _as_array(x)
    xs = np.atleast_1d(arr).astype(float)
    log_val = _log_i(m, xs) - xs
    out = _exp_checked(log_val, f"I_{m} (scaled)", allow_zero=True)
    return float(out[0]) if scalar else out.reshape(arr.shape)


def _exp_checked(log_val: np.ndarray, name: str, allow_zero: bool = False) -> np.ndarray:
    if np.any(log_val > _LOG_MAX):
        raise BesselRangeError(f"{name} overflows double precision")
    finite = np.isfinite(log_val)
    if not allow_zero and np.any(finite & (log_val < _LOG_MIN)):
        raise BesselRangeError(f"{name} underflows double precision")
    return np.exp(log_val)


def bessel_i(m, x):
    """Modified Bessel function of the first kind, I_m(x), for x >= 0.

    Raises
    ------
    BesselDomainError
        For negative or non-finite ``x``.
    BesselRangeError
        If the value overflows, or underflows below the normal range
        (exact zeros at ``x = 0`` are returned as 0).
    """
    m = _check_order(m)
    arr, scalar = _as_array(x)
    xs = np.atleast_1d(arr).astype(float)
    log_val = _log_i(m, xs)
    out = _exp_checked(np.where(xs == 0.0, 0.0, log_val), f"I_{m}")
    out = np.where(xs == 0.0, 1.0 if m == 0 else 0.0, out)
    return float(out[0]) if scalar else out.reshape(arr.shape)


# --------------------------------------------------------------------------
# K_0, K_1


def _k01_series(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unscaled K_0, K_1 for 0 < x < 2."""
    q = 0.25 * x * x
    lg = np.log(0.5 * x)
    # K_0
    t = np.ones_like(x)
    i0 = np.ones_like(x)
    s0 = np.zeros_like(x)
    harmonic = 0.0
    # K_1: u_k = q^k / (k! (k+1)!)
    u = np.ones_like(x)
    i1s = np.ones_like(x)
    s1 = np.full_like(x, -2.0 * EULER_GAMMA + 1.0)  # psi(1) + psi(2)
    for k in range(1, 40):
        t = t * q / (k * k)
        harmonic += 1.0 / k
        i0 = i0 + t
        s0 = s0 + harmonic * t
        u = u * q / (k * (k + 1.0))
        i1s = i1s + u
        s1 = s1 + (harmonic + harmonic + 1.0 / (k + 1) - 2.0 * EULER_GAMMA) * u
        if np.all(t <= _EPS * i0) and np.all(u <= _EPS * i1s):
            break
    k0 = -(lg + EULER_GAMMA) * i0 + s0
    i1 = 0.5 * x * i1s
    k1 = 1.0 / x + lg * i1 - 0.25 * x * s1
    return k0, k1


def _k01_cf2_scaled(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """exp(x) K_0, exp(x) K_1 by Steed's continued fraction, x >= 2."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25
    q = np.full_like(x, a1)
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, 500):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if np.all(np.abs(dels) < _EPS * np.abs(s)):
            break
    h = a1 * h
    k0 = np.sqrt(np.pi / (2.0 * x)) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def _k01_scaled(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k0 = np.empty_like(x)
    k1 = np.empty_like(x)
    small = x < _SMALL_K_SWITCH
    if np.any(small):
        xs = x[small]
        a, b = _k01_series(xs)
        k0[small] = a * np.exp(xs)
        k1[small] = b * np.exp(xs)
    if np.any(~small):
        a, b = _k01_cf2_scaled(x[~small])
        k0[~small] = a
        k1[~small] = b
    return k0 * _fault_factor(), k1


def _log_k(m: int, x: np.ndarray) -> np.ndarray:
    """log K_m(x) via upward ratio recurrence."""
    if np.any(x <= 0) or np.any(~np.isfinite(x)):
        raise BesselDomainError("bessel_k requires finite x > 0")
    k0, k1 = _k01_scaled(x)
    log_val = np.log(k0) - x
    if m == 0:
        return log_val
    ratio = k1 / k0
    log_val = log_val + np.log(ratio)
    for j in range(1, m):
        ratio = 1.0 / ratio + 2.0 * j / x
        log_val = log_val + np.log(ratio)
    return log_val


def log_bessel_k(m, x):
    """Natural logarithm of K_m(x), x > 0."""
    m = _check_order(m)
    arr, scalar = _as_array(x)
    out = _log_k(m, np.atleast_1d(arr).astype(float))
    return float(out[0]) if scalar else out.reshape(arr.shape)


def bessel_k_scaled(m, x):
    """``exp(x) * K_m(x)``."""
    m = _check_order(m)
    arr, scalar = _as_array(x)
    xs = np.atleast_1d(arr).astype(float)
    out = _exp_checked(_log_k(m, xs) + xs, f"K_{m} (scaled)")
    return float(out[0]) if scalar else out.reshape(arr.shape)


def bessel_k(m, x):
    """Modified Bessel function of the second kind, K_m(x), for x > 0.

    Raises
    ------
    BesselDomainError
        For ``x <= 0`` or non-finite ``x``.
    BesselRangeError
        If the value leaves the normal double range.
    """
    m = _check_order(m)
    arr, scalar = _as_array(x)
    xs = np.atleast_1d(arr).astype(float)
    out = _exp_checked(_log_k(m, xs), f"K_{m}")
    return float(out[0]) if scalar else out.reshape(arr.shape)


# --------------------------------------------------------------------------
# derivatives


def bessel_i_prime(m, x):
    """dI_m/dx. ``I_0' = I_1``; ``I_m' = (I_{m-1} + I_{m+1})/2`` otherwise."""
    m = _check_order(m)
    if m == 0:
        return bessel_i(1, x)
    return 0.5 * (bessel_i(m - 1, x) + bessel_i(m + 1, x))


def bessel_k_prime(m, x):
    """dK_m/dx. ``K_0' = -K_1``; ``K_m' = -(K_{m-1} + K_{m+1})/2`` otherwise."""
    m = _check_order(m)
    if m == 0:
        return -bessel_k(1, x)
    return -0.5 * (bessel_k(m - 1, x) + bessel_k(m + 1, x))
