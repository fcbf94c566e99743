"""Radially symmetric stationary annuli of the necrotic tumor model.

For an annulus ``R2 < |x| < R1`` the pressure is ``p(r) = a ln r + b`` and the
nutrient is ``psi(r) = c1 I0(r) + c2 K0(r)``.  The annulus is stationary when
``psi'(R_i) - p'(R_i) - A G R_i / 2 = 0`` at both radii.  Read as equations in
``G`` and ``A G`` this is the 2x2 linear system

    a_i G + b_i (A G) = c_i,   i = 1, 2,

which is solvable with ``G != 0`` unless ``psi0`` equals the critical value
``psi0_critical(geom)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .specfun import bessel_i, bessel_k

CRITICAL_RTOL = 1e-9


class DegenerateAnnulusError(ValueError):
    """Raised when R1 == R2, so that ln(R1/R2) vanishes."""


@dataclass(frozen=True)
class GeometryParams:
    """Reference radii of the outer (``R1``) and inner (``R2``) interface."""

    R1: float
    R2: float

    def __post_init__(self):
        if not (math.isfinite(self.R1) and math.isfinite(self.R2)):
            raise ValueError("radii must be finite")
        if self.R2 <= 0 or self.R1 <= 0:
            raise ValueError(f"radii must be positive, got R1={self.R1}, R2={self.R2}")
        if self.R1 == self.R2:
            raise DegenerateAnnulusError("R1 == R2: the annulus is degenerate")
        if self.R2 > self.R1:
            raise ValueError(f"need R2 < R1, got R1={self.R1}, R2={self.R2}")

    @property
    def log_ratio(self) -> float:
        return math.log(self.R1 / self.R2)

    @property
    def max_amplitude(self) -> float:
        """Supremum of admissible perturbation amplitudes, (R1-R2)/(R1+R2)."""
        return (self.R1 - self.R2) / (self.R1 + self.R2)


@dataclass(frozen=True)
class BioParams:
    A: float
    G: float
    psi0: float

    def __post_init__(self):
        if not self.psi0 > 0:
            raise ValueError(f"psi0 must be positive, got {self.psi0}")


def _bessel_denominator(R1: float, R2: float) -> float:
    return bessel_i(0, R1) * bessel_k(0, R2) - bessel_i(0, R2) * bessel_k(0, R1)


@dataclass(frozen=True)
class RadialProfiles:
    """Coefficients of ``p = a_log ln r + b_const`` and ``psi = c1 I0 + c2 K0``."""

    a_log: float
    b_const: float
    c1: float
    c2: float

    def pressure(self, r):
        return self.a_log * np.log(r) + self.b_const

    def pressure_prime(self, r):
        return self.a_log / np.asarray(r, dtype=float)

    def nutrient(self, r):
        return self.c1 * bessel_i(0, r) + self.c2 * bessel_k(0, r)

    def nutrient_prime(self, r):
        return self.c1 * bessel_i(1, r) - self.c2 * bessel_k(1, r)


def radial_pressure_profile(geom: GeometryParams, bio: BioParams) -> tuple[float, float]:
    """Return ``(a, b)`` with ``p(r) = a ln r + b`` solving the radial pressure problem."""
    R1, R2 = geom.R1, geom.R2
    AG = bio.A * bio.G
    a = (1.0 / R1 + 1.0 / R2 + AG * (R2**2 - R1**2) / 4.0 + bio.psi0) / geom.log_ratio
    b = 1.0 / R1 - AG * R1**2 / 4.0 - a * math.log(R1)
    return a, b


def radial_nutrient_profile(geom: GeometryParams, bio: BioParams) -> tuple[float, float]:
    """Return ``(c1, c2)`` with ``psi = c1 I0 + c2 K0``, ``psi(R1) = G``, ``psi(R2) = G - psi0``."""
    R1, R2 = geom.R1, geom.R2
    G, psi0 = bio.G, bio.psi0
    den = _bessel_denominator(R1, R2)
    c1 = (G * bessel_k(0, R2) + (psi0 - G) * bessel_k(0, R1)) / den
    c2 = (-G * bessel_i(0, R2) - (psi0 - G) * bessel_i(0, R1)) / den
    return c1, c2


def radial_profiles(geom: GeometryParams, bio: BioParams) -> RadialProfiles:
    a, b = radial_pressure_profile(geom, bio)
    c1, c2 = radial_nutrient_profile(geom, bio)
    return RadialProfiles(a, b, c1, c2)


def stationarity_residuals(geom: GeometryParams, bio: BioParams) -> tuple[float, float]:
    """Normal velocities ``psi'(R_i) - p'(R_i) - A G R_i / 2`` of the radial annulus.

    Both vanish exactly when the annulus is stationary.  At non-stationary
    parameters these are the radial interface speeds.
    """
    prof = radial_profiles(geom, bio)
    AG = bio.A * bio.G
    out = []
    for R in (geom.R1, geom.R2):
        out.append(float(prof.nutrient_prime(R) - prof.pressure_prime(R) - AG * R / 2.0))
    return out[0], out[1]


# --------------------------------------------------------------------------
# G = 0


@dataclass(frozen=True)
class G0Certificate:
    """Sampled evidence that the G = 0 stationarity conditions have no solution R2 < R1."""

    R1: float
    x: np.ndarray = field(repr=False)
    g: np.ndarray = field(repr=False)
    g_prime: np.ndarray = field(repr=False)
    g_at_R1: float
    min_margin: float
    certified: bool


def _g_aux(R1: float, x):
    k0r, i0r = bessel_k(0, R1), bessel_i(0, R1)
    c = R1 * (k0r * bessel_i(1, R1) + i0r * bessel_k(1, R1))
    return k0r * x * bessel_i(1, x) + i0r * x * bessel_k(1, x) - c


def _g_aux_prime(R1: float, x):
    return x * (bessel_i(0, x) * bessel_k(0, R1) - bessel_i(0, R1) * bessel_k(0, x))


def g0_nonexistence_certificate(R1: float, samples: int = 500) -> G0Certificate:
    """Evaluate the auxiliary function g and its derivative on ``samples`` interior points.

    g(R1) = 0 and g' < 0 on (0, R1) together rule out a solution R2 < R1 of the
    G = 0 stationarity conditions.  ``min_margin`` is the smallest |g'| seen.
    """
    if not R1 > 0:
        raise ValueError("R1 must be positive")
    if samples < 2:
        raise ValueError("need at least two samples")
    x = R1 * np.arange(1, samples + 1) / (samples + 1)
    g = _g_aux(R1, x)
    gp = _g_aux_prime(R1, x)
    g_end = float(_g_aux(R1, np.array([R1]))[0])
    return G0Certificate(
        R1=R1,
        x=x,
        g=g,
        g_prime=gp,
        g_at_R1=g_end,
        min_margin=float(np.min(np.abs(gp))),
        certified=bool(np.all(gp < 0) and abs(g_end) <= 1e-12 * max(1.0, abs(g[0]))),
    )


def bine_residual(R1: float, R2: float) -> float:
    """``R2/R1`` minus the Bessel ratio that the G = 0 conditions force it to equal.

    Zero only for R2 == R1.
    """
    if not (0 < R2 <= R1):
        raise ValueError("need 0 < R2 <= R1")
    k0r, i0r = bessel_k(0, R1), bessel_i(0, R1)
    num = k0r * bessel_i(1, R1) + i0r * bessel_k(1, R1)
    den = k0r * bessel_i(1, R2) + i0r * bessel_k(1, R2)
    return R2 / R1 - num / den


# --------------------------------------------------------------------------
# G != 0


@dataclass(frozen=True)
class StationaryCoefficients:
    a1: float
    a2: float
    b1: float
    b2: float
    c1: float
    c2: float

    @property
    def det_ab(self) -> float:
        return self.a1 * self.b2 - self.a2 * self.b1

    @property
    def det_cb(self) -> float:
        return self.c1 * self.b2 - self.c2 * self.b1


def _flux_terms(geom: GeometryParams):
    """Shared Bessel quantities: denominator and K0(R1) I1(R_i) + I0(R1) K1(R_i)."""
    R1, R2 = geom.R1, geom.R2
    den = _bessel_denominator(R1, R2)
    k0r, i0r = bessel_k(0, R1), bessel_i(0, R1)
    flux = [k0r * bessel_i(1, R) + i0r * bessel_k(1, R) for R in (R1, R2)]
    return den, flux


def stationarity_coefficients(geom: GeometryParams, psi0: float) -> StationaryCoefficients:
    """Coefficients of ``a_i G + b_i A G = c_i`` at both radii."""
    R1, R2 = geom.R1, geom.R2
    L = geom.log_ratio
    den, flux = _flux_terms(geom)
    dk = bessel_k(0, R2) - bessel_k(0, R1)
    di = bessel_i(0, R1) - bessel_i(0, R2)
    q = (R1**2 - R2**2) / (4.0 * L)
    s = 1.0 / R1 + 1.0 / R2
    a, b, c = [], [], []
    for R, F in zip((R1, R2), flux):
        a.append((dk * bessel_i(1, R) - di * bessel_k(1, R)) / den)
        b.append(q / R - R / 2.0)
        c.append(-psi0 * F / den + (s + psi0) / (L * R))
    return StationaryCoefficients(a[0], a[1], b[0], b[1], c[0], c[1])


def psi0_critical_parts(geom: GeometryParams) -> tuple[float, float]:
    """Numerator and denominator of the critical constant (both negative)."""
    R1, R2 = geom.R1, geom.R2
    L = geom.log_ratio
    den, _ = _flux_terms(geom)
    co = stationarity_coefficients(geom, 1.0)
    b1, b2 = co.b1, co.b2
    k0r, i0r = bessel_k(0, R1), bessel_i(0, R1)
    num = (b1 / R2 - b2 / R1) * (1.0 / R1 + 1.0 / R2) / L
    denom = (
        k0r * (b1 * bessel_i(1, R2) - b2 * bessel_i(1, R1))
        + i0r * (b1 * bessel_k(1, R2) - b2 * bessel_k(1, R1))
    ) / den + (R1**2 - R2**2) / (2.0 * R1 * R2 * L)
    return num, denom


def psi0_critical(geom: GeometryParams) -> float:
    """The unique psi0 at which ``c1 b2 - c2 b1`` vanishes (no stationary annulus)."""
    num, den = psi0_critical_parts(geom)
    return num / den


def psi0_critical_swapped(geom: GeometryParams) -> float:
    """Critical constant with the radii swapped in the numerator, ``(b1/R1 - b2/R2)``.

    This variant does not zero ``c1 b2 - c2 b1``; ``psi0_critical`` is the
    value used everywhere else.
    """
    R1, R2 = geom.R1, geom.R2
    co = stationarity_coefficients(geom, 1.0)
    _, den = psi0_critical_parts(geom)
    num = (co.b1 / R1 - co.b2 / R2) * (1.0 / R1 + 1.0 / R2) / geom.log_ratio
    return num / den


@dataclass(frozen=True)
class StationaryResult:
    solvable: bool
    A: float
    G: float
    psi0: float
    psi0_critical: float
    residuals: tuple[float, float]
    coefficients: StationaryCoefficients

    @property
    def bio(self) -> BioParams:
        if not self.solvable:
            raise ValueError("no stationary (A, G) at the critical psi0")
        return BioParams(self.A, self.G, self.psi0)


def solve_stationary(geom: GeometryParams, psi0: float, rtol: float = CRITICAL_RTOL) -> StationaryResult:
    """Unique (A, G) making the annulus (R1, R2) stationary for the given psi0.

    Within relative distance ``rtol`` of the critical constant the result is
    returned with ``solvable=False`` and NaN for A, G.
    """
    if not psi0 > 0:
        raise ValueError("psi0 must be positive")
    crit = psi0_critical(geom)
    co = stationarity_coefficients(geom, psi0)
    if abs(psi0 - crit) <= rtol * crit:
        return StationaryResult(False, math.nan, math.nan, psi0, crit, (math.nan, math.nan), co)
    G = co.det_cb / co.det_ab
    A = (co.a1 * co.c2 - co.a2 * co.c1) / co.det_cb
    res = stationarity_residuals(geom, BioParams(A, G, psi0))
    return StationaryResult(True, A, G, psi0, crit, res, co)
