import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from necrosim.stationary import (
    BioParams,
    DegenerateAnnulusError,
    GeometryParams,
    bine_residual,
    g0_nonexistence_certificate,
    psi0_critical,
    psi0_critical_parts,
    psi0_critical_swapped,
    radial_nutrient_profile,
    radial_pressure_profile,
    radial_profiles,
    solve_stationary,
    stationarity_coefficients,
    stationarity_residuals,
)

LATTICE = [
    (R1, round(q * R1, 10), psi0)
    for q in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    for R1 in (0.5, 1.0, 2.0, 5.0)
    for psi0 in (0.1, 1.0, 10.0)
]


# --------------------------------------------------------------------------
# independent high-precision oracle, built from the boundary value problem


def _mp_residuals(R1, R2, psi0, G, H):
    """Stationarity residuals psi' - p' - H r / 2 at R1, R2 with H = A G (mpmath)."""
    R1, R2, psi0, G, H = map(mp.mpf, (R1, R2, psi0, G, H))
    L = mp.log(R1 / R2)
    a = ((1 / R1 - H * R1**2 / 4) - (-1 / R2 - H * R2**2 / 4 - psi0)) / L
    M = mp.matrix([[mp.besseli(0, R1), mp.besselk(0, R1)], [mp.besseli(0, R2), mp.besselk(0, R2)]])
    c = mp.lu_solve(M, mp.matrix([G, G - psi0]))
    out = []
    for r in (R1, R2):
        dpsi = c[0] * mp.besseli(1, r) - c[1] * mp.besselk(1, r)
        out.append(dpsi - a / r - H * r / 2)
    return out


def mp_stationary(R1, R2, psi0):
    with mp.workdps(50):
        r0 = _mp_residuals(R1, R2, psi0, 0, 0)
        rg = _mp_residuals(R1, R2, psi0, 1, 0)
        rh = _mp_residuals(R1, R2, psi0, 0, 1)
        J = mp.matrix([[rg[i] - r0[i], rh[i] - r0[i]] for i in range(2)])
        G, H = mp.lu_solve(J, mp.matrix([-r0[0], -r0[1]]))
        return float(H / G), float(G)


def mp_psi0_critical(R1, R2):
    # G is affine in psi0; the critical constant is its root
    with mp.workdps(50):
        g0 = mp.mpf(mp_stationary_G(R1, R2, 0))
        g1 = mp.mpf(mp_stationary_G(R1, R2, 1))
        return float(-g0 / (g1 - g0))


def mp_stationary_G(R1, R2, psi0):
    with mp.workdps(50):
        r0 = _mp_residuals(R1, R2, psi0, 0, 0)
        rg = _mp_residuals(R1, R2, psi0, 1, 0)
        rh = _mp_residuals(R1, R2, psi0, 0, 1)
        J = mp.matrix([[rg[i] - r0[i], rh[i] - r0[i]] for i in range(2)])
        return mp.lu_solve(J, mp.matrix([-r0[0], -r0[1]]))[0]


# --------------------------------------------------------------------------


def test_geometry_validation():
    with pytest.raises(DegenerateAnnulusError):
        GeometryParams(1.0, 1.0)
    with pytest.raises(ValueError):
        GeometryParams(2.0, 3.0)
    with pytest.raises(ValueError):
        GeometryParams(1.0, -0.5)
    with pytest.raises(ValueError):
        BioParams(1.0, 1.0, 0.0)


def test_profiles_hit_boundary_data():
    geom, bio = GeometryParams(2.0, 1.0), BioParams(0.7, 3.0, 1.5)
    prof = radial_profiles(geom, bio)
    AG = bio.A * bio.G
    assert prof.pressure(2.0) == pytest.approx(1 / 2.0 - AG * 4 / 4, abs=1e-12)
    assert prof.pressure(1.0) == pytest.approx(-1.0 - AG / 4 - 1.5, abs=1e-12)
    assert prof.nutrient(2.0) == pytest.approx(3.0, abs=1e-12)
    assert prof.nutrient(1.0) == pytest.approx(1.5, abs=1e-12)
    assert radial_pressure_profile(geom, bio) == (prof.a_log, prof.b_const)
    assert radial_nutrient_profile(geom, bio) == (prof.c1, prof.c2)


def test_profiles_solve_radial_odes_by_finite_differences():
    geom, bio = GeometryParams(3.0, 0.5), BioParams(-0.4, 2.0, 0.8)
    prof = radial_profiles(geom, bio)
    h = 1e-4
    for r in np.linspace(0.7, 2.8, 10):
        for f, shift in ((prof.pressure, 0.0), (prof.nutrient, 1.0)):
            d2 = (f(r + h) - 2 * f(r) + f(r - h)) / h**2
            d1 = (f(r + h) - f(r - h)) / (2 * h)
            assert abs(d2 + d1 / r - shift * f(r)) < 1e-6 * max(1.0, abs(f(r)))
        assert prof.pressure_prime(r) == pytest.approx((prof.pressure(r + h) - prof.pressure(r - h)) / (2 * h), rel=1e-7)


@pytest.mark.parametrize("R1,R2,psi0", [(2.0, 1.0, 1.0), (1.0, 0.3, 10.0), (5.0, 2.5, 0.1), (0.5, 0.2, 1.0)])
def test_solution_matches_high_precision_oracle(R1, R2, psi0):
    res = solve_stationary(GeometryParams(R1, R2), psi0)
    A, G = mp_stationary(R1, R2, psi0)
    assert res.solvable
    assert res.A == pytest.approx(A, rel=1e-10)
    assert res.G == pytest.approx(G, rel=1e-10)


@pytest.mark.parametrize("R1,R2", [(2.0, 1.0), (1.0, 0.3), (5.0, 4.0), (0.5, 0.1)])
def test_critical_constant_matches_oracle(R1, R2):
    geom = GeometryParams(R1, R2)
    assert psi0_critical(geom) == pytest.approx(mp_psi0_critical(R1, R2), rel=1e-10)


def test_swapped_critical_formula_differs():
    # swapping the radii in the numerator gives a value that does not zero the determinant
    geom = GeometryParams(2.0, 1.0)
    assert psi0_critical(geom) == pytest.approx(19.5015, abs=1e-4)
    assert psi0_critical_swapped(geom) == pytest.approx(21.101, abs=1e-3)
    co = stationarity_coefficients(geom, psi0_critical_swapped(geom))
    assert abs(co.det_cb) > 0.1


def test_critical_parts_are_negative():
    for R1, R2, _ in LATTICE[::7]:
        num, den = psi0_critical_parts(GeometryParams(R1, R2))
        assert num < 0 and den < 0


def test_critical_psi0_is_not_solvable():
    geom = GeometryParams(2.0, 1.0)
    crit = psi0_critical(geom)
    res = solve_stationary(geom, crit)
    assert not res.solvable
    assert math.isnan(res.A) and math.isnan(res.G)
    with pytest.raises(ValueError):
        res.bio
    assert solve_stationary(geom, crit * (1 + 1e-6)).solvable
    assert abs(stationarity_coefficients(geom, crit).det_cb) < 1e-12


def test_critical_positive_on_lattice():
    assert all(psi0_critical(GeometryParams(R1, R2)) > 0 for R1, R2, _ in LATTICE)


def test_coefficients_b_differ():
    for R1, R2, psi0 in LATTICE[::5]:
        co = stationarity_coefficients(GeometryParams(R1, R2), psi0)
        assert co.b1 != co.b2


@settings(max_examples=80, deadline=None)
@given(R1=st.floats(0.5, 5.0), q=st.floats(0.2, 0.9), psi0=st.floats(0.1, 10.0))
def test_residuals_at_rounding_level(R1, q, psi0):
    """Residuals are bounded by a small multiple of eps times the size of their terms."""
    geom = GeometryParams(R1, q * R1)
    res = solve_stationary(geom, psi0)
    if not res.solvable:
        return
    scale = max(1.0, abs(res.A * res.G) * R1, abs(res.G))
    assert max(map(abs, res.residuals)) <= 1e-13 * scale


def test_residual_function_vanishes_only_at_solution():
    geom = GeometryParams(2.0, 1.0)
    res = solve_stationary(geom, 1.0)
    off = stationarity_residuals(geom, BioParams(res.A * 1.01, res.G, 1.0))
    assert max(map(abs, off)) > 1.0


@pytest.mark.parametrize("R1", [0.5, 1.0, 2.0, 5.0, 10.0])
def test_g0_certificate(R1):
    cert = g0_nonexistence_certificate(R1, samples=500)
    assert cert.certified
    assert abs(cert.g_at_R1) <= 1e-12
    assert np.all(cert.g_prime < 0)
    assert cert.x.size == 500 and np.all((cert.x > 0) & (cert.x < R1))
    assert cert.min_margin > 0


def test_g0_certificate_rejects_bad_input():
    with pytest.raises(ValueError):
        g0_nonexistence_certificate(-1.0)
    with pytest.raises(ValueError):
        g0_nonexistence_certificate(1.0, samples=1)


@settings(max_examples=40, deadline=None)
@given(R1=st.floats(0.3, 8.0), q=st.floats(0.05, 0.95))
def test_bine_residual_nonzero_below_R1(R1, q):
    assert bine_residual(R1, q * R1) != 0.0
    assert abs(bine_residual(R1, R1)) < 1e-14
