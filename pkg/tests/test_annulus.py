import numpy as np
import pytest
import scipy.special as sp

from necrosim.annulus import (
    AnnulusSolver,
    BoundaryData,
    DiscretizationMismatch,
    RadialGrid,
    boundary_gradient,
    boundary_gradient_values,
    build_diffeo,
    helmholtz_mode_solution,
    laplace_mode_solution,
    solve_transformed,
)
from necrosim.interfaces import InterfaceCollision, InterfacePair
from necrosim.stationary import GeometryParams
from necrosim.verify import solver_oracle_error

GEOM = GeometryParams(2.0, 1.0)
BOUND = 0.9 * GEOM.max_amplitude


def wavy(modes=3):
    seeds = [(1, 1, 0.04, 0.3), (1, 3, 0.03, 1.0), (2, 2, 0.05, -0.5), (2, 1, 0.02, 2.0)]
    return InterfacePair.from_seeds(modes, BOUND, seeds)


# --------------------------------------------------------------------------
# closed-form mode solutions


@pytest.mark.parametrize("m", [0, 1, 3, 10])
@pytest.mark.parametrize("kind", ["laplace", "helmholtz"])
def test_mode_solution_boundary_values_and_ode(kind, m):
    make = laplace_mode_solution if kind == "laplace" else helmholtz_mode_solution
    sol = make(GEOM, m, 1.3, -0.4)
    assert sol(2.0) == pytest.approx(1.3, abs=1e-13)
    assert sol(1.0) == pytest.approx(-0.4, abs=1e-13)
    shift = 0.0 if kind == "laplace" else 1.0
    h = 1e-4
    for r in np.linspace(1.1, 1.9, 7):
        d2 = (sol(r + h) - 2 * sol(r) + sol(r - h)) / h**2
        d1 = (sol(r + h) - sol(r - h)) / (2 * h)
        assert abs(d2 + d1 / r - (shift + m * m / r**2) * sol(r)) < 1e-5 * max(1, abs(sol(r)))
        assert sol.derivative(r) == pytest.approx(d1, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("m", [0, 2, 7])
def test_helmholtz_coefficients_against_scipy(m):
    sol = helmholtz_mode_solution(GEOM, m, 0.7, 0.2)
    a, b = sol.coefficients
    for r in (1.0, 1.4, 2.0):
        ref = a * sp.iv(m, r) + b * sp.kv(m, r)
        assert sol(r) == pytest.approx(ref.real, rel=1e-12)


def test_laplace_coefficients():
    a, b = laplace_mode_solution(GEOM, 0, 1.0, 0.0).coefficients
    assert a + b * np.log(2.0) == pytest.approx(1.0)
    a, b = laplace_mode_solution(GEOM, 2, 1.0, 0.0).coefficients
    assert a * 4 + b / 4 == pytest.approx(1.0)
    assert a + b == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("kind", ["laplace", "helmholtz"])
def test_high_mode_solutions_do_not_overflow(kind):
    g = GeometryParams(10.0, 1.0)
    make = laplace_mode_solution if kind == "laplace" else helmholtz_mode_solution
    sol = make(g, 128, 1.0, 1.0)
    r = np.linspace(1.0, 10.0, 50)
    vals = sol(r)
    assert np.all(np.isfinite(vals)) and np.all(np.isfinite(sol.derivative(r)))
    assert vals[0] == pytest.approx(1.0) and vals[-1] == pytest.approx(1.0)
    assert np.all((vals >= 0) & (vals <= 1 + 1e-12))
    assert np.max(vals[15:35]) < 1e-10


# --------------------------------------------------------------------------
# grids and diffeomorphism


def test_radial_grids():
    for kind in ("chebyshev", "fd2"):
        grid = RadialGrid.build(GEOM, 20, kind)
        assert grid.r[0] == 1.0 and grid.r[-1] == 2.0
        assert np.all(np.diff(grid.r) > 0)
        assert np.allclose(grid.D1 @ grid.r**2, 2 * grid.r, atol=1e-10)
        assert np.allclose(grid.D2 @ grid.r**2, 2.0, atol=1e-8)
    with pytest.raises(ValueError):
        RadialGrid.build(GEOM, 20, "spline")
    with pytest.raises(ValueError):
        RadialGrid.build(GEOM, 3)


def test_diffeo_at_zero_is_polar_laplacian():
    grid = RadialGrid.build(GEOM, 12)
    d = build_diffeo(GEOM, InterfacePair.zeros(4, BOUND), grid.r)
    r = grid.r[:, None]
    assert np.allclose(d.a_rr, 1.0) and np.allclose(d.a_rt, 0.0)
    assert np.allclose(d.a_r, 1 / r) and np.allclose(d.a_tt, 1 / r**2)
    assert np.allclose(d.physical_radius(), np.broadcast_to(r, d.a_rr.shape))


def test_diffeo_maps_circles_onto_interfaces():
    X = wavy()
    grid = RadialGrid.build(GEOM, 12)
    d = build_diffeo(GEOM, X, grid.r, 31)
    R = d.physical_radius()
    v1, v2 = X.values(31)
    assert np.allclose(R[-1], 2.0 * (1 + v1), atol=1e-14)
    assert np.allclose(R[0], 1.0 * (1 + v2), atol=1e-14)
    assert np.all(np.diff(R, axis=0) > 0)


def test_diffeo_rejects_large_perturbations():
    with pytest.raises(InterfaceCollision):
        build_diffeo(GEOM, InterfacePair.zeros(2, GEOM.max_amplitude))
    with pytest.raises(InterfaceCollision):
        build_diffeo(GEOM, InterfacePair.from_seeds(2, BOUND, [(1, 1, 0.35, 0.0)]))
    with pytest.raises(ValueError):
        build_diffeo(GEOM, InterfacePair.zeros(2, BOUND), n_theta=8)


# --------------------------------------------------------------------------
# solver at rho = 0 against the closed form


@pytest.mark.parametrize("kind", ["laplace", "helmholtz"])
@pytest.mark.parametrize("m", [0, 1, 5, 16])
def test_unperturbed_solver_matches_closed_form(kind, m):
    assert solver_oracle_error(GEOM, kind, m, 48) < 1e-11


def test_fd2_is_second_order():
    for kind in ("laplace", "helmholtz"):
        e1 = solver_oracle_error(GEOM, kind, 3, 64, "fd2", 1.0, 0.3)
        e2 = solver_oracle_error(GEOM, kind, 3, 128, "fd2", 1.0, 0.3)
        assert 3.5 < e1 / e2 < 4.5


def test_chebyshev_converges_spectrally():
    errs = [solver_oracle_error(GEOM, "helmholtz", 4, n, outer=1.0, inner=0.3) for n in (8, 12, 16)]
    assert errs[0] > 100 * errs[1] > 1e4 * errs[2] * 1e-2
    assert errs[2] < 1e-9


# --------------------------------------------------------------------------
# manufactured solutions on perturbed domains


def _manufactured(kind):
    if kind == "laplace":
        u = lambda R, t: R**2 * np.cos(2 * t)  # x1^2 - x2^2  # noqa: E731
        u_R = lambda R, t: 2 * R * np.cos(2 * t)  # noqa: E731
        u_t = lambda R, t: -2 * R**2 * np.sin(2 * t)  # noqa: E731
    else:
        u = lambda R, t: np.exp(R * np.cos(t))  # e^{x1}  # noqa: E731
        u_R = lambda R, t: np.cos(t) * np.exp(R * np.cos(t))  # noqa: E731
        u_t = lambda R, t: -R * np.sin(t) * np.exp(R * np.cos(t))  # noqa: E731
    return u, u_R, u_t


@pytest.fixture(scope="module")
def msolver():
    return AnnulusSolver(GEOM, 65, RadialGrid.build(GEOM, 40))


@pytest.mark.parametrize("kind", ["laplace", "helmholtz"])
def test_manufactured_solution_on_perturbed_domain(msolver, kind):
    u, u_R, u_t = _manufactured(kind)
    X = wavy()
    d = msolver.diffeo(X)
    R = d.physical_radius()
    exact = u(R, d.theta[None, :])
    f = msolver.solve(d, kind, exact[-1], exact[0])
    assert f.iterations > 0
    assert np.max(np.abs(f.values - exact)) < 1e-10 * np.max(np.abs(exact))
    # boundary gradient: u_R - R_i rho_i' u_theta / |x|^2 at x on interface i
    for which, i, Ri in (("outer", 0, 2.0), ("inner", 1, 1.0)):
        Rb = R[-1 if which == "outer" else 0]
        rp = d.rho_prime[i]
        want = u_R(Rb, d.theta) - Ri * rp * u_t(Rb, d.theta) / Rb**2
        got = boundary_gradient_values(f, which)
        assert np.max(np.abs(got - want)) < 1e-8 * np.max(np.abs(want))


def test_mean_data_equals_grid_data(msolver):
    X = wavy()
    d = msolver.diffeo(X)
    c = np.cos(d.theta)
    a = msolver.solve(d, "laplace", 5.0 + 0.1 * c, -3.0 + 0.2 * c)
    b = msolver.solve(d, "laplace", 0.1 * c, 0.2 * c, 5.0, -3.0)
    assert np.max(np.abs(a.values - b.values)) < 1e-12


def test_boundary_gradient_of_radial_field_at_zero():
    # p = ln r: gradient trace equals 1/R_i
    solver = AnnulusSolver(GEOM, 9, RadialGrid.build(GEOM, 24))
    d = solver.diffeo(InterfacePair.zeros(2, BOUND))
    f = solver.solve(d, "laplace", np.full(9, np.log(2.0)), np.zeros(9))
    assert np.allclose(boundary_gradient_values(f, "outer"), 0.5, atol=1e-12)
    assert np.allclose(boundary_gradient_values(f, "inner"), 1.0, atol=1e-12)
    coeffs = boundary_gradient(f, InterfacePair.zeros(2, BOUND), "outer")
    assert coeffs[0] == pytest.approx(0.5) and np.allclose(coeffs[1:], 0, atol=1e-13)
    with pytest.raises(DiscretizationMismatch):
        boundary_gradient(f, InterfacePair.from_seeds(2, BOUND, [(1, 1, 0.01, 0.0)]), "outer")


def test_solve_transformed_and_grid_mismatch():
    data = BoundaryData.constant(1.0, 2.0, modes=3) + 0.5 * BoundaryData.constant(1.0, 0.0, modes=3)
    f = solve_transformed(GEOM, wavy(), "laplace", data, nr=24)
    assert np.allclose(f.trace("outer"), 1.5) and np.allclose(f.trace("inner"), 2.0)
    assert f.values.shape == (24, 11)
    other = AnnulusSolver(GEOM, 13, RadialGrid.build(GEOM, 24))
    with pytest.raises(DiscretizationMismatch):
        other.solve(f.diffeo, "laplace", np.zeros(13), np.zeros(13))
    with pytest.raises(ValueError):
        AnnulusSolver(GEOM, 12)


def test_solver_rotation_equivariance(msolver):
    X = wavy()
    k = 5  # rotate by exactly k grid cells
    angle = 2 * np.pi * k / 65
    c = np.cos(3 * msolver.diffeo(X).theta)
    f = msolver.solve(msolver.diffeo(X), "helmholtz", c, 0.5 * c)
    g = msolver.solve(msolver.diffeo(X.rotated(angle)), "helmholtz", np.roll(c, k), np.roll(0.5 * c, k))
    assert np.max(np.abs(np.roll(f.values, k, axis=1) - g.values)) < 1e-11
