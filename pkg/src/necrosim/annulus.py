"""Dirichlet problems on the reference annulus ``R2 < r < R1``.

Two layers live here:

* closed-form per-mode solutions of ``Delta w = 0`` and ``Delta v = v`` (the
  oracles used at ``rho = 0``), and
* a collocation solver for the pulled-back operator of the diffeomorphism
  ``Theta_rho`` that maps the reference annulus onto the perturbed domain.

``Theta_rho`` moves the point ``(r, theta)`` to physical radius
``R(r, theta) = alpha(theta) + beta(theta) r``, linear in ``r``, which makes the
chain rule short::

    r_theta   = -(alpha' + beta' r) / beta
    r_thth    = -(alpha'' + beta'' r) / beta - 2 beta' r_theta / beta
    Delta u   = v_rr (1/beta^2 + r_theta^2/R^2) + v_r (1/(beta R) + r_thth/R^2)
                + v_rth 2 r_theta / R^2 + v_thth / R^2

The discrete system is collocation in ``theta`` (odd number of equispaced
points) times Chebyshev or second-order finite differences in ``r``, solved
with GMRES preconditioned by the exact per-mode solver of the ``rho = 0``
operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np
import scipy.linalg as sla
from scipy.sparse.linalg import LinearOperator, gmres

from . import interfaces as fz
from .interfaces import InterfaceCollision, InterfacePair
from .specfun import bessel_i, bessel_k, log_bessel_i, log_bessel_k
from .stationary import GeometryParams

EquationKind = Literal["laplace", "helmholtz"]
_SHIFT = {"laplace": 0.0, "helmholtz": 1.0}

DEFAULT_NR = {"chebyshev": 64, "fd2": 256}


class SolverError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class DiscretizationMismatch(ValueError):
    pass


# --------------------------------------------------------------------------
# closed-form mode solutions


@dataclass(frozen=True)
class ModeSolution:
    """Radial profile of one angular mode solving a constant-coefficient Dirichlet problem."""

    geom: GeometryParams
    m: int
    kind: EquationKind
    outer: complex
    inner: complex

    def _basis(self, r, deriv: bool):
        """Profiles (and r-derivatives) equal to 1 on one circle and 0 on the other."""
        R1, R2 = self.geom.R1, self.geom.R2
        r = np.asarray(r, dtype=float)
        m = abs(self.m)
        if self.kind == "laplace":
            if m == 0:
                L = np.log(R1 / R2)
                if deriv:
                    return 1.0 / (r * L), -1.0 / (r * L)
                return np.log(r / R2) / L, np.log(R1 / r) / L
            den = 1.0 - (R2 / R1) ** (2 * m)
            u, w = (r / R1) ** m, (R2 / r) ** (2 * m)
            s, t = (R2 / r) ** m, (r / R1) ** (2 * m)
            if deriv:
                return m * u * (1 + w) / (r * den), -m * s * (1 + t) / (r * den)
            return u * (1 - w) / den, s * (1 - t) / den
        # modified Helmholtz: ratios in log space, so high orders never overflow
        lI = lambda x: log_bessel_i(m, x)  # noqa: E731
        lK = lambda x: log_bessel_k(m, x)  # noqa: E731
        lI1, lI2, lK1, lK2 = lI(R1), lI(R2), lK(R1), lK(R2)
        den = 1.0 - np.exp(lK1 + lI2 - lI1 - lK2)
        if deriv:
            if m == 0:
                Ip = np.exp(log_bessel_i(1, r) - lI1)
                Kp = -np.exp(log_bessel_k(1, r) - lK2)
            else:
                Ip = 0.5 * (np.exp(log_bessel_i(m - 1, r) - lI1) + np.exp(log_bessel_i(m + 1, r) - lI1))
                Kp = -0.5 * (np.exp(log_bessel_k(m - 1, r) - lK2) + np.exp(log_bessel_k(m + 1, r) - lK2))
            # Ip = I'(r)/I(R1), Kp = K'(r)/K(R2)
            f_out = (Ip - Kp * np.exp(lI2 - lI1)) / den
            f_in = (Kp - Ip * np.exp(lK1 - lK2)) / den
            return f_out, f_in
        Ir = np.exp(lI(r) - lI1)  # I(r)/I(R1)
        Kr = np.exp(lK(r) - lK2)  # K(r)/K(R2)
        f_out = (Ir - Kr * np.exp(lI2 - lI1)) / den
        f_in = (Kr - Ir * np.exp(lK1 - lK2)) / den
        return f_out, f_in

    def __call__(self, r):
        f_out, f_in = self._basis(r, deriv=False)
        return self.outer * f_out + self.inner * f_in

    def derivative(self, r):
        f_out, f_in = self._basis(r, deriv=True)
        return self.outer * f_out + self.inner * f_in

    @property
    def coefficients(self) -> tuple[complex, complex]:
        """``(alpha, beta)`` of ``alpha I_m + beta K_m`` (Helmholtz), ``alpha r^m + beta r^-m``
        or ``alpha + beta ln r`` (Laplace)."""
        R1, R2 = self.geom.R1, self.geom.R2
        m = abs(self.m)
        o, i = self.outer, self.inner
        if self.kind == "laplace":
            if m == 0:
                L = np.log(R1 / R2)
                beta = (o - i) / L
                return o - beta * np.log(R1), beta
            M = np.array([[R1**m, R1**-m], [R2**m, R2**-m]])
        else:
            M = np.array([[bessel_i(m, R1), bessel_k(m, R1)], [bessel_i(m, R2), bessel_k(m, R2)]])
        alpha, beta = np.linalg.solve(M.astype(complex), np.array([o, i], dtype=complex))
        return alpha, beta


def laplace_mode_solution(geom: GeometryParams, m: int, outer_value, inner_value) -> ModeSolution:
    """Mode-m solution of ``w'' + w'/r - m^2 w / r^2 = 0`` with the given boundary values."""
    return ModeSolution(geom, int(m), "laplace", outer_value, inner_value)


def helmholtz_mode_solution(geom: GeometryParams, m: int, outer_value, inner_value) -> ModeSolution:
    """Mode-m solution of ``v'' + v'/r - (1 + m^2/r^2) v = 0`` with the given boundary values."""
    return ModeSolution(geom, int(m), "helmholtz", outer_value, inner_value)


# --------------------------------------------------------------------------
# radial discretizations


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Radial nodes (ascending, ``r[0] = R2``, ``r[-1] = R1``) with differentiation matrices."""

    kind: Literal["chebyshev", "fd2"]
    r: np.ndarray
    D1: np.ndarray = field(repr=False)
    D2: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.r.size

    @classmethod
    def build(cls, geom: GeometryParams, n: int | None = None, kind: str = "chebyshev") -> "RadialGrid":
        if kind not in DEFAULT_NR:
            raise ValueError(f"unknown radial discretization {kind!r}")
        n = DEFAULT_NR[kind] if n is None else int(n)
        if n < 4:
            raise ValueError("need at least 4 radial nodes")
        if kind == "chebyshev":
            return cls._chebyshev(geom, n)
        return cls._fd2(geom, n)

    @classmethod
    def _chebyshev(cls, geom, n):
        D1x, D2x = _cheb_matrices(n)
        j = np.arange(n)
        x = np.sin(np.pi * (2 * j - (n - 1)) / (2 * (n - 1)))  # ascending, symmetric
        half = 0.5 * (geom.R1 - geom.R2)
        r = geom.R2 + (x + 1.0) * half
        r[0], r[-1] = geom.R2, geom.R1
        return cls("chebyshev", r, D1x / half, D2x / half**2)

    @classmethod
    def _fd2(cls, geom, n):
        r = np.linspace(geom.R2, geom.R1, n)
        h = r[1] - r[0]
        D1 = np.zeros((n, n))
        D2 = np.zeros((n, n))
        i = np.arange(1, n - 1)
        D1[i, i - 1], D1[i, i + 1] = -0.5 / h, 0.5 / h
        D2[i, i - 1], D2[i, i], D2[i, i + 1] = 1 / h**2, -2 / h**2, 1 / h**2
        D1[0, :3] = np.array([-1.5, 2.0, -0.5]) / h
        D1[-1, -3:] = np.array([0.5, -2.0, 1.5]) / h
        D2[0, :4] = np.array([2.0, -5.0, 4.0, -1.0]) / h**2
        D2[-1, -4:] = np.array([-1.0, 4.0, -5.0, 2.0]) / h**2
        return cls("fd2", r, D1, D2)


def _cheb_matrices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """First and second Chebyshev differentiation matrices on ascending Gauss-Lobatto nodes.

    Node differences come from the sine identity and the diagonal from the
    negative-sum trick, which keeps rounding errors low for large ``n``.
    """
    N = n - 1
    k = np.arange(n)
    th = k * np.pi / N
    T = np.tile(th / 2, (n, 1)).T
    DX = 2 * np.sin(T.T + T) * np.sin(T.T - T)
    n1 = n // 2
    n2 = n - n1
    DX = np.vstack([DX[:n1], -np.flipud(np.fliplr(DX[:n2]))])
    DX[k, k] = 1.0
    C = sla.toeplitz((-1.0) ** k)
    C[0, :] *= 2
    C[-1, :] *= 2
    C[:, 0] /= 2
    C[:, -1] /= 2
    Z = 1.0 / DX
    Z[k, k] = 0.0
    D = np.eye(n)
    out = []
    for ell in (1, 2):
        D = ell * Z * (C * np.tile(np.diag(D), (n, 1)).T - D)
        D[k, k] = -D.sum(axis=1)
        out.append(D.copy())
    # nodes above run from +1 to -1; reverse to ascending order
    return out[0][::-1, ::-1].copy(), out[1][::-1, ::-1].copy()


# --------------------------------------------------------------------------
# diffeomorphism


@dataclass(frozen=True, eq=False)
class DiffeoCoefficients:
    """Coefficient fields (shape ``(Nr, Ntheta)``) of the pulled-back Laplacian."""

    geom: GeometryParams
    interfaces: InterfacePair
    r: np.ndarray
    theta: np.ndarray
    a_rr: np.ndarray = field(repr=False)
    a_r: np.ndarray = field(repr=False)
    a_rt: np.ndarray = field(repr=False)
    a_tt: np.ndarray = field(repr=False)
    beta: np.ndarray = field(repr=False)
    rho: tuple[np.ndarray, np.ndarray] = field(repr=False)
    rho_prime: tuple[np.ndarray, np.ndarray] = field(repr=False)

    def physical_radius(self) -> np.ndarray:
        """Image radius ``R(r, theta)`` of every collocation node."""
        R1, R2 = self.geom.R1, self.geom.R2
        alpha = R1 * R2 * (self.rho[1] - self.rho[0]) / (R1 - R2)
        return alpha[None, :] + self.beta[None, :] * self.r[:, None]


def build_diffeo(
    geom: GeometryParams,
    rho: InterfacePair,
    r: np.ndarray | None = None,
    n_theta: int | None = None,
) -> DiffeoCoefficients:
    """Pulled-back Laplacian coefficients of ``Theta_rho`` on the grid ``r x theta``.

    Raises :class:`InterfaceCollision` if ``sup |rho_i|`` reaches the amplitude
    bound, or if the bound itself is not below ``(R1 - R2)/(R1 + R2)``.
    """
    if rho.amplitude_bound >= geom.max_amplitude:
        raise InterfaceCollision(
            f"amplitude bound {rho.amplitude_bound:.4g} must be < (R1-R2)/(R1+R2) = {geom.max_amplitude:.4g}"
        )
    rho.check_admissible()
    if r is None:
        r = RadialGrid.build(geom).r
    if n_theta is None:
        n_theta = fz.padded_size(max(rho.modes, 1))
    if n_theta % 2 == 0:
        raise ValueError("n_theta must be odd")
    R1, R2 = geom.R1, geom.R2
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    vals = [[fz.to_grid(fz.derivative(c, k), n_theta) for k in range(3)] for c in (rho.rho1, rho.rho2)]
    (p1, p1d, p1dd), (p2, p2d, p2dd) = vals
    w = 1.0 / (R1 - R2)
    alpha = R1 * R2 * (p2 - p1) * w, R1 * R2 * (p2d - p1d) * w, R1 * R2 * (p2dd - p1dd) * w
    beta = (R1 * (1 + p1) - R2 * (1 + p2)) * w, (R1 * p1d - R2 * p2d) * w, (R1 * p1dd - R2 * p2dd) * w
    rr = r[:, None]
    R = alpha[0] + beta[0] * rr
    r_t = -(alpha[1] + beta[1] * rr) / beta[0]
    r_tt = -(alpha[2] + beta[2] * rr) / beta[0] - 2 * beta[1] * r_t / beta[0]
    R2inv = 1.0 / R**2
    return DiffeoCoefficients(
        geom=geom,
        interfaces=rho,
        r=np.asarray(r),
        theta=theta,
        a_rr=1.0 / beta[0] ** 2 + r_t**2 * R2inv,
        a_r=1.0 / (beta[0] * R) + r_tt * R2inv,
        a_rt=2 * r_t * R2inv,
        a_tt=R2inv,
        beta=beta[0],
        rho=(p1, p2),
        rho_prime=(p1d, p2d),
    )


# --------------------------------------------------------------------------
# fields and solver


@dataclass(frozen=True)
class BoundaryData:
    """Fourier coefficients (modes 0..M) of the Dirichlet data on the outer and inner circle."""

    outer: np.ndarray
    inner: np.ndarray

    @classmethod
    def constant(cls, outer: float, inner: float, modes: int = 0) -> "BoundaryData":
        o = np.zeros(modes + 1, dtype=complex)
        i = np.zeros(modes + 1, dtype=complex)
        o[0], i[0] = outer, inner
        return cls(o, i)

    def __add__(self, other: "BoundaryData") -> "BoundaryData":
        return BoundaryData(self.outer + other.outer, self.inner + other.inner)

    def __mul__(self, s: float) -> "BoundaryData":
        return BoundaryData(self.outer * s, self.inner * s)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class AnnulusField:
    """Collocation values ``values[i, j] = v(r_i, theta_j)`` on the reference annulus."""

    values: np.ndarray
    radial: RadialGrid = field(repr=False)
    diffeo: DiffeoCoefficients = field(repr=False)
    kind: EquationKind
    residual: float
    iterations: int
    spectrum: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        # unnormalized rfft along theta; solvers pass it in so that a large
        # theta-independent background never picks up grid-point rounding
        if self.spectrum is None:
            object.__setattr__(self, "spectrum", np.fft.rfft(self.values, axis=1))

    @property
    def r(self) -> np.ndarray:
        return self.radial.r

    @property
    def theta(self) -> np.ndarray:
        return self.diffeo.theta

    @cached_property
    def coefficients(self) -> np.ndarray:
        """Angular Fourier coefficients per radius, shape ``(Nr, Ntheta//2 + 1)``."""
        return self.spectrum / self.values.shape[1]

    def mode_profile(self, m: int) -> np.ndarray:
        return self.coefficients[:, m]

    def trace(self, which: Literal["outer", "inner"]) -> np.ndarray:
        return self.values[-1 if which == "outer" else 0]


class AnnulusSolver:
    """Reusable solver for one geometry and one discretization.

    The per-mode LU factors of the ``rho = 0`` operator are cached per equation
    kind; they are the GMRES preconditioner and solve the ``rho = 0`` problem
    exactly.
    """

    def __init__(
        self,
        geom: GeometryParams,
        n_theta: int,
        radial: RadialGrid | None = None,
        tol: float = 1e-13,
        maxiter: int = 400,
    ):
        if n_theta % 2 == 0:
            raise ValueError("n_theta must be odd")
        self.geom = geom
        self.n_theta = n_theta
        self.radial = radial if radial is not None else RadialGrid.build(geom)
        self.tol = tol
        self.maxiter = maxiter
        self._factors: dict[float, tuple] = {}

    @property
    def shape(self) -> tuple[int, int]:
        return self.radial.n, self.n_theta

    def diffeo(self, rho: InterfacePair) -> DiffeoCoefficients:
        return build_diffeo(self.geom, rho, self.radial.r, self.n_theta)

    def _mode_factors(self, shift: float):
        """LU factors of the rho = 0 operator for every angular mode.

        Interior rows are scaled by ``r^2 / Nr^2``, which roughly halves the
        rounding error of the Chebyshev solve at large ``Nr``.
        """
        cached = self._factors.get(shift)
        if cached is None:
            r = self.radial.r
            n = r.size
            scale = r**2 / n**2
            scale[0] = scale[-1] = 1.0
            base = self.radial.D2 + self.radial.D1 / r[:, None] - shift * np.eye(n)
            factors = []
            for k in range(self.n_theta // 2 + 1):
                L = base - np.diag(k**2 / r**2)
                L[0, :] = 0.0
                L[-1, :] = 0.0
                L[0, 0] = L[-1, -1] = 1.0
                factors.append(sla.lu_factor(scale[:, None] * L, check_finite=False))
            cached = (scale, factors)
            self._factors[shift] = cached
        return cached

    def _precondition(self, W: np.ndarray, shift: float) -> np.ndarray:
        return np.fft.irfft(self._precondition_hat(W, shift), n=self.n_theta, axis=1)

    def _precondition_hat(self, W: np.ndarray, shift: float, What: np.ndarray | None = None) -> np.ndarray:
        scale, factors = self._mode_factors(shift)
        if What is None:
            What = np.fft.rfft(W, axis=1)
        What = What * scale[:, None]
        X = np.empty_like(What)
        for k, f in enumerate(factors):
            rhs = np.column_stack([What[:, k].real, What[:, k].imag])
            sol = sla.lu_solve(f, rhs, check_finite=False)
            X[:, k] = sol[:, 0] + 1j * sol[:, 1]
        return X

    def _derivatives(self, V: np.ndarray, Vh: np.ndarray | None = None):
        """``(V_r, V_rr, V_rtheta, V_thetatheta)`` with the radial matrices applied per Fourier mode.

        Acting on coefficients keeps the rounding error of a large
        theta-independent background inside mode 0.
        """
        D1, D2 = self.radial.D1, self.radial.D2
        nt = V.shape[1]
        if Vh is None:
            Vh = np.fft.rfft(V, axis=1)
        k = np.arange(Vh.shape[1])
        D1h = D1 @ Vh
        back = lambda c: np.fft.irfft(c, n=nt, axis=1)
        return back(D1h), back(D2 @ Vh), back(D1h * (1j * k)), back(Vh * -(k**2))

    def apply(self, d: DiffeoCoefficients, V: np.ndarray, shift: float) -> np.ndarray:
        """Discrete operator: interior rows ``Delta_Theta V - shift V``, boundary rows ``V``."""
        Vr, Vrr, Vrt, Vtt = self._derivatives(V)
        out = d.a_rr * Vrr + d.a_r * Vr + d.a_rt * Vrt + d.a_tt * Vtt
        out -= shift * V
        out[0] = V[0]
        out[-1] = V[-1]
        return out

    def apply_perturbation(self, d: DiffeoCoefficients, V: np.ndarray, Vh: np.ndarray | None = None) -> np.ndarray:
        """``(A_rho - A_0) V`` on interior rows, zero on boundary rows.

        Coefficient differences are formed directly, so the result is accurate
        in absolute terms even when it is tiny compared with ``V``.
        """
        r = d.r[:, None]
        Vr, Vrr, Vrt, Vtt = self._derivatives(V, Vh)
        out = (d.a_rr - 1.0) * Vrr + (d.a_r - 1.0 / r) * Vr + d.a_rt * Vrt + (d.a_tt - 1.0 / r**2) * Vtt
        out[0] = 0.0
        out[-1] = 0.0
        return out

    def solve(
        self,
        d: DiffeoCoefficients,
        kind: EquationKind,
        outer_values: np.ndarray,
        inner_values: np.ndarray,
        outer_mean: float = 0.0,
        inner_mean: float = 0.0,
    ) -> AnnulusField:
        if d.r.size != self.radial.n or d.theta.size != self.n_theta:
            raise DiscretizationMismatch("diffeomorphism built on a different grid")
        shift = _SHIFT[kind]
        nr, nt = self.shape
        B = np.zeros((nr, nt))
        B[-1] = outer_values
        B[0] = inner_values
        # constant parts of the data go straight into mode 0 (no grid rounding)
        Bh = np.fft.rfft(B, axis=1)
        Bh[-1, 0] += nt * outer_mean
        Bh[0, 0] += nt * inner_mean
        B[-1] += outer_mean
        B[0] += inner_mean
        X0h = self._precondition_hat(B, shift, Bh)
        X0 = np.fft.irfft(X0h, n=nt, axis=1)
        spectrum = X0h
        if d.interfaces.is_zero():
            X = X0
            iters = 0
            res = self._residual(d, X, B, shift)
        else:
            # Solve for the correction Y = X - X0 around the rho = 0 solution:
            # P^-1 A_rho Y = -P^-1 (A_rho - A_0) X0.  The right-hand side scales
            # with the perturbation, so the relative GMRES tolerance bounds the
            # error relative to Y and not to the (possibly large) background X0.
            n = nr * nt
            op = LinearOperator(
                (n, n), matvec=lambda x: self._precondition(self.apply(d, x.reshape(nr, nt), shift), shift).ravel()
            )
            rhs = -self._precondition(self.apply_perturbation(d, X0, X0h), shift)
            count = [0]

            def cb(_):
                count[0] += 1

            y, info = gmres(
                op, rhs.ravel(), rtol=self.tol, atol=0.0,
                restart=60, maxiter=self.maxiter, callback=cb, callback_type="pr_norm",
            )
            Y = y.reshape(nr, nt)
            X = X0 + Y
            spectrum = X0h + np.fft.rfft(Y, axis=1)
            iters = count[0]
            R = rhs - self._precondition(self.apply(d, Y, shift), shift)
            res = float(np.max(np.abs(R)) / max(np.max(np.abs(X)), 1e-300))
        if not np.isfinite(res) or res > max(1e3 * self.tol, 1e-10):
            raise SolverError(f"GMRES did not converge after {iters} iterations", res)
        return AnnulusField(X, self.radial, d, kind, res, iters, spectrum)

    def _residual(self, d, X, B, shift) -> float:
        """Preconditioned residual relative to the preconditioned right-hand side."""
        R = self._precondition(B - self.apply(d, X, shift), shift)
        scale = max(np.max(np.abs(X)), 1e-300)
        return float(np.max(np.abs(R)) / scale)

    def solve_data(self, rho: InterfacePair, kind: EquationKind, data: BoundaryData) -> AnnulusField:
        n = self.n_theta
        return self.solve(self.diffeo(rho), kind, fz.to_grid(data.outer, n), fz.to_grid(data.inner, n))


def solve_transformed(
    geom: GeometryParams,
    rho: InterfacePair,
    equation_kind: EquationKind,
    data: BoundaryData,
    *,
    nr: int | None = None,
    radial: str = "chebyshev",
    n_theta: int | None = None,
    solver: AnnulusSolver | None = None,
) -> AnnulusField:
    """Solve ``Delta_Theta v = v`` (helmholtz) or ``Delta_Theta q = 0`` (laplace) with Dirichlet data."""
    if solver is None:
        modes = max(rho.modes, data.outer.size - 1, data.inner.size - 1, 1)
        n_theta = n_theta or fz.padded_size(modes)
        solver = AnnulusSolver(geom, n_theta, RadialGrid.build(geom, nr, radial))
    return solver.solve_data(rho, equation_kind, data)


def boundary_gradient_values(field: AnnulusField, which: Literal["outer", "inner"]) -> np.ndarray:
    """``<grad(v o Theta^-1) | grad N_rho_i>`` at the boundary nodes of circle ``i``."""
    d = field.diffeo
    idx, i, Ri = (-1, 0, d.geom.R1) if which == "outer" else (0, 1, d.geom.R2)
    nt = field.values.shape[1]
    row = field.radial.D1[idx] @ field.spectrum
    k = np.arange(row.size)
    v_r = np.fft.irfft(row, n=nt)
    v_t = np.fft.irfft(field.spectrum[idx] * (1j * k), n=nt)
    s = 1.0 + d.rho[i]
    rp = d.rho_prime[i]
    return v_r / d.beta * (1.0 + (rp / s) ** 2) - rp * v_t / (Ri * s**2)


def boundary_gradient(field: AnnulusField, rho: InterfacePair, which: Literal["outer", "inner"]) -> np.ndarray:
    """Fourier coefficients (modes 0..Ntheta//2) of the normal-gradient trace on circle ``which``."""
    if not field.diffeo.interfaces.same_as(rho):
        raise DiscretizationMismatch("field was solved for different interfaces")
    vals = boundary_gradient_values(field, which)
    return np.fft.rfft(vals) / vals.size
