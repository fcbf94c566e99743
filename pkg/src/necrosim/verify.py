"""Invariant suite shared by ``necrosim verify``, the tests and the scripts.

Every check reports the measured quantity next to its tolerance.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
import math

import numpy as np

from .annulus import AnnulusSolver, RadialGrid, helmholtz_mode_solution, laplace_mode_solution
from .evolution import Discretization, PhiOperator
from .interfaces import InterfacePair, padded_size
from .linearization import fd_jacobian_mode, perturbation_jacobian, principal_symbol, spectrum_scan
from .specfun import bessel_i, bessel_k
from .stationary import GeometryParams, g0_nonexistence_certificate, solve_stationary


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<28s} measured={self.measured:.3e}  tol={self.tolerance:.1e}  {self.detail}"


def _below(name, measured, tol, detail="") -> Check:
    ok = bool(np.isfinite(measured) and measured < tol)
    return Check(name, float(measured), float(tol), ok, detail)


# --------------------------------------------------------------------------
# measurements


def wronskian_error(n: int = 200, lo: float = 1e-2, hi: float = 50.0) -> float:
    """``max |x (I0 K1 + I1 K0) - 1|`` on log-spaced points."""
    x = np.logspace(math.log10(lo), math.log10(hi), n)
    w = x * (bessel_i(0, x) * bessel_k(1, x) + bessel_i(1, x) * bessel_k(0, x))
    return float(np.max(np.abs(w - 1.0)))


def derivative_identity_error(n: int = 200, lo: float = 1e-2, hi: float = 50.0) -> float:
    """Relative error of ``I0' = I1`` and ``K0' = -K1`` against central differences."""
    x = np.logspace(math.log10(lo), math.log10(hi), n)
    h = 1e-5 * x
    dI = (bessel_i(0, x + h) - bessel_i(0, x - h)) / (2 * h)
    dK = (bessel_k(0, x + h) - bessel_k(0, x - h)) / (2 * h)
    e1 = np.abs(dI - bessel_i(1, x)) / np.abs(bessel_i(1, x))
    e2 = np.abs(dK + bessel_k(1, x)) / np.abs(bessel_k(1, x))
    return float(max(np.max(e1), np.max(e2)))


def solver_oracle_error(
    geom: GeometryParams,
    kind: str,
    m: int,
    nr: int,
    radial: str = "chebyshev",
    outer: float = 1.0,
    inner: float = 0.5,
) -> float:
    """Max nodal error of the 2-D solver at rho = 0 against the closed-form mode solution.

    Dirichlet data ``outer cos(m theta)`` and ``inner cos(m theta)``.
    """
    n_theta = padded_size(max(m, 1))
    solver = AnnulusSolver(geom, n_theta, RadialGrid.build(geom, nr, radial))
    rho = InterfacePair.zeros((n_theta - 1) // 2, 0.9 * geom.max_amplitude)
    d = solver.diffeo(rho)
    c = np.cos(m * d.theta)
    field = solver.solve(d, kind, outer * c, inner * c)
    mode = (laplace_mode_solution if kind == "laplace" else helmholtz_mode_solution)(geom, m, outer, inner)
    exact = np.real(mode(solver.radial.r))[:, None] * c[None, :]
    return float(np.max(np.abs(field.values - exact)))


def smooth_test_interfaces(modes: int, bound: float) -> InterfacePair:
    """Fixed band-limited pair (modes 1..3, sup norm about 0.03) used by the symmetry checks."""
    seeds = [
        (1, 1, 0.010, 0.3), (1, 2, 0.008, 1.1), (1, 3, 0.005, -0.4),
        (2, 1, 0.006, 0.9), (2, 2, 0.010, 2.0), (2, 3, 0.004, 0.1),
    ]
    return InterfacePair.from_seeds(modes, bound, seeds)


def rotation_defect(op: PhiOperator, X: InterfacePair, angle: float) -> float:
    P = op(X)
    Q = op(X.rotated(angle))
    ph = np.exp(-1j * np.arange(op.modes + 1) * angle)
    return float(max(np.max(np.abs(Q[0] - P[0] * ph)), np.max(np.abs(Q[1] - P[1] * ph))))


def reflection_defect(op: PhiOperator, X: InterfacePair) -> float:
    P = op(X)
    Q = op(X.reflected())
    return float(max(np.max(np.abs(Q[0] - np.conj(P[0]))), np.max(np.abs(Q[1] - np.conj(P[1])))))


def radial_closure_defect(op: PhiOperator, c1: float = 0.02, c2: float = -0.03) -> float:
    z1 = np.zeros(op.modes + 1, dtype=complex)
    z2 = np.zeros(op.modes + 1, dtype=complex)
    z1[0], z2[0] = c1, c2
    P = op(InterfacePair(z1, z2, op.amplitude_bound))
    return float(max(np.max(np.abs(P[0][1:])), np.max(np.abs(P[1][1:]))))


# --------------------------------------------------------------------------


@dataclass
class VerifyReport:
    geometry: tuple[float, float]
    psi0: float
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "geometry": {"r1": self.geometry[0], "r2": self.geometry[1]},
            "psi0": self.psi0,
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }


def run_suite(geom: GeometryParams = GeometryParams(2.0, 1.0), psi0: float = 1.0, modes: int = 16) -> VerifyReport:
    checks = [
        _below("bessel_wronskian", wronskian_error(), 1e-12, "200 pts in [1e-2, 50]"),
        _below("bessel_derivatives", derivative_identity_error(), 1e-6, "I0'=I1, K0'=-K1"),
    ]
    st = solve_stationary(geom, psi0)
    if not st.solvable:
        checks.append(Check("stationary_solvable", st.psi0_critical, psi0, False, "psi0 is critical"))
        return VerifyReport((geom.R1, geom.R2), psi0, checks)
    checks.append(_below("stationary_residual", max(map(abs, st.residuals)), 1e-10, f"A={st.A:.6g} G={st.G:.6g}"))
    cert = g0_nonexistence_certificate(geom.R1)
    checks.append(
        Check("g0_certificate", abs(cert.g_at_R1), 1e-12, cert.certified, f"min |g'| = {cert.min_margin:.3e}")
    )
    oracle = max(
        solver_oracle_error(geom, kind, m, 64) for kind in ("laplace", "helmholtz") for m in (0, 1, 4)
    )
    checks.append(_below("solver_oracle", oracle, 1e-8, "Nr=64 chebyshev, m in {0,1,4}"))

    bio = st.bio
    op = PhiOperator(geom, bio, Discretization(modes=modes))
    p0 = op(op.zero_interfaces())
    checks.append(_below("phi_stationary", max(np.max(np.abs(p0[0])), np.max(np.abs(p0[1]))), 1e-8))
    X = smooth_test_interfaces(modes, op.amplitude_bound)
    checks.append(_below("rotation_equivariance", rotation_defect(op, X, 0.7), 1e-10, "angle 0.7"))
    checks.append(_below("reflection_equivariance", reflection_defect(op, X), 1e-10))
    checks.append(_below("radial_closure", radial_closure_defect(op), 1e-10))

    scan = spectrum_scan(geom, 64)
    checks.append(
        Check("symbol_stability", scan.max_real_part, 0.0, scan.max_real_part < 0, "max Re(lambda), m=1..64")
    )
    m_hi = 32
    J = fd_jacobian_mode(geom, bio, m_hi)
    S = principal_symbol(geom, m_hi).matrix
    diag = max(abs(J[i, i] / S[i, i] - 1) for i in (0, 1))
    checks.append(_below("jacobian_vs_symbol", diag, 0.05, f"diagonal, m={m_hi}"))
    m_lo = 8
    Jl = fd_jacobian_mode(geom, bio, m_lo, phi=op)
    E = perturbation_jacobian(geom, bio, m_lo)
    rel = float(np.max(np.abs(Jl - E)) / np.max(np.abs(E)))
    checks.append(_below("jacobian_vs_perturbation", rel, 1e-5, f"m={m_lo}, closed-form oracle"))
    return VerifyReport((geom.R1, geom.R2), psi0, checks)
