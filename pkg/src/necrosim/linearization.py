"""Principal Fourier-multiplier part of the linearized interface evolution at rho = 0.

For mode ``m != 0`` write ``q = (R2/R1)^|m|``.  Then

    S/D = (1 + q^2) / (1 - q^2),    2/D = 2 q / (1 - q^2)

with ``D = (R1/R2)^|m| - (R2/R1)^|m|`` and ``S = (R1/R2)^|m| + (R2/R1)^|m|``,
and the 2x2 symbol is

    [[-(S/D) / R1^3,        -(2/D) / (R1^2 R2)],
     [-(2/D) / (R1 R2^2),   -(S/D) / R2^3     ]] * |m|^3.

Written in ``q`` the entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .annulus import helmholtz_mode_solution, laplace_mode_solution
from .stationary import BioParams, GeometryParams, radial_profiles


@dataclass(frozen=True)
class ModeSymbol:
    mode: int
    matrix: np.ndarray
    eigenvalues: np.ndarray

    @property
    def dominant(self) -> float:
        """Eigenvalue with the largest real part (slowest decay)."""
        return float(np.max(self.eigenvalues.real))


def symbol_ratios(geom: GeometryParams, m: int) -> tuple[float, float]:
    """``(S/D, 2/D)`` for mode m (zeros for m = 0)."""
    m = abs(int(m))
    if m == 0:
        return 0.0, 0.0
    q = (geom.R2 / geom.R1) ** m
    den = 1.0 - q * q
    return (1.0 + q * q) / den, 2.0 * q / den


def symbol_matrix(geom: GeometryParams, m: int) -> np.ndarray:
    R1, R2 = geom.R1, geom.R2
    sd, td = symbol_ratios(geom, m)
    m3 = abs(int(m)) ** 3
    return -m3 * np.array(
        [
            [sd / R1**3, td / (R1**2 * R2)],
            [td / (R1 * R2**2), sd / R2**3],
        ]
    )


def principal_symbol(geom: GeometryParams, m: int) -> ModeSymbol:
    """2x2 principal multiplier of mode m and its eigenvalues (m = 0 gives zeros)."""
    mat = symbol_matrix(geom, m)
    eig = np.linalg.eigvals(mat).astype(complex)
    eig = eig[np.argsort(-eig.real)]
    return ModeSymbol(int(m), mat, eig)


def symbol_table(geom: GeometryParams, modes: int) -> np.ndarray:
    """Stacked symbol matrices for m = 0..modes, shape ``(modes + 1, 2, 2)``."""
    return np.stack([symbol_matrix(geom, m) for m in range(modes + 1)])


@dataclass(frozen=True)
class SpectrumScan:
    symbols: list[ModeSymbol]
    max_real_part: float


def spectrum_scan(geom: GeometryParams, m_max: int) -> SpectrumScan:
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    syms = [principal_symbol(geom, m) for m in range(m_max + 1)]
    worst = max(s.dominant for s in syms[1:])
    return SpectrumScan(syms, worst)


def perturbation_jacobian(geom: GeometryParams, bio: BioParams, m: int) -> np.ndarray:
    """Exact mode-m Jacobian of the velocities at rho = 0 by classical perturbation of the
    radial solution (closed-form Bessel and power modes, no 2-D solve).

    With interfaces ``r = R_j (1 + eps_j cos m theta)`` the first-order nutrient and
    pressure corrections solve the constant-coefficient mode problems with data
    obtained by shifting the boundary conditions to the unperturbed circles; the
    velocity is then linearized at the moved interface.
    """
    m = abs(int(m))
    R = (geom.R1, geom.R2)
    AG = bio.A * bio.G
    prof = radial_profiles(geom, bio)
    a_log = prof.a_log
    psi_p = [float(prof.nutrient_prime(r)) for r in R]
    u_pp = [float(prof.nutrient(r)) - psi_p[k] / R[k] + a_log / R[k] ** 2 for k, r in enumerate(R)]
    bend = m * m - 1.0
    jac = np.zeros((2, 2))
    for j in range(2):
        Rj = R[j]
        psi_data = [0.0, 0.0]
        p_data = [0.0, 0.0]
        psi_data[j] = -psi_p[j] * Rj
        curv = bend / Rj if j == 0 else -bend / Rj
        p_data[j] = curv - AG * Rj**2 / 2 - a_log
        v1 = helmholtz_mode_solution(geom, m, psi_data[0], psi_data[1])
        q1 = laplace_mode_solution(geom, m, p_data[0], p_data[1])
        for i in range(2):
            Ri = R[i]
            val = float(np.real(v1.derivative(Ri) - q1.derivative(Ri))) / Ri
            if i == j:
                val += u_pp[i] - AG / 2
            jac[i, j] = val
    return jac


def fd_jacobian_mode(
    geom: GeometryParams,
    bio: BioParams,
    m: int,
    epsilon: float = 1e-4,
    phi=None,
) -> np.ndarray:
    """Central-difference Jacobian of Phi at 0 in the directions ``(eps cos m theta, 0)``
    and ``(0, eps cos m theta)``, projected back onto ``cos m theta``.

    ``phi`` is an optional :class:`necrosim.evolution.PhiOperator`; by default
    one with ``max(2m, 8)`` modes is built.
    """
    from .evolution import Discretization, PhiOperator

    if not 1e-7 <= epsilon <= 1e-3:
        raise ValueError("epsilon must lie in [1e-7, 1e-3]")
    m = abs(int(m))
    if phi is None:
        phi = PhiOperator(geom, bio, Discretization(modes=max(2 * m, 8)))
    if m > phi.modes:
        raise ValueError(f"mode {m} exceeds the {phi.modes} modes of the operator")
    bound = phi.amplitude_bound
    jac = np.zeros((2, 2))
    for j in (1, 2):
        cols = []
        for sign in (1.0, -1.0):
            X = phi.zero_interfaces()
            seeded = X.from_seeds(phi.modes, bound, [(j, m, sign * epsilon, 0.0)])
            cols.append(phi(seeded))
        for i in (0, 1):
            d = (cols[0][i][m] - cols[1][i][m]) / (2 * epsilon)
            jac[i, j - 1] = d.real if m == 0 else 2 * d.real
    return jac
