"""Truncated Fourier representation of the two interface perturbations.

A real function on the unit circle is stored as its non-negative Fourier
coefficients ``c[0..M]`` with

    f(theta) = sum_{|m| <= M} c_m exp(i m theta),   c_{-m} = conj(c_m).

The interfaces are ``|x| = R_i (1 + rho_i(theta))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InterfaceCollision(RuntimeError):
    """An interface perturbation reached the admissibility bound."""

    def __init__(self, message: str, time: float | None = None):
        super().__init__(message)
        self.time = time


class DegenerateInterface(ValueError):
    """1 + rho vanishes somewhere, so the curve is not star-shaped."""


# --------------------------------------------------------------------------
# Fourier helpers (odd grid sizes avoid a Nyquist mode)


def padded_size(modes: int) -> int:
    """Odd collocation size >= 3M + 1, enough to dealias quadratic products."""
    n = 3 * modes + 1
    return n if n % 2 else n + 1


def to_grid(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Values of the real series on ``n`` equispaced points ``2 pi j / n``."""
    coeffs = np.asarray(coeffs)
    M = coeffs.shape[-1] - 1
    if n < 2 * M + 1:
        raise ValueError(f"grid of {n} points cannot represent {M} modes")
    full = np.zeros(coeffs.shape[:-1] + (n // 2 + 1,), dtype=complex)
    full[..., : M + 1] = coeffs
    return np.fft.irfft(full * n, n=n, axis=-1)


def from_grid(values: np.ndarray, modes: int) -> np.ndarray:
    """Fourier coefficients ``c[0..modes]`` of grid values (truncating)."""
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    c = np.fft.rfft(values, axis=-1) / n
    if modes + 1 > c.shape[-1]:
        out = np.zeros(c.shape[:-1] + (modes + 1,), dtype=complex)
        out[..., : c.shape[-1]] = c
        return out
    return c[..., : modes + 1]


def derivative(coeffs: np.ndarray, order: int = 1) -> np.ndarray:
    m = np.arange(np.shape(coeffs)[-1])
    return np.asarray(coeffs) * (1j * m) ** order


def grid_derivative(values: np.ndarray, order: int = 1) -> np.ndarray:
    """Spectral derivative along the last axis of values on an odd-sized grid."""
    n = values.shape[-1]
    c = np.fft.rfft(values, axis=-1)
    c *= (1j * np.arange(c.shape[-1])) ** order
    return np.fft.irfft(c, n=n, axis=-1)


def truncate(values: np.ndarray, modes: int) -> np.ndarray:
    """Project grid values onto |m| <= modes and return the filtered values."""
    n = values.shape[-1]
    return to_grid(from_grid(values, modes), n)


def sup_norm(coeffs: np.ndarray) -> float:
    """max |f|: local maxima on an 8M-point grid polished by Newton steps on the series."""
    c = np.asarray(coeffs, dtype=complex)
    M = c.shape[-1] - 1
    n = max(8 * M, 16) + 1
    a = np.abs(to_grid(c, n))
    if M == 0:
        return float(a.max())
    peaks = np.flatnonzero((a >= np.roll(a, 1)) & (a >= np.roll(a, -1)))
    m = np.arange(1, M + 1)
    t = 2 * np.pi * peaks / n
    best = a.max()
    for _ in range(4):
        e = c[None, 1:] * np.exp(1j * np.outer(t, m))
        d1 = -2 * (e.imag @ m)
        d2 = -2 * (e.real @ (m * m))
        step = np.divide(d1, d2, out=np.zeros_like(d1), where=d2 != 0)
        t = t - np.clip(step, -np.pi / n, np.pi / n)
        f = c[0].real + 2 * (c[None, 1:] * np.exp(1j * np.outer(t, m))).real.sum(axis=1)
        best = max(best, np.abs(f).max())
    return float(best)


def curvature_values(rho_values: np.ndarray) -> np.ndarray:
    """Pointwise curvature of ``r = 1 + rho(theta)`` from grid values (spectral derivatives)."""
    d1 = grid_derivative(rho_values, 1)
    d2 = grid_derivative(rho_values, 2)
    s = 1.0 + rho_values
    if np.any(s <= 0):
        raise DegenerateInterface("1 + rho <= 0: curve passes through the origin")
    return (s**2 + 2 * d1**2 - s * d2) / (s**2 + d1**2) ** 1.5


def curvature(rho: np.ndarray) -> np.ndarray:
    """Curvature coefficients of ``r = 1 + rho``, evaluated on a 3/2-padded grid.

    ``rho = 0`` gives 1 and constant ``rho = c`` gives ``1/(1+c)``.
    """
    rho = np.asarray(rho, dtype=complex)
    M = rho.shape[-1] - 1
    n = padded_size(max(M, 1))
    return from_grid(curvature_values(to_grid(rho, n)), M)


# --------------------------------------------------------------------------


def _real_series(c) -> np.ndarray:
    c = np.array(c, dtype=complex)
    if c.ndim != 1 or c.size < 1:
        raise ValueError("coefficient vector must be one-dimensional and non-empty")
    c[0] = c[0].real
    return c


@dataclass(frozen=True, eq=False)
class InterfacePair:
    """Fourier coefficients (modes 0..M) of the outer and inner perturbations."""

    rho1: np.ndarray
    rho2: np.ndarray
    amplitude_bound: float

    def __post_init__(self):
        r1, r2 = _real_series(self.rho1), _real_series(self.rho2)
        if r1.shape != r2.shape:
            raise ValueError("rho1 and rho2 need the same number of modes")
        if not np.all(np.isfinite(r1)) or not np.all(np.isfinite(r2)):
            raise ValueError("non-finite interface coefficients")
        if not self.amplitude_bound > 0:
            raise ValueError("amplitude bound must be positive")
        r1.flags.writeable = False
        r2.flags.writeable = False
        object.__setattr__(self, "rho1", r1)
        object.__setattr__(self, "rho2", r2)

    @classmethod
    def zeros(cls, modes: int, amplitude_bound: float) -> "InterfacePair":
        z = np.zeros(modes + 1, dtype=complex)
        return cls(z, z, amplitude_bound)

    @classmethod
    def from_seeds(cls, modes: int, amplitude_bound: float, seeds) -> "InterfacePair":
        """Build from ``(interface, m, amplitude, phase)`` tuples: ``amp cos(m theta + phase)``."""
        c = [np.zeros(modes + 1, dtype=complex), np.zeros(modes + 1, dtype=complex)]
        for interface, m, amp, phase in seeds:
            if interface not in (1, 2):
                raise ValueError(f"interface must be 1 or 2, got {interface}")
            if not 0 <= m <= modes:
                raise ValueError(f"mode {m} outside 0..{modes}")
            if m == 0:
                c[interface - 1][0] += amp * np.cos(phase)
            else:
                c[interface - 1][m] += 0.5 * amp * np.exp(1j * phase)
        return cls(c[0], c[1], amplitude_bound)

    @property
    def modes(self) -> int:
        return self.rho1.size - 1

    def component(self, i: int) -> np.ndarray:
        return self.rho1 if i == 1 else self.rho2

    def sup_norms(self) -> tuple[float, float]:
        return sup_norm(self.rho1), sup_norm(self.rho2)

    def values(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        return to_grid(self.rho1, n), to_grid(self.rho2, n)

    def is_zero(self) -> bool:
        return not (np.any(self.rho1) or np.any(self.rho2))

    def with_coeffs(self, rho1, rho2) -> "InterfacePair":
        return InterfacePair(rho1, rho2, self.amplitude_bound)

    def rotated(self, phi: float) -> "InterfacePair":
        """Interfaces rotated by ``phi``: f(theta) -> f(theta - phi)."""
        ph = np.exp(-1j * np.arange(self.modes + 1) * phi)
        return self.with_coeffs(self.rho1 * ph, self.rho2 * ph)

    def reflected(self) -> "InterfacePair":
        """f(theta) -> f(-theta)."""
        return self.with_coeffs(np.conj(self.rho1), np.conj(self.rho2))

    def check_admissible(self, time: float | None = None) -> None:
        s1, s2 = self.sup_norms()
        if max(s1, s2) >= self.amplitude_bound:
            raise InterfaceCollision(
                f"sup|rho| = ({s1:.4g}, {s2:.4g}) reached bound {self.amplitude_bound:.4g}",
                time=time,
            )

    def same_as(self, other: "InterfacePair") -> bool:
        return (
            self.rho1.shape == other.rho1.shape
            and np.array_equal(self.rho1, other.rho1)
            and np.array_equal(self.rho2, other.rho2)
        )
