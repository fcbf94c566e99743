"""Nonlinear interface evolution ``d/dt (rho1, rho2) = Phi(rho1, rho2)``.

``Phi`` is assembled from two Dirichlet solves on the reference annulus,

    nutrient  v:  Delta_Theta v = v,  v = G on r = R1,  v = G - psi0 on r = R2
    pressure  q:  Delta_Theta q = 0,
                  q = kappa(rho1)/R1 - A G R1^2 (1 + rho1)^2 / 4          on r = R1
                  q = -kappa(rho2)/R2 - A G R2^2 (1 + rho2)^2 / 4 - psi0  on r = R2

followed by the interface velocities

    Phi_i = (C_i v - C_i q) / R_i - A G (1 + rho_i) / 2

where ``C_i`` is ``R_i`` times the trace of ``<grad(. o Theta^-1) | grad N_rho_i>``
on circle ``i``.  At ``rho = 0`` this is ``(psi' - p' - A G R_i / 2) / R_i``,
so it vanishes exactly at stationary annuli.

Both fields are written as the pulled-back radial profile plus a correction.
The profile part and its gradient trace are evaluated in closed form, so the
large background never meets the discrete solver and ``Phi(0)`` is as accurate
as the radial residuals themselves.

Time stepping is first-order IMEX: the ``|m|^3`` principal multiplier is
implicit, the remainder ``Phi(rho) - P rho`` explicit.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
import logging
import math
from typing import Callable, Iterable

import numpy as np

from . import interfaces as fz
from .annulus import AnnulusSolver, RadialGrid, SolverError, boundary_gradient_values
from .interfaces import InterfaceCollision, InterfacePair
from .linearization import symbol_table
from .stationary import BioParams, GeometryParams, radial_profiles

log = logging.getLogger(__name__)

DEFAULT_BOUND_FRACTION = 0.9


class NumericalBlowup(RuntimeError):
    def __init__(self, message: str, time: float | None = None):
        super().__init__(message)
        self.time = time


def default_amplitude_bound(geom: GeometryParams) -> float:
    return DEFAULT_BOUND_FRACTION * geom.max_amplitude


@dataclass(frozen=True)
class Discretization:
    modes: int = 64
    nr: int | None = None
    radial: str = "chebyshev"
    tol: float = 1e-13


@dataclass(frozen=True)
class PhiEvaluation:
    """Velocity coefficients plus the correction fields (total field minus radial profile)."""

    phi: tuple[np.ndarray, np.ndarray]
    nutrient: object = field(repr=False)
    pressure: object = field(repr=False)

    @property
    def residual(self) -> float:
        return max(self.nutrient.residual, self.pressure.residual)

    @property
    def iterations(self) -> int:
        return self.nutrient.iterations + self.pressure.iterations


class PhiOperator:
    """``Phi`` for fixed geometry, parameters and discretization (solver caches reused)."""

    def __init__(
        self,
        geom: GeometryParams,
        bio: BioParams,
        disc: Discretization = Discretization(),
        amplitude_bound: float | None = None,
    ):
        self.geom = geom
        self.bio = bio
        self.disc = disc
        self.modes = disc.modes
        self.n_theta = fz.padded_size(disc.modes)
        self.amplitude_bound = default_amplitude_bound(geom) if amplitude_bound is None else amplitude_bound
        radial = RadialGrid.build(geom, disc.nr, disc.radial)
        self.solver = AnnulusSolver(geom, self.n_theta, radial, tol=disc.tol)
        self.profiles = radial_profiles(geom, bio)

    def zero_interfaces(self) -> InterfacePair:
        return InterfacePair.zeros(self.modes, self.amplitude_bound)

    def evaluate(self, X: InterfacePair) -> PhiEvaluation:
        if X.modes != self.modes:
            raise ValueError(f"interfaces carry {X.modes} modes, operator expects {self.modes}")
        geom, bio, prof = self.geom, self.bio, self.profiles
        R1, R2 = geom.R1, geom.R2
        AG = bio.A * bio.G
        M = self.modes
        d = self.solver.diffeo(X)
        p1, p2 = d.rho
        Rb1, Rb2 = R1 * (1 + p1), R2 * (1 + p2)
        # The radial profiles solve the physical equations everywhere, so their
        # pull-backs solve the transformed ones exactly.  Only the corrections
        # (data of size O(rho)) go through the discrete solver.
        v_out = fz.truncate(bio.G - prof.nutrient(Rb1), M)
        v_in = fz.truncate(bio.G - bio.psi0 - prof.nutrient(Rb2), M)
        k1, k2 = fz.curvature_values(p1), fz.curvature_values(p2)
        q_out = fz.truncate(k1 / R1 - AG * Rb1**2 / 4 - prof.pressure(Rb1), M)
        q_in = fz.truncate(-k2 / R2 - AG * Rb2**2 / 4 - bio.psi0 - prof.pressure(Rb2), M)
        v = self.solver.solve(d, "helmholtz", v_out, v_in)
        q = self.solver.solve(d, "laplace", q_out, q_in)
        out = []
        for which, Ri, Rb, p in (("outer", R1, Rb1, p1), ("inner", R2, Rb2, p2)):
            radial = prof.nutrient_prime(Rb) - prof.pressure_prime(Rb)
            grad = radial + boundary_gradient_values(v, which) - boundary_gradient_values(q, which)
            vals = grad / Ri - AG * (1 + p) / 2
            out.append(fz.from_grid(vals, M))
        return PhiEvaluation((out[0], out[1]), v, q)

    def __call__(self, X: InterfacePair) -> tuple[np.ndarray, np.ndarray]:
        return self.evaluate(X).phi


def assemble_phi(
    geom: GeometryParams,
    bio: BioParams,
    interfaces: InterfacePair,
    disc: Discretization | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """One-off evaluation of ``(Phi_1, Phi_2)`` as Fourier coefficients (modes 0..M)."""
    disc = disc or Discretization(modes=interfaces.modes)
    op = PhiOperator(geom, bio, disc, amplitude_bound=interfaces.amplitude_bound)
    return op(interfaces)


# --------------------------------------------------------------------------
# time stepping


@dataclass(frozen=True)
class EvolutionState:
    time: float
    interfaces: InterfacePair
    last_velocity: tuple[np.ndarray, np.ndarray]
    diagnostics: dict = field(default_factory=dict)


def _velocity_norm(phi) -> float:
    return float(max(np.max(np.abs(phi[0])), np.max(np.abs(phi[1]))))


class IMEXStepper:
    """First-order IMEX: ``(I - dt P) X_new = X + dt (Phi(X) - P X)`` per mode."""

    def __init__(self, phi: PhiOperator):
        self.phi = phi
        self.symbols = symbol_table(phi.geom, phi.modes)

    def initial_state(self, X: InterfacePair, time: float = 0.0) -> EvolutionState:
        X.check_admissible(time)
        ev = self.phi.evaluate(X)
        return EvolutionState(time, X, ev.phi, {"residual": ev.residual, "iterations": ev.iterations})

    def advance(self, state: EvolutionState, dt: float) -> InterfacePair:
        if not dt > 0:
            raise ValueError("dt must be positive")
        X = state.interfaces
        rho = np.stack([X.rho1, X.rho2], axis=-1)  # (M+1, 2)
        vel = np.stack(state.last_velocity, axis=-1)
        P = self.symbols
        rhs = rho + dt * (vel - np.einsum("mij,mj->mi", P, rho))
        lhs = np.eye(2)[None] - dt * P
        new = np.linalg.solve(lhs, rhs[..., None])[..., 0]
        t_new = state.time + dt
        if not np.all(np.isfinite(new)):
            raise NumericalBlowup("non-finite interface coefficients", time=t_new)
        return X.with_coeffs(new[:, 0], new[:, 1])

    def step(self, state: EvolutionState, dt: float) -> EvolutionState:
        X_new = self.advance(state, dt)
        t_new = state.time + dt
        X_new.check_admissible(t_new)
        ev = self.phi.evaluate(X_new)
        if not (np.all(np.isfinite(ev.phi[0])) and np.all(np.isfinite(ev.phi[1]))):
            raise NumericalBlowup("non-finite velocity", time=t_new)
        return EvolutionState(
            t_new, X_new, ev.phi, {"dt": dt, "residual": ev.residual, "iterations": ev.iterations}
        )


def step(
    state: EvolutionState,
    dt: float,
    geom: GeometryParams,
    bio: BioParams,
    disc: Discretization | None = None,
) -> EvolutionState:
    """Single IMEX step (builds a fresh operator; use :class:`IMEXStepper` in loops)."""
    X = state.interfaces
    disc = disc or Discretization(modes=X.modes)
    return IMEXStepper(PhiOperator(geom, bio, disc, X.amplitude_bound)).step(state, dt)


@dataclass
class Trajectory:
    states: list[EvolutionState]
    reason: str = "completed"
    message: str = ""
    rejected_steps: int = 0

    @property
    def final(self) -> EvolutionState:
        return self.states[-1]

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.states])


def evolve(
    initial: InterfacePair,
    t_end: float,
    dt_initial: float,
    geom: GeometryParams,
    bio: BioParams,
    callbacks: Iterable[Callable[[EvolutionState], None]] = (),
    *,
    disc: Discretization | None = None,
    output_every: int = 1,
    jump_factor: float = 10.0,
    velocity_floor: float = 1.0,
    dt_min: float | None = None,
    stepper: IMEXStepper | None = None,
) -> Trajectory:
    """Integrate from ``initial`` to ``t_end``.

    States are recorded (and passed to every callback) initially, every
    ``output_every`` accepted steps, and at the end.  A step is rejected and
    ``dt`` halved when the new velocity norm exceeds
    ``jump_factor * old + velocity_floor``.  Collisions, blowups and solver
    failures end the run with the partial trajectory and a ``reason``.
    """
    if t_end < 0 or not dt_initial > 0:
        raise ValueError("need t_end >= 0 and dt_initial > 0")
    if stepper is None:
        disc = disc or Discretization(modes=initial.modes)
        stepper = IMEXStepper(PhiOperator(geom, bio, disc, initial.amplitude_bound))
    dt_min = dt_initial * 2.0**-20 if dt_min is None else dt_min
    callbacks = list(callbacks)

    def emit(s):
        traj.states.append(s)
        for cb in callbacks:
            cb(s)

    traj = Trajectory([])
    state = stepper.initial_state(initial)
    emit(state)
    dt = dt_initial
    n_steps = 0
    t_tol = 1e-12 * max(1.0, t_end)
    try:
        while state.time < t_end - t_tol:
            h = min(dt, t_end - state.time)
            candidate = stepper.step(state, h)
            old = _velocity_norm(state.last_velocity)
            if _velocity_norm(candidate.last_velocity) > jump_factor * old + velocity_floor:
                traj.rejected_steps += 1
                dt = 0.5 * h
                if dt < dt_min:
                    raise NumericalBlowup("step size underflow after repeated rejections", time=state.time)
                log.debug("rejected step at t=%g, dt -> %g", state.time, dt)
                continue
            if abs(candidate.time - t_end) <= t_tol:
                candidate = replace(candidate, time=t_end)
            state = candidate
            n_steps += 1
            if n_steps % output_every == 0:
                emit(state)
    except InterfaceCollision as exc:
        traj.reason, traj.message = "InterfaceCollision", str(exc)
    except NumericalBlowup as exc:
        traj.reason, traj.message = "NumericalBlowup", str(exc)
    except SolverError as exc:
        traj.reason, traj.message = "SolverError", str(exc)
    if traj.states[-1] is not state:
        emit(state)
    return traj


def mode_amplitude(X: InterfacePair, m: int) -> float:
    """Euclidean norm of the mode-m coefficients of both interfaces."""
    return math.hypot(abs(X.rho1[m]), abs(X.rho2[m]))
