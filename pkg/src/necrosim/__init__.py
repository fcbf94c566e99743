"""Stationary annuli and interface evolution for a two-interface necrotic-core tumour model."""

from .stationary import (
    BioParams,
    GeometryParams,
    g0_nonexistence_certificate,
    psi0_critical,
    radial_profiles,
    solve_stationary,
)
from .interfaces import InterfaceCollision, InterfacePair, curvature
from .annulus import AnnulusSolver, solve_transformed
from .linearization import fd_jacobian_mode, perturbation_jacobian, principal_symbol, spectrum_scan
from .evolution import Discretization, NumericalBlowup, PhiOperator, assemble_phi, evolve, step

__all__ = [
    "AnnulusSolver",
    "BioParams",
    "Discretization",
    "GeometryParams",
    "InterfaceCollision",
    "InterfacePair",
    "NumericalBlowup",
    "PhiOperator",
    "assemble_phi",
    "curvature",
    "evolve",
    "fd_jacobian_mode",
    "g0_nonexistence_certificate",
    "perturbation_jacobian",
    "principal_symbol",
    "psi0_critical",
    "radial_profiles",
    "solve_stationary",
    "solve_transformed",
    "spectrum_scan",
    "step",
]
