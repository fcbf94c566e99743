"""Decay of a small single-mode perturbation of the stationary annulus, compared with the
dominant eigenvalues of the principal symbol and of the full linearization."""

import argparse
import math

import numpy as np
from scipy.linalg import expm

from necrosim.evolution import Discretization, IMEXStepper, PhiOperator, evolve, mode_amplitude
from necrosim.interfaces import InterfacePair
from necrosim.linearization import perturbation_jacobian, principal_symbol
from necrosim.stationary import GeometryParams, solve_stationary


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r1", type=float, default=2.0)
    ap.add_argument("--r2", type=float, default=1.0)
    ap.add_argument("--psi0", type=float, default=1.0)
    ap.add_argument("--mode", type=int, nargs="+", default=[2, 4, 8, 16])
    ap.add_argument("--epsilon", type=float, default=1e-4)
    ap.add_argument("--t-end", type=float, default=0.01)
    ap.add_argument("--dt", type=float, default=1e-4)
    ap.add_argument("--modes", type=int, default=32)
    args = ap.parse_args()
    geom = GeometryParams(args.r1, args.r2)
    bio = solve_stationary(geom, args.psi0).bio
    op = PhiOperator(geom, bio, Discretization(modes=args.modes))
    stepper = IMEXStepper(op)
    print(f"{'m':>3s} {'rate':>10s} {'linear':>10s} {'symbol':>10s} {'jacobian':>10s} {'gap sym':>8s} {'gap jac':>8s}")
    for m in args.mode:
        X0 = InterfacePair.from_seeds(args.modes, op.amplitude_bound, [(1, m, args.epsilon, 0.0)])
        tr = evolve(X0, args.t_end, args.dt, geom, bio, stepper=stepper, output_every=10**9)
        rate = math.log(mode_amplitude(tr.final.interfaces, m) / mode_amplitude(X0, m)) / tr.final.time
        lam_s = principal_symbol(geom, m).dominant
        J = perturbation_jacobian(geom, bio, m)
        lam_j = float(np.max(np.linalg.eigvals(J).real))
        # exact linear evolution of the seeded vector (includes non-normal transients)
        x = expm(J * tr.final.time) @ np.array([1.0, 0.0])
        lin = math.log(float(np.hypot(*x))) / tr.final.time
        gap_j = abs(rate / lam_j - 1) if lam_j else float("nan")
        print(f"{m:3d} {rate:10.3f} {lin:10.3f} {lam_s:10.3f} {lam_j:10.3f} {abs(rate / lam_s - 1):8.3f} {gap_j:8.3f}")


if __name__ == "__main__":
    main()
