"""Finite-difference Jacobian of the interface velocities at the stationary annulus, per mode,
next to the closed-form perturbation Jacobian and the principal |m|^3 symbol."""

import argparse

import numpy as np

from necrosim.linearization import fd_jacobian_mode, perturbation_jacobian, symbol_matrix
from necrosim.stationary import GeometryParams, solve_stationary


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r1", type=float, default=2.0)
    ap.add_argument("--r2", type=float, default=1.0)
    ap.add_argument("--psi0", type=float, default=1.0)
    ap.add_argument("--modes", type=int, nargs="+", default=[0, 1, 2, 4, 8, 16, 32])
    ap.add_argument("--epsilon", type=float, default=1e-4)
    args = ap.parse_args()
    geom = GeometryParams(args.r1, args.r2)
    bio = solve_stationary(geom, args.psi0).bio
    print(f"A={bio.A:.6g} G={bio.G:.6g} AG={bio.A * bio.G:.6g}")
    print(f"{'m':>3s} {'|J-E|/|E|':>10s} {'J11/A11':>8s} {'J12/A12':>8s} {'J21/A21':>8s} {'J22/A22':>8s} "
          f"{'max eig J':>10s} {'max eig A':>10s}")
    for m in args.modes:
        J = fd_jacobian_mode(geom, bio, m, args.epsilon)
        E = perturbation_jacobian(geom, bio, m)
        err = np.max(np.abs(J - E)) / np.max(np.abs(E))
        eig_j = np.max(np.linalg.eigvals(J).real)
        if m == 0:
            print(f"{m:3d} {err:10.2e} {'-':>8s} {'-':>8s} {'-':>8s} {'-':>8s} {eig_j:10.3f} {0.0:10.3f}")
            continue
        A = symbol_matrix(geom, m)
        r = (J / A).ravel()
        eig_a = np.max(np.linalg.eigvals(A).real)
        print(f"{m:3d} {err:10.2e} " + " ".join(f"{x:8.4f}" for x in r) + f" {eig_j:10.3f} {eig_a:10.3f}")


if __name__ == "__main__":
    main()
