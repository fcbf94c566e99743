"""Stationary (A, G) and the critical psi0 over a geometry/psi0 lattice, as CSV on stdout.

Residuals are reported both absolutely and relative to the size of their terms.
"""

import argparse
import csv
import sys

from necrosim.stationary import GeometryParams, solve_stationary


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r1", type=float, nargs="+", default=[0.5, 1.0, 2.0, 5.0])
    ap.add_argument("--ratio", type=float, nargs="+", default=[0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    ap.add_argument("--psi0", type=float, nargs="+", default=[0.1, 1.0, 10.0])
    args = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["r1", "r2", "psi0", "psi0_critical", "A", "G", "max_abs_residual", "relative_residual"])
    for r1 in args.r1:
        for q in args.ratio:
            geom = GeometryParams(r1, q * r1)
            for psi0 in args.psi0:
                st = solve_stationary(geom, psi0)
                if not st.solvable:
                    w.writerow([r1, geom.R2, psi0, st.psi0_critical, "", "", "", ""])
                    continue
                res = max(map(abs, st.residuals))
                scale = max(1.0, abs(st.A * st.G) * r1, abs(st.G))
                w.writerow([r1, geom.R2, psi0, st.psi0_critical, st.A, st.G, f"{res:.3e}", f"{res / scale:.3e}"])


if __name__ == "__main__":
    main()
