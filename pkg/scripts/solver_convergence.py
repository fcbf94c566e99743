"""Error of the annulus solver at rho = 0 against closed-form mode solutions, per radial grid size."""

import argparse

from necrosim.stationary import GeometryParams
from necrosim.verify import solver_oracle_error


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r1", type=float, default=2.0)
    ap.add_argument("--r2", type=float, default=1.0)
    ap.add_argument("--modes", type=int, nargs="+", default=[0, 1, 4, 16])
    ap.add_argument("--nr", type=int, nargs="+", default=[16, 32, 64, 128, 256])
    args = ap.parse_args()
    geom = GeometryParams(args.r1, args.r2)
    print(f"{'radial':>9s} {'kind':>9s} {'m':>3s} " + " ".join(f"{'Nr=' + str(n):>10s}" for n in args.nr) + "   last ratio")
    for radial in ("fd2", "chebyshev"):
        for kind in ("laplace", "helmholtz"):
            for m in args.modes:
                errs = [solver_oracle_error(geom, kind, m, n, radial, 1.0, 0.3) for n in args.nr]
                ratio = errs[-2] / errs[-1] if errs[-1] > 0 else float("inf")
                print(f"{radial:>9s} {kind:>9s} {m:3d} " + " ".join(f"{e:10.2e}" for e in errs) + f"   {ratio:8.2f}")


if __name__ == "__main__":
    main()
