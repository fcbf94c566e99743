"""``necrosim`` command line: stationary, spectrum, evolve, verify, sweep.

Exit codes: 0 ok, 1 config error, 2 critical psi0 / not solvable,
3 verification failure, 4 runtime numerical failure.
"""

from __future__ import annotations

import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .annulus import SolverError
from .config import ConfigError, RunConfig, SeedConfig
from .evolution import Discretization, IMEXStepper, PhiOperator, evolve, mode_amplitude
from .interfaces import InterfaceCollision, InterfacePair, sup_norm
from .linearization import perturbation_jacobian, principal_symbol, spectrum_scan
from .specfun import BesselRangeError
from .stationary import BioParams, g0_nonexistence_certificate, solve_stationary
from .verify import run_suite

EXIT_OK, EXIT_CONFIG, EXIT_CRITICAL, EXIT_VERIFY, EXIT_RUNTIME = 0, 1, 2, 3, 4

log = logging.getLogger("necrosim")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


class NotSolvable(RuntimeError):
    pass


def _fmt(x) -> str:
    return repr(float(x))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (flags override it)")
    common.add_argument("--r1", type=float)
    common.add_argument("--r2", type=float)
    common.add_argument("--psi0", type=float)
    common.add_argument("--a", type=float, help="explicit A (requires --g)")
    common.add_argument("--g", type=float, help="explicit G (requires --a)")
    common.add_argument("--modes", type=int)
    common.add_argument("--nr", type=int)
    common.add_argument("--t-end", type=float)
    common.add_argument("--dt", type=float)
    common.add_argument("--out", help="output file (stationary, spectrum, verify, sweep) or directory (evolve)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="necrosim", description="Stationary annuli and interface evolution for the necrotic-core model.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("stationary", parents=[common], help="stationary (A, G), critical psi0, G=0 certificate")
    sp = sub.add_parser("spectrum", parents=[common], help="principal symbols per mode as CSV")
    sp.add_argument("--m-max", type=int)
    ev = sub.add_parser("evolve", parents=[common], help="integrate the interface evolution")
    ev.add_argument("--seed", action="append", default=None, metavar="I,M,AMP[,PHASE]",
                    help="perturbation amp*cos(M theta + PHASE) on interface I (repeatable)")
    ev.add_argument("--output-every", type=int)
    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    sw = sub.add_parser("sweep", parents=[common], help="stationary (A, G) over a psi0 or r2 range")
    sw.add_argument("--param", choices=["psi0", "r2"])
    sw.add_argument("--start", type=float)
    sw.add_argument("--stop", type=float)
    sw.add_argument("--num", type=int)
    sw.add_argument("--workers", type=int)
    return p


def _parse_seed(text: str) -> SeedConfig:
    parts = text.split(",")
    if len(parts) not in (3, 4):
        raise ConfigError(f"seed {text!r} must be I,M,AMP[,PHASE]")
    try:
        return SeedConfig(int(parts[0]), int(parts[1]), float(parts[2]), float(parts[3]) if len(parts) == 4 else 0.0)
    except ValueError:
        raise ConfigError(f"seed {text!r} must be I,M,AMP[,PHASE]") from None


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    g, b, d, t = cfg.geometry, cfg.bio, cfg.discretization, cfg.time
    if args.r1 is not None:
        g.r1 = args.r1
    if args.r2 is not None:
        g.r2 = args.r2
    if args.psi0 is not None:
        b.psi0 = args.psi0
    if (args.a is None) != (args.g is None):
        raise ConfigError("--a and --g must be given together")
    if args.a is not None:
        b.a, b.g, b.derive_stationary = args.a, args.g, False
    if args.modes is not None:
        d.modes = args.modes
    if args.nr is not None:
        d.nr = args.nr
    if args.t_end is not None:
        t.t_end = args.t_end
    if args.dt is not None:
        t.dt = args.dt
    if args.out is not None:
        cfg.output.out = args.out
    if getattr(args, "m_max", None) is not None:
        cfg.m_max = args.m_max
    if getattr(args, "output_every", None) is not None:
        t.output_every = args.output_every
    if getattr(args, "seed", None):
        cfg.seeds = [_parse_seed(s) for s in args.seed]
    for key in ("param", "start", "stop", "num", "workers"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg.sweep, "parameter" if key == "param" else key, val)
    cfg.validate()
    return cfg


def resolve_bio(cfg: RunConfig) -> BioParams:
    b = cfg.bio
    if not b.derive_stationary:
        return BioParams(float(b.a), float(b.g), float(b.psi0))
    st = solve_stationary(cfg.geometry_params(), b.psi0)
    if not st.solvable:
        raise NotSolvable(f"psi0={b.psi0} is critical (psi0_c={st.psi0_critical})")
    return st.bio


def _emit_text(text: str, path: str | None) -> None:
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)
    sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands


def cmd_stationary(cfg: RunConfig) -> int:
    geom = cfg.geometry_params()
    st = solve_stationary(geom, cfg.bio.psi0)
    cert = g0_nonexistence_certificate(geom.R1)
    report = {
        "geometry": {"r1": geom.R1, "r2": geom.R2},
        "psi0": st.psi0,
        "psi0_critical": st.psi0_critical,
        "solvable": st.solvable,
        "A": st.A if st.solvable else None,
        "G": st.G if st.solvable else None,
        "residuals": list(st.residuals) if st.solvable else None,
        "g0_certificate": {
            "R1": cert.R1,
            "samples": int(cert.x.size),
            "g_at_R1": cert.g_at_R1,
            "min_abs_g_prime": cert.min_margin,
            "certified": cert.certified,
        },
    }
    _emit_text(json.dumps(report, indent=2) + "\n", cfg.output.out)
    return EXIT_OK if st.solvable else EXIT_CRITICAL


def spectrum_rows(cfg: RunConfig) -> list[list]:
    scan = spectrum_scan(cfg.geometry_params(), cfg.m_max)
    rows = []
    for s in scan.symbols:
        M = s.matrix
        lam = sorted(s.eigenvalues.real, reverse=True)
        rows.append([s.mode, M[0, 0], M[0, 1], M[1, 0], M[1, 1], lam[0], lam[1]])
    return rows


def cmd_spectrum(cfg: RunConfig) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "A11", "A12", "A21", "A22", "lambda1", "lambda2"])
    for row in spectrum_rows(cfg):
        w.writerow([row[0]] + [_fmt(x) for x in row[1:]])
    _emit_text(buf.getvalue(), cfg.output.out)
    return EXIT_OK


def _decay_rows(geom, bio, traj, seeds) -> list[dict]:
    states = traj.states
    rows = []
    for m in sorted({s.mode for s in seeds if s.mode >= 1}):
        a0 = mode_amplitude(states[0].interfaces, m)
        a1 = mode_amplitude(states[-1].interfaces, m)
        t = states[-1].time - states[0].time
        if a0 == 0 or a1 == 0 or t <= 0:
            continue
        rate = float(np.log(a1 / a0) / t)
        lam_sym = principal_symbol(geom, m).dominant
        lam_jac = float(np.max(np.linalg.eigvals(perturbation_jacobian(geom, bio, m)).real))
        rows.append({
            "m": m,
            "measured_rate": rate,
            "symbol_eigenvalue": lam_sym,
            "jacobian_eigenvalue": lam_jac,
            "rel_err_symbol": abs(rate - lam_sym) / abs(lam_sym),
            "rel_err_jacobian": abs(rate - lam_jac) / abs(lam_jac) if lam_jac else None,
        })
    return rows


def cmd_evolve(cfg: RunConfig) -> int:
    geom = cfg.geometry_params()
    bio = resolve_bio(cfg)
    d = cfg.discretization
    bound = cfg.amplitude_bound()
    seeds = [(s.interface, s.mode, s.amplitude, s.phase) for s in cfg.seeds]
    X0 = InterfacePair.from_seeds(d.modes, bound, seeds)
    try:
        X0.check_admissible(0.0)
    except InterfaceCollision as exc:
        raise ConfigError(f"initial data not admissible: {exc}") from None
    op = PhiOperator(geom, bio, Discretization(modes=d.modes, nr=d.nr, radial=d.radial), amplitude_bound=bound)
    traj = evolve(
        X0, cfg.time.t_end, cfg.time.dt, geom, bio,
        stepper=IMEXStepper(op), output_every=cfg.time.output_every,
    )
    drift = max(
        max(sup_norm(s.interfaces.rho1 - X0.rho1), sup_norm(s.interfaces.rho2 - X0.rho2)) for s in traj.states
    )
    decay = _decay_rows(geom, bio, traj, cfg.seeds)
    manifest = {
        "config": cfg.to_dict(),
        "bio": {"A": bio.A, "G": bio.G, "psi0": bio.psi0},
        "amplitude_bound": bound,
        "reason": traj.reason,
        "message": traj.message,
        "t_final": traj.final.time,
        "snapshots": len(traj.states),
        "rejected_steps": traj.rejected_steps,
        "max_drift": drift,
        "decay": decay,
    }
    out = cfg.output.out
    if out:
        root = Path(out)
        root.mkdir(parents=True, exist_ok=True)
        with open(root / "modes.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "interface", "m", "re", "im"])
            for s in traj.states:
                for i, c in ((1, s.interfaces.rho1), (2, s.interfaces.rho2)):
                    for m, z in enumerate(c):
                        w.writerow([_fmt(s.time), i, m, _fmt(z.real), _fmt(z.imag)])
        with open(root / "samples.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "interface", "theta", "radius"])
            n = 64
            theta = 2 * np.pi * np.arange(n) / n
            for s in traj.states:
                v1, v2 = s.interfaces.values(n)
                for i, R, v in ((1, geom.R1, v1), (2, geom.R2, v2)):
                    for th, val in zip(theta, v):
                        w.writerow([_fmt(s.time), i, _fmt(th), _fmt(R * (1 + val))])
        if decay:
            with open(root / "decay.csv", "w", newline="") as fh:
                w = csv.DictWriter(fh, fieldnames=list(decay[0]), lineterminator="\n")
                w.writeheader()
                w.writerows(decay)
        (root / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    sys.stdout.write(json.dumps({k: manifest[k] for k in ("reason", "t_final", "max_drift", "decay")}, indent=2) + "\n")
    if traj.reason in ("NumericalBlowup", "SolverError"):
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    report = run_suite(cfg.geometry_params(), cfg.bio.psi0, modes=min(cfg.discretization.modes, 32))
    for c in report.checks:
        print(c.line())
    print("ALL PASS" if report.passed else "VERIFICATION FAILED")
    if cfg.output.out:
        Path(cfg.output.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.output.out).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


def _sweep_point(args) -> list:
    r1, r2, psi0 = args
    from .stationary import GeometryParams

    st = solve_stationary(GeometryParams(r1, r2), psi0)
    return [r1, r2, psi0, st.solvable, st.A, st.G, st.psi0_critical, st.residuals[0], st.residuals[1]]


def sweep_points(cfg: RunConfig) -> list[tuple[float, float, float]]:
    sw = cfg.sweep
    values = np.linspace(sw.start, sw.stop, sw.num)
    r1, r2, psi0 = cfg.geometry.r1, cfg.geometry.r2, cfg.bio.psi0
    if sw.parameter == "psi0":
        if np.any(values <= 0):
            raise ConfigError("psi0 sweep values must be positive")
        return [(r1, r2, float(v)) for v in values]
    if np.any(values <= 0) or np.any(values >= r1):
        raise ConfigError("r2 sweep values must lie in (0, r1)")
    return [(r1, float(v), psi0) for v in values]


def cmd_sweep(cfg: RunConfig) -> int:
    points = sweep_points(cfg)
    if cfg.sweep.workers > 1:
        with ProcessPoolExecutor(cfg.sweep.workers) as pool:
            rows = list(pool.map(_sweep_point, points))
    else:
        rows = [_sweep_point(p) for p in points]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r1", "r2", "psi0", "solvable", "A", "G", "psi0_critical", "res1", "res2"])
    for r in rows:
        w.writerow([_fmt(r[0]), _fmt(r[1]), _fmt(r[2]), int(r[3])] + [_fmt(x) for x in r[4:]])
    _emit_text(buf.getvalue(), cfg.output.out)
    return EXIT_OK


COMMANDS = {
    "stationary": cmd_stationary,
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NotSolvable as exc:
        print(f"not solvable: {exc}", file=sys.stderr)
        return EXIT_CRITICAL
    except (SolverError, BesselRangeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
