"""Command-line interface: run trajectories, convergence studies, and the
verification suites.

Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import AcflowError
from .grid import Grid
from .harness import InvariantViolation, RunConfig, converge, init_random, init_sine, run
from .potentials import make_potential, make_sigma
from .schemes import SchemeConfig
from .timestep import AdaptiveStepping, UniformStepping

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--grid-m", type=int, default=128)
    p.add_argument("--grid-l", type=float, default=1.0)
    p.add_argument("--boundary", choices=["periodic", "neumann"], default="periodic")
    p.add_argument("--potential", choices=["double-well", "flory-huggins"],
                   default="double-well")
    p.add_argument("--theta", type=float, default=0.8)
    p.add_argument("--theta-c", type=float, default=1.6)
    p.add_argument("--sigma", choices=["const", "exp", "arctan", "tanh"], default="exp")
    p.add_argument("--sigma-a", type=float, default=1.0)
    p.add_argument("--scheme", choices=["ei1", "ei2", "stab1"], default="ei2")
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--kappa", type=float, default=None,
                   help="stabilizing constant; defaults to the Lipschitz bound")
    p.add_argument("--tau", type=float, default=0.01)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--tau-min", type=float, default=0.0001)
    p.add_argument("--tau-max", type=float, default=0.1)
    p.add_argument("--alpha", type=float, default=1e5)
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--init", choices=["sine", "random"], default="sine")
    p.add_argument("--amplitude", type=float, default=0.1)
    p.add_argument("--lo", type=float, default=-0.8)
    p.add_argument("--hi", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--snapshot-every", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="acflow",
                     description="Structure-preserving exponential integrators "
                                 "for Allen-Cahn type gradient flows")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", parents=[], help="integrate one trajectory")
    _add_common(p_run)
    p_run.add_argument("--check-invariants", action="store_true",
                       help="assert MBP and modified-energy decay per step")

    p_conv = sub.add_parser("converge", help="temporal convergence sweep")
    _add_common(p_conv)
    p_conv.add_argument("--taus", type=str, required=True,
                        help="comma-separated list of step sizes")
    p_conv.add_argument("--tau-ref", type=float, required=True)

    p_ver = sub.add_parser("verify", help="run the verification suites")
    _add_common(p_ver)
    p_ver.add_argument("--profile", nargs="*",
                       choices=["lemmas", "invariants", "oracles"],
                       default=["lemmas", "invariants", "oracles"])
    return parser


def _build_setup(args):
    grid = Grid(args.grid_m, args.grid_l, args.boundary)
    potential = make_potential(args.potential, args.theta, args.theta_c)
    sigma = make_sigma(args.sigma, args.sigma_a)
    kappa = args.kappa if args.kappa is not None else potential.lipschitz
    scfg = SchemeConfig(eps=args.eps, kappa=kappa, potential=potential,
                        sigma=sigma, scheme=args.scheme)
    if args.init == "sine":
        u0 = init_sine(grid, args.amplitude)
    else:
        u0 = init_random(grid, args.lo, args.hi, args.seed)
    if np.max(np.abs(u0)) > potential.beta:
        raise ValueError(
            f"initial data exceeds the bound beta={potential.beta}; "
            "the pointwise-bound hypothesis would not hold")
    return grid, scfg, u0


def _cmd_run(args) -> int:
    grid, scfg, u0 = _build_setup(args)
    if args.adaptive:
        stepping = AdaptiveStepping(args.tau_min, args.tau_max, args.alpha)
    else:
        stepping = UniformStepping(args.tau)
    cfg = RunConfig(grid=grid, scheme=scfg, stepping=stepping, t_end=args.t_end,
                    out_dir=args.out, snapshot_every=args.snapshot_every,
                    check_invariants=args.check_invariants)
    state, rows = run(u0, cfg)
    last = rows[-1]
    print(f"finished: steps={state.step} t={state.t:.6g} "
          f"sup_norm={last.sup_norm:.6g} energy={last.energy:.6g} "
          f"modified_energy={last.modified_energy:.6g}")
    return EXIT_OK


def _cmd_converge(args) -> int:
    grid, scfg, u0 = _build_setup(args)
    taus = [float(t) for t in args.taus.split(",") if t.strip()]
    if not taus:
        raise ValueError("empty --taus list")
    report = converge(grid, scfg, u0, args.t_end, taus, args.tau_ref)
    print("tau,l2_error,linf_error")
    for e in report["entries"]:
        print(f"{e['tau']:.17g},{e['l2_error']:.17g},{e['linf_error']:.17g}")
    print(f"slope,{report['slope']:.6g}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import verify_suite
    report = verify_suite(tuple(args.profile), seed=args.seed or 20240817,
                          kappa=args.kappa)
    print(json.dumps(report, indent=2))
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "converge":
            return _cmd_converge(args)
        return _cmd_verify(args)
    except (InvariantViolation, AcflowError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
