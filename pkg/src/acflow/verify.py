"""Numerical verification suites for the provable structure of the schemes:
sampled lemma bounds, spectral-vs-dense oracle agreement, and trajectory
invariants (pointwise bound, modified-energy decay, auxiliary-variable bound).
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .errors import AcflowError
from .expkernel import StabilizedOperator, dense_expm, dense_phi1m, phi1
from .grid import Grid, dense_laplacian
from .harness import InvariantViolation, RunConfig, init_random, run
from .potentials import DoubleWell, ExpSigma, FloryHuggins, total_energy
from .schemes import SchemeConfig
from .timestep import UniformStepping

PROFILES = ("lemmas", "invariants", "oracles")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.passed)  # numpy bools are not JSON serializable


def _sampled_stabilization_bound(results, seed):
    # |f(x) + kappa x| <= kappa * beta on [-beta, beta] when kappa is at
    # least the Lipschitz bound of f there.
    rng = np.random.default_rng(seed)
    for pot in (DoubleWell(), FloryHuggins()):
        xs = rng.uniform(-pot.beta, pot.beta, 10_000)
        kappa = pot.lipschitz
        excess = float(np.max(np.abs(pot.f(xs) + kappa * xs)) - kappa * pot.beta)
        results.append(CheckResult(
            f"stabilization-bound[{pot.name}]", excess <= 1e-12,
            f"max |f(x)+kx| - k*beta = {excess:.3e}"))


def _contraction_bound(results, seed):
    # ||e^{a Lap - b I}||_inf <= e^{-b} for a, b >= 0.
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for boundary in ("periodic", "neumann"):
        grid = Grid(6, 1.0, boundary)
        lap = dense_laplacian(grid)
        for _ in range(25):
            a = rng.uniform(0.0, 0.2)
            b = rng.uniform(0.0, 5.0)
            mat = dense_expm(a * lap - b * np.eye(lap.shape[0]))
            norm = float(np.max(np.sum(np.abs(mat), axis=1)))
            worst = max(worst, norm - np.exp(-b))
    results.append(CheckResult(
        "semigroup-contraction", worst <= 1e-12,
        f"max ||e^(a*Lap - b*I)||_inf - e^(-b) = {worst:.3e}"))


def _phi1_inequalities(results, seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(1e-12, 50.0, 10_000)
    p = phi1(-a)
    ok = (np.all((0 < 1 - np.exp(-a)) & (1 - np.exp(-a) < a))
          and np.all((0 < p) & (p < 1))
          and np.all((1 < (1 + a) * p) & ((1 + a) * p < 2)))
    results.append(CheckResult("phi1-inequalities", bool(ok),
                               "sampled a in (0, 50], 10^4 points"))


def _summation_by_parts(results, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for boundary in ("periodic", "neumann"):
        grid = Grid(12, 1.0, boundary)
        for _ in range(100):
            v = rng.standard_normal((grid.m, grid.m))
            w = rng.standard_normal((grid.m, grid.m))
            lhs = grid.inner(v, grid.laplacian(w))
            gv, gw = grid.gradient(v), grid.gradient(w)
            rhs = -(grid.inner(gv[0], gw[0]) + grid.inner(gv[1], gw[1]))
            sym = grid.inner(grid.laplacian(v), w)
            scale = max(1.0, abs(lhs))
            worst = max(worst, abs(lhs - rhs) / scale, abs(lhs - sym) / scale)
    results.append(CheckResult(
        "summation-by-parts", worst <= 1e-12,
        f"max relative defect = {worst:.3e}"))


def _kernel_oracles(results, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for boundary in ("periodic", "neumann"):
        grid = Grid(8, 1.0, boundary)
        for _ in range(25):
            c = rng.uniform(0.1, 5.0)
            eps2 = rng.uniform(1e-4, 0.05)
            tau = rng.uniform(1e-3, 1.0)
            v = rng.standard_normal((grid.m, grid.m))
            op = StabilizedOperator(grid, c, eps2)
            dense = op.dense_matrix()
            flat = v.ravel()
            ref_exp = (dense_expm(-tau * dense) @ flat).reshape(v.shape)
            ref_phi = (dense_phi1m(-tau * dense) @ flat).reshape(v.shape)
            err_exp = grid.norm2(op.apply_exp(tau, v) - ref_exp) / grid.norm2(ref_exp)
            err_phi = grid.norm2(op.apply_phi1(tau, v) - ref_phi) / grid.norm2(ref_phi)
            worst = max(worst, err_exp, err_phi)
    results.append(CheckResult(
        "exp-kernel-oracle", worst <= 1e-9,
        f"max relative L2 error vs dense = {worst:.3e}"))


def _trajectory_invariants(results, seed, kappa=None):
    for pot in (DoubleWell(), FloryHuggins()):
        k = pot.lipschitz if kappa is None else kappa
        name = f"trajectory-invariants[{pot.name}]"
        hypothesis = "" if k >= pot.lipschitz else (
            f" [hypothesis violated: kappa={k} < Lipschitz bound {pot.lipschitz}]")
        try:
            grid = Grid(32)
            for scheme in ("ei1", "ei2"):
                for tau in (0.01, 0.1, 1.0):
                    scfg = SchemeConfig(eps=0.01, kappa=k, potential=pot,
                                        sigma=ExpSigma(1.0), scheme=scheme)
                    u0 = init_random(grid, -0.8, 0.8, seed)
                    cfg = RunConfig(grid=grid, scheme=scfg,
                                    stepping=UniformStepping(tau),
                                    t_end=max(2.0, 5 * tau),
                                    check_invariants=True)
                    _, rows = run(u0, cfg)
                    e0 = total_energy(grid, pot, u0, scfg.eps)
                    if any(r.s > e0 + 1e-10 for r in rows):
                        raise InvariantViolation(
                            f"auxiliary variable exceeded E(u0)={e0}", rows[-1])
            results.append(CheckResult(name, True, "MBP, energy decay, s-bound"))
        except AcflowError as exc:
            results.append(CheckResult(name, False, f"{exc}{hypothesis}"))


def verify_suite(profiles=PROFILES, seed: int = 20240817, kappa=None) -> dict:
    """Run the requested check profiles; returns a machine-readable report."""
    unknown = set(profiles) - set(PROFILES)
    if unknown:
        raise ValueError(f"unknown verify profiles: {sorted(unknown)}")
    results: list[CheckResult] = []
    if "lemmas" in profiles:
        _sampled_stabilization_bound(results, seed)
        _contraction_bound(results, seed + 1)
        _phi1_inequalities(results, seed + 2)
    if "oracles" in profiles:
        _summation_by_parts(results, seed + 3)
        _kernel_oracles(results, seed + 4)
    if "invariants" in profiles:
        _trajectory_invariants(results, seed + 5, kappa=kappa)
    return {
        "passed": all(r.passed for r in results),
        "failures": [asdict(r) for r in results if not r.passed],
        "checks": [asdict(r) for r in results],
    }
