"""One-step updates: first- and second-order exponential SAV schemes plus the
stabilized semi-implicit variant, and a fine-step reference-solution driver.

All steps are pure functions (state in, state out).  The auxiliary scalar s
tracks the bulk energy; the shaping ratio g = sigma(s) / sigma(E1(u)) feeds
both the frozen linear operator and the nonlinear term.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import NumericFailure, NumericRangeError
from .expkernel import StabilizedOperator
from .grid import Grid
from .potentials import bulk_energy

EI1 = "ei1"
EI2 = "ei2"
STAB1 = "stab1"
SCHEMES = (EI1, EI2, STAB1)


@dataclass
class SchemeConfig:
    eps: float
    kappa: float
    potential: object
    sigma: object
    scheme: str = EI1

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")

    @property
    def guarantees_mbp(self) -> bool:
        return self.kappa >= self.potential.lipschitz


@dataclass
class SolverState:
    u: np.ndarray
    s: float
    t: float = 0.0
    step: int = 0
    g: float = 1.0  # shaping ratio used by the step that produced this state


def initial_state(grid: Grid, cfg: SchemeConfig, u0: np.ndarray) -> SolverState:
    u0 = grid.check(u0)
    return SolverState(u=u0, s=bulk_energy(grid, cfg.potential, u0))


def nonlinear_term(grid: Grid, cfg: SchemeConfig, u: np.ndarray, s: float,
                   g_fixed: float) -> np.ndarray:
    """g(u, s) f(u) + kappa * g_fixed * u, with g_fixed the frozen coefficient
    that also enters the linear operator."""
    g = cfg.sigma.ratio(s, bulk_energy(grid, cfg.potential, u))
    return g * cfg.potential.f(u) + cfg.kappa * g_fixed * u


def _check_finite(u: np.ndarray, s: float, step: int, label: str):
    if not np.isfinite(s) or not np.all(np.isfinite(u)):
        raise NumericFailure(f"non-finite state after {label}", step=step)


def _numeric_guard(fn):
    """Attach the failing step index to scalar range errors raised mid-step."""

    @functools.wraps(fn)
    def wrapper(grid, cfg, state, tau):
        try:
            return fn(grid, cfg, state, tau)
        except NumericRangeError as exc:
            raise NumericFailure(str(exc), step=state.step + 1) from exc

    return wrapper


@_numeric_guard
def step_ei1(grid: Grid, cfg: SchemeConfig, state: SolverState,
             tau: float) -> SolverState:
    """First-order exponential step with the operator frozen at (u^n, s^n)."""
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    u, s = state.u, state.s
    g_n = cfg.sigma.ratio(s, bulk_energy(grid, cfg.potential, u))
    fu = cfg.potential.f(u)
    op = StabilizedOperator(grid, cfg.kappa * g_n, cfg.eps ** 2)
    nonlin = g_n * (fu + cfg.kappa * u)
    u_new = op.advance(tau, u, nonlin)
    s_new = s - g_n * grid.inner(fu, u_new - u)
    _check_finite(u_new, s_new, state.step + 1, "ei1 step")
    return SolverState(u=u_new, s=s_new, t=state.t + tau, step=state.step + 1,
                       g=g_n)


@_numeric_guard
def step_ei2(grid: Grid, cfg: SchemeConfig, state: SolverState,
             tau: float) -> SolverState:
    """Second-order prediction-correction step.

    The predictor is one ei1 step; the corrector freezes the operator and the
    nonlinear term at the predicted midpoint and adds a high-order
    stabilization term to the s-update.
    """
    pred = step_ei1(grid, cfg, state, tau)
    u, s = state.u, state.s
    u_mid = 0.5 * (u + pred.u)
    s_mid = 0.5 * (s + pred.s)
    g_m = cfg.sigma.ratio(s_mid, bulk_energy(grid, cfg.potential, u_mid))
    f_mid = cfg.potential.f(u_mid)
    op = StabilizedOperator(grid, cfg.kappa * g_m, cfg.eps ** 2)
    nonlin = g_m * (f_mid + cfg.kappa * u_mid)
    u_new = op.advance(tau, u, nonlin)
    s_new = (s - g_m * grid.inner(f_mid, u_new - u)
             + 0.5 * cfg.kappa * g_m * grid.inner(u_new - pred.u, u_new - u))
    _check_finite(u_new, s_new, state.step + 1, "ei2 step")
    return SolverState(u=u_new, s=s_new, t=state.t + tau, step=state.step + 1,
                       g=g_m)


@_numeric_guard
def step_stab1(grid: Grid, cfg: SchemeConfig, state: SolverState,
               tau: float) -> SolverState:
    """Semi-implicit variant: e^{-tau L} replaced by (I + tau L)^{-1}, so
    (I + tau L) u^{n+1} = u^n + tau N; the s-update matches ei1."""
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    u, s = state.u, state.s
    g_n = cfg.sigma.ratio(s, bulk_energy(grid, cfg.potential, u))
    fu = cfg.potential.f(u)
    op = StabilizedOperator(grid, cfg.kappa * g_n, cfg.eps ** 2)
    nonlin = g_n * (fu + cfg.kappa * u)
    u_new = op.solve_shifted(tau, u + tau * nonlin)
    s_new = s - g_n * grid.inner(fu, u_new - u)
    _check_finite(u_new, s_new, state.step + 1, "stab1 step")
    return SolverState(u=u_new, s=s_new, t=state.t + tau, step=state.step + 1,
                       g=g_n)


_STEPPERS = {EI1: step_ei1, EI2: step_ei2, STAB1: step_stab1}


def step(grid: Grid, cfg: SchemeConfig, state: SolverState,
         tau: float) -> SolverState:
    return _STEPPERS[cfg.scheme](grid, cfg, state, tau)


def reference_solution(grid: Grid, cfg: SchemeConfig, u0: np.ndarray,
                       t_end: float, tau_ref: float) -> SolverState:
    """Ground-truth generator: ei2 at a fine uniform step.

    Intended for convergence studies with tau_ref well below the sweep's
    smallest step (a factor of 32 or more).
    """
    if t_end < 0:
        raise ValueError(f"t_end must be nonnegative, got {t_end}")
    n_steps = round(t_end / tau_ref) if t_end > 0 else 0
    if t_end > 0 and abs(n_steps * tau_ref - t_end) > 1e-12 * max(1.0, t_end):
        raise ValueError(f"tau_ref={tau_ref} does not divide t_end={t_end}")
    state = initial_state(grid, cfg, u0)
    for _ in range(n_steps):
        state = step_ei2(grid, cfg, state, tau_ref)
    return state
