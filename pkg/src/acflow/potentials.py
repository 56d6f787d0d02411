"""Nonlinear reactions, free-energy densities, shaping functions, and energies.

Conventions: the reaction is f = -F'.  Each potential carries its pointwise
bound ``beta`` (the invariant region is [-beta, beta]) and the Lipschitz
bound of f on that interval, which is the minimal admissible stabilizing
constant kappa.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainBoundError, NumericRangeError
from .grid import Grid


class DoubleWell:
    """Quartic double-well free energy, F(u) = (1 - u^2)^2 / 4."""

    name = "double-well"
    beta = 1.0
    lipschitz = 2.0  # sup of |f'| = |1 - 3u^2| on [-1, 1], attained at u = +-1

    def f(self, u):
        u = np.asarray(u)
        return u * (1.0 - u * u)

    def F(self, u):
        w = 1.0 - np.asarray(u) ** 2
        return 0.25 * w * w


class FloryHuggins:
    """Logarithmic Flory-Huggins free energy with critical mixing parameters.

    Requires theta_c > theta > 0; the reaction's positive root beta then lies
    strictly inside (0, 1), keeping the log singularities at +-1 outside the
    invariant interval.
    """

    name = "flory-huggins"

    def __init__(self, theta: float = 0.8, theta_c: float = 1.6):
        if not (theta_c > theta > 0):
            raise ValueError(f"need theta_c > theta > 0, got theta={theta}, theta_c={theta_c}")
        self.theta = float(theta)
        self.theta_c = float(theta_c)
        self.beta = self._compute_beta()
        self.lipschitz = self._compute_lipschitz()
        if not (self.f(self.beta) <= 0.0 <= self.f(-self.beta)):
            raise ValueError("reaction sign condition f(beta) <= 0 <= f(-beta) failed")

    def _f_scalar(self, u: float) -> float:
        return 0.5 * self.theta * np.log((1.0 - u) / (1.0 + u)) + self.theta_c * u

    def _compute_beta(self) -> float:
        # f(0+) > 0 and f(u) -> -inf as u -> 1-, so a sign change exists.
        lo, hi = 1e-12, 1.0 - 1e-12
        if self._f_scalar(lo) <= 0 or self._f_scalar(hi) >= 0:
            raise ValueError("no sign change of f on (0, 1); invalid parameters")
        return float(brentq(self._f_scalar, lo, hi, xtol=1e-12))

    def _fprime(self, u: float) -> float:
        return -self.theta / (1.0 - u * u) + self.theta_c

    def _compute_lipschitz(self) -> float:
        # |f'| is even and its maximum sits at the endpoints u = +-beta for
        # the parameters of interest; search anyway to stay robust.
        us = np.linspace(0.0, self.beta, 512)
        vals = np.abs([self._fprime(u) for u in us])
        best = float(np.max(vals))
        res = minimize_scalar(lambda u: -abs(self._fprime(u)),
                              bounds=(0.0, self.beta), method="bounded",
                              options={"xatol": 1e-10})
        return max(best, float(-res.fun), abs(self._fprime(self.beta)))

    def _check_domain(self, u):
        if np.any(np.abs(u) >= 1.0):
            raise DomainBoundError(
                "Flory-Huggins evaluation outside (-1, 1): "
                f"max |u| = {float(np.max(np.abs(u)))}")

    def f(self, u):
        u = np.asarray(u, dtype=float)
        self._check_domain(u)
        return 0.5 * self.theta * np.log((1.0 - u) / (1.0 + u)) + self.theta_c * u

    def F(self, u):
        u = np.asarray(u, dtype=float)
        self._check_domain(u)
        # xlogy handles the 0*log(0) = 0 convention at u = +-1 limits.
        from scipy.special import xlogy
        ent = xlogy(1.0 + u, 1.0 + u) + xlogy(1.0 - u, 1.0 - u)
        return 0.5 * self.theta * ent - 0.5 * self.theta_c * u**2


def make_potential(kind: str, theta: float = 0.8, theta_c: float = 1.6):
    if kind == "double-well":
        return DoubleWell()
    if kind == "flory-huggins":
        return FloryHuggins(theta, theta_c)
    raise ValueError(f"unknown potential {kind!r}")


# -- shaping functions --------------------------------------------------------


class ConstantSigma:
    """Positive constant shaping function; the ratio degenerates to exactly 1."""

    name = "const"

    def __init__(self, c: float = 1.0):
        if c <= 0:
            raise ValueError(f"constant sigma must be positive, got {c}")
        self.c = float(c)

    def value(self, x: float) -> float:
        return self.c

    def ratio(self, r: float, e1: float) -> float:
        return 1.0


class ExpSigma:
    """sigma(x) = exp(a x), a > 0; the ratio is one exponential of a difference."""

    name = "exp"

    def __init__(self, a: float = 1.0):
        if a <= 0:
            raise ValueError(f"exp sigma rate must be positive, got {a}")
        self.a = float(a)

    def value(self, x: float) -> float:
        return float(np.exp(self.a * x))

    def ratio(self, r: float, e1: float) -> float:
        # Evaluated as exp(a*(r - e1)) so O(1) arguments with large a never
        # overflow through the separate factors.
        g = float(np.exp(self.a * (r - e1)))
        if not np.isfinite(g) or g <= 0.0:
            raise NumericRangeError(f"shaping ratio overflowed: a={self.a}, r-e1={r - e1}")
        return g


class _RatioSigma:
    def ratio(self, r: float, e1: float) -> float:
        g = self.value(r) / self.value(e1)
        if not np.isfinite(g) or g <= 0.0:
            raise NumericRangeError(f"shaping ratio non-finite: r={r}, e1={e1}")
        return g


class ArctanSigma(_RatioSigma):
    name = "arctan"

    def value(self, x: float) -> float:
        return float(0.5 * np.pi + np.arctan(x))


class TanhSigma(_RatioSigma):
    name = "tanh"

    def value(self, x: float) -> float:
        return float(1.0 + np.tanh(x))


def make_sigma(kind: str, a: float = 1.0):
    if kind == "const":
        return ConstantSigma()
    if kind == "exp":
        return ExpSigma(a)
    if kind == "arctan":
        return ArctanSigma()
    if kind == "tanh":
        return TanhSigma()
    raise ValueError(f"unknown sigma {kind!r}")


# -- energies -----------------------------------------------------------------


def bulk_energy(grid: Grid, potential, v: np.ndarray) -> float:
    """Integral of the free-energy density, <F(v), 1>."""
    return grid.integrate(potential.F(v))


def interface_energy(grid: Grid, v: np.ndarray, eps: float) -> float:
    return 0.5 * eps * eps * grid.grad_norm2_sq(v)


def total_energy(grid: Grid, potential, v: np.ndarray, eps: float) -> float:
    return interface_energy(grid, v, eps) + bulk_energy(grid, potential, v)


def modified_energy(grid: Grid, v: np.ndarray, r: float, eps: float) -> float:
    return interface_energy(grid, v, eps) + r
