"""Uniform and energy-rate-based adaptive time-step control."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class UniformStepping:
    tau: float

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")


@dataclass
class AdaptiveStepping:
    """Shrinks the step where the energy decays fast:

        tau = max(tau_min, tau_max / sqrt(1 + alpha * |dE/dt|^2))

    with dE/dt the backward difference quotient of the original energy.
    The first step, having no energy history, uses tau_min.
    """

    tau_min: float
    tau_max: float
    alpha: float

    def __post_init__(self):
        if not (0 < self.tau_min <= self.tau_max):
            raise ValueError(
                f"need 0 < tau_min <= tau_max, got {self.tau_min}, {self.tau_max}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def next_tau(self, e_prev: float, e_curr: float, tau_prev: float) -> float:
        if tau_prev <= 0:
            raise ValueError(f"tau_prev must be positive, got {tau_prev}")
        rate = (e_curr - e_prev) / tau_prev
        tau = self.tau_max / np.sqrt(1.0 + self.alpha * rate * rate)
        return float(max(self.tau_min, tau))
