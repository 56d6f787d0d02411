"""Structure-preserving exponential integrators for Allen-Cahn type
gradient flows: pointwise-bound and energy-decay preserving first- and
second-order SAV schemes on uniform 2D grids."""

from .errors import AcflowError, DomainBoundError, NumericFailure, NumericRangeError
from .expkernel import StabilizedOperator, phi1
from .grid import Grid
from .harness import RunConfig, converge, init_random, init_sine, run
from .potentials import (
    ArctanSigma,
    ConstantSigma,
    DoubleWell,
    ExpSigma,
    FloryHuggins,
    TanhSigma,
    bulk_energy,
    make_potential,
    make_sigma,
    modified_energy,
    total_energy,
)
from .schemes import (
    SchemeConfig,
    SolverState,
    initial_state,
    reference_solution,
    step,
    step_ei1,
    step_ei2,
    step_stab1,
)
from .timestep import AdaptiveStepping, UniformStepping
from .verify import verify_suite

__all__ = [
    "AcflowError",
    "AdaptiveStepping",
    "ArctanSigma",
    "ConstantSigma",
    "DomainBoundError",
    "DoubleWell",
    "ExpSigma",
    "FloryHuggins",
    "Grid",
    "NumericFailure",
    "NumericRangeError",
    "RunConfig",
    "SchemeConfig",
    "SolverState",
    "StabilizedOperator",
    "TanhSigma",
    "UniformStepping",
    "bulk_energy",
    "converge",
    "init_random",
    "init_sine",
    "initial_state",
    "make_potential",
    "make_sigma",
    "modified_energy",
    "phi1",
    "reference_solution",
    "run",
    "step",
    "step_ei1",
    "step_ei2",
    "step_stab1",
    "total_energy",
    "verify_suite",
]

__version__ = "0.1.0"
