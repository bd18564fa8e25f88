"""Time-fractional pseudo-parabolic solver with backward initial-state recovery."""

from .caputo import (
    CaputoL1Table,
    L1Weights,
    discrete_caputo_scalar,
    gamma_function,
    history_term,
    l1_coefficients,
)
from .cases import ManufacturedCase
from .exceptions import SolverError
from .forward import (
    ProblemConfig,
    Trajectory,
    assemble_step_matrix,
    solve_forward,
    stability_energy_ratio,
    step,
    terminal_state,
)
from .grids import SpaceGrid, TimeMesh, build_graded_time_mesh, build_space_grid, default_grading
from .inverse import (
    ForwardOperator,
    NoiseModel,
    ReconstructionResult,
    add_noise,
    assemble_forward_operator,
    forced_terminal,
    load_operator,
    reconstruct,
    save_operator,
    tikhonov_reconstruct,
)
from .linalg import (
    DiscreteNorms,
    TridiagonalMatrix,
    apply_discrete_laplacian,
    discrete_norms,
    h_inner,
    solve_spd_dense,
    solve_tridiagonal,
)
from .oracle import (
    ModeFunctionals,
    ModeSolution,
    gronwall_floor,
    mode_equation_residual,
    mode_functionals,
    reconstruct_u0_spectral,
    sine_coefficients,
    solve_mode,
)
from .rng import SplitMix64

__all__ = [
    "CaputoL1Table",
    "DiscreteNorms",
    "ForwardOperator",
    "L1Weights",
    "ManufacturedCase",
    "ModeFunctionals",
    "ModeSolution",
    "NoiseModel",
    "ProblemConfig",
    "ReconstructionResult",
    "SolverError",
    "SpaceGrid",
    "SplitMix64",
    "TimeMesh",
    "Trajectory",
    "add_noise",
    "apply_discrete_laplacian",
    "assemble_forward_operator",
    "assemble_step_matrix",
    "build_graded_time_mesh",
    "build_space_grid",
    "default_grading",
    "discrete_caputo_scalar",
    "discrete_norms",
    "forced_terminal",
    "gamma_function",
    "gronwall_floor",
    "h_inner",
    "history_term",
    "l1_coefficients",
    "load_operator",
    "mode_equation_residual",
    "mode_functionals",
    "reconstruct",
    "reconstruct_u0_spectral",
    "save_operator",
    "sine_coefficients",
    "solve_forward",
    "solve_mode",
    "solve_spd_dense",
    "solve_tridiagonal",
    "stability_energy_ratio",
    "step",
    "terminal_state",
    "tikhonov_reconstruct",
]

__version__ = "0.1.0"
