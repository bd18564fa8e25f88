"""Fully discrete forward solver for the time-fractional pseudo-parabolic model.

At every level k the scheme solves

    (d_{k,k}/Gamma(2-alpha) * I - (1 + mu_k/tau_k) * L_h) u^k
        = r^k + f^k - (mu_k/tau_k) * L_h u^{k-1},

where r^k is the L1 memory term and L_h the discrete Laplacian.  The march
is strictly sequential in k (the memory term needs every earlier state),
but it is linear in the initial data, so independent initial vectors can
be propagated together as columns of a block.
"""

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .caputo import CaputoL1Table, L1Weights
from .grids import SpaceGrid, TimeMesh
from .linalg import TridiagonalMatrix, apply_discrete_laplacian, discrete_norms, solve_tridiagonal


@dataclass
class ProblemConfig:
    """Everything a forward solve needs.

    mu is evaluated at the mesh times t_k and must be nonnegative there;
    source is called as source(x, t) with x the interior node array and a
    scalar t, or may be None for the homogeneous problem.
    """

    alpha: float
    grid: SpaceGrid
    mesh: TimeMesh
    mu: Callable[[float], float]
    source: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    mu_values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"fractional order must lie in (0, 1), got alpha={self.alpha}")
        mu_values = np.array([float(self.mu(t)) for t in self.mesh.t])
        if np.any(mu_values < 0):
            k = int(np.argmin(mu_values))
            raise ValueError(
                f"mu must be nonnegative on the mesh, got mu(t_{k}) = {mu_values[k]}"
            )
        mu_values.flags.writeable = False
        self.mu_values = mu_values

    @property
    def n_interior(self) -> int:
        return self.grid.N - 1

    def source_at(self, k: int) -> Optional[np.ndarray]:
        """Source sampled pointwise at the interior nodes at time t_k."""
        if self.source is None:
            return None
        return np.asarray(self.source(self.grid.interior, self.mesh.t[k]), dtype=float)

    def weight_table(self) -> CaputoL1Table:
        return CaputoL1Table(self.mesh, self.alpha)

    def fingerprint(self) -> str:
        """Digest of (alpha, grid, mesh, mu samples) identifying the operator."""
        hasher = hashlib.sha256()
        header = (self.alpha, self.grid.l, self.grid.N, self.mesh.T, self.mesh.M, self.mesh.r)
        hasher.update(repr(header).encode())
        hasher.update(self.mu_values.tobytes())
        return hasher.hexdigest()


@dataclass
class Trajectory:
    """Discrete trajectory u^0 .. u^M of interior vectors, shape (M+1, N-1)."""

    states: np.ndarray
    config: ProblemConfig

    @property
    def terminal(self) -> np.ndarray:
        return self.states[-1]


def assemble_step_matrix(config: ProblemConfig, k: int, weights: L1Weights) -> TridiagonalMatrix:
    """Left-hand matrix d_{k,k}/Gamma(2-alpha)*I - (1 + mu_k/tau_k)*L_h."""
    n = config.n_interior
    h = config.grid.h
    factor = 1.0 + config.mu_values[k] / config.mesh.tau[k - 1]
    diag = np.full(n, weights.d[-1] / weights.gamma_2ma + factor * 2.0 / (h * h))
    off = np.full(n - 1, -factor / (h * h))
    return TridiagonalMatrix(lower=off, diag=diag, upper=off.copy())


def step(
    config: ProblemConfig,
    k: int,
    weights: L1Weights,
    history: np.ndarray,
    previous: np.ndarray,
    f_k: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Advance one level: solve A^k u^k = r^k + f^k - (mu_k/tau_k) L_h u^{k-1}."""
    rhs = history - (config.mu_values[k] / config.mesh.tau[k - 1]) * apply_discrete_laplacian(
        previous, config.grid.h
    )
    if f_k is not None:
        rhs = rhs + (f_k if rhs.ndim == 1 else f_k[:, None])
    matrix = assemble_step_matrix(config, k, weights)
    return solve_tridiagonal(matrix, rhs)


def _march(
    config: ProblemConfig,
    u0: np.ndarray,
    table: Optional[CaputoL1Table] = None,
    with_source: bool = True,
) -> np.ndarray:
    """Run the scheme from u0 (shape (n,) or (n, m)); returns all states.

    The full history is retained because the L1 memory term needs it.
    """
    n = config.n_interior
    u0 = np.asarray(u0, dtype=float)
    if u0.shape[0] != n:
        raise ValueError(f"initial vector has leading dimension {u0.shape[0]}, expected {n}")
    if table is None:
        table = config.weight_table()

    states = np.empty((config.mesh.M + 1,) + u0.shape)
    states[0] = u0
    for k in range(1, config.mesh.M + 1):
        coeffs = table.history_coefficients(k)
        history = np.tensordot(coeffs, states[:k], axes=1) / table.gamma_2ma
        f_k = config.source_at(k) if with_source else None
        states[k] = step(config, k, table.level(k), history, states[k - 1], f_k)
    return states


def solve_forward(
    config: ProblemConfig,
    u0: np.ndarray,
    table: Optional[CaputoL1Table] = None,
) -> Trajectory:
    """Propagate the initial interior vector u0 to the terminal time."""
    u0 = np.asarray(u0, dtype=float)
    if u0.ndim != 1:
        raise ValueError("solve_forward expects a single initial vector")
    return Trajectory(states=_march(config, u0, table=table), config=config)


def terminal_state(
    config: ProblemConfig,
    u0: np.ndarray,
    table: Optional[CaputoL1Table] = None,
) -> np.ndarray:
    """Terminal vector u^M only (the trajectory is still formed internally)."""
    return solve_forward(config, u0, table=table).terminal


def stability_energy_ratio(traj: Trajectory) -> float:
    """Ratio of the discrete energy load to the data energy.

    Load:  max_k ||u^k||_h^2 + sum_k tau_k ||grad u^k||_h^2
           + max_k mu_k ||grad u^k||_h^2.
    Data:  ||u^0||_h^2 + sum_k tau_k ||f^k||_h^2.

    The unconditional-stability bound says this ratio is controlled by a
    refinement-independent constant; tracking it across grids is the
    practical check.
    """
    config = traj.config
    h = config.grid.h
    norms = [discrete_norms(state, h) for state in traj.states]
    sq = np.array([nm.l2h_norm**2 for nm in norms])
    grad_sq = np.array([nm.grad_l2h_norm**2 for nm in norms])
    tau = config.mesh.tau

    load = sq.max() + float(np.dot(tau, grad_sq[1:])) + float((config.mu_values * grad_sq).max())

    data = sq[0]
    for k in range(1, config.mesh.M + 1):
        f_k = config.source_at(k)
        if f_k is not None:
            data += tau[k - 1] * discrete_norms(f_k, h).l2h_norm ** 2
    if data == 0.0:
        raise ValueError("energy ratio undefined for identically zero data")
    return float(load / data)
