"""Recovery of the initial state from a final-time measurement.

The terminal map of the forward scheme is affine in the initial data:
u^M(u0; f) = F u0 + g, with g the zero-initial forced terminal state and
F assembled column by column from impulse responses.  Given measured
terminal data psi, the reconstruction solves the regularised normal
equations (F^T F + lambda I) u0 = F^T (psi - g) and then reruns the
forward solver for a consistency check.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .forward import ProblemConfig, _march, solve_forward, terminal_state
from .linalg import discrete_norms, solve_spd_dense
from .rng import SplitMix64

# Cap on the history buffer during operator assembly; columns are
# propagated in blocks so peak memory stays near this bound.
_ASSEMBLY_BUDGET_BYTES = 200_000_000


@dataclass
class ForwardOperator:
    """Dense terminal map of the homogeneous solver plus its provenance.

    Column m holds the terminal state reached from the m-th canonical
    basis vector.  The fingerprint identifies the generating configuration
    so cached matrices cannot be replayed against the wrong problem.
    """

    matrix: np.ndarray
    fingerprint: str

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def condition_number(self) -> float:
        """2-norm condition estimate, computed on demand for reporting."""
        return float(np.linalg.cond(self.matrix))


@dataclass(frozen=True)
class NoiseModel:
    """Relative Gaussian perturbation of a measurement vector.

    The standard normal draw depends only on (seed, vector length), so the
    same seed perturbs every noise level with the same scaled pattern.
    """

    delta: float
    seed: int = 0

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"noise level must be nonnegative, got delta={self.delta}")

    def sigma(self, psi: np.ndarray) -> float:
        """Per-component deviation delta * ||psi||_2 / sqrt(len(psi))."""
        psi = np.asarray(psi, dtype=float)
        return float(self.delta * np.linalg.norm(psi) / np.sqrt(psi.size))


@dataclass
class ReconstructionResult:
    """Reconstructed initial vector with consistency and error metrics.

    The e_u0 fields are present only when a reference initial vector was
    supplied; e_psi fields always compare the refit terminal state against
    the measurement that was actually used (noisy if noise was applied).
    """

    u0_hat: np.ndarray
    psi_refit: np.ndarray
    lam: float
    e_psi_inf: float
    e_psi_l2h: float
    e_u0_inf: Optional[float] = None
    e_u0_l2h: Optional[float] = None


def forced_terminal(config: ProblemConfig) -> np.ndarray:
    """Terminal state of the forward solve with zero initial data."""
    return terminal_state(config, np.zeros(config.n_interior))


def assemble_forward_operator(config: ProblemConfig) -> ForwardOperator:
    """Build the homogeneous terminal map from impulse responses.

    Each canonical basis vector is propagated through the homogeneous
    solver and its terminal state becomes one column.  The solves are
    independent, so they are batched; blocks keep the retained history
    under a fixed memory budget.  The result does not depend on the
    blocking.
    """
    n = config.n_interior
    table = config.weight_table()
    bytes_per_column = 8 * (config.mesh.M + 1) * n
    block = max(1, min(n, _ASSEMBLY_BUDGET_BYTES // bytes_per_column))

    matrix = np.empty((n, n))
    identity = np.eye(n)
    for start in range(0, n, block):
        cols = identity[:, start : start + block]
        states = _march(config, cols, table=table, with_source=False)
        matrix[:, start : start + block] = states[-1]
    return ForwardOperator(matrix=matrix, fingerprint=config.fingerprint())


def save_operator(op: ForwardOperator, path) -> None:
    """Cache the operator with its fingerprint."""
    np.savez(path, matrix=op.matrix, fingerprint=np.array(op.fingerprint))


def load_operator(path, config: ProblemConfig) -> ForwardOperator:
    """Load a cached operator; reject it unless the fingerprint matches."""
    with np.load(path) as data:
        fingerprint = str(data["fingerprint"])
        if fingerprint != config.fingerprint():
            raise ValueError(
                "cached operator fingerprint does not match the configuration; "
                "rebuild with assemble_forward_operator"
            )
        return ForwardOperator(matrix=np.array(data["matrix"]), fingerprint=fingerprint)


def add_noise(psi: np.ndarray, model: NoiseModel) -> np.ndarray:
    """Perturb psi by sigma * xi with xi i.i.d. standard normal.

    sigma = delta * ||psi||_2 / sqrt(len(psi)) makes the relative 2-norm
    perturbation approximately delta in expectation.  delta = 0 returns
    the input values unchanged.
    """
    psi = np.asarray(psi, dtype=float)
    if model.delta == 0.0:
        return psi.copy()
    if not np.any(psi):
        raise ValueError("relative noise needs a nonzero measurement vector")
    xi = SplitMix64(model.seed).standard_normal(psi.size)
    return psi + model.sigma(psi) * xi


def tikhonov_reconstruct(op: ForwardOperator, data: np.ndarray, lam: float) -> np.ndarray:
    """Minimise ||F u - d||_2^2 / 2 + lam ||u||_2^2 / 2 via normal equations."""
    if lam <= 0:
        raise ValueError(f"regularisation parameter must be positive, got {lam}")
    f = op.matrix
    normal = f.T @ f + lam * np.eye(op.n)
    return solve_spd_dense(normal, f.T @ np.asarray(data, dtype=float))


def reconstruct(
    psi_measured: np.ndarray,
    config: ProblemConfig,
    lam: float,
    reference_u0: Optional[np.ndarray] = None,
    operator: Optional[ForwardOperator] = None,
) -> ReconstructionResult:
    """Full reconstruction pipeline.

    In order: forced terminal g, operator F (reused if supplied, with a
    fingerprint check), data vector d = psi - g, regularised normal-
    equation solve, then a forward rerun of the estimate for the terminal
    consistency metrics.  psi_measured holds interior samples; boundary
    values are implicitly zero.
    """
    psi_measured = np.asarray(psi_measured, dtype=float)
    if psi_measured.shape != (config.n_interior,):
        raise ValueError(
            f"measurement must hold the {config.n_interior} interior samples, "
            f"got shape {psi_measured.shape}"
        )
    if operator is not None and operator.fingerprint != config.fingerprint():
        raise ValueError("supplied operator was assembled for a different configuration")

    g = forced_terminal(config)
    op = operator if operator is not None else assemble_forward_operator(config)
    u0_hat = tikhonov_reconstruct(op, psi_measured - g, lam)

    psi_refit = solve_forward(config, u0_hat).terminal
    mismatch = discrete_norms(psi_refit - psi_measured, config.grid.h)
    result = ReconstructionResult(
        u0_hat=u0_hat,
        psi_refit=psi_refit,
        lam=float(lam),
        e_psi_inf=mismatch.inf_norm,
        e_psi_l2h=mismatch.l2h_norm,
    )
    if reference_u0 is not None:
        err = discrete_norms(u0_hat - np.asarray(reference_u0, float), config.grid.h)
        result.e_u0_inf = err.inf_norm
        result.e_u0_l2h = err.l2h_norm
    return result
