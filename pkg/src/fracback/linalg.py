"""Discrete Laplacian, tridiagonal and dense SPD solvers, discrete norms.

Grid vectors hold interior nodal values only; the homogeneous Dirichlet
boundary values are implicit zeros.  The discrete inner product is
(u, v)_h = h * sum(u_i * v_i), so that ||v||_{2,h} = sqrt(h) * ||v||_2.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import SolverError

# Pivot smaller than this times the row scale counts as breakdown.
_PIVOT_RTOL = 1e-14


@dataclass
class TridiagonalMatrix:
    """Tridiagonal matrix stored as its three diagonals.

    lower/upper have length n - 1; systems assembled from the implicit
    time-stepping scheme are symmetric and strictly diagonally dominant,
    so the Thomas algorithm needs no pivoting.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.diag = np.asarray(self.diag, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        n = self.diag.shape[0]
        if self.lower.shape != (max(n - 1, 0),) or self.upper.shape != (max(n - 1, 0),):
            raise ValueError("off-diagonal arrays must have length n - 1")

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        out = self.diag[:, None] * v.reshape(self.n, -1)
        if self.n > 1:
            out[:-1] += self.upper[:, None] * v.reshape(self.n, -1)[1:]
            out[1:] += self.lower[:, None] * v.reshape(self.n, -1)[:-1]
        return out.reshape(v.shape)

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        if self.n > 1:
            a += np.diag(self.lower, -1) + np.diag(self.upper, 1)
        return a


def apply_discrete_laplacian(v: np.ndarray, h: float) -> np.ndarray:
    """Second-difference (v_{i-1} - 2 v_i + v_{i+1}) / h^2 with zero ghosts.

    Accepts a single interior vector of shape (n,) or a stack of columns
    of shape (n, m); the stencil acts along the first axis.
    """
    if h <= 0:
        raise ValueError(f"spacing must be positive, got h={h}")
    v = np.asarray(v, dtype=float)
    out = -2.0 * v
    out[:-1] += v[1:]
    out[1:] += v[:-1]
    return out / (h * h)


def laplacian_matrix(n: int, h: float) -> TridiagonalMatrix:
    """Matrix form of the discrete Laplacian on n interior nodes."""
    off = np.full(n - 1, 1.0 / (h * h))
    return TridiagonalMatrix(lower=off, diag=np.full(n, -2.0 / (h * h)), upper=off.copy())


def solve_tridiagonal(m: TridiagonalMatrix, rhs: np.ndarray) -> np.ndarray:
    """Thomas algorithm without pivoting.

    rhs may be a vector (n,) or a block of right-hand sides (n, k); the
    elimination is shared, the sweeps are vectorised over columns.
    """
    n = m.n
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != n:
        raise ValueError(f"rhs has leading dimension {rhs.shape[0]}, expected {n}")
    b = rhs.reshape(n, -1).copy()

    scale = np.abs(m.diag).copy()
    if n > 1:
        scale[:-1] += np.abs(m.upper)
        scale[1:] += np.abs(m.lower)

    d = m.diag.copy()
    y = b
    for i in range(n - 1):
        if abs(d[i]) < _PIVOT_RTOL * scale[i]:
            raise SolverError(f"tridiagonal pivot breakdown at row {i}")
        w = m.lower[i] / d[i]
        d[i + 1] -= w * m.upper[i]
        y[i + 1] -= w * y[i]
    if abs(d[n - 1]) < _PIVOT_RTOL * scale[n - 1]:
        raise SolverError(f"tridiagonal pivot breakdown at row {n - 1}")

    x = np.empty_like(y)
    x[n - 1] = y[n - 1] / d[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = (y[i] - m.upper[i] * x[i + 1]) / d[i]
    return x.reshape(rhs.shape)


def solve_spd_dense(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a symmetric positive definite dense system by Cholesky.

    Symmetry is required up to 1e-12 relative; a non-positive pivot in the
    factorisation raises SolverError (for regularised normal equations it
    signals a regularisation parameter too small for the rounding level).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = np.abs(a).max()
    if scale > 0 and np.abs(a - a.T).max() > 1e-12 * scale:
        raise ValueError("matrix is not symmetric to 1e-12 relative")
    try:
        factor = scipy.linalg.cho_factor(a, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise SolverError(f"non-positive pivot in Cholesky factorisation: {exc}") from exc
    return scipy.linalg.cho_solve(factor, b, check_finite=False)


@dataclass(frozen=True)
class DiscreteNorms:
    inf_norm: float
    l2h_norm: float
    grad_l2h_norm: float


def h_inner(u: np.ndarray, v: np.ndarray, h: float) -> float:
    """Discrete inner product h * sum(u_i * v_i)."""
    return float(h * np.dot(np.asarray(u, float), np.asarray(v, float)))


def discrete_norms(v: np.ndarray, h: float) -> DiscreteNorms:
    """Max norm, weighted 2-norm, and weighted gradient 2-norm of v.

    The gradient norm pads with the implicit zero boundary values, i.e.
    sums (v_{i+1} - v_i)^2 / h^2 over all N cells.
    """
    v = np.asarray(v, dtype=float)
    padded = np.concatenate(([0.0], v, [0.0]))
    grad = np.diff(padded) / h
    return DiscreteNorms(
        inf_norm=float(np.abs(v).max()) if v.size else 0.0,
        l2h_norm=float(np.sqrt(h * np.dot(v, v))),
        grad_l2h_norm=float(np.sqrt(h * np.dot(grad, grad))),
    )
