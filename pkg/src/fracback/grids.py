"""Spatial grid and graded temporal mesh construction.

The spatial grid is uniform on [0, l].  The temporal mesh follows the
grading t_k = T * (k/M)**r, which clusters steps near t = 0 where the
solution of fractional-in-time problems has a weak initial layer;
r = 1 recovers the uniform mesh.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpaceGrid:
    """Uniform grid on [0, l] with N subintervals and N - 1 interior nodes.

    Attributes:
        l: domain length.
        N: number of subintervals.
        h: spacing l / N.
        x: node coordinates x_i = i * h, shape (N + 1,).
    """

    l: float
    N: int
    h: float
    x: np.ndarray

    @property
    def interior(self) -> np.ndarray:
        """Interior node coordinates x_1 .. x_{N-1}."""
        return self.x[1:-1]


@dataclass(frozen=True)
class TimeMesh:
    """Graded temporal mesh t_k = T * (k/M)**r.

    Attributes:
        T: final time.
        M: number of time levels (t_0 = 0 .. t_M = T).
        r: grading exponent, r >= 1.
        t: node times, shape (M + 1,).
        tau: step sizes tau_k = t_k - t_{k-1}, shape (M,).
        tau_max: largest step.
    """

    T: float
    M: int
    r: float
    t: np.ndarray
    tau: np.ndarray
    tau_max: float


def build_space_grid(l: float, N: int) -> SpaceGrid:
    """Build the uniform spatial grid on [0, l] with N subintervals."""
    if l <= 0:
        raise ValueError(f"domain length must be positive, got l={l}")
    if N < 2:
        raise ValueError(f"need N >= 2 for at least one interior node, got N={N}")
    N = int(N)
    x = np.linspace(0.0, float(l), N + 1)
    x.flags.writeable = False
    return SpaceGrid(l=float(l), N=N, h=float(l) / N, x=x)


def build_graded_time_mesh(T: float, M: int, r: float = 1.0) -> TimeMesh:
    """Build the graded mesh t_k = T * (k/M)**r.

    The nodes come from the closed formula rather than from accumulating
    steps, so t_M = T is exact; tau is obtained by differencing.
    """
    if T <= 0:
        raise ValueError(f"final time must be positive, got T={T}")
    if M < 1:
        raise ValueError(f"need M >= 1 time levels, got M={M}")
    if r < 1:
        raise ValueError(f"grading exponent must satisfy r >= 1, got r={r}")
    M = int(M)
    k = np.arange(M + 1, dtype=float)
    t = float(T) * (k / M) ** float(r)
    tau = np.diff(t)
    if np.any(tau <= 0):
        raise ValueError("time mesh is not strictly increasing")
    t.flags.writeable = False
    tau.flags.writeable = False
    return TimeMesh(T=float(T), M=M, r=float(r), t=t, tau=tau, tau_max=float(tau.max()))


def default_grading(alpha: float) -> float:
    """Grading exponent (2 - alpha)/alpha, clamped to >= 1.

    This choice restores the optimal L1 rate M**-(2-alpha) despite the
    initial layer; callers may override it.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"fractional order must lie in (0, 1), got alpha={alpha}")
    return max(1.0, (2.0 - alpha) / alpha)
