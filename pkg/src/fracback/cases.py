"""Closed-form benchmark problem used throughout the experiments.

Exact solution u(x,t) = (1 + t**(alpha+1)) * sin(pi*x/l) with coefficient
mu(t) = 1 + t.  The matching source term is

    f(x,t) = [Gamma(alpha+2)*t + (pi/l)**2 * (1 + t**(alpha+1))
              + mu(t) * (pi/l)**2 * (alpha+1) * t**alpha] * sin(pi*x/l),

so only the first sine mode is active; the measurement at the final time
is psi(x) = (1 + T**(alpha+1)) * sin(pi*x/l) and the state to recover is
u0(x) = sin(pi*x/l).
"""

from dataclasses import dataclass

import numpy as np

from .caputo import gamma_function
from .forward import ProblemConfig
from .grids import build_graded_time_mesh, build_space_grid, default_grading


@dataclass(frozen=True)
class ManufacturedCase:
    alpha: float
    l: float = 1.0
    T: float = 1.0

    def mu(self, t: float) -> float:
        return 1.0 + t

    def exact(self, x, t):
        return (1.0 + t ** (self.alpha + 1.0)) * np.sin(np.pi * np.asarray(x) / self.l)

    def initial(self, x):
        return np.sin(np.pi * np.asarray(x) / self.l)

    def terminal(self, x):
        return self.exact(x, self.T)

    def source(self, x, t):
        factor = (
            gamma_function(self.alpha + 2.0) * t
            + (np.pi / self.l) ** 2 * (1.0 + t ** (self.alpha + 1.0))
            + self.mu(t) * (np.pi / self.l) ** 2 * (self.alpha + 1.0) * t**self.alpha
        )
        return factor * np.sin(np.pi * np.asarray(x) / self.l)

    def config(self, N: int, M: int, r: float | None = None) -> ProblemConfig:
        """Discrete configuration; r = None selects the default grading."""
        if r is None:
            r = default_grading(self.alpha)
        return ProblemConfig(
            alpha=self.alpha,
            grid=build_space_grid(self.l, N),
            mesh=build_graded_time_mesh(self.T, M, r),
            mu=self.mu,
            source=self.source,
        )
