"""L1 discretisation of the Caputo derivative on graded meshes.

The discrete operator at level k is

    (1/Gamma(2-alpha)) * sum_{j=1..k} d_{k,j} * (v_j - v_{j-1}),

with mesh-dependent coefficients

    d_{k,j} = ((t_k - t_{j-1})**(1-alpha) - (t_k - t_j)**(1-alpha)) / tau_j.

The coefficients are positive and nondecreasing in j for any admissible
mesh (the last one, d_{k,k} = tau_k**-alpha, is the largest), which makes
all history-difference coefficients d_{k,j+1} - d_{k,j} nonnegative.
"""

import math
from dataclasses import dataclass

import numpy as np

from .grids import TimeMesh

# Lanczos approximation, g = 7, 9 coefficients; relative error below 1e-13
# for positive real arguments.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_function(z: float) -> float:
    """Gamma function for z > 0 via the Lanczos approximation.

    Implemented locally (rather than taken from the platform libm) so the
    weight tables, and with them every CSV the package writes, are
    bit-stable across systems.
    """
    z = float(z)
    if z <= 0:
        raise ValueError(f"gamma_function requires z > 0, got z={z}")
    if z < 0.5:
        # reflection keeps the series in its accurate range
        return math.pi / (math.sin(math.pi * z) * gamma_function(1.0 - z))
    z -= 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def _frac_pow(x: np.ndarray, p: float) -> np.ndarray:
    """x**p via exp(p*log(x)) with an explicit zero guard (never log(0))."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = np.exp(p * np.log(x[pos]))
    return out


@dataclass(frozen=True)
class L1Weights:
    """Coefficients d_{k,j}, j = 1..k, of the L1 operator at level k.

    w_{k,j} = d_{k,j} / Gamma(2 - alpha) is recoverable via the `w`
    property; it is not stored separately.
    """

    k: int
    alpha: float
    d: np.ndarray
    gamma_2ma: float

    @property
    def w(self) -> np.ndarray:
        return self.d / self.gamma_2ma

    def history_coefficients(self) -> np.ndarray:
        """Coefficients of u^0 .. u^{k-1} in the memory term.

        Entry 0 is d_{k,1}; entry j (1 <= j <= k-1) is d_{k,j+1} - d_{k,j}.
        The common factor 1/Gamma(2-alpha) is not included.
        """
        coeffs = np.empty(self.k)
        coeffs[0] = self.d[0]
        if self.k > 1:
            coeffs[1:] = np.diff(self.d)
        return coeffs


def l1_coefficients(mesh: TimeMesh, alpha: float, k: int) -> L1Weights:
    """Compute the level-k L1 weights on the given mesh."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"fractional order must lie in (0, 1), got alpha={alpha}")
    if not 1 <= k <= mesh.M:
        raise ValueError(f"level k must lie in 1..{mesh.M}, got k={k}")
    d = _level_coefficients(mesh.t, mesh.tau, alpha, k)
    return L1Weights(k=k, alpha=alpha, d=d, gamma_2ma=gamma_function(2.0 - alpha))


def _level_coefficients(t: np.ndarray, tau: np.ndarray, alpha: float, k: int) -> np.ndarray:
    p = _frac_pow(t[k] - t[: k + 1], 1.0 - alpha)
    return (p[:-1] - p[1:]) / tau[:k]


class CaputoL1Table:
    """Precomputed L1 weight table for every level of a mesh.

    Stores the lower-triangular {d_{k,j}} and the derived history
    coefficients once per (mesh, alpha); O(M^2) memory, which is cheap at
    desk scale and repays itself when the inverse step reruns the forward
    solver for every impulse column.
    """

    def __init__(self, mesh: TimeMesh, alpha: float):
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"fractional order must lie in (0, 1), got alpha={alpha}")
        self.mesh = mesh
        self.alpha = float(alpha)
        self.gamma_2ma = gamma_function(2.0 - alpha)
        self._d = [_level_coefficients(mesh.t, mesh.tau, alpha, k) for k in range(1, mesh.M + 1)]
        self._history = []
        for d in self._d:
            coeffs = np.empty(d.shape)
            coeffs[0] = d[0]
            if d.shape[0] > 1:
                coeffs[1:] = np.diff(d)
            self._history.append(coeffs)

    def level(self, k: int) -> L1Weights:
        if not 1 <= k <= self.mesh.M:
            raise ValueError(f"level k must lie in 1..{self.mesh.M}, got k={k}")
        return L1Weights(k=k, alpha=self.alpha, d=self._d[k - 1], gamma_2ma=self.gamma_2ma)

    def history_coefficients(self, k: int) -> np.ndarray:
        return self._history[k - 1]

    def diagonal(self, k: int) -> float:
        """d_{k,k}, the coefficient multiplying the newest increment."""
        return float(self._d[k - 1][-1])


def discrete_caputo_scalar(weights: L1Weights, v) -> float:
    """Apply the level-k L1 operator to the scalar sequence v_0 .. v_k."""
    v = np.asarray(v, dtype=float)
    if v.shape != (weights.k + 1,):
        raise ValueError(f"expected sequence of length {weights.k + 1}, got shape {v.shape}")
    return float(np.dot(weights.d, np.diff(v)) / weights.gamma_2ma)


def history_term(weights: L1Weights, states) -> np.ndarray:
    """Memory contribution r^k built from the states u^0 .. u^{k-1}.

    r^k = d_{k,1}/Gamma(2-alpha) * u^0
        + (1/Gamma(2-alpha)) * sum_{j=1..k-1} (d_{k,j+1} - d_{k,j}) * u^j
    """
    states = np.asarray(states, dtype=float)
    if states.shape[0] != weights.k:
        raise ValueError(
            f"level {weights.k} needs the {weights.k} states u^0..u^{weights.k - 1}, "
            f"got {states.shape[0]}"
        )
    coeffs = weights.history_coefficients()
    return np.tensordot(coeffs, states, axes=1) / weights.gamma_2ma
