"""
Covariant phase estimation on an integer generator spectrum.

A probe with amplitudes c_m on eigenvalues m = 0..n, measured with the
covariant (phase-shift equivariant) measurement, produces an error
theta = estimate - phi with density |sum_m c_m exp(-i m theta)|^2 / (2 pi)
on [-pi, pi), independently of phi and of the prior.  Its mean-square error
is the quadratic form c^H A c with the Toeplitz matrix of Fourier
coefficients of theta^2 on [-pi, pi].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bounds import BoundInputs, GeneratorSpectrum, bound2, crossover
from .numerics import sym_eig_min

# inverse-CDF grid for sample_outcome
SAMPLE_GRID = 2**16


@dataclass(frozen=True)
class ProbeState:
    amplitudes: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.amplitudes, dtype=complex).ravel()
        if c.size < 2:
            raise ValueError("a probe needs at least two amplitudes (n >= 1)")
        norm = float(np.vdot(c, c).real)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"probe state is not normalized (|c|^2 = {norm!r})")
        c.setflags(write=False)
        object.__setattr__(self, "amplitudes", c)

    @classmethod
    def normalized(cls, amplitudes) -> "ProbeState":
        c = np.asarray(amplitudes, dtype=complex).ravel()
        return cls(c / np.linalg.norm(c))

    @property
    def n(self) -> int:
        return self.amplitudes.size - 1

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "re": self.amplitudes.real.tolist(),
            "im": self.amplitudes.imag.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ProbeState":
        c = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
        if c.size != int(obj["n"]) + 1:
            raise ValueError("amplitude count does not match n")
        return cls(c)


@dataclass(frozen=True)
class CostMatrix:
    """Symmetric Toeplitz matrix with first row ``coefficients``."""

    coefficients: np.ndarray

    @property
    def dimension(self) -> int:
        return self.coefficients.size

    def dense(self) -> np.ndarray:
        return scipy.linalg.toeplitz(self.coefficients)


@dataclass(frozen=True)
class MeasurementReport:
    n: int
    mse: float
    bound2_delta1: float | None = None

    @property
    def rmse(self) -> float:
        return math.sqrt(self.mse)

    @property
    def scaled(self) -> float:
        """n * rmse, which tends to pi for the optimal probe."""
        return self.n * self.rmse

    n_rmse = scaled

    @property
    def sandwich_violation(self) -> bool:
        return self.bound2_delta1 is not None and self.bound2_delta1 > self.mse

    def csv_row(self) -> tuple:
        return (self.n, self.mse, self.rmse, self.n_rmse, self.bound2_delta1)


CSV_COLUMNS = ("n", "mse", "rmse", "n_rmse", "bound2_delta1")


def cost_coefficients(n: int) -> np.ndarray:
    """a_0 = pi^2/3, a_m = 2 (-1)^m / m^2 for m = 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = np.arange(1, n + 1)
    return np.concatenate([[math.pi**2 / 3], 2.0 * (-1.0) ** m / m**2])


def cost_matrix(n: int) -> CostMatrix:
    return CostMatrix(cost_coefficients(n))


def covariant_mse(state: ProbeState) -> float:
    c = state.amplitudes
    a = cost_matrix(state.n).dense()
    return float(np.real(np.vdot(c, a @ c)))


def outcome_density(state: ProbeState, theta):
    """Density of the error theta = estimate - phi on [-pi, pi)."""
    theta = np.asarray(theta, dtype=float)
    m = np.arange(state.n + 1)
    amp = np.exp(-1j * np.multiply.outer(theta, m)) @ state.amplitudes
    return np.abs(amp) ** 2 / (2 * math.pi)


def optimal_probe(n: int) -> tuple[ProbeState, float]:
    """Probe minimizing the covariant MSE: lowest eigenpair of the cost matrix.

    The eigenvector has entries of one sign; it is returned real and
    nonnegative.
    """
    value, vec = sym_eig_min(cost_matrix(n).dense())
    if vec.sum() < 0:
        vec = -vec
    return ProbeState.normalized(vec), value


def sine_state(n: int) -> ProbeState:
    if n < 1:
        raise ValueError("n must be >= 1")
    m = np.arange(n + 1)
    return ProbeState.normalized(np.sin(math.pi * (m + 1) / (n + 2)))


def noon_state(n: int) -> ProbeState:
    if n < 1:
        raise ValueError("n must be >= 1")
    c = np.zeros(n + 1, dtype=complex)
    c[0] = c[n] = 1 / math.sqrt(2)
    return ProbeState.normalized(c)


def uniform_state(n: int) -> ProbeState:
    if n < 1:
        raise ValueError("n must be >= 1")
    return ProbeState.normalized(np.ones(n + 1))


def two_level_embedding(spec: GeneratorSpectrum, n: int | None = None) -> float:
    """Factor converting integer-grid MSEs to a generator with eigenvalue gap ``spec.span``.

    MSE_physical = scale * MSE_grid with scale = 1 / span^2, valid for
    priors supported on fewer than 2 pi / span radians.
    """
    return 1.0 / spec.span**2


def sample_outcome(state: ProbeState, phi_true: float, seed: int, size: int | None = None):
    """Draw estimates by inverse CDF on a 2^16-point grid over [phi - pi, phi + pi).

    Returns a float, or an array when ``size`` is given.
    """
    rng = np.random.default_rng(seed)
    edges = np.linspace(-math.pi, math.pi, SAMPLE_GRID + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    pdf = outcome_density(state, mids)
    cdf = np.concatenate([[0.0], np.cumsum(pdf)])
    cdf /= cdf[-1]
    u = rng.random(size)
    theta = np.interp(u, cdf, edges)
    out = phi_true + theta
    return float(out) if size is None else out


def scaling_sweep(n_values) -> list[MeasurementReport]:
    """Optimal covariant MSE per n, alongside bound2 at N = n, delta = 1 (None at or below N delta = 1)."""
    n_values = [int(n) for n in n_values]
    if not n_values:
        raise ValueError("n_values must not be empty")
    if min(n_values) < 1:
        raise ValueError("every n must be >= 1")
    rows = []
    for n in n_values:
        _, mse = optimal_probe(n)
        b2 = bound2(BoundInputs(float(n), 1.0)) if n > 1 else None
        rows.append(MeasurementReport(n, mse, b2))
    return rows


def above_crossover(n: int, delta: float = 1.0) -> bool:
    return n * delta > crossover()
