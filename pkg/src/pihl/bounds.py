"""
Lower bounds on the phase estimation error.

All ``*_bound`` and ``bound*`` functions return mean-square errors
(radians^2).  The Heisenberg-type reference values from
:func:`conventional_limits`, :func:`pi_corrected_hl` and
:func:`frequency_bound` are root-mean-square errors.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .numerics import QuadratureSpec, find_root, integrate_adaptive, tridiag_eig_min

# Tail-correction constant of the rectangular-prior bound, used as published.
TAIL_CONSTANT = 13460.0
R_EPSILON_CAP = 1.52661
EPS_MAX = 1.0 / 3.0


@dataclass(frozen=True)
class GeneratorSpectrum:
    lambda_minus: float
    lambda_plus: float

    def __post_init__(self):
        if not self.lambda_plus > self.lambda_minus:
            raise ValueError("need lambda_plus > lambda_minus")

    @property
    def span(self) -> float:
        return self.lambda_plus - self.lambda_minus

    @classmethod
    def from_span(cls, span: float) -> "GeneratorSpectrum":
        return cls(-0.5 * span, 0.5 * span)


@dataclass(frozen=True)
class BoundInputs:
    """Total resource N = n (lambda_+ - lambda_-) and prior cell width delta."""

    N: float
    delta: float

    def __post_init__(self):
        for name in ("N", "delta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and positive, got {v!r}")

    @property
    def product(self) -> float:
        return self.N * self.delta

    @classmethod
    def from_probe(cls, n: int, spec: GeneratorSpectrum, delta: float) -> "BoundInputs":
        return cls(n * spec.span, delta)


@dataclass(frozen=True)
class BoundParams:
    alpha: float
    L: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.L > 0):
            raise ValueError("alpha and L must be positive")

    def epsilon(self, delta: float) -> float:
        return 4 * self.alpha / (delta * self.L)


def conventional_limits(n: int, k: int, spec: GeneratorSpectrum) -> tuple[float, float]:
    """Fisher-information SQL and HL, 1/(sqrt(kn) span) and 1/(sqrt(k) n span)."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    sql = 1.0 / (math.sqrt(k * n) * spec.span)
    hl = 1.0 / (math.sqrt(k) * n * spec.span)
    return sql, hl


def pi_corrected_hl(n: int, spec: GeneratorSpectrum) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.pi / (n * spec.span)


def frequency_bound(T: float, spec: GeneratorSpectrum) -> float:
    """Asymptotic bound pi / (T span) on the frequency error after total time T."""
    if not T > 0:
        raise ValueError("total interrogation time T must be positive")
    return math.pi / (T * spec.span)


def bandlimited_bound(N: float, L: float) -> float:
    """pi^2 / (N + L/2)^2 for a prior whose Fourier transform has support of length L."""
    if not N > 0:
        raise ValueError("N must be positive")
    if L < 0:
        raise ValueError("bandwidth L must be nonnegative")
    return math.pi**2 / (N + 0.5 * L) ** 2


class WellGroundState(NamedTuple):
    energy: float
    profile: np.ndarray
    mu: np.ndarray


def well_ground_state(W: float, grid_points: int) -> WellGroundState:
    """Ground state of -d^2/dmu^2 on [0, W] with Dirichlet walls.

    Second differences on ``grid_points`` interior nodes with spacing
    h = W / (grid_points + 1).  The profile is normalized to unit maximum
    and made positive.
    """
    if not W > 0:
        raise ValueError("well width must be positive")
    if grid_points < 10:
        raise ValueError("need at least 10 grid points")
    h = W / (grid_points + 1)
    diag = np.full(grid_points, 2.0 / h**2)
    off = np.full(grid_points - 1, -1.0 / h**2)
    energy, vec = tridiag_eig_min(diag, off)
    vec = vec / vec[np.argmax(np.abs(vec))]
    mu = h * np.arange(1, grid_points + 1)
    return WellGroundState(energy, vec, mu)


def well_convergence_order(W: float, grid_points: int) -> float:
    """Observed order of the energy error from grids with spacing h and h/2."""
    exact = math.pi**2 / W**2
    coarse = well_ground_state(W, grid_points).energy
    fine = well_ground_state(W, 2 * grid_points + 1).energy
    return math.log2(abs(coarse - exact) / abs(fine - exact))


def r_epsilon(eps: float) -> float:
    """Closed form of the tail-correction function R(eps) for 0 <= eps <= 1/3."""
    if not 0 <= eps <= EPS_MAX:
        raise ValueError(f"R(eps) requires 0 <= eps <= 1/3, got {eps!r}")
    if eps == 0:
        return 0.0
    e = eps
    bracket = (
        3
        + 5 * e
        + 7 * e**2 / 6
        + (1 / (2 * e) + 2 * e**2) * math.log1p(-2 * e)
        + 1.5 * math.log(3)
        - 2 * e**2 * math.log(3 * e)
    )
    return e**2 / 3 * bracket


def r_epsilon_numeric(eps: float, spec: QuadratureSpec | None = None) -> float:
    """R(eps) as twice the three-piece tail integral, by quadrature.

    The last integral runs to infinity; it is cut at t = T and the rest is
    bounded analytically using (t/eps)^2 - 1 >= (t/eps)^2 (1 - (eps/T)^2).
    """
    if not 0 < eps <= EPS_MAX:
        raise ValueError(f"numeric R(eps) requires 0 < eps <= 1/3, got {eps!r}")
    spec = spec or QuadratureSpec(abs_tol=1e-300, rel_tol=1e-13)
    e = eps

    def first(t):
        return (t - e + 1) ** 3 - 1

    def second(t):
        return ((t - e + 1) ** 3 - 1) / ((t / e) ** 2 - 1) ** 2

    def third(t):
        return ((t - e + 1) ** 3 - (t + e) ** 3) / ((t / e) ** 2 - 1) ** 2

    T = 1e4
    head = integrate_adaptive(first, e, 2 * e, spec)
    mid = integrate_adaptive(second, 2 * e, 1 - e, spec)
    # integrate the far part on a log scale
    far = integrate_adaptive(lambda s: third(np.exp(s)) * np.exp(s), math.log(1 - e), math.log(T), spec)
    # numerator is the quadratic 3(1-2e) t^2 + 3(1-2e) t + (1-e)^3 - e^3
    a2 = 3 * (1 - 2 * e)
    a1 = 3 * (1 - 2 * e)
    a0 = (1 - e) ** 3 - e**3
    rest = e**4 / (1 - (e / T) ** 2) ** 2 * (a2 / T + a1 / (2 * T**2) + a0 / (3 * T**3))
    return 2 * (head + mid + far + rest) / 3


def r_epsilon_first_integral(eps: float) -> float:
    """Exact value of int_eps^{2 eps} [(t - eps + 1)^3 - 1] dt."""
    return ((1 + eps) ** 4 - 1) / 4 - eps


def bound1(inputs: BoundInputs, params: BoundParams) -> float:
    """Rectangular-prior bound with explicit tail penalty; may be negative."""
    eps = params.epsilon(inputs.delta)
    if eps > EPS_MAX:
        raise ValueError(f"bound1 needs eps = 4 alpha/(delta L) <= 1/3, got {eps!r}")
    a, L, d = params.alpha, params.L, inputs.delta
    main = (1 - 2 * eps) * bandlimited_bound(inputs.N, L)
    penalty = TAIL_CONSTANT * d * a**5.5 / L * math.exp(-4 * math.pi * a)
    return main - penalty


def default_params(inputs: BoundInputs) -> BoundParams:
    """alpha = log(N delta) / 4 and L = sqrt(8 alpha N / delta)."""
    x = inputs.product
    if not x > 1:
        raise ValueError(f"default parameters need N*delta > 1, got {x!r}")
    alpha = 0.25 * math.log(x)
    return BoundParams(alpha, math.sqrt(8 * alpha * inputs.N / inputs.delta))


def default_epsilon(inputs: BoundInputs) -> float:
    x = inputs.product
    return math.sqrt(math.log(x) / (2 * x))


def bound2(inputs: BoundInputs) -> float:
    """(pi^2/N^2) (1 - sqrt(8 log(N delta) / (N delta))); positive only above the crossover."""
    x = inputs.product
    if not x > 1:
        raise ValueError(f"bound2 needs N*delta > 1, got {x!r}")
    return math.pi**2 / inputs.N**2 * (1 - math.sqrt(8 * math.log(x) / x))


def crossover(tol: float = 1e-10) -> float:
    """Smallest N*delta with bound2 >= 0: the root of x = 8 log x on [20, 30]."""
    return find_root(lambda x: x - 8 * math.log(x), 20.0, 30.0, tol)


@dataclass
class BoundReport:
    """All bounds for one (N, delta).  Squared quantities are MSEs, *_hl are RMS errors."""

    N: float
    delta: float
    alpha: float | None
    L: float | None
    epsilon: float | None
    bound_bandlimited: float | None
    bound1_raw: float | None
    bound2: float | None
    conventional_hl: float
    pi_hl: float

    @property
    def vacuous(self) -> bool:
        return self.N * self.delta <= crossover()

    def to_json(self) -> dict:
        return asdict(self)


def bound_report(inputs: BoundInputs) -> BoundReport:
    """Evaluate every bound with the default (alpha, L).

    ``bound1_raw`` is left unset when eps > 1/3 (N delta below ~10.64),
    where its closed-form tail estimate does not apply.
    """
    alpha = L = eps = bl = b1 = b2 = None
    if inputs.product > 1:
        params = default_params(inputs)
        alpha, L = params.alpha, params.L
        eps = params.epsilon(inputs.delta)
        bl = bandlimited_bound(inputs.N, L)
        if eps <= EPS_MAX:
            b1 = bound1(inputs, params)
        b2 = bound2(inputs)
    return BoundReport(
        N=inputs.N,
        delta=inputs.delta,
        alpha=alpha,
        L=L,
        epsilon=eps,
        bound_bandlimited=bl,
        bound1_raw=b1,
        bound2=b2,
        conventional_hl=1.0 / inputs.N,
        pi_hl=math.pi / inputs.N,
    )
