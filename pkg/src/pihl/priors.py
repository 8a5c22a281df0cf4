"""
Prior densities on the phase: rectangle, comb of rectangles, the Kaiser
family p_{alpha,L} and the smeared rectangle p_{alpha,L,delta}.

The Kaiser density is the normalized fourth power of the Fourier transform
of a Kaiser window of width L/4.  Its Fourier transform is supported on
[-L/2, L/2].  Inside the core |phi| < 4 alpha / L it is governed by
sinh^4 and is of order exp(4 pi alpha); outside it is a sinc^4 tail.  The
normalization N_alpha is therefore exponentially small and everything is
evaluated in log space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import QuadratureSpec, integrate_adaptive, log_bessel_i0, log_sinhc

# Tails are integrated out to this many core half-widths 4 alpha / L.
TAIL_CUTOFF = 50.0

_SERIES_COEFFS = (
    13 / (32 * math.pi),
    319 / (2**11 * math.pi**2),
    10007 / (2**16 * math.pi**3),
    1793365 / (2**23 * math.pi**4),
    99317267 / (2**28 * math.pi**5),
    12817002203 / (2**34 * math.pi**6),
)


@dataclass(frozen=True)
class RectPrior:
    delta: float
    center: float = 0.0

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("rectangle width delta must be positive")

    def density(self, phi):
        phi = np.asarray(phi, dtype=float)
        inside = np.abs(phi - self.center) <= 0.5 * self.delta
        return np.where(inside, 1.0 / self.delta, 0.0)

    @property
    def support(self) -> tuple[float, float]:
        return self.center - 0.5 * self.delta, self.center + 0.5 * self.delta

    def to_json(self) -> dict:
        return {"kind": "rect", "delta": self.delta, "center": self.center}


@dataclass(frozen=True)
class CombPrior:
    """Piecewise-constant prior: value p_l on the cell [l delta - delta/2, l delta + delta/2)."""

    delta: float
    weights: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("cell width delta must be positive")
        total = self.delta * sum(p for _, p in self.weights)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"comb weights are not normalized (delta * sum = {total!r})")

    def density(self, phi):
        phi = np.asarray(phi, dtype=float)
        cell = np.floor(phi / self.delta + 0.5).astype(int)
        table = dict(self.weights)
        out = np.array([table.get(int(c), 0.0) for c in np.ravel(cell)], dtype=float)
        return out.reshape(phi.shape)[()] if phi.ndim == 0 else out.reshape(phi.shape)

    def total_mass(self) -> float:
        return self.delta * sum(p for _, p in self.weights)

    @property
    def support(self) -> tuple[float, float]:
        ls = [l for l, p in self.weights if p > 0]
        return (min(ls) - 0.5) * self.delta, (max(ls) + 0.5) * self.delta

    def to_json(self) -> dict:
        return {
            "kind": "comb",
            "delta": self.delta,
            "weights": [[l, p] for l, p in self.weights],
        }


def comb_from_samples(delta: float, samples) -> CombPrior:
    """Build a comb prior from unnormalized ``(l, p_l)`` samples, rescaled so that delta * sum(p_l) = 1."""
    samples = [(int(l), float(p)) for l, p in samples]
    if any(p < 0 for _, p in samples):
        raise ValueError("comb weights must be nonnegative")
    total = sum(p for _, p in samples)
    if not total > 0:
        raise ValueError("at least one comb weight must be positive")
    merged: dict[int, float] = {}
    for l, p in samples:
        merged[l] = merged.get(l, 0.0) + p
    scale = 1.0 / (delta * total)
    return CombPrior(delta, tuple(sorted((l, p * scale) for l, p in merged.items())))


# --- Kaiser family ---------------------------------------------------------


def kaiser_normalization_asymptote(alpha: float) -> float:
    """Leading large-alpha form 4 sqrt(2) pi^4 alpha^(7/2) exp(-4 pi alpha)."""
    return math.exp(_log_asymptote(alpha))


def _log_asymptote(alpha: float) -> float:
    return math.log(4 * math.sqrt(2) * math.pi**4) + 3.5 * math.log(alpha) - 4 * math.pi * alpha


def kaiser_normalization_series(alpha: float) -> float:
    """Asymptotic series for N_alpha with six (all negative) corrections."""
    if alpha < 1:
        raise ValueError("the series is only used in the asymptotic regime alpha >= 1")
    return kaiser_normalization_asymptote(alpha) * (1.0 - sum(kaiser_series_terms(alpha)))


def kaiser_series_terms(alpha: float) -> np.ndarray:
    """Magnitudes of the six correction terms, c_k / alpha^k."""
    return np.array([c / alpha ** (k + 1) for k, c in enumerate(_SERIES_COEFFS)])


def kaiser_normalization_bessel(alpha: float) -> float:
    """Intermediate approximation N_alpha ~ 2 pi^3 alpha^3 / I0(4 pi alpha)."""
    return math.exp(math.log(2 * math.pi**3 * alpha**3) - log_bessel_i0(4 * math.pi * alpha))


def _sinc4(v):
    return np.sinc(np.asarray(v) / np.pi) ** 4


def _tail_zeros(alpha: float, x_max: float) -> np.ndarray:
    # sinc(pi alpha sqrt(x^2 - 1)) vanishes at x = sqrt(1 + (k/alpha)^2)
    k_max = int(alpha * math.sqrt(x_max**2 - 1))
    k = np.arange(1, k_max + 1)
    return np.sqrt(1.0 + (k / alpha) ** 2)


def _tail_remainder(alpha: float, x_max: float) -> float:
    # int_{x_max}^inf (pi alpha)^-4 (x^2-1)^-2 dx <= (pi alpha)^-4 / (3 x_max^3 (1 - x_max^-2)^2)
    return 1.0 / ((math.pi * alpha) ** 4 * 3 * x_max**3 * (1 - x_max**-2) ** 2)


def _log_unnormalized_mass(alpha: float, L: float, spec: QuadratureSpec) -> float:
    c = 4 * alpha / L

    def core(phi):
        x = L * phi / (4 * alpha)
        u = math.pi * alpha * np.sqrt(np.clip(1 - x * x, 0.0, None))
        return L * np.exp(4 * log_sinhc(u) - 4 * math.pi * alpha)

    def tail(phi):
        x = L * phi / (4 * alpha)
        return L * _sinc4(math.pi * alpha * np.sqrt(np.maximum(x * x - 1, 0.0)))

    core_scaled = 2 * integrate_adaptive(core, 0.0, c, spec)
    tail_total = 2 * (
        integrate_adaptive(tail, c, TAIL_CUTOFF * c, spec, points=c * _tail_zeros(alpha, TAIL_CUTOFF))
        + 4 * alpha * _tail_remainder(alpha, TAIL_CUTOFF)
    )
    return 4 * math.pi * alpha + math.log(core_scaled + math.exp(-4 * math.pi * alpha) * tail_total)


def kaiser_normalization(alpha: float, spec: QuadratureSpec | None = None, L: float = 1.0) -> float:
    """N_alpha = 1 / integral of L sinc^4(pi alpha sqrt((L phi / 4 alpha)^2 - 1)) dphi.

    The core and tail are integrated separately; the result does not depend
    on ``L``, which is exposed only so that this can be checked.
    """
    return math.exp(log_kaiser_normalization(alpha, spec, L))


def log_kaiser_normalization(alpha: float, spec: QuadratureSpec | None = None, L: float = 1.0) -> float:
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not L > 0:
        raise ValueError("bandwidth L must be positive")
    spec = spec or QuadratureSpec.from_env()
    return -_log_unnormalized_mass(alpha, L, spec)


@dataclass(frozen=True)
class KaiserPrior:
    alpha: float
    L: float
    log_norm: float = field(default=float("nan"))

    def __post_init__(self):
        if not (self.alpha > 0 and self.L > 0):
            raise ValueError("alpha and L must be positive")

    @classmethod
    def create(cls, alpha: float, L: float, spec: QuadratureSpec | None = None) -> "KaiserPrior":
        return cls(alpha, L, log_kaiser_normalization(alpha, spec))

    @property
    def normalization(self) -> float:
        return math.exp(self.log_norm)

    @property
    def core_halfwidth(self) -> float:
        return 4 * self.alpha / self.L

    def density(self, phi):
        return kaiser_density(self, phi)

    def to_json(self) -> dict:
        return {"kind": "kaiser", "alpha": self.alpha, "L": self.L, "normalization": self.normalization}


def kaiser_density(prior: KaiserPrior, phi):
    if math.isnan(prior.log_norm):
        raise ValueError("prior normalization has not been computed; use KaiserPrior.create")
    phi = np.asarray(phi, dtype=float)
    x2 = (prior.L * phi / (4 * prior.alpha)) ** 2
    scale = prior.log_norm + math.log(prior.L)
    out = np.empty_like(phi)
    core = x2 < 1
    if core.any():
        u = math.pi * prior.alpha * np.sqrt(1 - x2[core])
        out[core] = np.exp(scale + 4 * log_sinhc(u))
    if (~core).any():
        v = math.pi * prior.alpha * np.sqrt(x2[~core] - 1)
        out[~core] = math.exp(scale) * _sinc4(v)
    return out[()] if out.ndim == 0 else out


def kaiser_tail_mass_bound(alpha: float, spec: QuadratureSpec | None = None) -> float:
    """Upper bound N_alpha 8 alpha (1 + (1/3 - log(3)/4) / (pi^4 alpha^4)) on the mass outside the core."""
    n_alpha = kaiser_normalization(alpha, spec)
    return n_alpha * 8 * alpha * (1 + (1 / 3 - math.log(3) / 4) / (math.pi**4 * alpha**4))


def _relative_spec() -> QuadratureSpec:
    # tail masses are ~exp(-4 pi alpha); only a relative tolerance is meaningful
    return QuadratureSpec(abs_tol=1e-300, rel_tol=QuadratureSpec.from_env().rel_tol)


def kaiser_survival(prior: KaiserPrior, t: float, spec: QuadratureSpec | None = None) -> float:
    """Mass of the Kaiser prior on [t, inf) for t at or beyond the core edge."""
    spec = spec or _relative_spec()
    c = prior.core_halfwidth
    if t < c:
        raise ValueError("kaiser_survival is only defined on the tail, t >= 4 alpha / L")
    hi = TAIL_CUTOFF * c
    remainder = prior.normalization * 4 * prior.alpha * _tail_remainder(prior.alpha, TAIL_CUTOFF)
    if t >= hi:
        x = t / c
        return prior.normalization * 4 * prior.alpha * _tail_remainder(prior.alpha, x)
    zeros = c * _tail_zeros(prior.alpha, TAIL_CUTOFF)
    return integrate_adaptive(prior.density, t, hi, spec, points=zeros) + remainder


def kaiser_tail_mass(prior: KaiserPrior, spec: QuadratureSpec | None = None) -> float:
    """Mass outside the core [-4 alpha / L, 4 alpha / L] by direct quadrature."""
    spec = spec or _relative_spec()
    return 2 * kaiser_survival(prior, prior.core_halfwidth, spec)


def kaiser_total_mass(prior: KaiserPrior, spec: QuadratureSpec | None = None) -> float:
    """Integral of the normalized density over the real line (should be 1)."""
    spec = spec or QuadratureSpec.from_env()
    c = prior.core_halfwidth
    core = 2 * integrate_adaptive(prior.density, 0.0, c, spec)
    return core + kaiser_tail_mass(prior, spec)


def kaiser_transform(prior: KaiserPrior, nu, spec: QuadratureSpec | None = None):
    """Fourier transform int p(phi) exp(-2 pi i nu phi) dphi at ordinary frequency ``nu``.

    The density is even, so this is the real cosine transform.  In this
    convention the transform vanishes for |nu| > L/2.
    """
    spec = spec or QuadratureSpec.from_env()
    c = prior.core_halfwidth
    hi = TAIL_CUTOFF * c
    zeros = c * _tail_zeros(prior.alpha, TAIL_CUTOFF)
    nus = np.atleast_1d(np.asarray(nu, dtype=float))
    out = np.empty_like(nus)
    for i, f in enumerate(nus):
        w = 2 * math.pi * f

        def integrand(phi, w=w):
            return prior.density(phi) * np.cos(w * phi)

        n_cos = int(abs(w) * hi / math.pi)
        cos_nodes = np.arange(1, n_cos + 1) * math.pi / abs(w) if n_cos else np.empty(0)
        pts = np.concatenate([[c], zeros, cos_nodes])
        out[i] = 2 * integrate_adaptive(integrand, 0.0, hi, spec, points=pts)
    return out[0] if np.ndim(nu) == 0 else out


def bandwidth_excess(prior: KaiserPrior, tol: float = 1e-10, nus=None) -> float:
    """Largest |transform| found on a frequency grid outside [-L/2, L/2].

    ``tol`` is the absolute quadrature tolerance.  The default grid is 64
    points on [1.05 L/2, 4 L]; by evenness negative frequencies are skipped.
    """
    if nus is None:
        nus = np.linspace(1.05 * prior.L / 2, 4 * prior.L, 64)
    nus = np.asarray(nus, dtype=float)
    if np.any(np.abs(nus) <= prior.L / 2):
        raise ValueError("frequency grid must lie outside [-L/2, L/2]")
    spec = QuadratureSpec(abs_tol=tol, rel_tol=tol)
    return float(np.max(np.abs(kaiser_transform(prior, nus, spec))))


# --- smeared rectangle -----------------------------------------------------


@dataclass(frozen=True)
class SmearedRectPrior:
    """Rectangle of width delta - 8 alpha / L convolved with p_{alpha,L}."""

    kaiser: KaiserPrior
    delta: float

    def __post_init__(self):
        if not self.delta > 8 * self.kaiser.alpha / self.kaiser.L:
            raise ValueError(
                "core width nonpositive: smeared prior needs delta > 8*alpha/L "
                f"(delta={self.delta!r}, 8*alpha/L={8 * self.kaiser.alpha / self.kaiser.L!r})"
            )

    @classmethod
    def create(cls, alpha: float, L: float, delta: float, spec: QuadratureSpec | None = None):
        if not delta > 8 * alpha / L:
            raise ValueError(
                f"core width nonpositive: smeared prior needs delta > 8*alpha/L "
                f"(delta={delta!r}, 8*alpha/L={8 * alpha / L!r})"
            )
        return cls(KaiserPrior.create(alpha, L, spec), delta)

    @property
    def alpha(self) -> float:
        return self.kaiser.alpha

    @property
    def L(self) -> float:
        return self.kaiser.L

    @property
    def inner_halfwidth(self) -> float:
        return 0.5 * self.delta - 4 * self.alpha / self.L

    def density(self, phi, spec: QuadratureSpec | None = None):
        return smeared_density(self, phi, spec)

    def to_json(self) -> dict:
        return {"kind": "smeared", "alpha": self.alpha, "L": self.L, "delta": self.delta}


def smeared_density(prior: SmearedRectPrior, phi, spec: QuadratureSpec | None = None):
    spec = spec or QuadratureSpec.from_env()
    h = prior.inner_halfwidth
    c = prior.kaiser.core_halfwidth
    width = 2 * h
    phis = np.atleast_1d(np.asarray(phi, dtype=float))
    out = np.empty_like(phis)
    for i, p in enumerate(phis):
        # kinks of the integrand in eta sit where phi - eta crosses the core edge
        pts = [p - c, p + c]
        out[i] = integrate_adaptive(lambda eta, p=p: prior.kaiser.density(p - eta), -h, h, spec, points=pts)
    out /= width
    return out[0] if np.ndim(phi) == 0 else out


def smeared_outside_mass(prior: SmearedRectPrior, spec: QuadratureSpec | None = None) -> float:
    """Mass of the smeared prior outside [-delta/2, delta/2].

    Equals (2 / (delta - 8 alpha / L)) times the integral of the Kaiser
    survival function over [4 alpha / L, delta - 4 alpha / L].
    """
    spec = spec or _relative_spec()
    c = prior.kaiser.core_halfwidth
    width = 2 * prior.inner_halfwidth

    def surv(t):
        return kaiser_survival(prior.kaiser, t, spec)

    val = integrate_adaptive(surv, c, prior.delta - c, spec, vectorized=False)
    return 2 * val / width


def prior_from_json(obj: dict, spec: QuadratureSpec | None = None):
    kind = obj.get("kind")
    if kind == "rect":
        return RectPrior(float(obj["delta"]), float(obj.get("center", 0.0)))
    if kind == "comb":
        return comb_from_samples(float(obj["delta"]), obj["weights"])
    if kind == "kaiser":
        alpha, L = float(obj["alpha"]), float(obj["L"])
        if "normalization" in obj:
            return KaiserPrior(alpha, L, math.log(float(obj["normalization"])))
        return KaiserPrior.create(alpha, L, spec)
    if kind == "smeared":
        return SmearedRectPrior.create(float(obj["alpha"]), float(obj["L"]), float(obj["delta"]), spec)
    raise ValueError(f"unknown prior kind {kind!r}")
