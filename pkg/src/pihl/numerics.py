"""
Numerical kernels shared by the rest of the package.

Adaptive Gauss-Kronrod quadrature, the modified Bessel function I0, a
stable log(sinh(u)/u), the minimal eigenpair of a real symmetric matrix and
bisection root finding.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

DEFAULT_QUAD_TOL = 1e-10
QUAD_TOL_ENV = "PI_HL_QUAD_TOL"


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    The best available estimate and its estimated residual error are kept
    on the exception so callers can decide whether to use them anyway.
    """

    def __init__(self, message: str, estimate: float, residual: float):
        super().__init__(f"{message} (estimate={estimate!r}, residual={residual:.3e})")
        self.estimate = estimate
        self.residual = residual


class BracketError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = DEFAULT_QUAD_TOL
    rel_tol: float = DEFAULT_QUAD_TOL
    max_depth: int = 50

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")

    @classmethod
    def from_env(cls) -> "QuadratureSpec":
        """Default spec, with both tolerances overridden by $PI_HL_QUAD_TOL if set."""
        raw = os.environ.get(QUAD_TOL_ENV)
        if not raw:
            return cls()
        tol = float(raw)
        return cls(abs_tol=tol, rel_tol=tol)


# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
_GAUSS_W[1:7:2] = _WG[:3]
_GAUSS_W[7] = _WG[3]
_GAUSS_W[9:14:2] = _WG[2::-1]

_EPS = np.finfo(float).eps
_MAX_INTERVALS = 200_000


def _gk15(f, a: np.ndarray, b: np.ndarray, vectorized: bool):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = center[:, None] + half[:, None] * _NODES[None, :]
    if vectorized:
        fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    else:
        fx = np.array([float(f(t)) for t in x.ravel()]).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise ValueError("integrand is not finite on the integration interval")
    kronrod = half * (fx @ _KRONROD_W)
    gauss = half * (fx @ _GAUSS_W)
    # QUADPACK error heuristic
    mean = kronrod / np.where(half != 0, 2 * half, 1.0)
    resabs = np.abs(half) * (np.abs(fx) @ _KRONROD_W)
    resasc = np.abs(half) * (np.abs(fx - mean[:, None]) @ _KRONROD_W)
    err = np.abs(kronrod - gauss)
    scaled = np.where(
        resasc > 0,
        resasc * np.minimum(1.0, (200 * err / np.where(resasc > 0, resasc, 1.0)) ** 1.5),
        err,
    )
    floor = 50 * _EPS * resabs
    return kronrod, np.maximum(scaled, floor)


def integrate_adaptive(
    f: Callable,
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
    points: Sequence[float] | None = None,
    vectorized: bool = True,
) -> float:
    """Integrate ``f`` over ``[a, b]`` by adaptive 7/15-point Gauss-Kronrod.

    ``f`` is called with 1-D arrays of abscissae unless ``vectorized`` is
    False.  ``points`` are break points (kinks, known oscillation nodes)
    inside ``(a, b)`` used as the initial partition.

    Intervals are bisected in batches until the summed error estimate is
    below ``max(abs_tol, rel_tol * |I|)``.  An interval that would need
    splitting beyond ``spec.max_depth`` raises :class:`QuadratureError`.
    """
    spec = spec or QuadratureSpec.from_env()
    if not (a < b):
        raise ValueError(f"need a < b, got a={a}, b={b}")
    edges = [a]
    if points is not None:
        edges.extend(sorted(p for p in points if a < p < b))
    edges.append(b)
    edges = np.unique(np.asarray(edges, dtype=float))

    lo, hi = edges[:-1], edges[1:]
    depth = np.zeros(lo.size, dtype=int)
    est, err = _gk15(f, lo, hi, vectorized)
    done_est = 0.0
    done_err = 0.0

    while True:
        total = done_est + est.sum()
        total_err = done_err + err.sum()
        tol = max(spec.abs_tol, spec.rel_tol * abs(total))
        if total_err <= tol:
            return float(total)

        # Retire intervals whose error is negligible for their share of [a, b].
        keep = err > 0.5 * tol * (hi - lo) / (b - a)
        if not keep.all():
            done_est += est[~keep].sum()
            done_err += err[~keep].sum()
            lo, hi, depth, est, err = lo[keep], hi[keep], depth[keep], est[keep], err[keep]
            if lo.size == 0:
                return float(done_est)

        # Split the intervals that carry the bulk of the error.
        order = np.argsort(err)[::-1]
        cum = np.cumsum(err[order])
        budget = tol - done_err
        excess = cum[-1] - 0.5 * max(budget, 0.0)
        n_split = int(np.searchsorted(cum, excess) + 1)
        split = np.zeros(lo.size, dtype=bool)
        split[order[: min(n_split, lo.size)]] = True

        if np.any(depth[split] >= spec.max_depth) or lo.size + split.sum() > _MAX_INTERVALS:
            raise QuadratureError(
                "adaptive quadrature did not converge", float(total), float(total_err)
            )
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        new_depth = np.concatenate([depth[split], depth[split]]) + 1
        new_est, new_err = _gk15(f, new_lo, new_hi, vectorized)

        lo = np.concatenate([lo[~split], new_lo])
        hi = np.concatenate([hi[~split], new_hi])
        depth = np.concatenate([depth[~split], new_depth])
        est = np.concatenate([est[~split], new_est])
        err = np.concatenate([err[~split], new_err])


_I0_SERIES_MAX = 25.0


def _i0_series(x: float) -> float:
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while term > _EPS * total:
        k += 1
        term *= q / (k * k)
        total += term
    return total


def bessel_i0e(x: float) -> float:
    """Exponentially scaled Bessel function exp(-x) I0(x) for x >= 0."""
    x = float(x)
    if x < 0:
        raise ValueError("bessel_i0e requires x >= 0")
    if x <= _I0_SERIES_MAX:
        return _i0_series(x) * math.exp(-x)
    # Hankel asymptotic series; terms ((2k-1)!!)^2 / (k! (8x)^k)
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= (2 * k - 1) ** 2 / (k * 8.0 * x)
        total += term
        if term < _EPS * total:
            break
    return total / math.sqrt(2 * math.pi * x)


def bessel_i0(x: float) -> float:
    """Modified Bessel function of the first kind, order zero.

    Returns ``inf`` once I0(x) exceeds the float range; use
    :func:`log_bessel_i0` there.
    """
    x = float(x)
    if x <= _I0_SERIES_MAX:
        if x < 0:
            raise ValueError("bessel_i0 requires x >= 0")
        return _i0_series(x)
    scaled = bessel_i0e(x)
    if x > 700.0:
        return math.inf if math.log(scaled) + x > 709.0 else math.exp(x) * scaled
    return math.exp(x) * scaled


def log_bessel_i0(x: float) -> float:
    return float(x) + math.log(bessel_i0e(x))


def log_sinhc(u):
    """log(sinh(u)/u) for u >= 0, scalar or array, without overflow."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("log_sinhc requires u >= 0")
    out = np.empty_like(u)
    small = u < 0.1
    large = u > 20.0
    mid = ~(small | large)
    if small.any():
        s = u[small] ** 2
        out[small] = s * (1 / 6 + s * (-1 / 180 + s * (1 / 2835 + s * (-1 / 37800 + s / 467775))))
    if mid.any():
        um = u[mid]
        out[mid] = np.log(np.sinh(um) / um)
    if large.any():
        ul = u[large]
        out[large] = ul + np.log1p(-np.exp(-2 * ul)) - np.log(2 * ul)
    return out[()] if out.ndim == 0 else out


def _as_symmetric(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError("expected a non-empty square matrix")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not exactly symmetric")
    return a


def sym_eig_min(a) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue of a real symmetric matrix and a unit eigenvector.

    Backed by LAPACK (``dsyevr`` via scipy) restricted to the lowest
    eigenpair.
    """
    a = _as_symmetric(a)
    w, v = scipy.linalg.eigh(a, subset_by_index=[0, 0])
    vec = v[:, 0]
    return float(w[0]), vec / np.linalg.norm(vec)


def tridiag_eig_min(diag, offdiag) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of the symmetric tridiagonal matrix given by its bands."""
    d = np.asarray(diag, dtype=float)
    e = np.asarray(offdiag, dtype=float)
    if e.size != d.size - 1:
        raise ValueError("offdiag must have one element fewer than diag")
    w, v = scipy.linalg.eigh_tridiagonal(d, e, select="i", select_range=(0, 0))
    vec = v[:, 0]
    return float(w[0]), vec / np.linalg.norm(vec)


def find_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Bisection on a sign-changing bracket; returns the midpoint of the final bracket."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return float(lo)
    if fhi == 0:
        return float(hi)
    if not (np.sign(flo) * np.sign(fhi) < 0):
        raise BracketError(f"f(lo)={flo!r} and f(hi)={fhi!r} do not bracket a root")
    lo, hi = float(lo), float(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
