"""Stability functions, stability regions and spectral checks for MPRK22.

At a steady state of the 2x2 test problem the step map's Jacobian has
eigenvalues {1, R} where R depends only on the scaled steps
(z_a, z_b) = (-dt a, -dt b) and the scheme; |R| < 1 decides Lyapunov
stability.  The conservative-stage variant satisfies |R| < 1 for all negative
scaled steps.  The non-conservative variant does so only for alpha >= 1;
for 1/2 <= alpha < 1 its stability region is bounded below by an explicit
curve z_b = f(z_a), and the critical step size for given rates is where that
curve crosses the ray -dt (a, b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _backend
from .errors import BracketFailure, DomainError
from .integrators import StageVariant
from .pds import as_state, require_positive

# Half-width of the |R| = 1 band reported as on_boundary.  The theory gives
# no verdict at |R| = 1, so points in the band are reported as not stable.
BOUNDARY_BAND = 1e-12

_BRACKET_LIMIT = 1e6


class ScaledStepPoint(NamedTuple):
    """Scaled step (z_a, z_b) = (-dt a, -dt b)."""

    z_a: float
    z_b: float


@dataclass(frozen=True)
class StabilityVerdict:
    r_value: float
    stable: bool
    on_boundary: bool


@dataclass(frozen=True)
class RegionRaster:
    """Boolean stability of the non-conservative variant on a square lattice.

    ``z_values`` are the lattice coordinates used on both axes (inside
    [z_min, 0), so strictly negative); ``stable[i, j]`` classifies the point
    (z_values[i], z_values[j]).  Boundary-cell ambiguity is bounded by one
    cell at the stored resolution.
    """

    alpha: float
    z_values: np.ndarray
    stable: np.ndarray
    z_min: float
    resolution: int


def r_cs(point, alpha) -> float:
    """Stability function of the conservative-stage variant.

    Depends on (z_a, z_b) only through z = z_a + z_b:
    R = (2 - 2 alpha z - z^2) / (2 (1 - z)(1 - alpha z)).
    """
    z_a, z_b = point
    z = float(z_a) + float(z_b)
    if z > 0.0:
        raise ValueError(f"requires z_a + z_b <= 0, got {z!r}")
    if not alpha >= 0.5:
        raise ValueError(f"alpha must be >= 1/2, got {alpha!r}")
    return (2.0 - 2.0 * alpha * z - z * z) / (2.0 * (1.0 - z) * (1.0 - alpha * z))


def r_ncs(point, alpha) -> float:
    """Stability function of the non-conservative-stage variant.

    R = (2 - z mu) / (2 (1 - z)) with z = z_a + z_b and
    mu = z_a/(1 - alpha z_a) + z_b/(1 - alpha z_b); symmetric in its
    arguments and bounded in (-1/alpha, 1) for negative arguments.
    """
    z_a, z_b = (float(point[0]), float(point[1]))
    if z_a > 0.0 or z_b > 0.0:
        raise ValueError(f"requires z_a, z_b <= 0, got ({z_a!r}, {z_b!r})")
    if not alpha >= 0.5:
        raise ValueError(f"alpha must be >= 1/2, got {alpha!r}")
    z = z_a + z_b
    mu = z_a / (1.0 - alpha * z_a) + z_b / (1.0 - alpha * z_b)
    return (2.0 - z * mu) / (2.0 * (1.0 - z))


def stability_function(point, alpha, variant) -> float:
    """R for the requested variant at a scaled step point."""
    variant = StageVariant(variant)
    if variant is StageVariant.CONSERVATIVE:
        return r_cs(point, alpha)
    return r_ncs(point, alpha)


def region_boundary(xi, alpha) -> float:
    """The unique z_b < 0 with R_ncs(xi, z_b) = -1, for 1/2 <= alpha < 1.

    Solves the quadratic in z_b obtained from R_ncs = -1:
    z_b = -p/2 - sqrt(p^2/4 - q).  For alpha >= 1 no boundary exists
    (|R_ncs| < 1 everywhere) and DomainError is raised.  The same happens for
    columns with xi >= (1 - 2 alpha) / (2 alpha (1 - alpha)): there the
    z_b -> -inf limit of R_ncs stays above -1, the whole column is stable and
    no crossing exists.
    """
    alpha = float(alpha)
    xi = float(xi)
    if not 0.5 <= alpha < 1.0:
        raise DomainError(f"the region boundary exists only for 1/2 <= alpha < 1, got {alpha!r}")
    if not xi < 0.0:
        raise ValueError(f"xi must be negative, got {xi!r}")
    xi_crit = (1.0 - 2.0 * alpha) / (2.0 * alpha * (1.0 - alpha))
    if xi >= xi_crit:
        raise DomainError(
            f"no boundary crossing for xi = {xi!r}: columns right of {xi_crit!r} "
            "lie entirely inside the stability region"
        )
    lead = (2.0 * alpha - 1.0) * (1.0 - alpha * xi) + alpha * xi
    p = -2.0 * (1.0 - alpha * xi) * (2.0 * alpha + (1.0 - alpha) * xi + 1.0) / lead
    q = (2.0 * (1.0 - alpha * xi) * (2.0 - xi) - xi * xi) / lead
    disc = 0.25 * p * p - q
    if disc < -1e-12:
        # would require a complex root: alpha outside [1/2, 1) slipped through
        # or the quadratic coefficients are corrupted
        raise ArithmeticError(f"negative boundary discriminant {disc!r}")
    return -0.5 * p - math.sqrt(max(disc, 0.0))


def critical_time_step(a, b, alpha) -> float:
    """Largest stable step size of the non-conservative variant for rates (a, b).

    The unique dt with R_ncs(-dt a, -dt b) = -1, found by bracketed bisection
    to absolute tolerance 1e-12.  Defined for 1/2 <= alpha < 1; for
    alpha >= 1 every step size is stable and DomainError is raised.
    """
    a = float(a)
    b = float(b)
    alpha = float(alpha)
    if not 0.5 <= alpha < 1.0:
        raise DomainError(f"a critical step exists only for 1/2 <= alpha < 1, got {alpha!r}")
    if a <= 0.0 or b <= 0.0:
        raise ValueError("rates must be positive")

    def excess(dt):
        return r_ncs((-dt * a, -dt * b), alpha) + 1.0

    lo = 0.0  # R -> 1 as dt -> 0, so excess(0+) = 2
    hi = 1.0
    while excess(hi) > 0.0:
        hi *= 2.0
        if hi > _BRACKET_LIMIT:
            raise BracketFailure(f"no sign change of R + 1 found up to dt = {_BRACKET_LIMIT:g}")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def classify(point, alpha, variant) -> StabilityVerdict:
    """Stability verdict from |R| against 1 with an on-boundary band of 1e-12.

    Points inside the band are flagged and reported as not stable; the theory
    gives no verdict at |R| = 1.
    """
    r = stability_function(point, alpha, variant)
    on_boundary = abs(abs(r) - 1.0) <= BOUNDARY_BAND
    return StabilityVerdict(r_value=r, stable=(abs(r) < 1.0) and not on_boundary, on_boundary=on_boundary)


def raster_region(alpha, z_min, resolution) -> RegionRaster:
    """Classify the non-conservative variant on a lattice over [z_min, 0)^2."""
    alpha = float(alpha)
    z_min = float(z_min)
    resolution = int(resolution)
    if not z_min < 0.0:
        raise ValueError(f"z_min must be negative, got {z_min!r}")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    z_values = np.linspace(z_min, 0.0, resolution, endpoint=False)
    za, zb = np.meshgrid(z_values, z_values, indexing="ij")
    r = np.asarray(_backend.r_ncs_batch(za.ravel(), zb.ravel(), alpha)).reshape(za.shape)
    absr = np.abs(r)
    stable = (absr < 1.0) & (np.abs(absr - 1.0) > BOUNDARY_BAND)
    return RegionRaster(alpha=alpha, z_values=z_values, stable=stable, z_min=z_min, resolution=resolution)


def finite_difference_jacobian(map_fn, y, h) -> np.ndarray:
    """Central-difference Jacobian of ``map_fn`` at ``y`` with offset ``h``."""
    y = as_state(y)
    h = float(h)
    if not h > 0.0:
        raise ValueError("h must be positive")
    n = y.size
    jac = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        jac[:, j] = (np.asarray(map_fn(y + e)) - np.asarray(map_fn(y - e))) / (2.0 * h)
    return jac


def spectral_check(jac, y_star) -> tuple[float, float, float]:
    """Diagonalize a 2x2 Jacobian in the basis (y*, (1, -1)).

    Returns (eig1, eigR, diag_residual): the two diagonal entries of
    S^-1 J S with S = (y*, (1,-1)), and the largest off-diagonal magnitude.
    S is always invertible since (1, -1) cannot be a multiple of a positive
    vector.
    """
    y = require_positive(as_state(y_star))
    jac = np.asarray(jac, dtype=float)
    if jac.shape != (2, 2) or y.size != 2:
        raise ValueError("spectral_check expects a 2x2 Jacobian and a 2-component state")
    S = np.column_stack([y, np.array([1.0, -1.0])])
    T = np.linalg.solve(S, jac @ S)
    return float(T[0, 0]), float(T[1, 1]), float(max(abs(T[0, 1]), abs(T[1, 0])))


def eigenvalues_2x2(m) -> np.ndarray:
    """Real eigenvalues of a 2x2 matrix by the quadratic formula, descending."""
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    half_tr = 0.5 * (m[0, 0] + m[1, 1])
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = half_tr * half_tr - det
    if disc < 0.0:
        if disc < -1e-12 * max(1.0, half_tr * half_tr):
            raise ArithmeticError(f"complex eigenvalue pair (discriminant {disc!r})")
        disc = 0.0
    root = math.sqrt(disc)
    return np.array([half_tr + root, half_tr - root])
