"""The 2x2 linear test problem and the closed form of one MPRK22 step.

Every positive and conservative linear PDS of size 2 is y' = A y with
A = ((-a, b), (a, -b)), a, b >= 0, a + b > 0.  Its solution decays toward the
steady ray through (b, a) at rate a + b.  For a, b > 0 one MPRK22 step has a
closed form: the one-step system matrix is a rank-one perturbation of the
identity, so its inverse is explicit and the step map, the Patankar weight
ratios tau, and the Jacobian at a steady state can all be written out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSteadyState, NonPositiveInput, NotASteadyState
from .integrators import SchemeParams, patankar_denominators
from .pds import ProductionSystem, as_state, require_positive

# Determinant guard for the 2x2 adjugate inverse; the determinants that occur
# here are provably >= 1, so tripping it means corrupted inputs.
_DET_FLOOR = 1e-300


@dataclass(frozen=True)
class Linear2x2PDS:
    """Rates (a, b) of the test problem y' = ((-a, b), (a, -b)) y."""

    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("rates must be finite")
        if self.a < 0.0 or self.b < 0.0 or self.a + self.b <= 0.0:
            raise ValueError("rates must satisfy a, b >= 0 and a + b > 0")

    @property
    def eigenvalue(self) -> float:
        """The nonzero eigenvalue -(a + b) of the rate matrix."""
        return -(self.a + self.b)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[-self.a, self.b], [self.a, -self.b]])

    def production_system(self) -> ProductionSystem:
        return ProductionSystem.from_linear(self.matrix)


@dataclass(frozen=True)
class MapEvaluation:
    """One step map evaluation with its intermediate quantities.

    ``output`` is the new state, ``stage`` the internal stage value,
    ``tau`` the Patankar weight ratios, ``sigma`` the Patankar denominators
    and ``denominator`` the scalar 1 + dt*(a*tau_1 + b*tau_2) > 1 from the
    rank-one inverse of the one-step system.
    """

    output: np.ndarray
    stage: np.ndarray
    tau: tuple[float, float]
    sigma: tuple[float, float]
    denominator: float


def exact_solution(p: Linear2x2PDS, y0, t) -> np.ndarray:
    """Analytic solution at time t >= 0 for the initial state y0 > 0."""
    y = require_positive(as_state(y0))
    if y.size != 2:
        raise ValueError("y0 must have two components")
    t = float(t)
    if t < 0.0:
        raise ValueError("t must be >= 0")
    s = p.a + p.b
    ray = ((y[0] + y[1]) / s) * np.array([p.b, p.a])
    decay = ((p.a * y[0] - p.b * y[1]) / s) * math.exp(p.eigenvalue * t)
    return ray + decay * np.array([1.0, -1.0])


def steady_state(p: Linear2x2PDS, y0) -> np.ndarray:
    """The steady state with the same total mass as y0.

    Only interior steady states are returned; for a = 0 or b = 0 the steady
    state touches the boundary of the positive orthant and
    DegenerateSteadyState is raised.
    """
    y = require_positive(as_state(y0))
    if y.size != 2:
        raise ValueError("y0 must have two components")
    if p.a == 0.0 or p.b == 0.0:
        raise DegenerateSteadyState(
            f"steady state of (a={p.a}, b={p.b}) lies on the positivity boundary"
        )
    return ((y[0] + y[1]) / (p.a + p.b)) * np.array([p.b, p.a])


def stage_matrix(p: Linear2x2PDS, dt, params: SchemeParams) -> np.ndarray:
    """The matrix mapping the current state to the stage value.

    Conservative stages: (I - alpha dt A)^-1, inverted by the adjugate
    formula.  Non-conservative stages: (I + alpha dt A_D)^-1 (I + alpha dt A_P).
    All entries are nonnegative for dt > 0.
    """
    dt = float(dt)
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    c = params.alpha * dt
    a, b = p.a, p.b
    if params.gamma == 1.0:
        det = 1.0 + c * (a + b)
        if abs(det) < _DET_FLOOR:
            raise ZeroDivisionError("stage matrix determinant vanished")
        return np.array([[1.0 + c * b, c * b], [c * a, 1.0 + c * a]]) / det
    return np.array(
        [
            [1.0 / (1.0 + c * a), c * b / (1.0 + c * a)],
            [c * a / (1.0 + c * b), 1.0 / (1.0 + c * b)],
        ]
    )


def _tau(p, dt, params, y):
    stage = stage_matrix(p, dt, params) @ y
    sigma = patankar_denominators(stage, y, params.alpha)
    w = 0.5 / params.alpha
    tau = ((1.0 - w) * y + w * stage) / sigma
    return stage, sigma, tau


def step_map(p: Linear2x2PDS, dt, params: SchemeParams, y) -> MapEvaluation:
    """Evaluate the closed one-step map for a, b > 0.

    Uses the explicit rank-one inverse of the one-step system: the new state
    is (I + dt/(1 + dt(a tau_1 + b tau_2)) A diag(tau)) y.  For a = 0 or
    b = 0 use the integrators module instead.
    """
    if p.a == 0.0 or p.b == 0.0:
        raise DegenerateSteadyState("the closed step map requires a > 0 and b > 0")
    y = require_positive(as_state(y))
    if y.size != 2:
        raise NonPositiveInput("state must have two strictly positive components")
    stage, sigma, tau = _tau(p, float(dt), params, y)
    denominator = 1.0 + dt * (p.a * tau[0] + p.b * tau[1])
    increment = (dt / denominator) * (p.b * tau[1] * y[1] - p.a * tau[0] * y[0])
    output = y + increment * np.array([1.0, -1.0])
    return MapEvaluation(
        output=output,
        stage=stage,
        tau=(float(tau[0]), float(tau[1])),
        sigma=(float(sigma[0]), float(sigma[1])),
        denominator=float(denominator),
    )


def step_matrix(p: Linear2x2PDS, dt, params: SchemeParams, y) -> np.ndarray:
    """The one-step system matrix M(y) = I - dt A diag(tau(y))."""
    y = require_positive(as_state(y))
    _, _, tau = _tau(p, float(dt), params, y)
    return np.eye(2) - dt * p.matrix * tau[None, :]


def step_matrix_inverse(p: Linear2x2PDS, dt, params: SchemeParams, y) -> np.ndarray:
    """Explicit inverse of M(y) from its rank-one structure.

    M(y)^-1 = I + dt/(1 - trace(dt A diag(tau))) A diag(tau); the trace term
    equals -dt(a tau_1 + b tau_2), so the scalar denominator exceeds 1.
    """
    y = require_positive(as_state(y))
    _, _, tau = _tau(p, float(dt), params, y)
    denominator = 1.0 + dt * (p.a * tau[0] + p.b * tau[1])
    return np.eye(2) + (dt / denominator) * p.matrix * tau[None, :]


def jacobian_at_steady_state(p: Linear2x2PDS, dt, params: SchemeParams, y_star) -> np.ndarray:
    """Jacobian of the step map at a steady state y* > 0 with A y* = 0.

    Closed form: I + dt/(1 + dt(a + b)) A (I + (I - B)/(2 alpha)) with B the
    stage matrix.  Validates the steady-state precondition rather than
    projecting, so caller bugs surface instead of being masked.
    """
    y = require_positive(as_state(y_star))
    if y.size != 2:
        raise ValueError("y_star must have two components")
    A = p.matrix
    residual = np.max(np.abs(A @ y))
    if residual > 1e-12 * np.max(np.abs(y)):
        raise NotASteadyState(f"A @ y_star has residual {residual!r}")
    B = stage_matrix(p, float(dt), params)
    inner = np.eye(2) + (0.5 / params.alpha) * (np.eye(2) - B)
    return np.eye(2) + (dt / (1.0 + dt * (p.a + p.b))) * (A @ inner)


def degenerate_amplification(z, alpha) -> float:
    """Per-step decay factor of the surviving component when one rate is zero.

    For the system y1' = -a y1, y2' = a y1 both scheme variants reduce to
    y1_next = R(-dt a) y1 with R(z) = u / (u - z (1 - (alpha - 1/2) z)) and
    u = (1 - alpha z)^(1 - 1/alpha); 0 < R(z) < 1 for z < 0.
    """
    z = float(z)
    alpha = float(alpha)
    if not z < 0.0:
        raise ValueError(f"z must be negative, got {z!r}")
    if not alpha >= 0.5:
        raise ValueError(f"alpha must be >= 1/2, got {alpha!r}")
    u = (1.0 - alpha * z) ** (1.0 - 1.0 / alpha)
    return u / (u - z * (1.0 - (alpha - 0.5) * z))
