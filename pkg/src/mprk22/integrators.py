"""MPRK22 time steps and fixed-step trajectories for conservative PDS.

The two-stage schemes come in two variants distinguished by how the stage
value is formed: with conservative stages (the classic MPRK22(alpha) family)
or with non-conservative stages (MPRK22ncs(alpha)).  Both are unconditionally
positive and conservative for every step size.  Each substep is linear in its
unknowns because the Patankar weights are frozen at already-known values, so
a step costs two dense N x N solves and never needs nonlinear iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _backend
from .errors import (
    IntegrationError,
    MprkError,
    NumericalBreakdown,
    SingularSystem,
)
from .pds import ProductionSystem, as_state, production_split, require_positive, validate_linear_pds


class StageVariant(Enum):
    """Stage treatment: gamma = 1 (conservative) or gamma = 0 (non-conservative)."""

    CONSERVATIVE = "cs"
    NON_CONSERVATIVE = "ncs"

    @property
    def gamma(self) -> float:
        return 1.0 if self is StageVariant.CONSERVATIVE else 0.0


@dataclass(frozen=True)
class SchemeParams:
    """Scheme parameter alpha >= 1/2 plus the stage variant."""

    alpha: float
    variant: StageVariant = StageVariant.CONSERVATIVE

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "variant", StageVariant(self.variant))
        if not (np.isfinite(self.alpha) and self.alpha >= 0.5):
            raise ValueError(f"alpha must be >= 1/2, got {self.alpha!r}")

    @property
    def gamma(self) -> float:
        return self.variant.gamma


@dataclass(frozen=True)
class StepResult:
    """Output of one step: the new state, the internal stage, and the step size."""

    next: np.ndarray
    stage: np.ndarray
    step_size: float


@dataclass(frozen=True)
class Trajectory:
    """States at the equispaced times n * dt for n = 0 .. n_steps."""

    times: np.ndarray
    states: np.ndarray
    params: SchemeParams
    step_size: float

    def __len__(self):
        return self.states.shape[0]


def _solve(M, rhs, what):
    try:
        x = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"{what} system is singular") from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystem(f"{what} solve produced non-finite values")
    return x


def _check_positive_output(x, what):
    if np.any(x <= 0.0):
        i = int(np.argmax(x <= 0.0))
        raise NumericalBreakdown(
            f"{what} component {i} is nonpositive ({x[i]!r}); the schemes are "
            "positive in exact arithmetic, so this indicates floating-point "
            "catastrophe or an invalid system"
        )
    return x


def patankar_denominators(stage, y, alpha):
    """Denominators sigma_i = stage_i^(1/alpha) * y_i^(1 - 1/alpha).

    Evaluated in log space so non-integer exponents are safe for any positive
    arguments; alpha = 1 short-circuits to the stage itself.  Relative
    accuracy degrades for components below ~1e-300; no guard is attempted.
    """
    if alpha == 1.0:
        return np.array(stage, dtype=float, copy=True)
    inva = 1.0 / alpha
    return np.exp(inva * np.log(stage) + (1.0 - inva) * np.log(y))


def mprk22_step(system: ProductionSystem, y_n, dt, params: SchemeParams) -> StepResult:
    """Advance a conservative PDS by one MPRK22 step.

    Parameters
    ----------
    system : ProductionSystem
        Production matrix function of the PDS.
    y_n : array_like
        Current state, strictly positive componentwise.
    dt : float
        Step size > 0.
    params : SchemeParams
        alpha and stage variant.

    Both the stage system and the final system are assembled as dense N x N
    linear problems (the unknowns enter linearly) and solved by Gaussian
    elimination with partial pivoting.  Raises NonPositiveInput,
    NumericalBreakdown or SingularSystem.
    """
    y = require_positive(as_state(y_n))
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if y.size != system.dimension:
        raise ValueError(f"state has {y.size} components, system expects {system.dimension}")
    alpha = params.alpha
    gamma = params.gamma

    P1 = system.production_matrix(y)
    destruction = P1.sum(axis=0)  # sum_j d_ij(y) = column sums of P
    M1 = (-alpha * dt * gamma) * (P1 / y[None, :])
    diag = np.diag_indices_from(M1)
    M1[diag] += 1.0 + alpha * dt * destruction / y
    rhs = y + (alpha * dt * (1.0 - gamma)) * P1.sum(axis=1)
    stage = _check_positive_output(_solve(M1, rhs, "stage"), "stage")

    sigma = patankar_denominators(stage, y, alpha)
    P2 = system.production_matrix(stage)
    w = 0.5 / alpha
    W = (1.0 - w) * P1 + w * P2
    M2 = (-dt) * (W / sigma[None, :])
    M2[diag] += 1.0 + dt * W.sum(axis=0) / sigma
    y_next = _check_positive_output(_solve(M2, y, "step"), "step output")
    return StepResult(next=y_next, stage=stage, step_size=float(dt))


def mprk22_step_linear(A, y_n, dt, params: SchemeParams) -> StepResult:
    """One MPRK22 step specialized to a linear PDS y' = A y.

    The stage is formed from the production/destruction split of A and the
    final state solves the one-step system matrix built from the stage
    weights and Patankar denominators, as a dense solve without any rank-one
    assumption.  Agrees with :func:`mprk22_step` on the induced
    ProductionSystem.
    """
    A = validate_linear_pds(A)
    y = require_positive(as_state(y_n))
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if y.size != A.shape[0]:
        raise ValueError(f"state has {y.size} components, matrix is {A.shape[0]}x{A.shape[0]}")
    alpha = params.alpha
    A_P, A_D = production_split(A)
    eye = np.eye(A.shape[0])

    if params.gamma == 1.0:
        stage = _solve(eye - alpha * dt * A, y, "stage")
    else:
        stage = (y + alpha * dt * (A_P @ y)) / (1.0 + alpha * dt * np.diag(A_D))
    stage = _check_positive_output(stage, "stage")

    sigma = patankar_denominators(stage, y, alpha)
    w = 0.5 / alpha
    weights = (1.0 - w) * y + w * stage
    M = eye - dt * A * (weights / sigma)[None, :]
    y_next = _check_positive_output(_solve(M, y, "step"), "step output")
    return StepResult(next=y_next, stage=stage, step_size=float(dt))


def integrate(step_fn, y0, dt, n_steps, params: SchemeParams) -> Trajectory:
    """Run ``n_steps`` fixed-size steps of ``step_fn(y, dt, params)`` from y0.

    On a step failure the step's error is wrapped in IntegrationError, which
    carries the failing step index and the partial trajectory up to the last
    good state.
    """
    y = require_positive(as_state(y0))
    n_steps = int(n_steps)
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    times = np.arange(n_steps + 1) * float(dt)
    states = np.empty((n_steps + 1, y.size))
    states[0] = y
    for k in range(1, n_steps + 1):
        try:
            y = step_fn(y, dt, params).next
        except MprkError as exc:
            partial = Trajectory(times[:k].copy(), states[:k].copy(), params, float(dt))
            raise IntegrationError(f"step {k} failed: {exc}", step_index=k, partial=partial) from exc
        states[k] = y
    return Trajectory(times, states, params, float(dt))


def integrate_linear_2x2(a, b, y0, dt, n_steps, params: SchemeParams) -> Trajectory:
    """Fast fixed-step trajectory for the 2x2 linear PDS with rates (a, b).

    Runs the backend kernel (compiled when available); equivalent to
    ``integrate`` with ``mprk22_step_linear`` on ((-a, b), (a, -b)) but with
    per-step cost independent of Python-level overhead.
    """
    a = float(a)
    b = float(b)
    if a < 0.0 or b < 0.0 or a + b <= 0.0:
        raise ValueError("rates must satisfy a, b >= 0 and a + b > 0")
    y = require_positive(as_state(y0))
    if y.size != 2:
        raise ValueError("y0 must have exactly two components")
    n_steps = int(n_steps)
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    states, fail_step = _backend.linear2x2_trajectory(
        a, b, params.alpha, params.gamma, float(dt), y[0], y[1], n_steps
    )
    times = np.arange(n_steps + 1) * float(dt)
    if fail_step != -1:
        partial = Trajectory(times[:fail_step].copy(), states[:fail_step].copy(), params, float(dt))
        raise IntegrationError(
            f"step {fail_step} produced a nonpositive or non-finite state",
            step_index=int(fail_step),
            partial=partial,
        )
    return Trajectory(times, states, params, float(dt))
