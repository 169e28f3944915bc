"""Production-destruction systems and their validation.

A conservative PDS is described entirely by its production matrix function
P(y): entry (i, j) is the production rate of component i fed by component j.
Destruction terms are never stored; they are recovered through the transpose
relation d_ij(y) = p_ji(y), so conservation cannot be violated by
construction.
"""

from __future__ import annotations

import numpy as np

from .errors import NonPositiveInput, NotConservative, SignPatternViolation

# Relative tolerance for the zero-column-sum check of a rate matrix.  Column
# sums of user-supplied floating-point matrices may carry rounding, so an
# exact-zero demand would reject legitimate inputs.
COLUMN_SUM_RTOL = 1e-14


def as_state(values) -> np.ndarray:
    """Convert ``values`` to a 1-D float state vector, requiring finite entries."""
    y = np.atleast_1d(np.asarray(values, dtype=float))
    if y.ndim != 1 or y.size < 1:
        raise ValueError("state must be a 1-D sequence with at least one entry")
    if not np.all(np.isfinite(y)):
        raise ValueError("state entries must be finite")
    return y


def require_positive(y: np.ndarray, what: str = "state") -> np.ndarray:
    """Raise NonPositiveInput unless every component of ``y`` is > 0."""
    if np.any(y <= 0.0):
        bad = int(np.argmax(y <= 0.0))
        raise NonPositiveInput(f"{what} has nonpositive component at index {bad}: {y[bad]!r}")
    return y


def total_mass(y) -> float:
    """Sum of all components of a state (the conserved quantity for positive states)."""
    return float(np.sum(as_state(y)))


def validate_linear_pds(A) -> np.ndarray:
    """Check that a rate matrix defines a positive and conservative linear PDS.

    Requires a_ii <= 0, a_ij >= 0 for i != j, and every column summing to zero
    within ``COLUMN_SUM_RTOL`` relative to the column's largest absolute
    entry.  Returns the matrix as a float array.

    Raises SignPatternViolation or NotConservative on failure.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"rate matrix must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("rate matrix entries must be finite")
    diag = np.diag(A)
    if np.any(diag > 0.0):
        i = int(np.argmax(diag > 0.0))
        raise SignPatternViolation(f"diagonal entry ({i},{i}) = {diag[i]!r} is positive")
    off = A - np.diag(diag)
    if np.any(off < 0.0):
        i, j = np.unravel_index(int(np.argmax(off < 0.0)), A.shape)
        raise SignPatternViolation(f"off-diagonal entry ({i},{j}) = {A[i, j]!r} is negative")
    col_sums = A.sum(axis=0)
    col_scale = np.max(np.abs(A), axis=0)
    bad = np.abs(col_sums) > COLUMN_SUM_RTOL * col_scale
    if np.any(bad):
        j = int(np.argmax(bad))
        raise NotConservative(f"column {j} sums to {col_sums[j]!r}, not zero")
    return A


def production_split(A) -> tuple[np.ndarray, np.ndarray]:
    """Split a validated rate matrix as A = A_P - A_D.

    A_P carries the off-diagonal (production) entries with a zero diagonal;
    A_D is diagonal with the nonnegative destruction rates -a_ii.  The
    reassembly A_P - A_D reproduces A bit-exactly.
    """
    A = np.asarray(A, dtype=float)
    A_D = np.diag(-np.diag(A))
    A_P = A - np.diag(np.diag(A))
    return A_P, A_D


class ProductionSystem:
    """A conservative PDS given by its production matrix function.

    ``production`` maps a positive state y to the N x N matrix P(y) with
    p_ij(y) >= 0 and a zero diagonal.  Destructions are implied:
    d_ij(y) = p_ji(y).
    """

    def __init__(self, dimension: int, production):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = int(dimension)
        self._production = production

    def production_matrix(self, y: np.ndarray) -> np.ndarray:
        """Evaluate and validate P(y)."""
        P = np.asarray(self._production(y), dtype=float)
        n = self.dimension
        if P.shape != (n, n):
            raise ValueError(f"production matrix has shape {P.shape}, expected {(n, n)}")
        if not np.all(np.isfinite(P)):
            raise ValueError("production matrix has non-finite entries")
        if np.any(P < 0.0):
            i, j = np.unravel_index(int(np.argmax(P < 0.0)), P.shape)
            raise ValueError(f"production term p[{i},{j}] = {P[i, j]!r} is negative")
        if np.any(np.diag(P) != 0.0):
            i = int(np.argmax(np.diag(P) != 0.0))
            raise ValueError(f"production matrix diagonal p[{i},{i}] must be zero")
        return P

    @classmethod
    def from_linear(cls, A) -> "ProductionSystem":
        """Induce the PDS with p_ij(y) = a_ij * y_j (i != j) from a rate matrix."""
        A = validate_linear_pds(A)
        A_P, _ = production_split(A)

        def production(y):
            return A_P * np.asarray(y, dtype=float)[None, :]

        return cls(A.shape[0], production)


__all__ = [
    "COLUMN_SUM_RTOL",
    "ProductionSystem",
    "as_state",
    "production_split",
    "require_positive",
    "total_mass",
    "validate_linear_pds",
    "NonPositiveInput",
]
