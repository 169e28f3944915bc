import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_linear_pds(rng, n):
    """Random conservative rate matrix: nonnegative off-diagonals, zero column sums."""
    A = rng.uniform(0.0, 3.0, size=(n, n))
    np.fill_diagonal(A, 0.0)
    A[np.diag_indices(n)] = -A.sum(axis=0)
    return A


def rel_err(computed, expected):
    computed = np.asarray(computed, dtype=float)
    expected = np.asarray(expected, dtype=float)
    return float(np.max(np.abs(computed - expected) / np.abs(expected)))
