"""Pure-Python implementations of the hot kernels.

These are the fallback twins of the compiled module ``mprk22._kernels``
(built from ``_kernels.pyx``).  Both expose the same functions with the same
semantics; ``mprk22._backend`` picks whichever is importable.  The scalar
2x2 step uses the closed one-step map of the schemes (stage update, Patankar
denominators, rank-one step inverse), so a trajectory costs a handful of
arithmetic operations per step.
"""

import math

import numpy as np


def linear2x2_step(a, b, alpha, gamma, dt, y1, y2):
    """One MPRK22 step for y' = ((-a, b), (a, -b)) y.

    Returns ``(y1_next, y2_next, stage1, stage2)``.  Inputs must satisfy
    y1, y2 > 0, dt > 0, alpha >= 0.5, gamma in {0, 1}.
    """
    if gamma == 1.0:
        det = 1.0 + alpha * dt * (a + b)
        s1 = ((1.0 + alpha * dt * b) * y1 + alpha * dt * b * y2) / det
        s2 = (alpha * dt * a * y1 + (1.0 + alpha * dt * a) * y2) / det
    else:
        s1 = (y1 + alpha * dt * b * y2) / (1.0 + alpha * dt * a)
        s2 = (y2 + alpha * dt * a * y1) / (1.0 + alpha * dt * b)
    if s1 <= 0.0 or s2 <= 0.0:
        return math.nan, math.nan, s1, s2
    if alpha == 1.0:
        sig1 = s1
        sig2 = s2
    else:
        inva = 1.0 / alpha
        sig1 = math.exp(inva * math.log(s1) + (1.0 - inva) * math.log(y1))
        sig2 = math.exp(inva * math.log(s2) + (1.0 - inva) * math.log(y2))
    w = 0.5 / alpha
    tau1 = ((1.0 - w) * y1 + w * s1) / sig1
    tau2 = ((1.0 - w) * y2 + w * s2) / sig2
    denom = 1.0 + dt * (a * tau1 + b * tau2)
    inc = (dt / denom) * (b * tau2 * y2 - a * tau1 * y1)
    return y1 + inc, y2 - inc, s1, s2


def linear2x2_trajectory(a, b, alpha, gamma, dt, y1, y2, n_steps):
    """Iterate ``linear2x2_step`` for ``n_steps`` steps.

    Returns ``(states, fail_step)`` where ``states`` is an
    (n_steps + 1) x 2 array starting at (y1, y2).  ``fail_step`` is -1 on
    success; otherwise it is the 1-based index of the first step whose output
    was nonpositive or non-finite, and the rows from that step on are left as
    NaN.
    """
    out = np.full((n_steps + 1, 2), math.nan)
    out[0, 0] = y1
    out[0, 1] = y2
    for n in range(1, n_steps + 1):
        y1, y2, _, _ = linear2x2_step(a, b, alpha, gamma, dt, y1, y2)
        if not (y1 > 0.0 and y2 > 0.0 and math.isfinite(y1) and math.isfinite(y2)):
            return out, n
        out[n, 0] = y1
        out[n, 1] = y2
    return out, -1


def r_cs_batch(z, alpha):
    """Stability function of the conservative-stage variant on an array of z = z_a + z_b."""
    z = np.asarray(z, dtype=float)
    return (2.0 - 2.0 * alpha * z - z * z) / (2.0 * (1.0 - z) * (1.0 - alpha * z))


def r_ncs_batch(z_a, z_b, alpha):
    """Stability function of the non-conservative-stage variant on arrays of (z_a, z_b)."""
    z_a = np.asarray(z_a, dtype=float)
    z_b = np.asarray(z_b, dtype=float)
    z = z_a + z_b
    mu = z_a / (1.0 - alpha * z_a) + z_b / (1.0 - alpha * z_b)
    return (2.0 - z * mu) / (2.0 * (1.0 - z))
