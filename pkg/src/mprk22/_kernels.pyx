# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the hot kernels in ``_kernels_py``.

Same functions, same semantics; see that module for the contracts.  The 2x2
trajectory loop and the stability-function batch evaluations dominate the
runtime of long runs and region rasters, which is why they are compiled.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, isfinite, log, NAN

cnp.import_array()


cdef inline void _step(double a, double b, double alpha, double gamma,
                       double dt, double y1, double y2, double* out) nogil:
    cdef double det, s1, s2, sig1, sig2, inva, w, tau1, tau2, denom, inc
    if gamma == 1.0:
        det = 1.0 + alpha * dt * (a + b)
        s1 = ((1.0 + alpha * dt * b) * y1 + alpha * dt * b * y2) / det
        s2 = (alpha * dt * a * y1 + (1.0 + alpha * dt * a) * y2) / det
    else:
        s1 = (y1 + alpha * dt * b * y2) / (1.0 + alpha * dt * a)
        s2 = (y2 + alpha * dt * a * y1) / (1.0 + alpha * dt * b)
    if s1 <= 0.0 or s2 <= 0.0:
        out[0] = NAN
        out[1] = NAN
        out[2] = s1
        out[3] = s2
        return
    if alpha == 1.0:
        sig1 = s1
        sig2 = s2
    else:
        inva = 1.0 / alpha
        sig1 = exp(inva * log(s1) + (1.0 - inva) * log(y1))
        sig2 = exp(inva * log(s2) + (1.0 - inva) * log(y2))
    w = 0.5 / alpha
    tau1 = ((1.0 - w) * y1 + w * s1) / sig1
    tau2 = ((1.0 - w) * y2 + w * s2) / sig2
    denom = 1.0 + dt * (a * tau1 + b * tau2)
    inc = (dt / denom) * (b * tau2 * y2 - a * tau1 * y1)
    out[0] = y1 + inc
    out[1] = y2 - inc
    out[2] = s1
    out[3] = s2


def linear2x2_step(double a, double b, double alpha, double gamma,
                   double dt, double y1, double y2):
    cdef double buf[4]
    _step(a, b, alpha, gamma, dt, y1, y2, buf)
    return buf[0], buf[1], buf[2], buf[3]


def linear2x2_trajectory(double a, double b, double alpha, double gamma,
                         double dt, double y1, double y2, Py_ssize_t n_steps):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.full((n_steps + 1, 2), np.nan)
    cdef double[:, ::1] ov = out
    cdef double buf[4]
    cdef Py_ssize_t n
    ov[0, 0] = y1
    ov[0, 1] = y2
    for n in range(1, n_steps + 1):
        _step(a, b, alpha, gamma, dt, y1, y2, buf)
        y1 = buf[0]
        y2 = buf[1]
        if not (y1 > 0.0 and y2 > 0.0 and isfinite(y1) and isfinite(y2)):
            return out, n
        ov[n, 0] = y1
        ov[n, 1] = y2
    return out, -1


def r_cs_batch(z, double alpha):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] zz = np.ascontiguousarray(z, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(zz)
    cdef Py_ssize_t i, n = zz.shape[0]
    cdef double v
    for i in range(n):
        v = zz[i]
        out[i] = (2.0 - 2.0 * alpha * v - v * v) / (2.0 * (1.0 - v) * (1.0 - alpha * v))
    return out.reshape(np.shape(z))


def r_ncs_batch(z_a, z_b, double alpha):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] za = np.ascontiguousarray(z_a, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] zb = np.ascontiguousarray(z_b, dtype=np.float64).ravel()
    if za.shape[0] != zb.shape[0]:
        raise ValueError("z_a and z_b must have the same length")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(za)
    cdef Py_ssize_t i, n = za.shape[0]
    cdef double u, v, z, mu
    for i in range(n):
        u = za[i]
        v = zb[i]
        z = u + v
        mu = u / (1.0 - alpha * u) + v / (1.0 - alpha * v)
        out[i] = (2.0 - z * mu) / (2.0 * (1.0 - z))
    return out.reshape(np.shape(z_a))
