"""Select the compiled kernel module when available, else the pure-Python twin.

``BACKEND`` reports which one is active ("compiled" or "python").
"""

try:
    from . import _kernels as _impl

    BACKEND = "compiled"
except ImportError:  # extension not built; fall back to the Python twin
    from . import _kernels_py as _impl

    BACKEND = "python"

linear2x2_step = _impl.linear2x2_step
linear2x2_trajectory = _impl.linear2x2_trajectory
r_cs_batch = _impl.r_cs_batch
r_ncs_batch = _impl.r_ncs_batch

__all__ = [
    "BACKEND",
    "linear2x2_step",
    "linear2x2_trajectory",
    "r_cs_batch",
    "r_ncs_batch",
]
