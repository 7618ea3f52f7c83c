"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting HZN_PURE_PYTHON=1
forces the numpy fallback.  ``BACKEND`` names the active one.
"""
import os

if os.environ.get("HZN_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import form_rows, lerch_direct, phase_power_block, phased_sum
    BACKEND = "python"
else:
    try:
        from ._kernels import form_rows, lerch_direct, phase_power_block, phased_sum
        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernels_py import form_rows, lerch_direct, phase_power_block, phased_sum
        BACKEND = "python"

__all__ = ["BACKEND", "form_rows", "lerch_direct", "phase_power_block", "phased_sum"]
