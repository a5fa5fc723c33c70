"""Select the compiled kernels when available, else the pure-Python ones.

Set ``IC_FEEDBACK_PURE_PYTHON=1`` to force the fallback (used by the
benchmark and by tests that compare both backends).
"""

import os

from . import _kernels_py as python_kernels

compiled_kernels = None
if os.environ.get("IC_FEEDBACK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError:  # extension not built
        compiled_kernels = None

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = "compiled" if compiled_kernels is not None else "python"

# Largest absolute coefficient the compiled integer kernels accept. Feasibility
# checks multiply three such values, which stays far below 2**63.
INT_KERNEL_LIMIT = 1 << 20
