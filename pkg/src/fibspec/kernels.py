"""Backend dispatch for the hot kernels.

FIBSPEC_BACKEND selects the implementation: "numba" (require the JIT
backend), "numpy" (pure-numpy fallback), or unset/"auto" (numba when
importable).  FIBSPEC_THREADS caps the numba thread count.
"""

import os

_choice = os.environ.get("FIBSPEC_BACKEND", "auto").lower()
if _choice not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"FIBSPEC_BACKEND must be auto|numba|numpy, got {_choice!r}")

USING_NUMBA = False
if _choice in ("auto", "numba"):
    try:
        import numba as _numba

        threads = os.environ.get("FIBSPEC_THREADS")
        if threads:
            _numba.set_num_threads(max(1, min(int(threads), _numba.config.NUMBA_NUM_THREADS)))
        from . import _kernels_numba as _impl

        USING_NUMBA = True
    except ImportError:
        if _choice == "numba":
            raise
        from . import _kernels_numpy as _impl
else:
    from . import _kernels_numpy as _impl

pwc_transfer = _impl.pwc_transfer
transfer_rk4 = _impl.transfer_rk4
prufer_rk4 = _impl.prufer_rk4
trace_orbit = _impl.trace_orbit

BACKEND = "numba" if USING_NUMBA else "numpy"
