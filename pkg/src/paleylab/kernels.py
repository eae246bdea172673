"""Kernel backend selection.

The compiled extension (`paleylab._ckernels`, built from Cython) is preferred
for the enumeration-heavy kernels; the numpy fallback in `_kernels_py` is used
when the extension is missing or when PALEYLAB_PURE_PYTHON=1 is set.  Both
backends implement the same function surface and the same deterministic
tie-breaking.

pair_sums_cross / pair_sums_zip always use the numpy implementation: the
benchmark (bench/bench_kernels.py) shows vectorized integer matmul beats the
scalar compiled loop for those, and both produce identical exact integers.
"""

import os

from . import _kernels_py

if os.environ.get("PALEYLAB_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND_NAME

jacobi_extreme = _impl.jacobi_extreme
rip_scan_range = _impl.rip_scan_range
entry_sum_scan_range = _impl.entry_sum_scan_range
max_clique = _impl.max_clique
pair_sums_cross = _kernels_py.pair_sums_cross
pair_sums_zip = _kernels_py.pair_sums_zip
