"""Kernel selection: compiled extension when available, pure Python otherwise.

Set URNCHECK_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the twin-equivalence tests).
"""

from __future__ import annotations

import os

from . import py as _py

if os.environ.get("URNCHECK_PURE_PYTHON", "") not in ("", "0"):
    _impl = _py
else:
    try:
        from . import fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _py

IMPLEMENTATION = _impl.IMPLEMENTATION

orient_occ_tables = _impl.orient_occ_tables
orient_ball_table = _impl.orient_ball_table
masked_sums = _impl.masked_sums
upset_pair_scan = _impl.upset_pair_scan
fm_scan = _impl.fm_scan

# The compiled scans work on int64 and 64-bit masks; callers must route
# oversized inputs to the Python twins.  The largest product formed is
# n * total^2 (fm_scan), so 2^29 with n <= 16 stays inside int64.
INT64_SAFE_TOTAL = 1 << 29
MAX_KERNEL_POINTS = 64
MAX_KERNEL_COORDS = 16

python_twin = _py
