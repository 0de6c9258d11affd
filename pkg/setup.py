"""Build hooks: cythonize the hot kernels when a compiler is available.

The package is fully functional without the extension (pure-Python twins in
urncheck._kernels.py are selected at import), so extension build failures
are downgraded to warnings.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/urncheck/_kernels/fast.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"warning: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
