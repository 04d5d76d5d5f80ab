"""Build script: compiles the optional Cython kernel core.

The package is fully functional without the extension (a pure NumPy/Python
backend is selected at import time); the build therefore never fails just
because Cython or a C compiler is missing.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/hktrace/_core/_core_cy.pyx"],
        language_level=3,
        annotate=False,
    )
except Exception as exc:  # pragma: no cover - depends on build environment
    print(f"hktrace: building without the compiled core ({exc!r})")

setup(ext_modules=ext_modules)
