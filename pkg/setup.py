"""Build script; the compiled kernel is optional and skipped when Cython is absent."""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SPARSECERT_SKIP_EXT", "") not in ("1", "true"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "sparsecert._kernels._minsv",
                    ["src/sparsecert/_kernels/_minsv.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
