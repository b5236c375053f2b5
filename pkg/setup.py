"""Build the optional Cython kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so any build failure here is demoted to a warning.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "pmcglue._kernels._ckernels",
                ["src/pmcglue/_kernels/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover
    warnings.warn(f"building without compiled kernels: {exc}")

setup(ext_modules=ext_modules)
