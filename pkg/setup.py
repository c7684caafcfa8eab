"""Builds the optional compiled kernel extension.

The package works without it (a numpy fallback is selected at import time),
so a missing compiler or Cython only costs speed, not functionality.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gaussnet._kernels._ckernels",
                sources=["src/gaussnet/_kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
