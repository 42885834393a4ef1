"""Builds the optional compiled counting kernel; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("E7PAVING_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("e7paving.counting._kernel", ["src/e7paving/counting/_kernel.pyx"], extra_compile_args=["-O3"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
