"""Build script for the optional compiled kernel core.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the hot kernels faster.  Build in
place with:

    python setup.py build_ext --inplace
"""

import os

from setuptools import Extension, setup

PYX = os.path.join("src", "gnnscope", "_kernels", "_native.pyx")

extensions = []
if os.path.exists(PYX):
    try:
        import numpy
        from Cython.Build import cythonize

        extensions = cythonize(
            [
                Extension(
                    "gnnscope._kernels._native",
                    sources=[PYX],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        extensions = []

setup(ext_modules=extensions)
