"""Build script for the optional compiled search kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so the extension is marked optional: a failed compile degrades
the install instead of breaking it.
"""

from setuptools import Extension, setup

import numpy

ext = Extension(
    "ppdigraph._kernel._ckernel",
    ["src/ppdigraph/_kernel/_ckernel.pyx"],
    include_dirs=[numpy.get_include()],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    extra_compile_args=["-O3"],
    optional=True,
)

try:
    from Cython.Build import cythonize

    ext_modules = cythonize([ext], language_level="3")
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
