"""Build script for the compiled kernel extension.

The extension is optional at runtime: if it is missing the package falls
back to a pure-Python/numpy implementation of the same kernels.  Building
without Cython therefore still yields a working (slower) install.
"""

from setuptools import Extension, setup

ext = Extension(
    "bsdlab._kernels._fast",
    ["src/bsdlab/_kernels/_fast.pyx"],
    extra_compile_args=["-O3"],
)

try:
    from Cython.Build import cythonize

    ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
