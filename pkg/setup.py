"""Build script: compiles the optional Cython search kernel.

The package works without the extension (a pure-Python kernel is selected at
import time); building it just makes the exhaustive flow searches much faster.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/signedflow/_kernel.pyx"],
        language_level=3,
    )
except ImportError:
    print("Cython not available; installing with the pure-Python kernel only.")

setup(ext_modules=ext_modules)
