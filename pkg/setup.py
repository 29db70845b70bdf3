"""Build script: compiles the optional Cayley-stepping kernel.

The package is fully functional without the extension (a NumPy/SciPy
fallback is selected at import time); the compiled kernel removes the
per-step Python and LAPACK-call overhead from the propagator loop.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "qrulesim._cayley",
                ["src/qrulesim/_cayley.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
