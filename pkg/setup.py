"""Build the optional Cython kernels; the package falls back to pure Python without them."""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "bellgauge._kernels",
                ["src/bellgauge/_kernels.pyx"],
                # no FMA contraction or sincos fusion: compiled and Python kernels must agree bitwise
                extra_compile_args=["-O2", "-ffp-contract=off", "-fno-builtin"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
