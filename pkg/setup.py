"""Build the optional compiled kernels.

The package works without the extension (a pure-Python fallback is selected
at import time), so any failure here degrades to a warning instead of
aborting the install.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        warnings.warn("Cython unavailable; building without compiled kernels")
        return []
    return cythonize(
        [
            Extension(
                "identicheck._kernels",
                ["src/identicheck/_kernels.pyx"],
                # -O3 is safe for the error-free transformations used in the
                # kernels; -ffast-math would break them and must not be added.
                # -march=native lets fma() compile to the hardware instruction
                # instead of the (slow, but equally exact) libm fallback.
                # -ffp-contract=off keeps implicit a*b+c sequences as two
                # IEEE roundings, so results are bit-identical to the
                # pure-Python mirror (only the explicit fma() in two_prod may
                # fuse, and that one is an exact transform either way).
                extra_compile_args=["-O3", "-march=native", "-ffp-contract=off"],
            )
        ],
        language_level="3",
    )


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"compiled kernels skipped: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernels skipped: {exc}")


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
