"""Build the optional compiled sampling kernel.

The package works without the extension (a pure-Python twin is selected at
import time), so a failed build is tolerated rather than fatal.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "blcsim._pairs",
                ["src/blcsim/_pairs.pyx"],
                # Keep strict IEEE semantics: the compiled kernel must produce
                # bit-identical streams to the pure-Python twin.
                extra_compile_args=["-O2"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

# package_dir must be visible to build_ext --inplace so the extension lands
# in src/blcsim/ even when pip runs from another directory.
setup(ext_modules=ext_modules, package_dir={"": "src"})
