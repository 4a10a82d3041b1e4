import os

from setuptools import Extension, setup

# The compiled kernels are an accelerator, not a requirement: eprb._backend
# falls back to the pure-Python implementation when the extension is absent.
# Set EPRB_SKIP_EXTENSION=1 to force a pure-Python install.
ext_modules = []
if not os.environ.get("EPRB_SKIP_EXTENSION"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "eprb._kernels",
                    ["src/eprb/_kernels.pyx"],
                    # -O2 without -ffast-math / -march=native: the compiled
                    # path must be bit-identical to the pure-Python one, so
                    # no reassociation, no FMA contraction. The sin/cos
                    # builtins are disabled because gcc otherwise fuses the
                    # adjacent calls into glibc sincos, which can differ from
                    # the separate calls (and from math.sin/math.cos) by an
                    # ulp.
                    extra_compile_args=[
                        "-O2",
                        "-fno-builtin-sin",
                        "-fno-builtin-cos",
                        "-fno-builtin-sincos",
                    ],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
