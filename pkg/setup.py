import os

from setuptools import setup

ext_modules = []
if not os.environ.get("BCJULIA_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "bcjulia._ckernels",
                    ["src/bcjulia/_ckernels.pyx"],
                    # no FMA contraction: keeps results identical to the numpy fallback
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
