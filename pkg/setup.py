"""Builds the optional compiled walk kernels; the package works without them."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("DIRAC_WALK_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "diracwalk._kernels",
                    ["src/diracwalk/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
