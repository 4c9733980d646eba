import os

import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional: without Cython the package installs
# and runs on the pure-Python fallback.
try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("SCRING_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "scring._kernels",
                ["src/scring/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
