from setuptools import setup, Extension

import numpy as np

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "srgtool.sim._kernels",
                ["src/srgtool/sim/_kernels.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level="3",
    )
except ImportError:
    # The package falls back to the pure-Python integrator at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
