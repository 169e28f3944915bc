import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "mprk22._kernels",
                ["src/mprk22/_kernels.pyx"],
                include_dirs=[np.get_include()],
                # fp-contract off keeps the compiled kernels bit-identical
                # to the pure-Python twins (no FMA contraction)
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
