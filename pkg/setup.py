"""Build script for the optional compiled geometry kernels.

The package works without the extension (a numpy fallback is selected at
import time), so the extension is marked optional: a failed compile must
not break installation.
"""

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
                "pluginsert.kernels._fast",
                ["src/pluginsert/kernels/_fast.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off keeps results bit-identical to the
                # numpy fallback (no FMA contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
