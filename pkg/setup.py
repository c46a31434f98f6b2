"""Build script: compiles the biquad-cascade hot kernel when Cython is available.

The package works without the extension (a pure-python fallback is selected at
import time); the compiled kernel is only a speed path for long recordings.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "corteg.dsp._kernels",
                ["src/corteg/dsp/_kernels.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
