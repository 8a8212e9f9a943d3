"""Build script: compiles the hot-loop extension when a toolchain is available.

The package works without the extension (a numpy fallback is selected at
import time), so any failure here downgrades to a pure-Python install.
Set NONLOCAL_FV_NO_EXT=1 to skip the compilation attempt entirely.
"""

import os

from setuptools import setup


def extension_modules():
    if os.environ.get("NONLOCAL_FV_NO_EXT"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "nonlocal_fv._core",
        ["src/nonlocal_fv/_core.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extension_modules())
