from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [Extension("subsetsel._kernels", ["src/subsetsel/_kernels.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    # No Cython at build time: install pure-Python only; the package falls
    # back to subsetsel._kernels_py at import.
    ext_modules = []

setup(ext_modules=ext_modules)
