import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # The package works without the compiled kernel; a pure-Python
    # permanent is selected at import time when this module is absent.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "dickesim._ryser",
                ["src/dickesim/_ryser.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
