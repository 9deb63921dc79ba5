"""Build script: compiles the query-walk kernels when Cython is available.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile degrades to a slower install instead of
a broken one.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "noisythreshold._kernels",
                ["src/noisythreshold/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
