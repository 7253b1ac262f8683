"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension; `foodvol._kernels`
falls back to vectorized NumPy implementations when the compiled module is
absent (the Extension is marked optional so a missing compiler does not
break installation).
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "foodvol._kernels._fastcore",
                ["src/foodvol/_kernels/_fastcore.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
