import os

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("binfringe._core", ["src/binfringe/_core.pyx"],
                   include_dirs=[np.get_include()],
                   # no -ffast-math: the core must stay bit-identical to the Python fallback
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

if os.environ.get("BINFRINGE_NO_EXT"):
    ext_modules = []

setup(ext_modules=ext_modules)
