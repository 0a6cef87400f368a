import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("STONEFORGE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("stoneforge._kernels._ckernels",
                       ["src/stoneforge/_kernels/_ckernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
