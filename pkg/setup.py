import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("WORDRANK_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:  # build without the compiled core; the Python fallback is used
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("wordrank._ckernels", ["src/wordrank/_ckernels.pyx"], extra_compile_args=["-O3"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
