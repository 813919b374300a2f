from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [Extension("mkbell._speedups", ["src/mkbell/_speedups.pyx"])],
        language_level=3,
    )
else:
    # Pure-python fallback kernels are selected at import time, so the
    # package still works without the compiled extension.
    ext_modules = []

setup(ext_modules=ext_modules)
