from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [Extension("gerbelab._speedups", ["src/gerbelab/_speedups.pyx"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
