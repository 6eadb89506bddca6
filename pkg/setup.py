from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("linegeo._kernels", ["src/linegeo/_kernels.pyx"])],
        language_level="3",
    )
    # the pure-Python kernels are selected at import time if compilation
    # is unavailable, so a failed build must not abort the install
    for ext in extensions:
        ext.optional = True
except ImportError:
    extensions = []

setup(ext_modules=extensions)
