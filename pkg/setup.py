import os

from setuptools import setup

# The compiled trigram kernel is an optional speedup; the package falls back
# to the pure-Python implementation when the extension is missing.
ext_modules = []
if os.environ.get("EATCOACH_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            "src/eatcoach/kernels/_trigram.pyx",
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
