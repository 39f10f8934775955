import os

from setuptools import setup

# The compiled kernel is optional: when Cython (or a C compiler) is missing the
# package still installs and descent_kit.kernel falls back to the pure-Python twin.
ext_modules = []
if not os.environ.get("DESCENT_KIT_PURE_BUILD"):
    try:
        from Cython.Build import cythonize
        from setuptools.extension import Extension

        ext_modules = cythonize(
            [Extension("descent_kit._fpcore", ["src/descent_kit/_fpcore.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
