"""Build the compiled match kernel; fall back to pure Python when
Cython or a C compiler is unavailable."""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "aspdim._matchcore",
                ["src/aspdim/_matchcore.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
