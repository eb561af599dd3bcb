from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [
            Extension(
                "blockcumulants._core",
                ["src/blockcumulants/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    ),
)
