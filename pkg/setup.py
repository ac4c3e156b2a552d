from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "satgadget._ringkernel",
                ["src/satgadget/_ringkernel.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    # Cython unavailable: the package falls back to the numpy kernels.
    ext_modules = []

setup(ext_modules=ext_modules)
