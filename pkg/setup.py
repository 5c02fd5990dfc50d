from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; the engine falls back at import
    ext_modules = []
else:
    ext_modules = cythonize(
        "src/cva6perf/_kernel.pyx",
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=ext_modules)
