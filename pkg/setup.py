"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so any failure here degrades to a pure build.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("paleylab._ckernels", ["src/paleylab/_ckernels.pyx"])],
        language_level=3,
    )
except Exception as exc:  # Cython missing or cythonization failed
    print(f"paleylab: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
