import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("IC_FEEDBACK_NO_EXT", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # build without the compiled kernels
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("ic_feedback._kernels", ["src/ic_feedback/_kernels.pyx"], optional=True)],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
