import sys

from setuptools import setup

# The compiled kernel is an optional speedup; the package falls back to the
# numpy implementation in ifs_spectra.kernels._kernels_py when the extension
# is missing, so a failed compile must not fail the install.
ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "ifs_spectra.kernels._kernels",
                ["src/ifs_spectra/kernels/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover
    print(f"ifs-spectra: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
