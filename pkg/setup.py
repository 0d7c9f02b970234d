"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension; iondecoh.kernels
falls back to the numpy implementation when _fastcore is missing.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the Cython kernels, but never fail the install over them."""

    def run(self):
        try:
            build_ext.run(self)
        except Exception as exc:
            print("skipping compiled kernels (%s); using pure-python fallback" % exc)

    def build_extension(self, ext):
        try:
            build_ext.build_extension(self, ext)
        except Exception as exc:
            print("skipping %s (%s); using pure-python fallback" % (ext.name, exc))


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "iondecoh._fastcore",
        ["src/iondecoh/_fastcore.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": 3})


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
