"""Build script: compiles the optional C integration core.

The package is fully functional without the extension (a pure-numpy loop is
selected at import time), so a missing compiler or Cython only costs speed.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: C core not built ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to compile {ext.name} ({exc}); "
                  "using pure-Python fallback")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; building without the C core")
        return []
    return cythonize(
        [Extension(
            "rigidform._core._kernel",
            ["src/rigidform/_core/_kernel.pyx"],
            extra_compile_args=["-O3"],
        )],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
