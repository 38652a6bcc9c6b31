"""Build script for the optional libsodium-backed ristretto255 kernels.

The extension is optional: if Cython, a compiler or libsodium is missing the
build still succeeds and ``certfree`` falls back to the pure-Python kernels.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: skipping compiled kernels ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc})")


def extensions():
    if os.environ.get("CERTFREE_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    ext = Extension(
        "certfree.group._ristretto_ext",
        ["src/certfree/group/_ristretto_ext.pyx"],
        libraries=["sodium"],
        extra_compile_args=["-O2"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
