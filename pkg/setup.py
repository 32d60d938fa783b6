"""Build hook for the optional compiled kernel.

The package works without the extension (a pure-Python twin of the kernel is
selected at import time), so a failed compile only costs speed. Set
KNASTER_LAB_PURE=1 to skip the extension build entirely.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: compiled kernel skipped ({exc}); using pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: compiled kernel skipped ({exc}); using pure-Python kernel")


PYX = "src/knaster_lab/_kernel_c.pyx"

ext_modules = []
if os.environ.get("KNASTER_LAB_PURE") != "1" and os.path.exists(PYX):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize([PYX], language_level=3, annotate=False)
    except ImportError:
        print("warning: Cython not available; using pure-Python kernel")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
