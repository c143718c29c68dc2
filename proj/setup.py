from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "mechkit._mechkit",
    sources=[
        "src/core.cpp",
        "src/preferences.cpp",
        "src/blocks.cpp",
        "src/mechanism.cpp",
        "src/checkers.cpp",
        "src/search.cpp",
        "src/io.cpp",
        "bindings/mechkit_py.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
