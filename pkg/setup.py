import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SCENEKG_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "scenekg.embed._sgns_cy",
                    ["src/scenekg/embed/_sgns_cy.pyx"],
                    # keep arithmetic bit-identical to the pure-python twin:
                    # no FMA contraction, strict FP semantics
                    extra_compile_args=["-ffp-contract=off", "-fno-fast-math"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # Pure-python fallback is selected at import time; the compiled
        # kernel is an optimization, not a requirement.
        ext_modules = []

setup(ext_modules=ext_modules)
