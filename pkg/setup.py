from setuptools import find_packages, setup

setup(
    name="JAX-Szego",
    version="0.1.0",
    description="Zeros of scaled partial sums of entire functions and their Szego curves, in JAX",
    packages=find_packages(exclude=["tests", "tests.*"]),
    license="BSD License",
    install_requires=[
        "numpy >= 1.18.0",
        "jax",
        "jaxlib",
        "tensorflow-probability >= 0.21.0",
        "matplotlib",
        "pyyaml",
    ],
    tests_require=["pytest"],
    entry_points={"console_scripts": ["jax-szego = jax_szego.cli:main"]},
)
