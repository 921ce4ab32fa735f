import os

from setuptools import find_packages, setup

__dir = os.path.abspath(os.path.dirname(__file__))
# don’t import __version__ from the flocksway package, its dependencies
# may not be installed yet while pip evaluates this file
__version__ = "0.1.1"

try:
    with open(os.path.join(__dir, "README.md"), encoding="utf-8") as f:
        long_description = "\n" + f.read()
except FileNotFoundError:
    long_description = ""


setup(
    name="flocksway",
    version=__version__,
    description=(
        "flocksway simulates the consensus of Vicsek flocks steered by "
        "influencing agents"
    ),
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=("tests", "examples")),
    install_requires=[
        "blessings",
        "blinker",
        "joblib",
        "numpy",
        "scipy",
    ],
    extras_require={},
    entry_points={
        "console_scripts": ["flocksway=flocksway.runner:console_main"],
    },
    include_package_data=True,
    package_data={
        "": ["README.md", "CHANGELOG.md"],
    },
    python_requires=">=3.9",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering",
    ],
)
