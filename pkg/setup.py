from setuptools import find_packages
from setuptools import setup

# Read the long description from README.md
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

_ = setup(
    name="posteriorlip",
    version="0.1.0",
    description=(
        "Lipschitz certificates of Bayesian posterior kernels in total variation "
        "and Wasserstein distances, with Poincaré-constant bounds, optimal transport "
        "distances and seeded verification experiments."
    ),
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=["posteriorlip", "posteriorlip.*"]),
    include_package_data=True,
    install_requires=[
        "numpy>=1.26",
        "scipy>=1.11",
        "POT>=0.9.1",
        "msgspec>=0.18.0",
    ],
    extras_require={
        "dev": [
            "ruff",
            "pytest",
            "hypothesis",
            "mypy",
            "basedpyright",
            "build",
        ],
    },
    entry_points={
        "console_scripts": [
            "posteriorlip=posteriorlip.cli:main",
        ],
    },
    python_requires=">=3.12",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: 3.13",
        "Operating System :: OS Independent",
        "Typing :: Typed",
    ],
    keywords=[
        "bayesian",
        "posterior",
        "lipschitz",
        "wasserstein",
        "optimal-transport",
        "poincare-inequality",
    ],
)
