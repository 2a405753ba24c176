"""Setup script for the tree spectra toolkit."""

from setuptools import setup, find_packages

setup(
    name="treespectra",
    version="0.1.0",
    packages=find_packages(include=["src", "src.*"]),
    install_requires=[
        "pydantic>=2.9.2",
        "python-dotenv>=1.0.0",
        "numpy>=1.26.3",
        "networkx>=3.1",
    ],
    entry_points={"console_scripts": ["treespectra=src.cli.main:main"]},
    python_requires=">=3.9",
)
