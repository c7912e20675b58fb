# setup.py
from setuptools import setup, find_packages

setup(
    name="Sandwiched_Coherence",
    version="0.1",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    install_requires=[
        "numpy",
        "scipy",
        "pandas",
        "pyyaml",
    ],
    entry_points={
        "console_scripts": ["coherence=src.commands:main"],
    },
)
