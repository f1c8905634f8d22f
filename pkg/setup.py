__version__ = "0.1.0"

# Available at setup time due to pyproject.toml
from setuptools import setup

setup(
    name="pathreg",
    version=__version__,
    packages=[
        "pathreg",
        "pathreg.approx",
        "pathreg.bsde",
        "pathreg.commands",
        "pathreg.funcder",
        "pathreg.paths",
        "pathreg.ppde",
        "pathreg.regcalc",
        "pathreg.report",
        "pathreg.simflow",
    ],
    install_requires=[],
)
