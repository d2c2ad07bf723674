"""monotone-pss is configured in setup.cfg."""
from setuptools import setup

setup()
