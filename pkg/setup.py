import os
from setuptools import setup

setup(
    name="cdplus",
    version="0.1",
    author="cdplus authors",
    license="GPL-3.0-only",
    packages=['cdplus'],
    package_data={'cdplus': ['data/rules/*.cdx', 'data/surface/*.cdx', 'data/scenarios/*.cdx', 'data/kb/*.cdx']},
    install_requires=['pyparsing>=3.0', 'networkx>=2.6'],
)
