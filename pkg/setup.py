#!/usr/bin/env python

"""
Setup script
"""

from setuptools import setup
from projens import __version__


def get_requirements(requirements_file='requirements.txt'):
    """Get the contents of a file listing the requirements.

    :arg requirements_file: path to a requirements file
    :type requirements_file: string
    :returns: the list of requirements, or an empty list if
              `requirements_file` could not be opened or read
    :return type: list
    """

    with open(requirements_file) as stream:
        lines = stream.readlines()
    return [
        line.rstrip().split('#')[0]
        for line in lines
        if line.strip() and not line.startswith('#')
    ]


setup(
    name='projens',
    description='Projection ensembles for distributional reinforcement '
    'learning: exact tabular operators, bound audits and a deep sea agent.',
    version=__version__,
    author='The projens contributors',
    license='GPLv2+',
    packages=['projens', 'projens.lib', 'projens.audits'],
    include_package_data=True,
    install_requires=get_requirements(),
    entry_points={
        'console_scripts': ['projens = projens.cli:main'],
    },
)
