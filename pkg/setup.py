#!/usr/bin/env python3

# Hvdcarb Setup
# Copyright (C) 2024 Hvdcarb contributors
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program. If not, see <http://www.gnu.org/licenses/>.

import os
import setuptools

root = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(root, 'README.rst'), encoding='utf-8') as f:
    readme = f.read()

setuptools.setup(
    name='hvdcarb',
    version='0.1.0',
    description='Profit-maximizing dispatch of lossy HVDC interconnectors',
    long_description=readme,
    license='GPL3+',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering',
        'License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
    ],
    entry_points={
        'console_scripts': [
            'hvdcarb=hvdcarb.cli:main',
        ],
    },
    keywords=['hvdc', 'interconnector', 'electricity', 'market', 'arbitrage',
              'wheeling'],
    packages=['hvdcarb'],
    package_data={'hvdcarb': ['data/*/*.ini', 'data/*/*.csv']},
    python_requires='>=3.8',
    install_requires=['docopt', 'numpy', 'pandas>=1.5', 'scipy>=1.6'],
    test_suite='tests',
)
