#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"""
medfx setup.py for PIP install
"""

from setuptools import find_packages, setup

from medfx.version import AUTHOR, AUTHOR_EMAIL, DESCRIPTION, LICENCE, PROJECT_NAME, URL, VERSION


def install_deps():
    """Reads requirements.txt and returns the requirement lines, comments and blanks dropped"""
    with open("requirements.txt", "r") as f:
        packages = []
        for line in f.readlines():
            line = line.strip()
            if line and not line.startswith("#"):
                packages.append(line)
        return packages


setup(
    name=PROJECT_NAME,
    version=VERSION,
    description=DESCRIPTION,
    long_description=URL,
    url=URL,
    author=AUTHOR,
    author_email=AUTHOR_EMAIL,
    license=LICENCE,
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
    ],
    keywords="causal inference mediation counterfactual bounds",
    python_requires=">=3.8",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"medfx": ["templates/*.j2"]},
    include_package_data=True,
    install_requires=install_deps(),
    entry_points={
        "console_scripts": [
            "medfx=medfx.cli:main",
        ],
    },
)
