#!/usr/bin/env python3
"""
Setup script for the HCSE toolkit
"""

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line.strip() for line in fh if line.strip() and not line.startswith("#")]

setup(
    name="hcse-toolkit",
    version="0.1.0",
    author="HCSE Toolkit Contributors",
    author_email="",
    description="Hierarchical graph clustering by structural entropy minimisation",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/yourusername/hcse-toolkit",
    packages=find_packages(include=["src", "src.*"]),
    py_modules=["main"],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Information Analysis",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.9",
    install_requires=requirements,
    entry_points={
        "console_scripts": [
            "hcse=main:main",
        ],
    },
    project_urls={
        "Bug Reports": "https://github.com/yourusername/hcse-toolkit/issues",
        "Source": "https://github.com/yourusername/hcse-toolkit",
        "Documentation": "https://github.com/yourusername/hcse-toolkit/tree/main/docs",
    },
)
