import pathlib
from setuptools import setup, find_packages

base_packages = [
    "numpy>=1.17.0",
    "scipy>=1.4.0",
    "scikit-learn>=0.22.0",
    "pandas>=1.5.0",
]

docs_packages = [
    "mkdocs==1.1",
    "mkdocs-material==4.6.3",
    "mkdocstrings==0.8.0",
]

test_packages = [
    "flake8>=3.6.0",
    "pytest>=4.0.2",
    "black>=19.3b0",
    "pytest-cov>=2.6.1",
]

dev_packages = docs_packages + test_packages


setup(
    name="swiptrelay",
    version="0.1.0",
    packages=find_packages(exclude=["notebooks", "docs", "tests"]),
    description="Closed-form and simulated outage of SWIPT two-way relays with hardware impairments.",
    long_description=pathlib.Path("readme.md").read_text(),
    long_description_content_type="text/markdown",
    install_requires=base_packages,
    extras_require={
        "base": base_packages,
        "docs": docs_packages,
        "dev": dev_packages,
        "test": test_packages,
    },
    entry_points={"console_scripts": ["swiptrelay=swiptrelay.cli:main"]},
    classifiers=[
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "License :: OSI Approved :: MIT License",
        "Topic :: Scientific/Engineering",
    ],
)
