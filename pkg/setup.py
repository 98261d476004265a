import pathlib

import setuptools

HERE = pathlib.Path(__file__).parent
README = (HERE / "README.md").read_text(encoding="UTF-8")


setuptools.setup(
    name="bezivin",
    version="0.1.0",
    description="Exact analysis of rational series with unit-product denominators.",
    long_description=README,
    long_description_content_type="text/markdown",
    license="MIT",
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    packages=setuptools.find_packages(exclude=("tests", "tests.*")),
    include_package_data=True,
    python_requires=">=3.9",
    install_requires=["sympy>=1.14", "typing_extensions>=4.0"],
    extras_require={"test": ["pytest>=7"]},
    entry_points={
        "console_scripts": [
            "bezivin=bezivin.cli:main",
        ]
    },
)
