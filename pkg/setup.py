import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="arlbsg",
    version="0.1.0",
    description=
    "Dynamic clustering of spatio-temporal panels with autoregressive logistic-beta stick-breaking and a Stirling-gamma concentration prior",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=("tests", "tests.*")),
    install_requires=[
        "numpy>=1.20",
        "scipy>=1.8",
        "pandas>=1.3",
        "ConfigArgParse>=1.2",
        "dill>=0.3.1",
        "tqdm>=4.43",
    ],
    entry_points={
        "console_scripts": ["arlbsg=jobs.run:main"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
