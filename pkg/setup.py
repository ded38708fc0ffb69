import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()
version = "0.1.0"
setuptools.setup(
    name="rgflow",
    version=version,
    author="rgflow developers",
    description="Restricted Boltzmann machines, block spin coarse graining and renormalization group machines",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(),
    include_package_data=True,
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ], zip_safe= False,
    python_requires='>=3.10',
    install_requires=['numpy==1.23.5',
                        'numba==0.58.1',
                        'pandas==1.5.3',
                        'matplotlib==3.8.2',
                        'pillow==10.2.0',
                        'PyYAML==6.0.1',
                        "scipy==1.11.4",
                        "statsmodels==0.13.5",
    ],
    entry_points={
        'console_scripts': ['rgflow=rgflow.cli:main']
    }
)
