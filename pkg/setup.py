import sys
from pathlib import Path
import setuptools

long_description = (Path(__file__).parent / "README.md").read_text()

if sys.version_info < (3, 8):
    sys.exit('Python>=3.8 is required by autsub.')

setuptools.setup(
    name="autsub",
    version="0.1.0.dev1",

    description="Automorphism groups and topological conjugacy of "
                "constant-length substitution shifts.",
    long_description=long_description,
    long_description_content_type='text/markdown',
    license='Apache License Version 2.0',
    package_dir={'': "engine"},
    packages=setuptools.find_packages(where="engine", exclude=["tests"]),
    include_package_data=True,
    package_data={
        "autsub": ["schema/*.json", "samples/*.sub"],
    },
    platforms='any',
    python_requires='>=3.8',

    install_requires=[
        'numpy>=1.19',
        'sympy>=1.7',
        'networkx>=2.5',
    ],
    extras_require={
        "tests": ["pytest", "jsonschema>=3.2"],
    },
    entry_points={
        'console_scripts':[
            'autsub = autsub.lib.autsub_cli:main'
        ]
    },
    classifiers=[
        'Intended Audience :: Education',
        'Intended Audience :: Science/Research',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Topic :: Scientific/Engineering :: Mathematics',
    ]
)
