from setuptools import setup

with open('requirements.txt') as f:
    required = f.read().splitlines()

with open("VERSION.txt", "r") as file:
    version = file.readline().strip()

setup(
    name='randers-lab',
    version=version,
    description='Numerical experiments on Randers spaces, orbit packings and Sobolev embeddings',
    keywords='randers finsler sobolev embedding hyperbolic orbit packing p-laplacian',
    long_description="""
        randers-lab measures, on model spaces and Randers structures over them,
        the quantities behind Sobolev embeddings of group-invariant functions.
        Key features:
        - space forms, the matrix cone and Randers/Funk metrics
        - orbit packings, expansion profiles and orbit Hausdorff measures
        - Euclidean rearrangement with Polya-Szego checks
        - Funk counterexamples and embedding constants
        - a radial p-Laplacian energy with multi-start critical point search
    """,
    packages=[
        'randers_lab',
        'randers_lab.models',
        'randers_lab.models.numerics',
        'randers_lab.models.modelspace',
        'randers_lab.models.randers',
        'randers_lab.models.orbits',
        'randers_lab.models.rearrange',
        'randers_lab.models.sobolev',
        'randers_lab.models.pde',
    ],
    entry_points={
        'console_scripts': [
            'randers-lab=randers_lab.cli:main',
        ],
    },
    classifiers=[
        'Development Status :: 4 - Beta',

        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',

        'Operating System :: OS Independent',
        'Intended Audience :: Science/Research',

        'Topic :: Scientific/Engineering :: Mathematics',

        "License :: OSI Approved :: MIT License"
    ],
    python_requires='>=3.8',
    install_requires=required
)
