from setuptools import setup

setup(
    name = 'bohr-equivalence',
    description = 'Bohr equivalence and value sets of exponential sums with an integral basis.',
    long_description = open('README.md').read(),
    long_description_content_type = 'text/markdown',
    version = "0.1.0",
    python_requires = '>=3.9',
    packages = ['bohreq'],
    entry_points = {
        'console_scripts': [
            'bohreq = bohreq.main:run'
        ]
    },
    install_requires = [
        'numpy',
        'scipy',
        'sympy',
        'matplotlib',
        'jsonschema'
    ],
    extras_require = {
        'test': ['pytest']
    },
    license = 'GPLv3-only',
    classifiers = [
        'Environment :: Console',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics'
    ]

)
