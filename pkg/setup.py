from setuptools import find_packages, setup

with open('requirements.txt') as f:
    required = f.read().splitlines()

setup(
    name='SCA-Tracelab',
    version='0.1.0',
    packages=find_packages(exclude=['examples', 'examples.*']),
    install_requires=required,
)
