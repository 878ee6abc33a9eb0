from setuptools import setup, find_packages
import os
import os.path


# Utility function to read the README file.
# Used for the long_description.
def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname)).read()


setup(
    name='freeconv',
    version='0.1.0',
    description='Numerical free additive convolution and infinitely '
                'divisible laws',
    packages=find_packages(),
    include_package_data=True,
    zip_safe=False,
    long_description=read('README.rst'),
    license='MIT',
    keywords='free probability free convolution subordination cauchy '
             'transform semicircle',
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
        'progressbar2>=3.6.0'
    ],
    entry_points={
        'console_scripts': [
            'freeconv = freeconv.cli:main',
        ],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
