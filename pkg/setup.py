from setuptools import setup
from codecs import open
import os
import re

here = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(here, "blockwhisker", "__init__.py")) as fh:
    version = re.match(r".*__version__ = \"(.*?)\"", fh.read(),re.S).group(1)

setup(
    name="blockwhisker",
    version=version,
    description="search-based test generation for event-driven block programs",
    author="Lukas Schwarz",
    author_email="ls@lukasschwarz.de",
    license="GPLv3",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Developers",
        "Intended Audience :: Education",
        "Topic :: Software Development :: Testing",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Programming Language :: Python :: 3",
    ],
    packages=["blockwhisker"],
    package_data={"blockwhisker": ["corpus/*.json"]},
    install_requires=["numpy"],
    extras_require={"test": ["scipy"]},
    entry_points={
        "console_scripts": ["blockwhisker = blockwhisker.cli:main"],
    },
)
