# blockwhisker - search-based test generation for block programs
# Copyright (C) 2017 Lukas Schwarz
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""search-based test generation for block programs"""

import os
from .error import Error, ValidationError, LoadError, ConfigError, VmError, \
    ReplayError, EnumerationError
from .config import SearchConfig, VmConfig
from .Project import load_project, load_project_file
from .Vm import Vm, StepInput, run_test
from .Cfg import build_cfg
from .Cdg import build_cdg
from .fitness import build_fitness_functions
from .Genotype import Genotype, TestCase
from .RandomSearch import RandomSearch
from .Mosa import Mosa
from .Mio import Mio
from .suite import SuiteTest, TestSuite
from .postprocess import minimize, generate_assertions
from .mutation import generate_mutants, analyze

__version__ = "1.0.0"


def corpus_path(name):
    """
    Path of the bundled project `name` (without ".json")
    """
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), "corpus",
        "{}.json".format(name))


def load_corpus(name):
    """
    Load and validate a bundled project

    Returns
    -------
    Project
        Validated project
    """
    return load_project_file(corpus_path(name))
