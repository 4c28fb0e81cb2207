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

import logging
import random
import time
from . import encoding
from . import events
from . import localsearch
from .Archive import Archive
from .config import SearchConfig
from .error import *
from .fitness import build_fitness_functions
from .suite import SuiteTest, TestSuite


class SearchAlgorithm:
    """
    Base class for test generation algorithms

    Derived classes implement `_search()`, which executes genotypes through
    `execute()` until `exhausted()` holds.
    """

    # Name of the algorithm (MUST BE SET IN DERIVED CLASS)
    name = None


    def __init__(self, project, config=None, archive=None):
        """
        Setup algorithm

        Parameters
        ----------
        project : Project
            Project under test
        config : SearchConfig
            Configuration, at least one budget must be set
        archive : Archive
            Archive of covering tests, a plain `Archive` if None

        Raises
        ------
        ConfigError
            If no budget is set
        """
        self.log = logging.getLogger("blockwhisker")
        self.project = project
        self.config = config if config is not None else SearchConfig()
        if not self.config.has_budget():
            raise ConfigError({"budget": "MISSING_BUDGET"})
        self.rng = random.Random(self.config.seed)
        self.cfg, self.cdg, self.functions = build_fitness_functions(project)
        self.group_size = encoding.group_size(project)
        self.pool = events.text_pool(project, self.config.seed)
        self.archive = archive if archive is not None else \
            Archive(self.functions)

        # Budget consumption
        self.executions = 0
        self.steps = 0
        self.started = None

        # Tuples (executionIndex, stepsUsed, coveredCount)
        self.coverage_log = []


    def elapsed(self):
        if self.started is None:
            return 0.0
        return time.time() - self.started


    def exhausted(self):
        """
        Whether any budget is used up
        """
        c = self.config
        if c.budget_executions is not None and \
                self.executions >= c.budget_executions:
            return True
        if c.budget_steps is not None and self.steps >= c.budget_steps:
            return True
        if c.budget_seconds is not None and \
                self.elapsed() >= c.budget_seconds:
            return True
        return False


    def used_fraction(self):
        """
        Used share of the budget in [0, 1], the largest of all set budgets
        """
        c = self.config
        used = []
        if c.budget_executions is not None:
            used.append(self.executions / float(c.budget_executions))
        if c.budget_steps is not None:
            used.append(self.steps / float(c.budget_steps))
        if c.budget_seconds:
            used.append(self.elapsed() / float(c.budget_seconds))
        return min(1.0, max(used or [0.0]))


    def charge(self, test):
        """
        Account an execution of `test` and store it in the archive

        Returns
        -------
        list of str
            Newly covered goals
        """
        self.executions += 1
        self.steps += test.steps
        new = self.archive.update(test)
        covered = len(self.archive.covered())
        if new or not self.coverage_log:
            self.coverage_log.append((self.executions, self.steps, covered))
            if new:
                self.log.debug("{}: execution {} covers {}/{} goals".format(
                    self.name, self.executions, covered,
                    len(self.functions)))
        return new


    def execute(self, genotype):
        """
        Decode and execute genotype, charging the budget

        Parameters
        ----------
        genotype : Genotype
            Genotype to execute

        Returns
        -------
        TestCase
            Executed test
        """
        test = encoding.decode_and_execute(self.project, genotype,
            self.config, self.pool)
        self.charge(test)
        return test


    def random_genotype(self):
        return encoding.generate_random_codons(self.rng, self.config,
            self.group_size)


    def mutate(self, genotype):
        return encoding.mutate(genotype, self.rng, self.config)


    def local_search(self, test):
        """
        Apply extension and reduction local search

        Returns
        -------
        TestCase
            Improved test or `test`. A reduced test is offered to the
            archive, it is not executed again
        """
        if self.exhausted():
            return test
        test = localsearch.extension(self, test)
        reduced = localsearch.reduction(test, self.config)
        if reduced is not test:
            self.archive.update(reduced)
        return reduced


    def complete(self):
        return not self.archive.uncovered()


    def run(self):
        """
        Run the algorithm until the budget is exhausted

        Returns
        -------
        TestSuite
            Generated suite
        """
        self.started = time.time()
        self.log.info("{}: start with {} goals".format(self.name,
            len(self.functions)))
        self._search()
        suite = self.suite()
        self.log.info("{}: {} executions, {} steps, {}/{} goals covered by "
            "{} tests".format(self.name, self.executions, self.steps,
            len(self.archive.covered()), len(self.functions),
            len(suite.tests)))
        return suite


    def _search(self):
        raise NotImplementedError()


    def suite(self):
        """
        Suite of the archived tests
        """
        tests = [SuiteTest(test.events, test.genotype, goals,
            seed=self.config.vm.seed)
            for test, goals in self.archive.entries()]
        return TestSuite(tests, self.config, self.name,
            [f.target for f in self.functions], self.coverage_log)
