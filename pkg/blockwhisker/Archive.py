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

import collections


class Archive:
    """
    Shortest covering test per goal
    """

    def __init__(self, functions, replace=True):
        """
        Parameters
        ----------
        functions : list of FitnessFunction
            One fitness function per goal
        replace : bool
            Whether a shorter covering test replaces the stored one
        """
        self.functions = functions
        self.replace = replace
        self.tests = collections.OrderedDict()


    def update(self, test):
        """
        Store `test` for every goal it covers if there is no shorter
        covering test yet

        Returns
        -------
        list of str
            Goals which were not covered before
        """
        new = []
        for f in self.functions:
            if test.fitness(f) != 0:
                continue
            current = self.tests.get(f.target)
            if current is None:
                new.append(f.target)
            if current is None or (self.replace and
                    test.length_key() < current.length_key()):
                self.tests[f.target] = test
        return new


    def covered(self):
        return set(self.tests)


    def uncovered(self):
        """
        Fitness functions of the goals without covering test
        """
        return [f for f in self.functions if f.target not in self.tests]


    def entries(self):
        """
        Distinct tests with the goals they are kept for

        Returns
        -------
        list of tuple
            (TestCase, list of goal ids) in goal order
        """
        goals = collections.OrderedDict()
        for f in self.functions:
            test = self.tests.get(f.target)
            if test is not None:
                goals.setdefault(id(test), (test, []))[1].append(f.target)
        return list(goals.values())


class MioArchive(Archive):
    """
    Archive with a bounded population per uncovered goal. A covered goal
    keeps only its shortest covering test
    """

    def __init__(self, functions):
        Archive.__init__(self, functions)
        self.populations = dict((f.target, []) for f in functions)

        # Population size n, unbounded if None
        self.limit = None


    def update(self, test):
        """
        Add `test` to every population it improves

        Parameters
        ----------
        test : TestCase
            Executed test

        Returns
        -------
        list of str
            Goals which were not covered before
        """
        new = Archive.update(self, test)
        for f in self.functions:
            if f.target in self.tests:
                self.populations[f.target] = [self.tests[f.target]]
                continue
            if test.fitness(f) >= 2.0 * f.max_level + 2:
                continue
            population = self.populations[f.target]
            if test not in population:
                population.append(test)
            population.sort(key=lambda t: (t.fitness(f), t.length_key()))
            if self.limit is not None:
                del population[self.limit:]
        return new


    def shrink(self, limit):
        self.limit = limit
        for goal, population in self.populations.items():
            if goal not in self.tests:
                del population[limit:]


    def sample(self, goal, rng):
        population = self.populations[goal]
        return population[rng.randrange(len(population))] if population \
            else None
