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


class Genotype:
    """
    Codon sequence made of groups, each an event codon followed by the
    parameter codons of the event
    """

    def __init__(self, codons, group_size):
        """
        Parameters
        ----------
        codons : list of int
            Codons, length divisible by `group_size`
        group_size : int
            Number of codons per group
        """
        if len(codons) % group_size:
            raise ValueError("{} codons do not form groups of {}".format(
                len(codons), group_size))
        self.codons = list(codons)
        self.group_size = group_size


    @classmethod
    def from_groups(cls, groups, group_size):
        return cls([c for g in groups for c in g], group_size)


    @property
    def n_groups(self):
        return len(self.codons) // self.group_size


    def groups(self):
        n = self.group_size
        return [self.codons[i:i + n] for i in range(0, len(self.codons), n)]


    def truncate(self, n_groups):
        return Genotype(self.codons[:n_groups * self.group_size],
            self.group_size)


    def __eq__(self, other):
        return isinstance(other, Genotype) and self.codons == other.codons \
            and self.group_size == other.group_size


    def __ne__(self, other):
        return not self == other


    def __hash__(self):
        return hash((tuple(self.codons), self.group_size))


    def __repr__(self):
        return "<{}>".format(" ".join(
            "[{}]".format(" ".join(str(c) for c in g)) for g in self.groups()))


class TestCase:
    """
    Executed genotype
    """

    def __init__(self, genotype, events, trace, last_improved, steps,
            stopped):
        """
        Parameters
        ----------
        genotype : Genotype
            Executed genotype
        events : list of Event
            Decoded events in execution order
        trace : ExecutionTrace
            Coverage and branch distances
        last_improved : int
            Number of groups consumed when the trace improved last
        steps : int
            Number of steps executed (including the green flag step)
        stopped : bool
            Whether the program stopped
        """
        self.genotype = genotype
        self.events = events
        self.trace = trace
        self.last_improved = last_improved
        self.steps = steps
        self.stopped = stopped
        self._fitness = {}


    @property
    def covered(self):
        return self.trace.covered


    @property
    def n_groups(self):
        return self.genotype.n_groups


    def fitness(self, function):
        """
        Cached value of fitness function `function`
        """
        if function.target not in self._fitness:
            self._fitness[function.target] = function.evaluate(self.trace)
        return self._fitness[function.target]


    def length_key(self):
        """
        Sort key preferring shorter tests
        """
        return (self.n_groups, self.steps)


    def __repr__(self):
        return "TestCase({}, {} events)".format(self.genotype,
            len(self.events))
