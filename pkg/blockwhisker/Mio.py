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

from .Archive import MioArchive
from .SearchAlgorithm import SearchAlgorithm


def dynamic_parameter(x0, xf, used, focus):
    """
    Linear interpolation of a parameter until the focused phase starts

    Parameters
    ----------
    x0 : float
        Value at the start of the search
    xf : float
        Value in the focused phase
    used : float
        Used share of the budget in [0, 1]
    focus : float
        Budget share at which the focused phase starts

    Returns
    -------
    float
        Parameter value
    """
    if focus <= 0 or used >= focus:
        return xf
    return x0 + (xf - x0) * used / float(focus)


class Mio(SearchAlgorithm):
    """
    Many independent objective algorithm, one bounded population per goal
    """

    name = "mio"


    def __init__(self, project, config=None):
        SearchAlgorithm.__init__(self, project, config)
        self.archive = MioArchive(self.functions)


    def parameters(self):
        """
        Current population size n, random sampling probability r and number
        of mutations m

        Returns
        -------
        tuple
            (n, r, m)
        """
        c = self.config
        used = self.used_fraction()
        n = int(round(dynamic_parameter(c.mio_n0, c.mio_nf, used,
            c.mio_focus)))
        r = dynamic_parameter(c.mio_r0, c.mio_rf, used, c.mio_focus)
        m = int(round(dynamic_parameter(c.mio_m0, c.mio_mf, used,
            c.mio_focus)))
        return max(n, 1), r, max(m, 1)


    def choose_target(self):
        """
        Uniformly chosen uncovered goal, goals with a non-empty population
        first

        Returns
        -------
        FitnessFunction
            Chosen goal or None if no population holds a test
        """
        populated = [f for f in self.archive.uncovered()
            if self.archive.populations[f.target]]
        if not populated:
            return None
        return populated[self.rng.randrange(len(populated))]


    def _search(self):
        while not self.exhausted() and not self.complete():
            n, r, m = self.parameters()
            self.archive.shrink(n)
            target = None
            if self.rng.random() >= r:
                target = self.choose_target()
            if target is None:
                test = self.execute(self.random_genotype())
            else:
                test = self.archive.sample(target.target, self.rng)
                for _ in range(m):
                    if self.exhausted():
                        break
                    child = self.execute(self.mutate(test.genotype))
                    if child.fitness(target) <= test.fitness(target):
                        test = child
            if self.rng.random() < self.config.local_search_prob:
                test = self.local_search(test)
                self.log.debug("mio: local search kept {} groups".format(
                    test.n_groups))
