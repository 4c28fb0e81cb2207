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

from .SearchAlgorithm import SearchAlgorithm


class RandomSearch(SearchAlgorithm):
    """
    Sample random tests, keep those covering a new goal
    """

    name = "random"


    def __init__(self, project, config=None):
        SearchAlgorithm.__init__(self, project, config)
        self.archive.replace = False


    def _search(self):
        while not self.exhausted():
            self.execute(self.random_genotype())
