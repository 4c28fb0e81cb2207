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

import copy


class ExecutionTrace:
    """
    Coverage and branch distances collected during a test execution

    Branching nodes store the minimal observed distance per outgoing edge
    label of the control flow graph:

    - "true"/"false" for conditions, repeat loops (true = enter body,
      false = leave loop with the remaining iterations as distance) and
      time-dependent statements (true = completed, distance is the number of
      remaining steps)
    - "occurs"/"absent" for artificial event nodes
    - "abort" for the edge of waiting statements towards the exit
    """

    def __init__(self):
        self.covered = set()
        self.distances = {}

        # Incremented whenever coverage grows or a minimal distance shrinks
        self.progress = 0


    def cover(self, node):
        """
        Mark node as covered

        Parameters
        ----------
        node : str
            Block id or artificial node id
        """
        if node not in self.covered:
            self.covered.add(node)
            self.progress += 1


    def update(self, node, label, dist):
        """
        Record distance `dist` of node `node` towards the edge `label`
        """
        d = self.distances.setdefault(node, {})
        if label not in d or dist < d[label]:
            d[label] = dist
            self.progress += 1


    def condition(self, node, true_dist, false_dist):
        self.update(node, "true", true_dist)
        self.update(node, "false", false_dist)


    def distance(self, node, label):
        """
        Minimal observed distance of `node` towards `label` or None if never
        observed
        """
        return self.distances.get(node, {}).get(label)


    def copy(self):
        return copy.deepcopy(self)


    def to_dict(self):
        """
        Canonical representation
        """
        return {
            "covered": sorted(self.covered),
            "distances": dict((n, dict(sorted(d.items())))
                for n, d in sorted(self.distances.items())),
        }
