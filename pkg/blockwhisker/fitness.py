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
from . import distance
from .Cdg import INF, TargetDistanceMap, approach_level, build_cdg
from .Cfg import build_cfg, ABORT, ABSENT, FALSE, OCCURS, TRUE

# Labels whose distance is recorded in traces. Any other edge is taken
# unconditionally once its source executes
MEASURED = (TRUE, FALSE, OCCURS, ABSENT, ABORT)


def alpha(x):
    """
    Normalization x / (1 + x) of a non-negative distance
    """
    return distance.normalize(x)


def branch_distance(node, label, trace):
    """
    Distance of `node` to taking its outgoing edge `label`

    Parameters
    ----------
    node : str
        Branching node
    label : str
        Edge label
    trace : ExecutionTrace
        Trace of the execution

    Returns
    -------
    int or float
        Minimal observed distance, `INF` if it was never observed
    """
    d = trace.distance(node, label)
    if d is not None:
        return d
    if label not in MEASURED and node in trace.covered:
        return 0
    return INF


def control_flow_distance(cfg, covered, target):
    """
    Number of cfg edges between the closest covered node and `target`,
    found by a backwards breadth-first search

    Returns
    -------
    int or float
        0 if `target` is covered, `INF` if no covered node reaches it
    """
    if target in covered:
        return 0
    seen = set([target])
    queue = collections.deque([(target, 0)])
    while queue:
        node, depth = queue.popleft()
        for pred in cfg.predecessors(node):
            if pred in seen:
                continue
            if pred in covered:
                return depth + 1
            seen.add(pred)
            queue.append((pred, depth + 1))
    return INF


class FitnessFunction:
    """
    Coverage goal of a single block
    """

    def __init__(self, target, cfg, cdg, distances, max_level):
        """
        Parameters
        ----------
        target : str
            Id of the block to cover
        cfg : Cfg
            Control flow graph
        cdg : Cdg
            Control dependence graph of `cfg`
        distances : TargetDistanceMap
            Dependence distances of `cdg`
        max_level : int
            Largest finite approach level of the project
        """
        self.target = target
        self.cfg = cfg
        self.cdg = cdg
        self.distances = distances
        self.max_level = max_level


    def is_covered(self, trace):
        return self.target in trace.covered


    def evaluate(self, trace):
        """
        Fitness of an execution trace, 0 iff the target is covered

        Parameters
        ----------
        trace : ExecutionTrace
            Trace of the execution

        Returns
        -------
        float
            2 * approach level + normalized branch distance + control flow
            part, in [2 * level, 2 * level + 2]
        """
        covered = trace.covered
        if self.target in covered:
            return 0.0
        level = approach_level(self.distances, covered, self.target)
        if level == INF:
            return 2.0 * self.max_level + 2
        b, nxt = self.closest_dependency(trace, level)
        if b > 0:
            c = 1.0
        else:
            c = alpha(control_flow_distance(self.cfg, covered, nxt))
        return 2.0 * level + b + c


    def closest_dependency(self, trace, level):
        """
        Normalized branch distance at the closest covered dependency and the
        next node towards the target

        Returns
        -------
        tuple
            (normalized branch distance, next node)
        """
        dist = self.distances.distances(self.target)
        best = None
        for node in trace.covered:
            if dist.get(node) != level + 1:
                continue
            nxt = self.distances.chain(self.target, node)
            bd = min(branch_distance(node, label, trace)
                for label in self.cdg.labels(node, nxt))
            key = (alpha(bd), self.cfg.order(node))
            if best is None or key < best[0]:
                best = (key, nxt)
        return best[0][0], best[1]


    def __repr__(self):
        return "FitnessFunction({})".format(self.target)


def build_fitness_functions(project):
    """
    Build the graphs of a project and one fitness function per statement

    Parameters
    ----------
    project : Project
        Validated project

    Returns
    -------
    tuple
        (cfg, cdg, list of FitnessFunction in declaration order)
    """
    cfg = build_cfg(project)
    cdg = build_cdg(cfg)
    distances = TargetDistanceMap(cdg)
    goals = project.statements()
    max_level = 0
    for goal in goals:
        max_level = max(max_level, max(distances.distances(goal).values()))
    functions = [FitnessFunction(g, cfg, cdg, distances, max_level)
        for g in goals]
    return cfg, cdg, functions
