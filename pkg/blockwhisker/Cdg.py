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
from .Cfg import EXIT

# Sentinel of unreachable targets
INF = float("inf")


def postorder(succ, root):
    """
    Nodes reachable from `root` in depth-first postorder
    """
    out = []
    explored = set([root])
    stack = [(root, iter(succ[root]))]
    while stack:
        node, it = stack[-1]
        for s in it:
            if s not in explored:
                explored.add(s)
                stack.append((s, iter(succ[s])))
                break
        else:
            stack.pop()
            out.append(node)
    return out


def postdominators(cfg):
    """
    Postdominator sets of all nodes reaching the exit

    Parameters
    ----------
    cfg : Cfg
        Control flow graph with unique exit

    Returns
    -------
    dict
        Node as key, set of its (reflexive) postdominators as value
    """
    pred = dict((n, cfg.predecessors(n)) for n in cfg.nodes)
    succ = dict((n, cfg.successors(n)) for n in cfg.nodes)
    nodes = list(reversed(postorder(pred, EXIT)))
    pdom = dict((n, set(nodes)) for n in nodes)
    pdom[EXIT] = set([EXIT])
    changed = True
    while changed:
        changed = False
        for node in nodes:
            if node == EXIT:
                continue
            sets = [pdom[s] for s in succ[node] if s in pdom]
            new = set.intersection(*sets) if sets else set()
            new.add(node)
            if new != pdom[node]:
                pdom[node] = new
                changed = True
    return pdom


def immediate_postdominators(pdom):
    """
    Parent of each node in the postdominator tree (None for the exit)
    """
    ipdom = {}
    for node, doms in pdom.items():
        strict = doms - set([node])
        ipdom[node] = None
        for d in strict:
            # The immediate postdominator is postdominated by all others
            if len(pdom[d]) == len(strict):
                ipdom[node] = d
                break
    return ipdom


class Cdg:
    """
    Control dependence graph. An edge n -> m with label l means m is control
    dependent on n through the cfg edges of n labelled l
    """

    def __init__(self, cfg):
        self.cfg = cfg
        self.nodes = list(cfg.nodes)
        self.deps = collections.OrderedDict((n, {}) for n in self.nodes)
        self.parents = dict((n, {}) for n in self.nodes)


    def add(self, n, m, label):
        self.deps[n].setdefault(m, set()).add(label)
        self.parents[m].setdefault(n, set()).add(label)


    def dependents(self, n):
        return list(self.deps[n])


    def dependencies(self, m):
        """
        Nodes `m` is control dependent on
        """
        return list(self.parents[m])


    def labels(self, n, m):
        return sorted(self.deps[n].get(m, ()))


    def edges(self):
        for n in self.nodes:
            for m in sorted(self.deps[n], key=self.cfg.order):
                yield n, m, ",".join(sorted(self.deps[n][m]))


    def edge_set(self):
        return set((n, m) for n, m, _ in self.edges())


    def to_edges(self):
        return "\n".join("{} -> {} [{}]".format(n, m, l)
            for n, m, l in self.edges()) + "\n"


    def to_dot(self, name="cdg"):
        lines = ["digraph \"{}\" {{".format(name)]
        for node in self.nodes:
            lines.append('  "{}";'.format(node))
        for n, m, l in self.edges():
            lines.append('  "{}" -> "{}" [label="{}"];'.format(n, m, l))
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_cdg(cfg):
    """
    Compute control dependences by walking the postdominator tree from each
    cfg edge successor up to the immediate postdominator of its source

    Parameters
    ----------
    cfg : Cfg
        Control flow graph

    Returns
    -------
    Cdg
        Control dependence graph
    """
    pdom = postdominators(cfg)
    ipdom = immediate_postdominators(pdom)
    cdg = Cdg(cfg)
    for n, s, label in cfg.edges():
        if n not in pdom or s not in pdom:
            continue
        stop = ipdom[n]
        m = s
        while m is not None and m != stop:
            cdg.add(n, m, label)
            m = ipdom[m]
    return cdg


class TargetDistanceMap:
    """
    Distances in the control dependence graph towards each target
    """

    def __init__(self, cdg):
        self.cdg = cdg
        self._cache = {}


    def distances(self, target):
        """
        Number of dependence edges from each node to `target`

        Returns
        -------
        dict
            Node as key, distance as value (target has distance 0)
        """
        if target not in self._cache:
            dist = {target: 0}
            queue = collections.deque([target])
            while queue:
                m = queue.popleft()
                for n in self.cdg.dependencies(m):
                    if n not in dist:
                        dist[n] = dist[m] + 1
                        queue.append(n)
            self._cache[target] = dist
        return self._cache[target]


    def chain(self, target, node):
        """
        Next node after `node` on a shortest dependence path to `target`,
        ties broken by cfg order
        """
        dist = self.distances(target)
        d = dist[node]
        nxt = [m for m in self.cdg.dependents(node) if dist.get(m) == d - 1]
        return min(nxt, key=self.cdg.cfg.order) if nxt else None


def approach_level(distances, covered, target):
    """
    Number of unsatisfied control dependencies between the closest covered
    node and `target`

    Parameters
    ----------
    distances : TargetDistanceMap
        Precomputed dependence distances
    covered : set of str
        Covered nodes
    target : str
        Target node

    Returns
    -------
    int or float
        Approach level, `INF` if no covered node leads to the target
    """
    if target in covered:
        return 0
    dist = distances.distances(target)
    best = min([dist[n] for n in covered if n in dist and n != target]
        or [INF])
    if best == INF:
        return INF
    return max(best - 1, 0)
