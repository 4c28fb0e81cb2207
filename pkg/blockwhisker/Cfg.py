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
import logging
from . import opcodes
from .Project import Block, Ref
from .values import to_text

log = logging.getLogger("blockwhisker")

ENTRY = "entry"
EXIT = "exit"

# Edge labels
TRUE = "true"
FALSE = "false"
FLOW = "flow"
OCCURS = "occurs"
ABSENT = "absent"
BROADCAST = "broadcast"
CLONE = "clone"
BACKDROP = "backdrop"
CALL = "call"
RETURN = "return"
ABORT = "abort"


def event_node(hat):
    return "event:" + hat.id


def return_node(hat):
    return "return:" + hat.id


class Cfg:
    """
    Labelled directed graph. Nodes keep their insertion order, which is the
    order used for tie breaking
    """

    def __init__(self):
        self.nodes = []
        self.succ = {}
        self.pred = {}
        self._order = {}

        # Nodes without path from entry
        self.unreachable = set()


    def add_node(self, node):
        if node not in self.succ:
            self._order[node] = len(self.nodes)
            self.nodes.append(node)
            self.succ[node] = []
            self.pred[node] = []


    def add_edge(self, source, target, label):
        """
        Add edge `source` -> `target`, duplicates are ignored
        """
        self.add_node(source)
        self.add_node(target)
        if (target, label) not in self.succ[source]:
            self.succ[source].append((target, label))
            self.pred[target].append((source, label))


    def successors(self, node):
        return [t for t, _ in self.succ[node]]


    def predecessors(self, node):
        return [s for s, _ in self.pred[node]]


    def labels(self, source, target):
        return [l for t, l in self.succ[source] if t == target]


    def edges(self):
        """
        All edges (source, target, label) in insertion order
        """
        for node in self.nodes:
            for target, label in self.succ[node]:
                yield node, target, label


    def order(self, node):
        return self._order[node]


    def __contains__(self, node):
        return node in self.succ


    def reachable_from(self, start, reverse=False):
        """
        Set of nodes reachable from `start` (or reaching it if `reverse`)
        """
        adjacent = self.pred if reverse else self.succ
        seen = set([start])
        queue = collections.deque([start])
        while queue:
            node = queue.popleft()
            for other, _ in adjacent[node]:
                if other not in seen:
                    seen.add(other)
                    queue.append(other)
        return seen


    def to_edges(self):
        """
        Textual edge list, one "source -> target [label]" per line
        """
        return "\n".join("{} -> {} [{}]".format(s, t, l)
            for s, t, l in self.edges()) + "\n"


    def to_dot(self, name="cfg"):
        """
        Graph in DOT format
        """
        lines = ["digraph \"{}\" {{".format(name)]
        for node in self.nodes:
            attrs = ' style="dashed"' if node in self.unreachable else ""
            lines.append('  "{}"{};'.format(node, attrs))
        for s, t, l in self.edges():
            lines.append('  "{}" -> "{}" [label="{}"];'.format(s, t, l))
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_cfg(project):
    """
    Build the interprocedural control flow graph of a project

    Parameters
    ----------
    project : Project
        Validated project

    Returns
    -------
    Cfg
        Control flow graph with nodes for all hat and statement blocks
    """
    return _CfgBuilder(project).build()


class _CfgBuilder:

    def __init__(self, project):
        self.project = project
        self.cfg = Cfg()

        # Successor of each call site per definition hat id
        self.returns = collections.defaultdict(list)


    def build(self):
        cfg = self.cfg
        cfg.add_node(ENTRY)
        cfg.add_node(EXIT)
        cfg.add_edge(ENTRY, EXIT, FLOW)
        for script in self.project.scripts():
            hat = script.hat
            if hat is None:
                self.sequence(script.body, EXIT)
                continue
            if script.procedure:
                cfg.add_node(hat.id)
                cfg.add_node(return_node(hat))
                cfg.add_edge(hat.id,
                    self.sequence(script.body, return_node(hat)), FLOW)
                continue
            node = event_node(hat)
            cfg.add_node(node)
            if hat.opcode in opcodes.USER_HATS:
                cfg.add_edge(ENTRY, node, FLOW)
            cfg.add_edge(node, hat.id, OCCURS)
            cfg.add_edge(node, EXIT, ABSENT)
            cfg.add_edge(hat.id, self.sequence(script.body, EXIT), FLOW)

        for script in self.project.scripts():
            if script.procedure:
                follow = self.returns.get(script.hat.id) or [EXIT]
                for target in follow:
                    cfg.add_edge(return_node(script.hat), target, RETURN)

        # Nodes trapped in cycles without exit (e.g. endless recursion)
        # get an abort edge so postdominance is defined everywhere
        reaching = cfg.reachable_from(EXIT, reverse=True)
        for node in list(cfg.nodes):
            if node not in reaching:
                cfg.add_edge(node, EXIT, ABORT)

        cfg.unreachable = set(cfg.nodes) - cfg.reachable_from(ENTRY)
        if cfg.unreachable:
            log.debug("{} unreachable cfg nodes".format(len(cfg.unreachable)))
        return cfg


    def sequence(self, blocks, follow):
        """
        Add the nodes of a block sequence

        Returns
        -------
        str
            First node of the sequence, `follow` if empty
        """
        nxt = follow
        for block in reversed(blocks):
            nxt = self.statement(block, nxt)
        return nxt


    def statement(self, block, follow):
        cfg = self.cfg
        node = block.id
        cfg.add_node(node)
        op = block.opcode
        if op == "if":
            cfg.add_edge(node, self.sequence(block.children[0], follow), TRUE)
            cfg.add_edge(node, follow, FALSE)
        elif op == "ifElse":
            cfg.add_edge(node, self.sequence(block.children[0], follow), TRUE)
            cfg.add_edge(node, self.sequence(block.children[1], follow), FALSE)
        elif op == "repeatTimes":
            cfg.add_edge(node, self.sequence(block.children[0], node), TRUE)
            cfg.add_edge(node, follow, FALSE)
            cfg.add_edge(node, EXIT, ABORT)
        elif op == "repeatUntil":
            cfg.add_edge(node, self.sequence(block.children[0], node), FALSE)
            cfg.add_edge(node, follow, TRUE)
        elif op == "forever":
            cfg.add_edge(node, self.sequence(block.children[0], node), FLOW)
            cfg.add_edge(node, EXIT, ABORT)
        elif op == "waitUntil" or op in opcodes.TIME_DEPENDENT:
            cfg.add_edge(node, follow, TRUE)
            cfg.add_edge(node, EXIT, ABORT)
        elif opcodes.shape(op) == opcodes.CAP:
            cfg.add_edge(node, EXIT, FLOW)
        elif op == "callProcedure":
            definition = block.script.actor.procedure(to_text(block.literal(0)))
            if definition is None:
                cfg.add_edge(node, follow, FLOW)
            else:
                cfg.add_edge(node, definition.hat.id, CALL)
                self.returns[definition.hat.id].append(follow)
        else:
            cfg.add_edge(node, follow, FLOW)
            for target in self.triggered(block):
                cfg.add_edge(node, event_node(target), self.label(op))
        return node


    def label(self, op):
        if op in ("broadcast", "broadcastAndWait"):
            return BROADCAST
        if op == "createClone":
            return CLONE
        return BACKDROP


    def triggered(self, block):
        """
        Hats of the scripts `block` may start
        """
        op = block.opcode
        known = not isinstance(block.args[0], (Block, Ref)) \
            if block.args else False
        if op in ("broadcast", "broadcastAndWait"):
            message = to_text(block.literal(0)).lower()
            return [h for h in self.project.hats("broadcastReceived")
                if not known or to_text(h.literal(0)).lower() == message]
        if op == "createClone":
            target = to_text(block.literal(0))
            if target == "myself":
                target = block.script.actor.name
            hats = self.project.hats("startAsClone")
            if known and self.project.actor(target) is not None:
                return [h for h in hats if h.script.actor.name == target]
            return hats
        if op == "switchBackdrop":
            name = to_text(block.literal(0))
            names = [c["name"] for c in self.project.stage.costumes]
            hats = self.project.hats("backdropSwitched")
            if known and name in names:
                return [h for h in hats if to_text(h.literal(0)) == name]
            return hats
        if op == "nextBackdrop":
            return self.project.hats("backdropSwitched")
        return []
