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

from .error import *
from .values import same


class Assertion:
    """
    Base class for assertions on the program state

    Derived classes read one observable value of the state with
    `observe()`. The assertion passes if the observed value equals the
    expected one within `tolerance`.
    """

    # Kind as serialized in suites (MUST BE SET IN DERIVED CLASS)
    kind = None

    # Allowed absolute deviation of numerical values
    tolerance = 0


    def __init__(self, target, expected, other=None):
        """
        Parameters
        ----------
        target : str
            Instance name, i.e. "Sprite" for an original or "Sprite#k" for
            its k-th clone
        expected : mixed
            Expected value
        other : str
            Second target (variable, list or sprite name) if required
        """
        self.target = target
        self.expected = expected
        self.other = other


    @classmethod
    def observe(cls, state, project, target, other=None):
        """
        Read the observed value

        Parameters
        ----------
        state : VmState
            Program state
        project : Project
            Executed project
        target : str
            Instance name
        other : str
            Second target

        Returns
        -------
        mixed
            Observed value or None if the target does not exist
        """
        inst = state.instance(target)
        if inst is None:
            return None
        return cls._read(inst, state, project, other)


    @classmethod
    def _read(cls, inst, state, project, other):
        raise NotImplementedError()


    def matches(self, value):
        if value is None or self.expected is None:
            return value == self.expected
        if self.tolerance:
            return abs(value - self.expected) <= self.tolerance
        return value == self.expected


    def check(self, state, project):
        """
        Whether the assertion holds in `state`

        Returns
        -------
        bool
            True if passed
        """
        return self.matches(self.observe(state, project, self.target,
            self.other))


    def to_dict(self):
        d = {"kind": self.kind, "target": self.target,
            "expected": self.expected}
        if self.other is not None:
            d["other"] = self.other
        return d


    def __eq__(self, other):
        return isinstance(other, Assertion) and \
            self.to_dict() == other.to_dict()


    def __ne__(self, other):
        return not self == other


    def __repr__(self):
        target = self.target
        if self.other is not None:
            target = "{}.{}".format(target, self.other)
        return "assert {} {} == {!r}".format(self.kind, target, self.expected)


class Backdrop(Assertion):
    kind = "Backdrop"

    @classmethod
    def _read(cls, inst, state, project, other):
        stage = state.stage
        return stage.actor.costumes[stage.costume]["name"]


class CloneCount(Assertion):
    """
    Number of clones of the target actor
    """

    kind = "CloneCount"

    @classmethod
    def observe(cls, state, project, target, other=None):
        return state.clone_count(target)


class Costume(Assertion):
    kind = "Costume"

    @classmethod
    def _read(cls, inst, state, project, other):
        return inst.actor.costumes[inst.costume]["name"]


class Direction(Assertion):
    kind = "Direction"
    tolerance = 1

    @classmethod
    def _read(cls, inst, state, project, other):
        return inst.direction


    def matches(self, value):
        if value is None or self.expected is None:
            return value == self.expected
        diff = abs(value - self.expected) % 360
        return min(diff, 360 - diff) <= self.tolerance


class Layer(Assertion):
    kind = "Layer"

    @classmethod
    def _read(cls, inst, state, project, other):
        return inst.layer


class ListLength(Assertion):
    kind = "ListLength"

    @classmethod
    def _read(cls, inst, state, project, other):
        for owner in (inst, state.stage):
            if other in owner.lists:
                return len(owner.lists[other])
        return None


class Position(Assertion):
    """
    Position [x, y], each coordinate within 5 px
    """

    kind = "Position"
    tolerance = 5

    @classmethod
    def _read(cls, inst, state, project, other):
        return [inst.x, inst.y]


    def matches(self, value):
        if value is None or self.expected is None:
            return value == self.expected
        return all(abs(a - b) <= self.tolerance
            for a, b in zip(value, self.expected))


class Say(Assertion):
    """
    Text of the speech or thought bubble, None if there is no bubble
    """

    kind = "Say"

    @classmethod
    def _read(cls, inst, state, project, other):
        return inst.bubble[1] if inst.bubble else None


    def check(self, state, project):
        inst = state.instance(self.target)
        return inst is not None and self.matches(
            self._read(inst, state, project, self.other))


class Size(Assertion):
    kind = "Size"

    @classmethod
    def _read(cls, inst, state, project, other):
        return inst.size


def overlap(a, b):
    if not a.visible or not b.visible:
        return False
    l1, r1, b1, t1 = a.box()
    l2, r2, b2, t2 = b.box()
    return l1 <= r2 and l2 <= r1 and b1 <= t2 and b2 <= t1


class Touching(Assertion):
    """
    Whether the target touches the other instance
    """

    kind = "Touching"

    @classmethod
    def _read(cls, inst, state, project, other):
        o = state.instance(other)
        if o is None:
            return None
        return overlap(inst, o)


class TouchingEdge(Assertion):
    kind = "TouchingEdge"

    @classmethod
    def _read(cls, inst, state, project, other):
        left, right, bottom, top = inst.box()
        w, h = project.width / 2.0, project.height / 2.0
        return inst.visible and (left <= -w or right >= w or bottom <= -h
            or top >= h)


class Variable(Assertion):
    kind = "Variable"

    @classmethod
    def _read(cls, inst, state, project, other):
        for owner in (inst, state.stage):
            if other in owner.variables:
                return owner.variables[other]
        return None


    def matches(self, value):
        return same(value, self.expected)


class Visibility(Assertion):
    kind = "Visibility"

    @classmethod
    def _read(cls, inst, state, project, other):
        return inst.visible


class Volume(Assertion):
    kind = "Volume"

    @classmethod
    def _read(cls, inst, state, project, other):
        return inst.volume


# Assertion classes by kind
KINDS = dict((c.kind, c) for c in (Backdrop, CloneCount, Costume, Direction,
    Layer, ListLength, Position, Say, Size, Touching, TouchingEdge, Variable,
    Visibility, Volume))


def from_dict(d):
    """
    Create assertion from its serialization

    Raises
    ------
    Error
        If the kind is unknown
    """
    if d.get("kind") not in KINDS:
        raise Error("Unknown assertion kind '{}'".format(d.get("kind")))
    return KINDS[d["kind"]](d["target"], d["expected"], d.get("other"))


def observables(state, project):
    """
    All observable values of a state

    Returns
    -------
    dict
        (kind, target, other) -> value
    """
    values = {}
    stage = state.stage
    values[(Backdrop.kind, stage.name, None)] = Backdrop.observe(state,
        project, stage.name)
    for actor in project.sprites():
        values[(CloneCount.kind, actor.name, None)] = state.clone_count(
            actor.name)
    for inst in state.instances:
        for cls in (Volume, ) if inst.actor.is_stage else \
                (Costume, Direction, Layer, Position, Say, Size,
                TouchingEdge, Visibility, Volume):
            values[(cls.kind, inst.name, None)] = cls._read(inst, state,
                project, None)
        for name in sorted(inst.variables):
            values[(Variable.kind, inst.name, name)] = inst.variables[name]
        for name in sorted(inst.lists):
            values[(ListLength.kind, inst.name, name)] = len(inst.lists[name])
        if inst.actor.is_stage:
            continue
        for o in state.instances:
            if o is not inst and not o.actor.is_stage:
                values[(Touching.kind, inst.name, o.name)] = overlap(inst, o)
    return values
