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

import csv
import datetime
import io
import json
import logging
import socket
from . import assertion
from . import events
from .config import SearchConfig, VmConfig
from .error import *
from .Genotype import Genotype
from .Vm import Vm

log = logging.getLogger("blockwhisker")

# Version of the suite file format
SUITE_VERSION = 1


def positions(project, test_events, config=None):
    """
    Execute events and stop at each assertion position

    Position 0 is reached after the green flag step, position i after the
    i-th event. Iteration ends early if the program stops.

    Parameters
    ----------
    project : Project
        Executed project
    test_events : list of Event
        Events of the test
    config : VmConfig
        Machine configuration

    Yields
    ------
    tuple
        (position, Vm)
    """
    vm = Vm(project, config)
    vm.step()
    yield 0, vm
    for i, event in enumerate(test_events):
        if vm.state.stopped:
            return
        for step_input in event.inputs(vm.state, project, vm.config):
            if vm.state.stopped:
                break
            vm.feed(step_input)
        yield i + 1, vm


class SuiteTest:
    """
    Test of a suite: events, the genotype they were decoded from, the
    goals the test is kept for and assertions per position
    """

    def __init__(self, events, genotype=None, goals=(), assertions=None,
            seed=0):
        """
        Parameters
        ----------
        events : list of Event
            Events after the green flag
        genotype : Genotype
            Codons the events were decoded from, None after minimization
        goals : list of str
            Ids of the blocks the test covers for the suite
        assertions : dict
            Position as key, list of Assertion as value
        seed : int
            Seed of the machine the assertions were generated with
        """
        self.events = list(events)
        self.genotype = genotype
        self.goals = list(goals)
        self.assertions = assertions if assertions is not None else {}
        self.seed = seed


    def n_assertions(self):
        return sum(len(a) for a in self.assertions.values())


    def names(self):
        """
        Actor names the test refers to
        """
        names = set()
        for event in self.events:
            if event.kind in (events.CLICK_SPRITE, events.MOUSE_MOVE_TO,
                    events.DRAG_SPRITE):
                names.add(event.spec.params[0])
            if event.kind == events.DRAG_SPRITE and \
                    event.spec.params[1] != events.EDGE:
                names.add(event.spec.params[1])
        for assertions in self.assertions.values():
            for a in assertions:
                names.add(a.target.split("#")[0])
                if a.kind == assertion.Touching.kind:
                    names.add(a.other.split("#")[0])
        return names


    def to_dict(self):
        d = {
            "events": [e.to_dict() for e in self.events],
            "goals": self.goals,
            "seed": self.seed,
            "assertions": dict((str(p), [a.to_dict() for a in self.assertions[p]])
                for p in self.assertions),
        }
        if self.genotype is not None:
            d["genotype"] = {"codons": self.genotype.codons,
                "groupSize": self.genotype.group_size}
        return d


    @classmethod
    def from_dict(cls, d):
        genotype = None
        if d.get("genotype"):
            genotype = Genotype(d["genotype"]["codons"],
                d["genotype"]["groupSize"])
        assertions = dict((int(p), [assertion.from_dict(a) for a in l])
            for p, l in d.get("assertions", {}).items())
        return cls([events.Event.from_dict(e) for e in d["events"]],
            genotype, d.get("goals", ()), assertions, d.get("seed", 0))


    def __repr__(self):
        return "<SuiteTest {} events, {} assertions>".format(len(self.events),
            self.n_assertions())


class ReplayResult:
    """
    Outcome of replaying a suite
    """

    def __init__(self, canonical):
        self.canonical = canonical

        # Tuples (test index, position, Assertion, passed)
        self.assertions = []

        # Covered goals per test
        self.coverage = []

        # Test indices which raised a VmError
        self.errors = []

        # Whether replay stopped at the step budget
        self.overrun = False


    def failures(self):
        return [r for r in self.assertions if not r[3]]


    def failed_tests(self):
        return sorted(set([r[0] for r in self.failures()] + self.errors))


    @property
    def passed(self):
        return not self.failures() and not self.errors


    def covered(self):
        covered = set()
        for c in self.coverage:
            covered |= c
        return covered


class TestSuite:
    """
    Generated test suite with its generation context
    """

    def __init__(self, tests, config=None, algorithm=None, goals=(),
            coverage_log=()):
        """
        Parameters
        ----------
        tests : list of SuiteTest
            Tests of the suite
        config : SearchConfig
            Configuration the suite was generated with
        algorithm : str
            Name of the generating algorithm
        goals : list of str
            All coverage goals of the project
        coverage_log : list of tuple
            (executionIndex, stepsUsed, coveredCount) for every coverage
            change during generation
        """
        self.tests = tests
        self.config = config if config is not None else SearchConfig()
        self.algorithm = algorithm
        self.goals = list(goals)
        self.coverage_log = list(coverage_log)


    @property
    def seed(self):
        return self.config.vm.seed


    def covered(self):
        covered = set()
        for test in self.tests:
            covered.update(test.goals)
        return covered


    def coverage(self):
        if not self.goals:
            return 1.0
        return len(self.covered() & set(self.goals)) / float(len(self.goals))


    def to_dict(self):
        return {
            "version": SUITE_VERSION,
            "algorithm": self.algorithm,
            "seed": self.seed,
            "config": self.config.to_dict(),
            "goals": self.goals,
            "tests": [t.to_dict() for t in self.tests],
        }


    def to_json(self):
        """
        Canonical JSON serialization
        """
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


    @classmethod
    def from_dict(cls, d):
        """
        Create suite from its serialization

        Raises
        ------
        Error
            If the format version is unsupported
        """
        if d.get("version") != SUITE_VERSION:
            raise Error("Unsupported suite version '{}'".format(
                d.get("version")))
        c = dict(d.get("config", {}))
        c["vm"] = VmConfig(**c.get("vm", {}))
        return cls([SuiteTest.from_dict(t) for t in d["tests"]],
            SearchConfig(**c), d.get("algorithm"), d.get("goals", ()))


    def save(self, path):
        try:
            with io.open(path, "w", encoding="utf-8") as fh:
                fh.write(u"{}\n".format(self.to_json()))
        except (IOError, OSError) as e:
            raise Error("Writing suite '{}' failed: {}".format(path, e))
        log.info("Suite with {} tests written to {}".format(len(self.tests),
            path))


    @classmethod
    def load(cls, path):
        try:
            with io.open(path, encoding="utf-8") as fh:
                d = json.load(fh)
        except (IOError, OSError, ValueError) as e:
            raise Error("Reading suite '{}' failed: {}".format(path, e))
        return cls.from_dict(d)


    def write_coverage_csv(self, path):
        """
        Write coverage over time, one row per coverage change
        """
        try:
            with open(path, "w") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["executionIndex", "vmStepsUsed", "coveredBlocks",
                    "totalBlocks"])
                for execution, steps, covered in self.coverage_log:
                    w.writerow([execution, steps, covered, len(self.goals)])
        except (IOError, OSError) as e:
            raise Error("Writing coverage '{}' failed: {}".format(path, e))


    def write_meta(self, path):
        meta = {
            "timestamp": datetime.datetime.utcnow().isoformat() + "Z",
            "host": socket.gethostname(),
            "algorithm": self.algorithm,
            "tests": len(self.tests),
            "coverage": self.coverage(),
        }
        try:
            with io.open(path, "w", encoding="utf-8") as fh:
                fh.write(u"{}\n".format(json.dumps(meta, sort_keys=True,
                    indent=1)))
        except (IOError, OSError) as e:
            raise Error("Writing meta data '{}' failed: {}".format(path, e))


    def check_names(self, project):
        """
        Raises
        ------
        ReplayError
            If a test refers to actors the project does not declare
        """
        known = set(a.name for a in project.actors)
        unknown = set()
        for test in self.tests:
            unknown |= test.names() - known
        if unknown:
            raise ReplayError("Suite refers to unknown actors: {}".format(
                ", ".join(sorted(unknown))), sorted(unknown))


    def replay(self, project, seed=None, tests=None, step_budget=None):
        """
        Execute the tests and check their assertions

        Parameters
        ----------
        project : Project
            Project to replay on, e.g. the original or a mutant
        seed : int
            Machine seed, the generation seed if None. Results with another
            seed are advisory
        tests : list of int
            Indices of the tests to replay, all if None
        step_budget : int
            Maximum number of VM steps of all replayed tests together.
            Replay stops with `overrun` set once a test would exceed it

        Returns
        -------
        ReplayResult
            Per assertion outcome and coverage

        Raises
        ------
        ReplayError
            If the suite refers to unknown actors
        """
        self.check_names(project)
        canonical = seed is None or seed == self.seed
        if not canonical:
            log.warning("Replay with seed {} instead of {} is not canonical, "
                "results are advisory".format(seed, self.seed))
        c = self.config.vm.to_dict()
        c["seed"] = self.seed if seed is None else seed
        config = VmConfig(**c)
        statements = set(project.statements())

        result = ReplayResult(canonical)
        indices = range(len(self.tests)) if tests is None else tests
        used = 0
        for i in indices:
            test = self.tests[i]
            vm = None
            position = -1
            try:
                for position, vm in positions(project, test.events, config):
                    if step_budget is not None and \
                            used + vm.state.step_count > step_budget:
                        result.overrun = True
                        break
                    for a in test.assertions.get(position, []):
                        result.assertions.append((i, position, a,
                            a.check(vm.state, project)))
            except VmError as e:
                log.debug("Test {} raised: {}".format(i, e))
                result.errors.append(i)
            if result.overrun:
                log.debug("Replay exceeded step budget {} in test {}".format(
                    step_budget, i))
                break
            if vm is not None:
                used += vm.state.step_count
            # Assertions beyond a stop are failures
            for p in sorted(test.assertions):
                if p > position:
                    for a in test.assertions[p]:
                        result.assertions.append((i, p, a, False))
            covered = vm.trace.covered if vm is not None else set()
            result.coverage.append(set(covered) & statements)
        return result
