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

import logging
from . import assertion
from .config import VmConfig
from .fitness import build_fitness_functions
from .suite import SuiteTest, TestSuite, positions
from .values import same
from .Vm import run_test
from .VmState import VmState

log = logging.getLogger("blockwhisker")


def _fitness(project, test_events, targets, config):
    trace, _ = run_test(project, test_events, config)
    return [f.evaluate(trace) for f in targets]


def minimize(test, targets, project, config=None):
    """
    Remove events as long as the fitness of no target gets worse

    Events are dropped from the last to the first. Passes are repeated until
    no single event can be removed, i.e. the result is 1-minimal.

    Parameters
    ----------
    test : SuiteTest
        Test to minimize
    targets : FitnessFunction or list of FitnessFunction
        Goals whose fitness must not get worse
    project : Project
        Project under test
    config : VmConfig
        Machine configuration

    Returns
    -------
    SuiteTest
        Minimized test without genotype and assertions
    """
    if not isinstance(targets, (list, tuple)):
        targets = [targets]
    if config is None:
        config = VmConfig(seed=test.seed)
    current = list(test.events)
    best = _fitness(project, current, targets, config)
    removed = True
    while removed and current:
        removed = False
        for i in reversed(range(len(current))):
            candidate = current[:i] + current[i + 1:]
            f = _fitness(project, candidate, targets, config)
            if all(a <= b for a, b in zip(f, best)):
                current, best = candidate, f
                removed = True
    log.debug("Minimized test from {} to {} events".format(len(test.events),
        len(current)))
    return SuiteTest(current, None, test.goals, seed=test.seed)


def minimize_suite(suite, project):
    """
    Minimize each test of a suite against the goals it is kept for

    Returns
    -------
    TestSuite
        Suite of minimized tests
    """
    _, _, functions = build_fitness_functions(project)
    by_goal = dict((f.target, f) for f in functions)
    config = suite.config.vm
    tests = []
    for test in suite.tests:
        targets = [by_goal[g] for g in test.goals if g in by_goal]
        tests.append(minimize(test, targets, project, config) if targets
            else test)
    log.info("Minimized suite from {} to {} events".format(
        sum(len(t.events) for t in suite.tests),
        sum(len(t.events) for t in tests)))
    return TestSuite(tests, suite.config, suite.algorithm, suite.goals,
        suite.coverage_log)


def _sort_key(key):
    kind, target, other = key
    return (kind, target, other or "")


def generate_assertions(test, project, config=None):
    """
    Annotate test with regression assertions

    The state before the green flag and after every position is observed.
    An assertion is emitted for every observable value which differs from
    the previous observation.

    Parameters
    ----------
    test : SuiteTest
        Test to annotate
    project : Project
        Project under test
    config : VmConfig
        Machine configuration, its seed becomes the seed of the test

    Returns
    -------
    SuiteTest
        Test with assertions per position
    """
    if config is None:
        config = VmConfig(seed=test.seed)
    assertions = {}
    previous = assertion.observables(VmState(project, config.seed), project)
    for position, vm in positions(project, test.events, config):
        current = assertion.observables(vm.state, project)
        emitted = []
        for key in sorted(current, key=_sort_key):
            if key in previous and same(previous[key], current[key]):
                continue
            kind, target, other = key
            emitted.append(assertion.KINDS[kind](target, current[key], other))
        if emitted:
            assertions[position] = emitted
        previous = current
    log.debug("{} assertions for test of {} events".format(
        sum(len(a) for a in assertions.values()), len(test.events)))
    return SuiteTest(test.events, test.genotype, test.goals, assertions,
        config.seed)


def annotate_suite(suite, project):
    """
    Generate the assertions of all tests of a suite
    """
    tests = [generate_assertions(t, project, suite.config.vm)
        for t in suite.tests]
    return TestSuite(tests, suite.config, suite.algorithm, suite.goals,
        suite.coverage_log)
