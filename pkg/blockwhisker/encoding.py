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

"""
Codon encoding of tests

A genotype is decoded while it is executed: the event codon of each group
selects an event from the events available in the current state, the
following codons resolve the open parameters of the event.
"""

import logging
import math
from . import events
from .Genotype import Genotype, TestCase
from .Vm import Vm

log = logging.getLogger("blockwhisker")

# Retries of crossover if a child gets too short
CROSSOVER_RETRIES = 3


def group_size(project):
    """
    Codons per group: one event codon plus the largest number of open
    parameters of any event of the project
    """
    return 1 + max(s.open_params for s in events.static_extract(project))


class Execution:
    """
    Decoding of a genotype in progress, can be continued group by group
    """

    def __init__(self, project, config, pool=None):
        """
        Start the program with the green flag

        Parameters
        ----------
        project : Project
            Executed project
        config : SearchConfig
            Configuration (extraction, parameter bounds, machine)
        pool : list of str
            TypeText pool, built from the project if None
        """
        self.project = project
        self.config = config
        self.pool = pool if pool is not None else \
            events.text_pool(project, config.seed)
        self.static = events.static_extract(project) \
            if config.extraction == "static" else None
        self.vm = Vm(project, config.vm)
        self.vm.step()
        self.events = []
        self.groups = []
        self.last_improved = 0


    @property
    def stopped(self):
        return self.vm.state.stopped


    def available(self):
        """
        Events available in the current state
        """
        if self.static is not None:
            return self.static
        return events.dynamic_extract(self.vm.state, self.project)


    def run_group(self, group):
        """
        Decode and execute one codon group

        Returns
        -------
        Event
            Executed event, None if the program already stopped
        """
        if self.stopped:
            return None
        specs = self.available()
        spec = specs[group[0] % len(specs)]
        event = events.resolve(spec, group[1:], self.project, self.pool,
            self.config.key_press_bound, self.config.wait_bound)
        vm = self.vm
        progress = vm.trace.progress
        start = vm.state.step_count
        for step_input in event.inputs(vm.state, self.project, vm.config):
            if vm.state.stopped:
                break
            vm.feed(step_input)
        event.steps = vm.state.step_count - start
        self.events.append(event)
        self.groups.append(list(group))
        if vm.trace.progress > progress:
            self.last_improved = len(self.groups)
        return event


    def test_case(self, genotype=None):
        """
        Test case of the groups executed so far

        Parameters
        ----------
        genotype : Genotype
            Genotype to store, the executed groups if None. Groups left over
            after the program stopped are kept in the given genotype
        """
        if genotype is None:
            genotype = Genotype.from_groups(self.groups,
                group_size(self.project))
        return TestCase(genotype, list(self.events), self.vm.trace,
            self.last_improved, self.vm.state.step_count, self.stopped)


def decode_and_execute(project, genotype, config, pool=None):
    """
    Execute genotype on a fresh machine

    Parameters
    ----------
    project : Project
        Executed project
    genotype : Genotype
        Codons to decode
    config : SearchConfig
        Configuration
    pool : list of str
        TypeText pool, built from the project if None

    Returns
    -------
    TestCase
        Executed test
    """
    execution = Execution(project, config, pool)
    for group in genotype.groups():
        if execution.run_group(group) is None:
            break
    test = execution.test_case(genotype)
    log.debug("Executed {}: {} events, {} steps, {} covered".format(
        genotype, len(test.events), test.steps, len(test.covered)))
    return test


def random_group(rng, config, size):
    return [rng.randrange(config.codon_max) for _ in range(size)]


def generate_random_codons(rng, config, size):
    """
    Random genotype with a uniform number of groups in
    [min_groups, max_groups]

    Parameters
    ----------
    rng : random.Random
        Random number generator
    config : SearchConfig
        Configuration
    size : int
        Codons per group

    Returns
    -------
    Genotype
        New genotype
    """
    n = rng.randint(config.min_groups, config.max_groups)
    return Genotype.from_groups([random_group(rng, config, size)
        for _ in range(n)], size)


def _mutation_points(n_groups, rng):
    """
    Indices of the groups to mutate, each with probability 1 / n_groups
    """
    return [i for i in range(n_groups) if rng.random() < 1.0 / n_groups]


def mutate(genotype, rng, config):
    """
    Mutate groups: insert a random group before it, perturb its codons or
    delete it

    Parameters
    ----------
    genotype : Genotype
        Parent
    rng : random.Random
        Random number generator
    config : SearchConfig
        Configuration (group bounds, codon range, gaussian sigma)

    Returns
    -------
    Genotype
        Mutated copy
    """
    size = genotype.group_size
    groups = genotype.groups()
    points = set(_mutation_points(len(groups), rng))
    out = []
    for i, group in enumerate(groups):
        if i not in points:
            out.append(group)
            continue
        remaining = len(groups) - i - 1
        op = rng.randrange(3)
        if op == 0:
            if len(out) + remaining + 2 <= config.max_groups:
                out.append(random_group(rng, config, size))
            out.append(group)
        elif op == 1:
            out.append([int(round(c + rng.gauss(0, config.gaussian_sigma)))
                % config.codon_max for c in group])
        elif len(out) + remaining < config.min_groups:
            out.append(group)
    return Genotype.from_groups(out, size)


def crossover_at(a, b, ratio):
    """
    Single point crossover at the relative position `ratio`

    Returns
    -------
    tuple of Genotype
        (a[:cut a] + b[cut b:], b[:cut b] + a[cut a:])
    """
    ga, gb = a.groups(), b.groups()
    cut_a = int(math.floor(ratio * len(ga)))
    cut_b = int(math.floor(ratio * len(gb)))
    size = a.group_size
    return (Genotype.from_groups(ga[:cut_a] + gb[cut_b:], size),
        Genotype.from_groups(gb[:cut_b] + ga[cut_a:], size))


def crossover(a, b, rng, config):
    """
    Crossover at a random relative position, retried if a child has fewer
    than `config.min_groups` groups

    Returns
    -------
    tuple of Genotype
        Two children, copies of the parents if all attempts fail
    """
    for _ in range(1 + CROSSOVER_RETRIES):
        c1, c2 = crossover_at(a, b, rng.random())
        if c1.n_groups >= config.min_groups and \
                c2.n_groups >= config.min_groups:
            return c1, c2
    return Genotype(a.codons, a.group_size), Genotype(b.codons, b.group_size)
