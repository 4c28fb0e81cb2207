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
from . import encoding
from . import events
from .Genotype import Genotype, TestCase

log = logging.getLogger("blockwhisker")


def _choose(available, previous, rng, config):
    """
    Index of the event appended by the extension: typing if possible, else
    a newly available event with probability `new_event_prob`, else wait
    """
    for i, spec in enumerate(available):
        if spec.kind in (events.TYPE_TEXT, events.TYPE_NUMBER):
            return i
    novel = [i for i, spec in enumerate(available) if spec not in previous]
    if novel and rng.random() < config.new_event_prob:
        return novel[rng.randrange(len(novel))]
    return [s.kind for s in available].index(events.WAIT)


def extension(search, test):
    """
    Extend test by events as long as the trace keeps improving

    Parameters
    ----------
    search : SearchAlgorithm
        Running algorithm, provides project, configuration, random number
        generator and budget accounting
    test : TestCase
        Test to extend

    Returns
    -------
    TestCase
        Extended test if it covers more nodes than `test`, else `test`
    """
    config = search.config
    if test.stopped or test.n_groups >= config.max_codon_length:
        return test
    execution = encoding.Execution(search.project, config, search.pool)
    for group in test.genotype.groups():
        if execution.run_group(group) is None:
            break
    previous = execution.available()
    while not execution.stopped and \
            len(execution.groups) < config.max_codon_length:
        available = execution.available()
        index = _choose(available, previous, search.rng, config)
        previous = available
        group = [index] + [search.rng.randrange(config.codon_max)
            for _ in range(test.genotype.group_size - 1)]
        progress = execution.vm.trace.progress
        execution.run_group(group)
        if execution.vm.trace.progress <= progress:
            break
    extended = execution.test_case(Genotype.from_groups(execution.groups,
        test.genotype.group_size))
    search.charge(extended)
    if len(extended.covered) > len(test.covered):
        log.debug("Extension from {} to {} groups covers {} more nodes".format(
            test.n_groups, extended.n_groups,
            len(extended.covered) - len(test.covered)))
        return extended
    return test


def reduction(test, config):
    """
    Drop the groups after the last trace improvement without re-execution

    Parameters
    ----------
    test : TestCase
        Test to reduce
    config : SearchConfig
        Configuration (minimum number of groups)

    Returns
    -------
    TestCase
        Reduced test or `test` if there is nothing to drop
    """
    keep = max(test.last_improved, config.min_groups)
    if keep >= test.n_groups:
        return test
    kept = test.events[:keep]
    steps = 1 + sum(e.steps or 0 for e in kept)
    stopped = test.stopped and len(kept) == len(test.events)
    reduced = TestCase(test.genotype.truncate(keep), kept, test.trace,
        test.last_improved, steps, stopped)
    reduced._fitness = dict(test._fitness)
    return reduced
