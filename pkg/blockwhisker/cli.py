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

import argparse
import itertools
import logging
import os
import sys
from . import events
from . import mutation
from . import postprocess
from .Cdg import build_cdg
from .Cfg import build_cfg
from .config import SearchConfig, VmConfig
from .error import *
from .Mio import Mio
from .Mosa import Mosa
from .Project import load_project_file
from .RandomSearch import RandomSearch
from .suite import TestSuite
from .Vm import run_test

log = logging.getLogger("blockwhisker")

ALGORITHMS = {
    "random": RandomSearch,
    "mosa": Mosa,
    "mio": Mio,
}

# Largest number of event sequences `brute_force()` executes
ENUMERATION_BOUND = 100000

# Parameter grid of the enumerated events
DURATION_GRID = [1, 10]
NUMBER_GRID = [0, 10]
DRAG_GRID = [360]

# Exit codes
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_LOAD = 2


def event_grid(project, pool=None):
    """
    Enumerable events: the static events with their open parameters taken
    from a fixed grid

    Parameters
    ----------
    project : Project
        Validated project
    pool : list of str
        Texts for TypeText events

    Returns
    -------
    list of Event
        Events without duplicates
    """
    pool = pool if pool is not None else events.text_pool(project, 0)
    w, h = project.width // 4, project.height // 4
    grid = {
        events.KEY_PRESS: [[d] for d in DURATION_GRID],
        events.WAIT: [[d] for d in DURATION_GRID],
        events.MOUSE_MOVE: [[0, 0], [-w, h], [w, -h]],
        events.DRAG_SPRITE: [[a] for a in DRAG_GRID],
        events.TYPE_NUMBER: [[n] for n in NUMBER_GRID],
        events.TYPE_TEXT: [[t] for t in pool],
    }
    result = []
    for spec in events.static_extract(project):
        for values in grid.get(spec.kind, [[]]):
            event = events.Event(spec, values)
            if event not in result:
                result.append(event)
    return result


def brute_force(project, max_len, config=None, bound=ENUMERATION_BOUND):
    """
    Blocks covered by any static event sequence up to length `max_len`

    Parameters
    ----------
    project : Project
        Validated project
    max_len : int
        Maximum number of events after the green flag
    config : VmConfig
        Machine configuration
    bound : int
        Maximum number of sequences

    Returns
    -------
    set of str
        Covered block ids

    Raises
    ------
    EnumerationError
        If more than `bound` sequences would be executed
    """
    grid = event_grid(project)
    estimate = sum(len(grid) ** n for n in range(max_len + 1))
    if estimate > bound:
        log.warning("Refusing to enumerate {} sequences".format(estimate))
        raise EnumerationError("Enumeration of {} sequences exceeds bound {}"
            .format(estimate, bound), estimate)
    statements = set(project.statements())
    covered = set()
    for n in range(max_len + 1):
        for sequence in itertools.product(grid, repeat=n):
            trace, _ = run_test(project, list(sequence), config)
            covered |= trace.covered & statements
    log.info("Enumerated {} sequences covering {}/{} blocks".format(estimate,
        len(covered), len(statements)))
    return covered


def _config(args):
    """
    SearchConfig from the command line arguments
    """
    vm = VmConfig(seed=args.seed, acceleration=args.acceleration)
    kwargs = {"seed": args.seed, "vm": vm, "extraction": args.extraction}
    for key in ["budget_executions", "budget_steps", "budget_seconds",
            "crossover_prob", "local_search_prob", "mio_focus", "mio_n0",
            "mio_nf", "mio_r0", "mio_rf", "mio_m0", "mio_mf"]:
        if getattr(args, key) is not None:
            kwargs[key] = getattr(args, key)
    if args.population is not None:
        kwargs["population_size"] = args.population
    return SearchConfig(**kwargs)


def _out_dir(path):
    if not os.path.isdir(path):
        os.makedirs(path)
    return path


def cmd_generate(args):
    project = load_project_file(args.project)
    config = _config(args)
    algorithm = ALGORITHMS[args.algorithm](project, config)
    suite = postprocess.annotate_suite(algorithm.run(), project)
    out = _out_dir(args.out_dir)
    suite.save(os.path.join(out, "suite.json"))
    suite.write_coverage_csv(os.path.join(out, "coverage.csv"))
    suite.write_meta(os.path.join(out, "meta.json"))
    print("{}: {} tests cover {}/{} blocks ({:.2%})".format(args.algorithm,
        len(suite.tests), len(suite.covered()), len(suite.goals),
        suite.coverage()))
    return EXIT_OK


def cmd_replay(args):
    project = load_project_file(args.project)
    suite = TestSuite.load(args.suite)
    result = suite.replay(project, args.seed)
    for i, position, a, passed in result.assertions:
        print("test {} position {}: {!r} {}".format(i, position, a,
            "PASS" if passed else "FAIL"))
    for i in result.errors:
        print("test {}: ERROR".format(i))
    for i, covered in enumerate(result.coverage):
        print("test {} covers {} blocks".format(i, len(covered)))
    statements = project.statements()
    print("{} of {} assertions failed, suite covers {}/{} blocks{}".format(
        len(result.failures()), len(result.assertions),
        len(result.covered()), len(statements),
        "" if result.canonical else " (non-canonical seed, advisory)"))
    return EXIT_OK if result.passed else EXIT_FAILED


def cmd_minimize(args):
    project = load_project_file(args.project)
    suite = TestSuite.load(args.suite)
    suite = postprocess.annotate_suite(
        postprocess.minimize_suite(suite, project), project)
    suite.save(args.out)
    return EXIT_OK


def cmd_mutate(args):
    project = load_project_file(args.project)
    suite = TestSuite.load(args.suite)
    operators = args.operators.split(",") if args.operators else None
    mutants, rejected = mutation.generate_mutants(project, operators,
        args.mutation_seed)
    report = mutation.analyze(project, suite, mutants, rejected,
        step_budget=args.step_budget)
    out = _out_dir(args.out_dir)
    report.write_csv(os.path.join(out, "mutation.csv"))
    report.write_json(os.path.join(out, "mutation.json"))
    total = report.total()
    print("{} of {} mutants killed".format(total["killed"],
        total["generated"]))
    return EXIT_OK


def cmd_graph_dump(args):
    project = load_project_file(args.project)
    graph = build_cfg(project)
    if args.graph == "cdg":
        graph = build_cdg(graph)
    sys.stdout.write(graph.to_dot() if args.format == "dot"
        else graph.to_edges())
    return EXIT_OK


def cmd_brute_force(args):
    project = load_project_file(args.project)
    covered = brute_force(project, args.max_len,
        VmConfig(seed=args.seed, acceleration=args.acceleration), args.bound)
    for block_id in project.statements():
        if block_id in covered:
            print(block_id)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="blockwhisker",
        description="search-based test generation for block programs")
    parser.add_argument("-v", "--verbose", action="store_true",
        help="print debug messages")
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--project", required=True,
        help="project document (JSON)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--acceleration", type=int, default=1)

    p = sub.add_parser("generate", parents=[common],
        help="generate a test suite")
    p.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="mio")
    p.add_argument("--budget-executions", type=int)
    p.add_argument("--budget-steps", type=int)
    p.add_argument("--budget-seconds", type=float)
    p.add_argument("--population", type=int)
    p.add_argument("--crossover-prob", type=float)
    p.add_argument("--local-search-prob", type=float)
    p.add_argument("--extraction", choices=["dynamic", "static"],
        default="dynamic")
    for name, kind in [("focus", float), ("n0", int), ("nf", int),
            ("r0", float), ("rf", float), ("m0", int), ("mf", int)]:
        p.add_argument("--mio-{}".format(name), type=kind,
            dest="mio_{}".format(name))
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("replay", help="replay a test suite")
    p.add_argument("--project", required=True)
    p.add_argument("--suite", required=True)
    p.add_argument("--seed", type=int,
        help="machine seed, the seed of the suite if omitted")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("minimize", help="minimize a test suite")
    p.add_argument("--project", required=True)
    p.add_argument("--suite", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("mutate", help="mutation analysis of a test suite")
    p.add_argument("--project", required=True)
    p.add_argument("--suite", required=True)
    p.add_argument("--operators",
        help="comma separated operator names, all if omitted")
    p.add_argument("--mutation-seed", type=int, default=0)
    p.add_argument("--step-budget", type=int,
        help="VM steps per mutant, overrunning mutants count as not killed")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("graph-dump", help="print control flow or "
        "control dependence graph")
    p.add_argument("--project", required=True)
    p.add_argument("--graph", choices=["cfg", "cdg"], default="cfg")
    p.add_argument("--format", choices=["edges", "dot"], default="edges")
    p.set_defaults(func=cmd_graph_dump)

    p = sub.add_parser("brute-force", parents=[common],
        help="blocks covered by all short static event sequences")
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("--bound", type=int, default=ENUMERATION_BOUND)
    p.set_defaults(func=cmd_brute_force)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter('%(name)s: %(message)s'))
    log.addHandler(handler)
    log.setLevel(logging.DEBUG if args.verbose else logging.INFO)
    try:
        return args.func(args)
    except LoadError as e:
        log.error(str(e))
        return EXIT_LOAD
    except Error as e:
        log.error(str(e))
        return EXIT_FAILED
    finally:
        log.removeHandler(handler)


if __name__ == "__main__":
    sys.exit(main())
