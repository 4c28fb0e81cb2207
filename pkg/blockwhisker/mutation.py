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
import copy
import csv
import io
import json
import logging
import random
from . import opcodes
from . import workers
from .error import *
from .Project import Block, Ref, load_project

log = logging.getLogger("blockwhisker")

# Keys every key-replacement may choose from
DEFAULT_KEYS = ["space", "up", "down", "left", "right"]


def _locate(document, block_id):
    """
    Find block in a project document

    Returns
    -------
    tuple
        (block document, container, key) with container[key] being the
        block document, None if there is no such block
    """
    stack = []
    for actor in document["actors"]:
        for kind in ("scripts", "customBlocks"):
            for script in actor.get(kind) or []:
                if script.get("hat") is not None:
                    stack.append((script["hat"], script, "hat"))
                body = script.get("body") or []
                stack.extend((b, body, k) for k, b in enumerate(body))
    while stack:
        doc, container, key = stack.pop()
        if doc.get("id") == block_id:
            return doc, container, key
        args = doc.get("args") or []
        stack.extend((a, args, k) for k, a in enumerate(args)
            if isinstance(a, dict) and "opcode" in a)
        for child in doc.get("children") or []:
            stack.extend((b, child, k) for k, b in enumerate(child or []))
    return None


class Mutant:
    """
    First-order mutant of a project
    """

    def __init__(self, operator, locus, description, document, project):
        """
        Parameters
        ----------
        operator : str
            Name of the mutation operator
        locus : str
            Id of the mutated block
        description : str
            Human readable description of the change
        document : dict
            Mutated project document
        project : Project
            Loaded mutated project
        """
        self.operator = operator
        self.locus = locus
        self.description = description
        self.document = document
        self.project = project


    def __repr__(self):
        return "<Mutant {} {}>".format(self.operator, self.description)


class Operator:
    """
    Base class for mutation operators

    Derived classes list the possible changes of a project in
    `candidates()` and perform a single change on a document copy in
    `apply()`.
    """

    # Abbreviation of the operator (MUST BE SET IN DERIVED CLASS)
    name = None

    # Short description of the operator (MUST BE SET IN DERIVED CLASS)
    description = None


    def candidates(self, project, rng):
        """
        Possible changes of `project`

        Returns
        -------
        list of tuple
            (block id, replacement) per change
        """
        return []


    def apply(self, block, container, key, replacement):
        raise NotImplementedError()


    def describe(self, block, replacement):
        return "{} at {}".format(self.name, block["id"])


    def mutants(self, project, rng):
        """
        Generate the mutants of `project`

        Parameters
        ----------
        project : Project
            Original project
        rng : random.Random
            Random number generator for operators with a random replacement

        Returns
        -------
        tuple
            (list of Mutant, number of changes rejected by validation)
        """
        result = []
        rejected = 0
        for locus, replacement in self.candidates(project, rng):
            document = copy.deepcopy(project.document)
            block, container, key = _locate(document, locus)
            description = self.describe(block, replacement)
            self.apply(block, container, key, replacement)
            try:
                mutated = load_project(document)
            except LoadError as e:
                log.debug("Rejected mutant {}: {}".format(description, e))
                rejected += 1
                continue
            result.append(Mutant(self.name, locus, description, document,
                mutated))
        return result, rejected


class KeyReplacement(Operator):
    name = "KRM"
    description = "Replace the key of a key block by another key"

    def candidates(self, project, rng):
        blocks = [b for b in project.blocks.values()
            if b.opcode in ("keyPressed", "keyPressedQ")
            and b.args[0] is not None
            and not isinstance(b.args[0], (Block, Ref))]
        keys = set(DEFAULT_KEYS) | set(b.args[0] for b in blocks)
        result = []
        for b in sorted(blocks, key=lambda b: b.id):
            others = sorted(k for k in keys if k != b.args[0])
            result.append((b.id, others[rng.randrange(len(others))]))
        return result


    def apply(self, block, container, key, replacement):
        block["args"][0] = replacement


    def describe(self, block, replacement):
        return "KRM {} {}->{}".format(block["id"], block["args"][0],
            replacement)


class StatementDeletion(Operator):
    name = "SBD"
    description = "Delete a statement"

    def candidates(self, project, rng):
        return [(b.id, None) for b in sorted(project.blocks.values(),
            key=lambda b: b.id)
            if opcodes.shape(b.opcode) in (opcodes.STACK, opcodes.CAP)]


    def apply(self, block, container, key, replacement):
        del container[key]


class ScriptDeletion(Operator):
    name = "SDM"
    description = "Delete the hat of a script, which makes it dead code"

    def candidates(self, project, rng):
        return [(s.hat.id, None) for s in project.scripts()
            if s.hat is not None and not s.procedure]


    def apply(self, block, container, key, replacement):
        container[key] = None


class _OpcodeReplacement(Operator):
    """
    Replace the opcode of a block by every other opcode of `group`
    """

    # Interchangeable opcodes (MUST BE SET IN DERIVED CLASS)
    group = []

    def candidates(self, project, rng):
        result = []
        for b in sorted(project.blocks.values(), key=lambda b: b.id):
            if b.opcode in self.group:
                result += [(b.id, op) for op in self.group if op != b.opcode]
        return result


    def apply(self, block, container, key, replacement):
        block["opcode"] = replacement


    def describe(self, block, replacement):
        return "{} {} {}->{}".format(self.name, block["id"], block["opcode"],
            replacement)


class ArithmeticReplacement(_OpcodeReplacement):
    name = "AOR"
    description = "Replace an arithmetic operator"
    group = opcodes.ARITHMETIC


class LogicalReplacement(_OpcodeReplacement):
    name = "LOR"
    description = "Replace a logical operator"
    group = opcodes.LOGICAL


class RelationalReplacement(_OpcodeReplacement):
    name = "ROR"
    description = "Replace a relational operator"
    group = opcodes.RELATIONAL


class NegateCondition(Operator):
    name = "NCM"
    description = "Negate the condition of a control block"

    def candidates(self, project, rng):
        return [(b.id, None) for b in sorted(project.blocks.values(),
            key=lambda b: b.id)
            if b.opcode in ("if", "ifElse", "repeatUntil", "waitUntil")
            and isinstance(b.args[0], Block)]


    def apply(self, block, container, key, replacement):
        condition = block["args"][0]
        block["args"][0] = {"id": "{}~ncm".format(condition["id"]),
            "opcode": "not", "args": [condition]}


class VariableReplacement(Operator):
    name = "VRM"
    description = "Replace a variable by another variable in scope"

    def candidates(self, project, rng):
        stage = set(project.stage.variables)
        result = []
        for b in sorted(project.blocks.values(), key=lambda b: b.id):
            scope = stage | set(b.script.actor.variables)
            for k, arg in enumerate(b.args):
                if isinstance(arg, Ref) and arg.kind == "var":
                    name = arg.name
                elif k == 0 and b.opcode in ("setVariable",
                        "changeVariable") and not isinstance(arg, Block):
                    name = arg
                else:
                    continue
                others = sorted(v for v in scope if v != name)
                if others:
                    result.append((b.id, (k, others[rng.randrange(
                        len(others))])))
        return result


    def apply(self, block, container, key, replacement):
        k, name = replacement
        if isinstance(block["args"][k], dict):
            block["args"][k] = {"var": name}
        else:
            block["args"][k] = name


    def describe(self, block, replacement):
        k, name = replacement
        return "VRM {} arg {}->{}".format(block["id"], k, name)


# All operators in report order
OPERATORS = [KeyReplacement(), StatementDeletion(), ScriptDeletion(),
    ArithmeticReplacement(), LogicalReplacement(), RelationalReplacement(),
    NegateCondition(), VariableReplacement()]


def generate_mutants(project, operators=None, seed=0):
    """
    Generate all first-order mutants of a project

    Parameters
    ----------
    project : Project
        Original project
    operators : list of str
        Names of the operators to apply, all if None
    seed : int
        Seed for random replacements, independent of the test seeds

    Returns
    -------
    tuple
        (list of Mutant, dict operator name -> number of rejected changes)
    """
    rng = random.Random(seed)
    mutants = []
    rejected = collections.OrderedDict()
    for op in OPERATORS:
        if operators is not None and op.name not in operators:
            continue
        generated, rejected[op.name] = op.mutants(project, rng)
        mutants += generated
    log.info("Generated {} mutants".format(len(mutants)))
    return mutants, rejected


class MutationReport:
    """
    Killed and survived mutants per operator

    Each row counts generated, killed and survived mutants, the changes
    rejected because the mutated document failed validation and the
    mutants whose replay overran the step budget. Overrun mutants count as
    survived. The excluded column is the number of tests excluded from the
    analysis because they fail on the original project.
    """

    # Counted columns of a row
    COUNTS = ["generated", "killed", "survived", "rejected", "overrun"]

    def __init__(self, operators, excluded_tests=()):
        """
        Parameters
        ----------
        operators : list of str
            Operator names in report order
        excluded_tests : list of int
            Tests excluded because they fail on the original project
        """
        self.rows = collections.OrderedDict((op, dict((k, 0)
            for k in self.COUNTS)) for op in operators)
        self.excluded_tests = list(excluded_tests)

        # Tuples (Mutant, killed)
        self.results = []


    def add(self, mutant, killed, overrun=False):
        row = self.rows[mutant.operator]
        row["generated"] += 1
        row["killed" if killed else "survived"] += 1
        if overrun:
            row["overrun"] += 1
        self.results.append((mutant, killed))


    def total(self):
        total = dict((k, 0) for k in self.COUNTS)
        for row in self.rows.values():
            for k in total:
                total[k] += row[k]
        return total


    @staticmethod
    def _score(row):
        if not row["generated"]:
            return None
        return row["killed"] / float(row["generated"])


    @property
    def score(self):
        return self._score(self.total())


    def to_dict(self):
        operators = collections.OrderedDict()
        for op, row in self.rows.items():
            operators[op] = dict(row, score=self._score(row))
        return {
            "operators": operators,
            "total": dict(self.total(), score=self.score),
            "excludedTests": self.excluded_tests,
            "mutants": [{"operator": m.operator, "locus": m.locus,
                "description": m.description, "killed": killed}
                for m, killed in self.results],
        }


    def write_json(self, path):
        try:
            with io.open(path, "w", encoding="utf-8") as fh:
                fh.write(u"{}\n".format(json.dumps(self.to_dict(),
                    sort_keys=True, indent=1)))
        except (IOError, OSError) as e:
            raise Error("Writing mutation report '{}' failed: {}".format(
                path, e))


    def write_csv(self, path):
        try:
            with open(path, "w") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["operator", "generated", "killed", "survived",
                    "excluded", "rejected", "overrun", "score"])
                rows = list(self.rows.items()) + [("ALL", self.total())]
                excluded = len(self.excluded_tests)
                for op, row in rows:
                    score = self._score(row)
                    w.writerow([op, row["generated"], row["killed"],
                        row["survived"], excluded, row["rejected"],
                        row["overrun"],
                        "" if score is None else "{:.4f}".format(score)])
        except (IOError, OSError) as e:
            raise Error("Writing mutation report '{}' failed: {}".format(
                path, e))


def analyze(project, suite, mutants, rejected=None, threads=None,
        step_budget=None):
    """
    Mutation analysis of a suite

    Tests failing on the original project are excluded. A mutant is killed
    if a remaining test has a failing assertion or raises a VmError. A
    mutant whose replay exceeds `step_budget` counts as not killed.

    Parameters
    ----------
    project : Project
        Original project
    suite : TestSuite
        Suite with assertions
    mutants : list of Mutant
        Mutants to evaluate
    rejected : dict
        Rejected changes per operator as returned by `generate_mutants()`
    threads : int
        Number of worker threads, see `workers.map_isolated()`
    step_budget : int
        Maximum number of VM steps per mutant over all remaining tests,
        unlimited if None

    Returns
    -------
    MutationReport
        Report per operator
    """
    original = suite.replay(project)
    excluded = original.failed_tests()
    if excluded:
        log.warning("Excluding {} tests failing on the original project"
            .format(len(excluded)))
    remaining = [i for i in range(len(suite.tests)) if i not in excluded]

    def outcome(mutant):
        result = suite.replay(mutant.project, tests=remaining,
            step_budget=step_budget)
        if result.overrun:
            return None
        return not result.passed

    outcomes = workers.map_isolated(outcome, mutants, threads)
    report = MutationReport([op.name for op in OPERATORS], excluded)
    for op, n in (rejected or {}).items():
        report.rows[op]["rejected"] = n
    for mutant, killed in zip(mutants, outcomes):
        if killed is None:
            log.warning("{} exceeded the step budget of {}, counted as not "
                "killed".format(mutant, step_budget))
            report.add(mutant, False, overrun=True)
            continue
        log.debug("{} {}".format(mutant, "killed" if killed else "survived"))
        report.add(mutant, killed)
    log.info("Mutation score {}/{}".format(report.total()["killed"],
        report.total()["generated"]))
    return report
