import os
import sys
import shutil
import tempfile
import unittest

sys.path.append("../")
import blockwhisker as bw
from blockwhisker import events, mutation, postprocess, workers


def seven_presses(project):
    """
    Annotated suite pressing "right" until the guard says "Made it!"
    """
    press = events.Event(events.EventSpec(events.KEY_PRESS, ["right"]), [2])
    return postprocess.annotate_suite(bw.TestSuite([bw.SuiteTest([press] * 7,
        goals=project.statements())]), project)


class MutationTest(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.threads = os.environ.pop(workers.THREADS_ENV, None)


    def tearDown(self):
        shutil.rmtree(self.tmp)
        if self.threads is not None:
            os.environ[workers.THREADS_ENV] = self.threads
        else:
            os.environ.pop(workers.THREADS_ENV, None)


    def test_A_relational(self):
        project = bw.load_corpus("two_if_guard")
        mutants, rejected = bw.generate_mutants(project, ["ROR"])
        self.assertEqual([m.description for m in mutants], [
            "ROR inner/a0 gt->lt",
            "ROR inner/a0 gt->equals",
            "ROR outer/a0 gt->lt",
            "ROR outer/a0 gt->equals",
        ])
        self.assertEqual(dict(rejected), {"ROR": 0})
        self.assertEqual(mutants[0].project.blocks["inner/a0"].opcode, "lt")

        # the original project is left untouched
        self.assertEqual(project.blocks["inner/a0"].opcode, "gt")


    def test_B_first_order(self):
        project = bw.load_corpus("zombie_game")
        mutants, rejected = bw.generate_mutants(project, seed=4)
        self.assertTrue(len(mutants) > 0)
        self.assertEqual(list(rejected), [op.name for op in mutation.OPERATORS])
        for mutant in mutants:
            self.assertIn(mutant.locus, project.blocks)
            self.assertNotEqual(mutant.document, project.document)

        again, _ = bw.generate_mutants(project, seed=4)
        self.assertEqual([m.description for m in mutants],
            [m.description for m in again])


    def test_C_operators(self):
        project = bw.load_corpus("two_if_guard")
        test_cases = [
            ["SBD", ["SBD count", "SBD drop_x", "SBD made_it", "SBD reset_x",
                "SBD step_x"]],
            ["SDM", ["SDM start", "SDM right", "SDM left"]],
            ["NCM", ["NCM inner", "NCM outer"]],
        ]
        for operator, loci in test_cases:
            mutants, _ = bw.generate_mutants(project, [operator])
            self.assertEqual(["{} {}".format(m.operator, m.locus)
                for m in mutants], loci)

        mutants, _ = bw.generate_mutants(project, ["SDM"])
        dead = mutants[1].project
        self.assertIsNone(dead.actor("Guard").scripts[1].hat)

        mutants, _ = bw.generate_mutants(project, ["NCM"])
        self.assertEqual(mutants[0].project.blocks["inner/a0~ncm"].opcode,
            "not")

        mutants, _ = bw.generate_mutants(project, ["KRM"])
        self.assertEqual(len(mutants), 2)
        for mutant in mutants:
            key = mutant.project.blocks[mutant.locus].literal(0)
            self.assertNotEqual(key, project.blocks[mutant.locus].literal(0))


    def test_D_analysis(self):
        project = bw.load_corpus("two_if_guard")
        suite = seven_presses(project)
        mutants, rejected = bw.generate_mutants(project, ["SBD", "SDM"])
        report = bw.analyze(project, suite, mutants, rejected, threads=2)
        killed = dict((m.locus, k) for m, k in report.results)
        self.assertEqual(killed, {
            "count": True,
            "drop_x": False,
            "made_it": True,
            "reset_x": False,
            "step_x": True,
            "start": True,
            "right": True,
            "left": False,
        })
        self.assertEqual(report.rows["SBD"], {"generated": 5, "killed": 3,
            "survived": 2, "rejected": 0, "overrun": 0})
        self.assertAlmostEqual(report.score, 5.0 / 8)
        self.assertEqual(report.excluded_tests, [])

        path = os.path.join(self.tmp, "mutation.csv")
        report.write_csv(path)
        with open(path) as fh:
            self.assertEqual(fh.read(),
                "operator,generated,killed,survived,excluded,rejected,overrun,"
                "score\n"
                "KRM,0,0,0,0,0,0,\n"
                "SBD,5,3,2,0,0,0,0.6000\n"
                "SDM,3,2,1,0,0,0,0.6667\n"
                "AOR,0,0,0,0,0,0,\n"
                "LOR,0,0,0,0,0,0,\n"
                "ROR,0,0,0,0,0,0,\n"
                "NCM,0,0,0,0,0,0,\n"
                "VRM,0,0,0,0,0,0,\n"
                "ALL,8,5,3,0,0,0,0.6250\n")

        # results do not depend on the number of threads
        serial = bw.analyze(project, suite, mutants, rejected, threads=1)
        self.assertEqual(serial.to_dict(), report.to_dict())


    def test_E_excluded_tests(self):
        project = bw.load_corpus("two_if_guard")
        suite = seven_presses(project)
        suite.tests[0].assertions[7][0].expected = "broken"
        mutants, rejected = bw.generate_mutants(project, ["SDM"])
        report = bw.analyze(project, suite, mutants, rejected, threads=1)
        self.assertEqual(report.excluded_tests, [0])
        self.assertEqual(report.total()["killed"], 0)

        path = os.path.join(self.tmp, "mutation.csv")
        report.write_csv(path)
        with open(path) as fh:
            self.assertEqual(fh.read().splitlines()[-1],
                "ALL,3,0,3,1,0,0,0.0000")

        report = mutation.MutationReport(["ROR"])
        self.assertIsNone(report.score)


    def test_F_threads(self):
        self.assertEqual(workers.map_isolated(lambda x: x * x, range(20), 4),
            [x * x for x in range(20)])
        self.assertEqual(workers.map_isolated(len, [], 4), [])

        os.environ[workers.THREADS_ENV] = "1"
        self.assertEqual(workers.thread_count(), 1)
        os.environ[workers.THREADS_ENV] = "zero"
        with self.assertRaises(bw.ConfigError) as cm:
            workers.thread_count()
        self.assertEqual(cm.exception.errors,
            {workers.THREADS_ENV: "INVALID_PINT"})


    def test_G_step_budget(self):
        project = bw.load_corpus("two_if_guard")
        suite = seven_presses(project)
        mutants, rejected = bw.generate_mutants(project, ["SBD", "SDM"])

        # the seven presses take more than five steps
        report = bw.analyze(project, suite, mutants, rejected, threads=1,
            step_budget=5)
        self.assertEqual([k for _, k in report.results], [False] * 8)
        self.assertEqual(report.total()["overrun"], 8)
        self.assertEqual(report.total()["survived"], 8)
        self.assertEqual(report.score, 0.0)

        report = bw.analyze(project, suite, mutants, rejected, threads=1,
            step_budget=10000)
        self.assertEqual(report.total()["killed"], 5)
        self.assertEqual(report.total()["overrun"], 0)

        result = suite.replay(project, step_budget=5)
        self.assertTrue(result.overrun)
        self.assertFalse(suite.replay(project).overrun)

        # rejected changes are reported apart from excluded tests
        report = bw.analyze(project, suite, [], {"ROR": 2}, threads=1)
        self.assertEqual(report.rows["ROR"]["rejected"], 2)
        self.assertEqual(report.rows["ROR"]["generated"], 0)
        self.assertEqual(report.excluded_tests, [])


    def test_H_more_tests_kill_more(self):
        project = bw.load_corpus("two_if_guard")
        right = events.Event(events.EventSpec(events.KEY_PRESS, ["right"]), [2])
        left = events.Event(events.EventSpec(events.KEY_PRESS, ["left"]), [2])
        small = seven_presses(project)
        large = postprocess.annotate_suite(bw.TestSuite([
            bw.SuiteTest([right] * 7, goals=project.statements()),
            bw.SuiteTest([right] * 6 + [left, right])]), project)
        mutants, rejected = bw.generate_mutants(project)
        before = bw.analyze(project, small, mutants, rejected, threads=1)
        after = bw.analyze(project, large, mutants, rejected, threads=1)
        for operator in before.rows:
            self.assertTrue(after.rows[operator]["killed"] >=
                before.rows[operator]["killed"], operator)
        self.assertTrue(after.total()["killed"] > before.total()["killed"])


if __name__ == '__main__':
    unittest.main(verbosity=2)
