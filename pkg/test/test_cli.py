import io
import os
import sys
import json
import shutil
import tempfile
import unittest
import contextlib

sys.path.append("../")
import blockwhisker as bw
from blockwhisker import cli


class CliTest(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()


    def tearDown(self):
        shutil.rmtree(self.tmp)


    def run_cli(self, *argv):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            code = cli.main(list(argv))
        return code, out.getvalue()


    def generate(self, out_dir, project="cat_bear", *args):
        return self.run_cli("generate", "--project", bw.corpus_path(project),
            "--algorithm", "mio", "--budget-executions", "200", "--seed", "1",
            "--out-dir", out_dir, *args)


    def test_A_generate_replay(self):
        out = os.path.join(self.tmp, "out")
        code, stdout = self.generate(out)
        self.assertEqual(code, cli.EXIT_OK)
        self.assertTrue(stdout.startswith("mio: "))
        for name in ["suite.json", "coverage.csv", "meta.json"]:
            self.assertTrue(os.path.exists(os.path.join(out, name)), name)
        with open(os.path.join(out, "meta.json")) as fh:
            self.assertEqual(json.load(fh)["algorithm"], "mio")

        suite = os.path.join(out, "suite.json")
        code, stdout = self.run_cli("replay", "--project",
            bw.corpus_path("cat_bear"), "--suite", suite)
        self.assertEqual(code, cli.EXIT_OK)
        self.assertIn("0 of ", stdout)

        # a suite with a wrong expectation fails
        with open(suite) as fh:
            d = json.load(fh)
        for test in d["tests"]:
            for assertions in test["assertions"].values():
                for a in assertions:
                    if a["kind"] == "Say":
                        a["expected"] = "wrong"
        with open(suite, "w") as fh:
            json.dump(d, fh)
        code, stdout = self.run_cli("replay", "--project",
            bw.corpus_path("cat_bear"), "--suite", suite)
        self.assertEqual(code, cli.EXIT_FAILED)
        self.assertIn("FAIL", stdout)


    def test_B_determinism(self):
        outputs = set()
        for run in range(20):
            out = os.path.join(self.tmp, "run{}".format(run))
            self.generate(out, "two_if_guard", "--budget-executions", "100")
            files = []
            for name in ["suite.json", "coverage.csv"]:
                with open(os.path.join(out, name)) as fh:
                    files.append(fh.read())
            outputs.add(tuple(files))
        self.assertEqual(len(outputs), 1)


    def test_C_minimize_mutate(self):
        out = os.path.join(self.tmp, "out")
        self.generate(out, "two_if_guard")
        project = bw.corpus_path("two_if_guard")
        minimized = os.path.join(self.tmp, "minimized.json")
        code, _ = self.run_cli("minimize", "--project", project, "--suite",
            os.path.join(out, "suite.json"), "--out", minimized)
        self.assertEqual(code, cli.EXIT_OK)
        self.assertTrue(bw.TestSuite.load(minimized).replay(
            bw.load_corpus("two_if_guard")).passed)

        code, stdout = self.run_cli("mutate", "--project", project, "--suite",
            minimized, "--operators", "ROR,SDM", "--out-dir", out)
        self.assertEqual(code, cli.EXIT_OK)
        self.assertTrue(stdout.endswith("of 7 mutants killed\n"))
        with open(os.path.join(out, "mutation.csv")) as fh:
            rows = fh.read().splitlines()
        self.assertTrue(rows[-1].startswith("ALL,7,"))


    def test_D_errors(self):
        # unknown flags and missing commands are usage errors
        with open(os.devnull, "w") as devnull:
            with contextlib.redirect_stderr(devnull):
                with self.assertRaises(SystemExit):
                    cli.main(["generate", "--project", "x.json", "--colour"])
                with self.assertRaises(SystemExit):
                    cli.main([])

        invalid = os.path.join(self.tmp, "invalid.json")
        with open(invalid, "w") as fh:
            json.dump({"actors": [{"name": "Sprite"}]}, fh)
        code, _ = self.run_cli("graph-dump", "--project", invalid)
        self.assertEqual(code, cli.EXIT_LOAD)

        code, _ = self.run_cli("graph-dump", "--project",
            os.path.join(self.tmp, "missing.json"))
        self.assertEqual(code, cli.EXIT_FAILED)

        # generation without budget
        code, _ = self.run_cli("generate", "--project",
            bw.corpus_path("cat_bear"), "--out-dir", self.tmp)
        self.assertEqual(code, cli.EXIT_FAILED)


    def test_E_graph_dump(self):
        code, stdout = self.run_cli("graph-dump", "--project",
            bw.corpus_path("cat_bear"))
        self.assertEqual(code, cli.EXIT_OK)
        self.assertTrue(stdout.startswith("entry -> exit [flow]\n"))

        code, stdout = self.run_cli("graph-dump", "--project",
            bw.corpus_path("cat_bear"), "--graph", "cdg", "--format", "dot")
        self.assertEqual(code, cli.EXIT_OK)
        self.assertTrue(stdout.startswith('digraph "cdg" {'))


    def test_F_brute_force(self):
        project = bw.load_corpus("goto_click")
        self.assertEqual(len(cli.event_grid(project)), 3)
        self.assertEqual(cli.brute_force(project, 1),
            set(project.statements()))
        self.assertEqual(cli.brute_force(project, 0), set())

        with self.assertRaises(bw.EnumerationError) as cm:
            cli.brute_force(project, 2, bound=10)
        self.assertEqual(cm.exception.estimate, 13)

        code, stdout = self.run_cli("brute-force", "--project",
            bw.corpus_path("goto_click"), "--max-len", "1")
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(stdout.split(), project.statements())

        code, _ = self.run_cli("brute-force", "--project",
            bw.corpus_path("zombie_game"), "--max-len", "3", "--bound", "10")
        self.assertEqual(code, cli.EXIT_FAILED)


    def test_G_search_matches_enumeration(self):
        doc = json.loads(bw.load_corpus("goto_click").to_json())
        doc["actors"][1]["scripts"].append({"body": [
            {"id": "dead", "opcode": "hide"}]})
        every = [bw.RandomSearch, bw.Mosa, bw.Mio]
        test_cases = [
            [bw.load_project(doc), 2, every],
            [bw.load_corpus("trivial_animation"), 2, every],
            [bw.load_corpus("cat_bear"), 3, [bw.Mosa, bw.Mio]],
        ]
        for project, max_len, algorithms in test_cases:
            expected = cli.brute_force(project, max_len)
            for cls in algorithms:
                suite = cls(project, bw.SearchConfig(budget_executions=300,
                    seed=1, population_size=10)).run()
                self.assertEqual(suite.covered(), expected, cls.name)
        self.assertNotIn("dead", cli.brute_force(bw.load_project(doc), 2))


if __name__ == '__main__':
    unittest.main(verbosity=2)
