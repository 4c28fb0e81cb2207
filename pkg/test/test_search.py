import sys
import logging
import unittest
import numpy as np

sys.path.append("../")
import blockwhisker as bw
from blockwhisker import localsearch
from blockwhisker.Archive import Archive
from blockwhisker.Mio import dynamic_parameter
from blockwhisker.Mosa import non_dominated_fronts, crowding_distance


# setup console handler for logger
log = logging.getLogger("blockwhisker")
log.setLevel(logging.INFO)
ch = logging.StreamHandler()
ch.setLevel(logging.INFO)
formatter = logging.Formatter('%(name)s: %(message)s')
ch.setFormatter(formatter)
log.addHandler(ch)


class SearchTest(unittest.TestCase):

    def test_A_budget(self):
        project = bw.load_corpus("cat_bear")
        with self.assertRaises(bw.ConfigError) as cm:
            bw.RandomSearch(project, bw.SearchConfig())
        self.assertEqual(cm.exception.errors, {"budget": "MISSING_BUDGET"})

        search = bw.RandomSearch(project, bw.SearchConfig(budget_executions=25))
        suite = search.run()
        self.assertEqual(search.executions, 25)
        self.assertTrue(search.steps > 0)
        self.assertEqual(suite.algorithm, "random")

        search = bw.RandomSearch(project, bw.SearchConfig(budget_steps=500))
        search.run()
        self.assertTrue(search.steps >= 500)
        self.assertTrue(search.steps - 500 < 20 * 50 + 1)

        for cls in [bw.Mosa, bw.Mio]:
            search = cls(bw.load_corpus("zombie_game"),
                bw.SearchConfig(budget_executions=40, population_size=10))
            search.run()
            self.assertTrue(search.executions <= 40 + 1, cls.name)


    def test_B_trivial(self):
        project = bw.load_corpus("trivial_animation")
        for cls in [bw.RandomSearch, bw.Mosa, bw.Mio]:
            suite = cls(project, bw.SearchConfig(budget_executions=10)).run()
            self.assertEqual(suite.coverage(), 1.0, cls.name)
            self.assertEqual(len(suite.tests), 1)
            self.assertEqual(suite.tests[0].goals, project.statements())


    def test_C_full_coverage(self):
        project = bw.load_corpus("cat_bear")
        for cls in [bw.Mosa, bw.Mio]:
            search = cls(project, bw.SearchConfig(budget_executions=300,
                seed=1))
            suite = search.run()
            self.assertEqual(suite.coverage(), 1.0, cls.name)
            self.assertTrue(search.complete())

            # every goal is kept by exactly one test
            goals = [g for t in suite.tests for g in t.goals]
            self.assertEqual(sorted(goals), sorted(project.statements()))

            # coverage only grows
            covered = [c for _, _, c in search.coverage_log]
            self.assertEqual(covered, sorted(covered))
            self.assertEqual(covered[-1], len(project.statements()))


    def test_D_determinism(self):
        project = bw.load_corpus("two_if_guard")
        for cls in [bw.RandomSearch, bw.Mosa, bw.Mio]:
            suites = [cls(project, bw.SearchConfig(budget_executions=60,
                seed=3, population_size=10)).run() for _ in range(2)]
            self.assertEqual(suites[0].to_json(), suites[1].to_json(),
                cls.name)


    def test_E_archive(self):
        project = bw.load_corpus("cat_bear")
        search = bw.RandomSearch(project, bw.SearchConfig(budget_executions=1))
        click = search.execute(bw.Genotype([1, 0, 0, 0, 0, 0], 2))
        short = search.execute(bw.Genotype([1, 0, 0, 0], 2))

        archive = Archive(search.functions)
        self.assertEqual(archive.update(click), ["cat_clicked", "cat_say",
            "cat_broadcast", "bear_received", "bear_say", "bear_loop",
            "bear_if"])
        self.assertEqual(archive.update(short), [])
        self.assertIs(archive.tests["cat_clicked"], short)
        self.assertEqual([f.target for f in archive.uncovered()],
            ["bear_smile"])
        self.assertEqual(len(archive.entries()), 1)

        archive = Archive(search.functions, replace=False)
        archive.update(click)
        archive.update(short)
        self.assertIs(archive.tests["cat_clicked"], click)


    def test_F_fronts(self):
        fronts = non_dominated_fronts(np.array([[1, 2], [2, 1], [3, 3],
            [0, 5]], dtype=float))
        self.assertEqual([list(f) for f in fronts], [[0, 1, 3], [2]])
        self.assertEqual(non_dominated_fronts(np.zeros((0, 2))), [])

        distances = crowding_distance(np.array([[0], [1], [3]], dtype=float))
        self.assertEqual(list(distances), [np.inf, 1.0, np.inf])
        self.assertEqual(list(crowding_distance(np.array([[0], [1]]))),
            [np.inf, np.inf])


    def test_G_select(self):
        project = bw.load_corpus("zombie_game")
        search = bw.Mosa(project, bw.SearchConfig(budget_executions=100,
            population_size=8))
        tests = [search.execute(search.random_genotype()) for _ in range(16)]
        population, ranks, crowding = search.select(tests)
        self.assertEqual(len(population), 8)
        self.assertEqual(ranks, sorted(ranks))
        self.assertEqual(len(crowding), 8)

        # the preference front is filled in first
        front = search.preference_front(tests, search.archive.uncovered())
        survivors = [i for i in front if tests[i] in population]
        self.assertEqual(len(survivors), min(len(front), 8))


    def test_H_mio_parameters(self):
        test_cases = [
            [(10, 1, 0, 0.5), 10],
            [(10, 1, 0.25, 0.5), 5.5],
            [(10, 1, 0.5, 0.5), 1],
            [(10, 1, 0.9, 0.5), 1],
            [(10, 1, 0.3, 0), 1],
        ]
        for args, value in test_cases:
            self.assertAlmostEqual(dynamic_parameter(*args), value)

        search = bw.Mio(bw.load_corpus("cat_bear"),
            bw.SearchConfig(budget_executions=100, mio_focus=0.5))
        self.assertEqual(search.parameters(), (10, 0.9, 1))
        self.assertIsNone(search.choose_target())
        search.executions = 50
        self.assertEqual(search.parameters(), (1, 0.0, 10))


    def test_I_mio_archive(self):
        project = bw.load_corpus("two_if_guard")
        search = bw.Mio(project, bw.SearchConfig(budget_executions=100))
        for _ in range(20):
            search.execute(search.random_genotype())
        archive = search.archive
        archive.shrink(3)
        for f in search.functions:
            population = archive.populations[f.target]
            if f.target in archive.tests:
                self.assertEqual(population, [archive.tests[f.target]])
            else:
                self.assertTrue(len(population) <= 3)
                values = [t.fitness(f) for t in population]
                self.assertEqual(values, sorted(values))


    def test_J_extension(self):
        project = bw.load_corpus("hidden_wait")
        search = bw.RandomSearch(project, bw.SearchConfig(budget_executions=10,
            seed=2))
        test = search.execute(bw.Genotype([0, 0], 2))
        self.assertNotIn("second_half", test.covered)
        extended = localsearch.extension(search, test)
        self.assertIn("second_half", extended.covered)
        self.assertTrue(extended.n_groups > test.n_groups)
        self.assertEqual(search.executions, 2)


    def test_K_reduction(self):
        project = bw.load_corpus("cat_bear")
        config = bw.SearchConfig(budget_executions=1)
        search = bw.RandomSearch(project, config)
        test = search.execute(bw.Genotype([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], 2))
        # the bear starts in the step after the click
        self.assertEqual(test.last_improved, 2)
        reduced = localsearch.reduction(test, config)
        self.assertEqual(reduced.n_groups, 2)
        self.assertEqual(len(reduced.events), 2)
        self.assertEqual(reduced.covered, test.covered)
        self.assertEqual(reduced.steps,
            1 + sum(e.steps for e in reduced.events))
        self.assertTrue(reduced.steps < test.steps)
        self.assertTrue(reduced.length_key() < test.length_key())

        short = search.execute(bw.Genotype([1, 0, 0, 0], 2))
        self.assertIs(localsearch.reduction(short, config), short)

        # the reduced test replaces the longer one in the archive
        search = bw.Mio(project, bw.SearchConfig(budget_executions=10,
            max_codon_length=5))
        test = search.execute(bw.Genotype([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], 2))
        self.assertIs(search.archive.tests["cat_clicked"], test)
        reduced = search.local_search(test)
        self.assertEqual(reduced.n_groups, 2)
        self.assertIs(search.archive.tests["cat_clicked"], reduced)
        self.assertEqual(search.archive.populations["cat_clicked"], [reduced])
        self.assertEqual(search.executions, 1)


    def test_L_acceleration(self):
        for name in ["elephant", "story_chain", "zombie_game", "cat_bear"]:
            project = bw.load_corpus(name)
            covered = []
            for acceleration in [1, 2, 5, 10]:
                config = bw.SearchConfig(seed=5, budget_steps=3000,
                    vm=bw.VmConfig(seed=5, acceleration=acceleration))
                suite = bw.RandomSearch(project, config).run()
                covered.append(suite.covered())
            for other in covered[1:]:
                self.assertEqual(other, covered[0], name)


    def test_M_mosa_archive(self):
        project = bw.load_corpus("cat_bear")
        search = bw.Mosa(project, bw.SearchConfig(budget_executions=10))
        test = search.execute(bw.Genotype([1, 0, 0, 0], 2))
        for goal in ["cat_clicked", "cat_say", "cat_broadcast"]:
            self.assertIs(search.archive.tests[goal], test)
        self.assertNotIn("cat_clicked",
            [f.target for f in search.archive.uncovered()])


if __name__ == '__main__':
    unittest.main(verbosity=2)
