import sys
import collections
import random
import unittest

sys.path.append("../")
import blockwhisker as bw
from blockwhisker import Cdg
from blockwhisker.Cfg import Cfg, ENTRY, EXIT, event_node


def random_cfg(rng, n_nodes):
    """
    Random graph with entry, exit and `n_nodes` further nodes, every node
    reaches the exit
    """
    cfg = Cfg()
    cfg.add_node(ENTRY)
    cfg.add_node(EXIT)
    nodes = ["n{}".format(i) for i in range(n_nodes)]
    for node in nodes:
        cfg.add_node(node)
    cfg.add_edge(ENTRY, nodes[0], "flow")
    cfg.add_edge(ENTRY, EXIT, "flow")
    for node in nodes:
        for _ in range(rng.randint(1, 3)):
            target = rng.choice(nodes + [EXIT])
            cfg.add_edge(node, target, rng.choice(["true", "false"]))
    for node in nodes:
        if node not in cfg.reachable_from(EXIT, reverse=True):
            cfg.add_edge(node, EXIT, "abort")
    return cfg


def naive_postdominators(cfg):
    """
    n postdominates m iff the exit cannot be reached from m without n
    """
    pdom = {}
    for m in cfg.nodes:
        pdom[m] = set([m])
        for n in cfg.nodes:
            if n == m:
                continue
            seen = set([m])
            stack = [m]
            while stack:
                node = stack.pop()
                for s in cfg.successors(node):
                    if s != n and s not in seen:
                        seen.add(s)
                        stack.append(s)
            if EXIT not in seen:
                pdom[m].add(n)
    return pdom


def naive_dependences(cfg, pdom):
    """
    m depends on n iff m postdominates a successor of n but does not
    strictly postdominate n
    """
    deps = set()
    for n in cfg.nodes:
        for s in cfg.successors(n):
            for m in cfg.nodes:
                if m in pdom[s] and (m == n or m not in pdom[n]):
                    deps.add((n, m))
    return deps


def shortest_path(cfg, sources, target):
    """
    Unit weight shortest path from any of `sources` to `target`
    """
    dist = dict((s, 0) for s in sources)
    queue = collections.deque(sources)
    while queue:
        node = queue.popleft()
        if node == target:
            return dist[node]
        for s in cfg.successors(node):
            if s not in dist:
                dist[s] = dist[node] + 1
                queue.append(s)
    return Cdg.INF


class GraphTest(unittest.TestCase):

    def test_A_event_nodes(self):
        project = bw.load_corpus("cat_bear")
        cfg = bw.build_cfg(project)
        clicked = event_node(project.blocks["cat_clicked"])
        received = event_node(project.blocks["bear_received"])
        self.assertIn(clicked, cfg)
        self.assertIn(received, cfg)
        self.assertEqual(cfg.labels(ENTRY, clicked), ["flow"])
        self.assertEqual(cfg.labels(ENTRY, received), [])
        self.assertEqual(cfg.labels("cat_broadcast", received), ["broadcast"])
        self.assertEqual(cfg.labels(clicked, "cat_clicked"), ["occurs"])
        self.assertEqual(cfg.labels(clicked, EXIT), ["absent"])
        self.assertEqual(cfg.labels("bear_loop", EXIT), ["abort"])
        self.assertEqual(cfg.unreachable, set())


    def test_B_linear_chain(self):
        project = bw.load_corpus("trivial_animation")
        cfg = bw.build_cfg(project)
        hat = project.actor("Dancer").scripts[0].hat
        chain = [ENTRY, event_node(hat)] + project.statements() + [EXIT]
        for source, target in zip(chain, chain[1:]):
            self.assertIn(target, cfg.successors(source))
        self.assertEqual(len(cfg.nodes), len(chain))


    def test_C_nested_dependences(self):
        project = bw.load_corpus("two_if_guard")
        cdg = bw.build_cdg(bw.build_cfg(project))
        self.assertEqual(cdg.dependencies("made_it"), ["inner"])
        self.assertEqual(cdg.dependencies("count"), ["inner"])
        self.assertEqual(cdg.dependencies("inner"), ["outer"])
        self.assertEqual(cdg.labels("inner", "made_it"), ["true"])

        distances = Cdg.TargetDistanceMap(cdg)
        self.assertEqual(distances.distances("made_it")["inner"], 1)
        self.assertEqual(distances.distances("made_it")["outer"], 2)
        self.assertEqual(distances.chain("made_it", "outer"), "inner")

        # x below 50: outer covered, approach level 1; between 50 and 60:
        # inner covered, approach level 0
        covered = set([ENTRY, "start", "reset_x", "loop", "outer"])
        self.assertEqual(Cdg.approach_level(distances, covered, "made_it"), 1)
        covered.add("inner")
        self.assertEqual(Cdg.approach_level(distances, covered, "made_it"), 0)
        covered.add("made_it")
        self.assertEqual(Cdg.approach_level(distances, covered, "made_it"), 0)
        self.assertEqual(Cdg.approach_level(distances, set(["drop_x"]),
            "made_it"), Cdg.INF)


    def test_D_hats_depend_on_events(self):
        for name in ["cat_bear", "zombie_game", "story_chain"]:
            project = bw.load_corpus(name)
            cdg = bw.build_cdg(bw.build_cfg(project))
            for hat in project.hats():
                self.assertIn(event_node(hat), cdg.dependencies(hat.id))


    def test_E_random_postdominators(self):
        rng = random.Random(3)
        for _ in range(30):
            cfg = random_cfg(rng, rng.randint(1, 48))
            pdom = Cdg.postdominators(cfg)
            naive = naive_postdominators(cfg)
            self.assertEqual(pdom, naive)
            self.assertEqual(bw.build_cdg(cfg).edge_set(),
                naive_dependences(cfg, naive))


    def test_F_random_control_flow_distance(self):
        rng = random.Random(5)
        for _ in range(30):
            n = rng.randint(2, 98)
            cfg = Cfg()
            nodes = ["n{}".format(i) for i in range(n)]
            for node in nodes:
                cfg.add_node(node)
            for i in range(n):
                for _ in range(rng.randint(0, 3)):
                    j = rng.randint(i, n - 1)
                    if j > i:
                        cfg.add_edge(nodes[i], nodes[j], "flow")
            covered = set(rng.sample(nodes, rng.randint(1, 5)))
            target = rng.choice(nodes)
            self.assertEqual(
                bw.fitness.control_flow_distance(cfg, covered, target),
                shortest_path(cfg, sorted(covered), target))


    def test_G_distance_map(self):
        project = bw.load_corpus("zombie_game")
        cdg = bw.build_cdg(bw.build_cfg(project))
        distances = Cdg.TargetDistanceMap(cdg)
        for target in project.statements():
            dist = distances.distances(target)
            self.assertEqual(dist[target], 0)
            for node, d in dist.items():
                if node == target:
                    continue
                self.assertEqual(d, 1 + min(dist[m] for m in
                    cdg.dependents(node) if m in dist))


    def test_H_dump(self):
        project = bw.load_corpus("cat_bear")
        cfg = bw.build_cfg(project)
        edges = cfg.to_edges()
        self.assertIn("cat_broadcast -> event:bear_received [broadcast]\n",
            edges)
        self.assertTrue(edges.startswith("entry -> exit [flow]\n"))
        dot = bw.build_cdg(cfg).to_dot()
        self.assertTrue(dot.startswith('digraph "cdg" {'))
        self.assertIn('"bear_if" -> "bear_smile" [label="true"];', dot)


if __name__ == '__main__':
    unittest.main(verbosity=2)
