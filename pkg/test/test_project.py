import sys
import json
import logging
import unittest

sys.path.append("../")
import blockwhisker as bw


# setup console handler for logger
log = logging.getLogger("blockwhisker")
log.setLevel(logging.DEBUG)
ch = logging.StreamHandler()
ch.setLevel(logging.DEBUG)
formatter = logging.Formatter('%(name)s: %(message)s')
ch.setFormatter(formatter)
log.addHandler(ch)


def document(*scripts, **kwargs):
    """
    Project with a stage and a single sprite "Sprite" running `scripts`
    """
    sprite = {"name": "Sprite", "scripts": list(scripts)}
    sprite.update(kwargs)
    return {"stage": {"width": 480, "height": 360},
        "actors": [{"name": "Stage", "isStage": True}, sprite]}


class ProjectTest(unittest.TestCase):

    def test_A_default_ids(self):
        doc = document({"hat": {"opcode": "greenflag"}, "body": [
            {"opcode": "if", "args": [{"opcode": "mouseDown"}],
             "children": [[{"opcode": "say", "args": ["Hi"]}]]},
            {"id": "own", "opcode": "hide"},
        ]})
        project = bw.load_project(doc)
        self.assertEqual(project.statements(),
            ["Sprite/s0/hat", "Sprite/s0/0", "Sprite/s0/0/c0/0", "own"])
        self.assertIn("Sprite/s0/0/a0", project.blocks)
        self.assertEqual(project.blocks["Sprite/s0/0/c0/0"].opcode, "say")

        # the input document is left untouched, the normalized one carries
        # all ids
        self.assertNotIn("id", doc["actors"][1]["scripts"][0]["hat"])
        normalized = json.loads(project.to_json())
        self.assertEqual(normalized["actors"][1]["scripts"][0]["hat"]["id"],
            "Sprite/s0/hat")
        self.assertEqual(bw.load_project(normalized).statements(),
            project.statements())


    def test_B_defaults(self):
        project = bw.load_project(document())
        sprite = project.actor("Sprite")
        self.assertEqual((project.width, project.height), (480, 360))
        self.assertEqual((sprite.x, sprite.y, sprite.direction), (0, 0, 90))
        self.assertEqual(sprite.costumes,
            [{"name": "costume1", "width": 40, "height": 40}])
        self.assertEqual(project.stage.costumes[0]["name"], "backdrop1")
        self.assertEqual([a.name for a in project.sprites()], ["Sprite"])


    def test_C_errors(self):
        greenflag = {"opcode": "greenflag"}
        test_cases = [
            [document({"hat": greenflag, "body": [{"opcode": "penDown"}]}),
                {"Sprite/s0/0": "UNKNOWN_OPCODE"}],
            [document({"hat": greenflag, "body": [
                {"opcode": "gotoXY", "args": [1]}]}),
                {"Sprite/s0/0": "INVALID_ARITY"}],
            [document({"hat": greenflag, "body": [
                {"id": "a", "opcode": "show"}, {"id": "a", "opcode": "hide"}]}),
                {"a": "DUPLICATE_ID"}],
            [document({"hat": greenflag, "body": [
                {"opcode": "stopAll"}, {"opcode": "show"}]}),
                {"Sprite/s0/0": "BLOCK_AFTER_CAP"}],
            [document({"hat": greenflag, "body": [
                {"opcode": "if", "args": [5]}]}),
                {"Sprite/s0/0": "NOT_BOOLEAN"}],
            [document({"hat": greenflag, "body": [{"opcode": "answer"}]}),
                {"Sprite/s0/0": "NOT_STATEMENT"}],
            [document({"hat": {"opcode": "show"}, "body": []}),
                {"Sprite/s0/hat": "NOT_HAT"}],
            [document({"hat": {"opcode": "keyPressed", "args": ["shift"]},
                "body": []}),
                {"Sprite/s0/hat": "INVALID_KEY"}],
            [{"actors": [{"name": "Sprite"}]}, {"/actors": "STAGE_COUNT"}],
            [{"stage": {"width": 0}, "actors": []},
                {"/stage/width": "INVALID_PINT"}],
            [{"actors": "none"}, {"/": "MISSING_ACTORS"}],
        ]
        for doc, errors in test_cases:
            with self.assertRaises(bw.LoadError) as cm:
                bw.load_project(doc)
            self.assertEqual(cm.exception.errors, errors)

        with self.assertRaises(bw.LoadError) as cm:
            bw.load_project(document({"hat": greenflag,
                "body": [{"opcode": "penDown"}]}))
        self.assertEqual(
            cm.exception.__str__(),
            "Loading project failed at block 'Sprite/s0/0': UNKNOWN_OPCODE"
        )


    def test_D_warnings(self):
        project = bw.load_project(document(
            {"hat": {"opcode": "greenflag"}, "body": [
                {"id": "b", "opcode": "broadcast", "args": ["nobody"]},
                {"id": "c", "opcode": "createClone", "args": ["Ghost"]},
            ]},
            {"hat": {"opcode": "broadcastReceived", "args": ["silence"]},
             "body": []}))
        self.assertEqual(project.warnings, [
            "Broadcast 'nobody' of block 'b' has no receiver",
            "Clone target 'Ghost' of block 'c' does not exist",
            "Message 'silence' is received but never sent",
        ])


    def test_E_file(self):
        with self.assertRaises(bw.Error) as cm:
            bw.load_project_file("/nonexistent/project.json")
        self.assertTrue(cm.exception.__str__().startswith(
            "Reading project '/nonexistent/project.json' failed"))


    def test_F_corpus(self):
        for name in ["ask_quiz", "cat_bear", "elephant", "goto_click",
                "hidden_wait", "maze_drag", "story_chain", "trivial_animation",
                "two_if_guard", "zombie_game"]:
            project = bw.load_corpus(name)
            self.assertEqual(project.warnings, [], name)
            self.assertTrue(len(project.statements()) > 0)

        project = bw.load_corpus("elephant")
        self.assertEqual(len(project.sprites()), 1)
        self.assertEqual(len(project.actor("Elephant").scripts), 1)


if __name__ == '__main__':
    unittest.main(verbosity=2)
