import sys
import json
import logging
import unittest

sys.path.append("../")
import blockwhisker as bw
from blockwhisker import events
from blockwhisker.values import to_text


# setup console handler for logger
log = logging.getLogger("blockwhisker")
log.setLevel(logging.DEBUG)
ch = logging.StreamHandler()
ch.setLevel(logging.DEBUG)
formatter = logging.Formatter('%(name)s: %(message)s')
ch.setFormatter(formatter)
log.addHandler(ch)


def project_of(*scripts, **stage):
    stage_doc = {"name": "Stage", "isStage": True}
    stage_doc.update(stage)
    return bw.load_project({"actors": [stage_doc,
        {"name": "Sprite", "scripts": list(scripts)}]})


def key_press(key, steps):
    return events.Event(events.EventSpec(events.KEY_PRESS, [key]), [steps])


def wait(steps):
    return events.Event(events.EventSpec(events.WAIT), [steps])


class VmTest(unittest.TestCase):

    def test_A_determinism(self):
        project = bw.load_corpus("zombie_game")
        test = [wait(40), key_press("left", 3), wait(49), key_press("right", 5),
            wait(49)]
        config = bw.VmConfig(seed=7)
        trace1, state1 = bw.run_test(project, test, config)
        trace2, state2 = bw.run_test(project, test, config)
        self.assertEqual(json.dumps(state1.to_dict(), sort_keys=True),
            json.dumps(state2.to_dict(), sort_keys=True))
        self.assertEqual(trace1.to_dict(), trace2.to_dict())


    def test_B_costume_every_second(self):
        project = bw.load_corpus("elephant")
        vm = bw.Vm(project, bw.VmConfig(step_time_ms=10))
        changes = []
        costume = vm.state.instance("Elephant").costume
        for step in range(300):
            vm.step()
            now = vm.state.instance("Elephant").costume
            if now != costume:
                changes.append(step)
            costume = now
        # 100 halted steps plus the resume step and the loop yield
        self.assertEqual(changes, [0, 102, 204])
        self.assertEqual([s for s in changes if s < 100], [0])


    def test_C_acceleration(self):
        project = bw.load_corpus("elephant")
        steps = []
        for acceleration in [1, 3]:
            vm = bw.Vm(project, bw.VmConfig(acceleration=acceleration))
            changes = []
            costume = vm.state.instance("Elephant").costume
            for step in range(100):
                vm.step()
                if vm.state.instance("Elephant").costume != costume:
                    changes.append(step)
                costume = vm.state.instance("Elephant").costume
            steps.append(changes)
        self.assertEqual(steps[0], steps[1])
        self.assertEqual(steps[0], [0, 36, 72])


    def test_D_stop_all(self):
        project = project_of({"hat": {"opcode": "greenflag"}, "body": [
            {"id": "stop", "opcode": "stopAll"}]})
        trace, state = bw.run_test(project, [wait(5), wait(5)])
        self.assertTrue(state.stopped)
        self.assertEqual(state.step_count, 1)
        self.assertIn("stop", trace.covered)

        vm = bw.Vm(project)
        vm.step()
        with self.assertRaises(bw.VmError) as cm:
            vm.step()
        self.assertEqual(cm.exception.__str__(),
            "Cannot step a stopped program")


    def test_E_loudness(self):
        project = project_of(variables={"n": 0}, scripts=[
            {"hat": {"opcode": "loudnessGreaterThan", "args": [30]}, "body": [
                {"opcode": "changeVariable", "args": ["n", 1]}]}])
        vm = bw.Vm(project)
        vm.step()

        # triggered once on the rising edge, not while the sound lasts
        vm.set_virtual_sound(50, 5)
        for _ in range(10):
            vm.step()
        self.assertEqual(vm.state.stage.variables["n"], 1)

        vm.set_virtual_sound(20, 5)
        for _ in range(10):
            vm.step()
        self.assertEqual(vm.state.stage.variables["n"], 1)

        vm.set_virtual_sound(31, 5)
        vm.step()
        self.assertEqual(vm.state.stage.variables["n"], 2)

        with self.assertRaises(bw.VmError):
            vm.set_virtual_sound(101, 5)


    def test_F_key_press(self):
        project = bw.load_corpus("two_if_guard")
        trace, state = bw.run_test(project, [key_press("right", 2)] * 6)
        self.assertEqual(state.stage.variables["x"], 60)
        self.assertIn("outer", trace.covered)
        self.assertNotIn("count", trace.covered)
        self.assertEqual(trace.distance("outer", "true"), 0)
        self.assertEqual(trace.distance("inner", "true"), 1)

        trace, state = bw.run_test(project, [key_press("right", 2)] * 7)
        self.assertEqual(state.stage.variables["y"], 1)
        self.assertIn("made_it", trace.covered)
        self.assertEqual(state.instance("Guard").bubble, ("say", "Made it!"))

        trace, state = bw.run_test(project, [key_press("right", 2)] * 6
            + [key_press("left", 2)])
        self.assertEqual(state.stage.variables["x"], 0)


    def test_G_clones(self):
        project = bw.load_corpus("zombie_game")
        vm = bw.Vm(project)
        vm.step()
        self.assertEqual(vm.state.clone_count("Zombie"), 1)
        self.assertIsNotNone(vm.state.instance("Zombie#1"))
        self.assertFalse(vm.state.instance("Zombie").visible)
        for _ in range(20):
            vm.step()
        clone = vm.state.instance("Zombie#1")
        self.assertTrue(clone.visible)
        self.assertTrue(clone.y < 150)
        self.assertEqual(vm.state.clone_counters, {"Zombie": 1})

        # cloning stops at the clone limit
        project = project_of({"hat": {"opcode": "greenflag"}, "body": [
            {"opcode": "forever", "children": [[
                {"opcode": "createClone", "args": ["myself"]}]]}]})
        vm = bw.Vm(project, bw.VmConfig(clone_limit=5))
        for _ in range(20):
            vm.step()
            self.assertTrue(vm.state.clone_count() <= 5)
        self.assertEqual(vm.state.clone_count(), 5)


    def test_H_broadcast_next_step(self):
        project = bw.load_corpus("cat_bear")
        vm = bw.Vm(project)
        vm.step()
        executed = vm.step(bw.StepInput(click_sprite="Cat"))
        self.assertEqual(executed, ["cat_clicked", "cat_say", "cat_broadcast"])
        executed = vm.step()
        self.assertEqual(executed[:4],
            ["bear_received", "bear_say", "bear_loop", "bear_if"])
        self.assertEqual(vm.trace.distance("event:bear_received", "occurs"), 0)


    def test_I_ask(self):
        project = bw.load_corpus("ask_quiz")
        vm = bw.Vm(project)
        vm.step()
        self.assertTrue(vm.state.ask_focus)
        vm.step(bw.StepInput(answer="7"))
        self.assertFalse(vm.state.ask_focus)
        self.assertEqual(vm.state.answer, "7")
        self.assertIn("correct", vm.trace.covered)
        self.assertEqual(vm.state.stage.variables["score"], 1)


    def test_J_non_finite_arithmetic(self):
        def inf():
            return {"opcode": "divide", "args": [1, 0]}
        project = project_of({"hat": {"opcode": "greenflag"}, "body": [
            {"opcode": "say", "args": [
                {"opcode": "subtract", "args": [inf(), inf()]}]},
            {"opcode": "setVariable", "args": ["nan",
                {"opcode": "multiply", "args": [0, inf()]}]},
            {"opcode": "setVariable", "args": ["item",
                {"opcode": "itemOfList", "args": [inf(), "l"]}]},
            {"opcode": "setVariable", "args": ["inf_mod",
                {"opcode": "mod", "args": [inf(), 3]}]},
            {"opcode": "setVariable", "args": ["mod_inf",
                {"opcode": "mod", "args": [5, inf()]}]},
            {"opcode": "setVariable", "args": ["text", inf()]}]},
            variables={"nan": 1, "item": 1, "inf_mod": 1, "mod_inf": 1,
                "text": 1},
            lists={"l": ["a", "b"]})
        trace, state = bw.run_test(project, [wait(2)])
        self.assertEqual(state.instance("Sprite").bubble, ("say", "0"))
        self.assertEqual(state.stage.variables["nan"], 0)
        self.assertEqual(state.stage.variables["item"], "")
        self.assertEqual(state.stage.variables["inf_mod"], 0)
        self.assertEqual(state.stage.variables["mod_inf"], 5)
        self.assertEqual(to_text(state.stage.variables["text"]),
            "Infinity")


    def test_K_timer(self):
        project = project_of({"hat": {"opcode": "greenflag"}, "body": [
            {"opcode": "forever", "children": [[
                {"opcode": "setVariable", "args": ["t", {"opcode": "timer"}]}
            ]]}]}, variables={"t": -1})
        for acceleration in [1, 5]:
            vm = bw.Vm(project, bw.VmConfig(acceleration=acceleration))
            for k in range(40):
                vm.step()
                self.assertAlmostEqual(vm.state.stage.variables["t"],
                    0.075 * k)


    def test_L_glide(self):
        # 0.3 s at 30 ms per step are 10 steps
        project = project_of({"hat": {"opcode": "greenflag"}, "body": [
            {"opcode": "glideSecsTo", "args": [0.3, 100, 50]}]})
        vm = bw.Vm(project)
        vm.step()
        sprite = vm.state.instance("Sprite")
        self.assertEqual((sprite.x, sprite.y), (0, 0))
        for k in range(1, 11):
            vm.step()
            self.assertAlmostEqual(sprite.x, 10 * k)
            self.assertAlmostEqual(sprite.y, 5 * k)
        vm.step()
        self.assertEqual((sprite.x, sprite.y), (100, 50))


    def test_M_halt_resume(self):
        project = project_of({"hat": {"opcode": "greenflag"}, "body": [
            {"opcode": "waitSeconds", "args": [0.3]},
            {"id": "done", "opcode": "say", "args": ["done"]}]})
        vm = bw.Vm(project)

        # halted at step 0 for the steps 1 to 10, running again in step 11
        for _ in range(11):
            vm.step()
            self.assertIsNone(vm.state.instance("Sprite").bubble)
            self.assertNotIn("done", vm.trace.covered)
        vm.step()
        self.assertEqual(vm.state.instance("Sprite").bubble, ("say", "done"))
        self.assertIn("done", vm.trace.covered)


if __name__ == '__main__':
    unittest.main(verbosity=2)
