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
import math
from . import distance
from . import opcodes
from .config import VmConfig
from .error import *
from .Project import Block, Ref
from .Trace import ExecutionTrace
from .values import *
from .VmState import *

# Results of statement handlers
NEXT = "next"
PUSHED = "pushed"
HALT = "halt"
STOP = "stop"

# Frame depth at which a process yields instead of calling further
MAX_DEPTH = 200

# Distance used if a sensing subject does not exist
FAR = 10000


class StepInput:
    """
    Input actions applied before a step
    """

    def __init__(self, key_down=None, key_up=None, mouse=None,
            mouse_down=None, click_sprite=None, click_stage=False, answer=None,
            sound=None, drag=None, advance=True):
        """
        Parameters
        ----------
        key_down, key_up : str
            Key pressed or released
        mouse : tuple of float
            New mouse position (x, y)
        mouse_down : bool
            New status of the mouse button
        click_sprite : str
            Name of the sprite instance which is clicked
        click_stage : bool
            Whether the stage is clicked
        answer : str
            Text typed for a waiting ask block
        sound : tuple of int
            Virtual sound (volume, duration in steps)
        drag : tuple
            Sprite instance name and new position (name, x, y)
        advance : bool
            Whether a step is executed after applying the actions
        """
        self.key_down = key_down
        self.key_up = key_up
        self.mouse = mouse
        self.mouse_down = mouse_down
        self.click_sprite = click_sprite
        self.click_stage = click_stage
        self.answer = answer
        self.sound = sound
        self.drag = drag
        self.advance = advance


class Vm:
    """
    Deterministic step based interpreter

    All durations are converted into a number of steps. A step applies the
    input, activates the scripts whose hats match and runs one batch, in
    which every running process executes until its script ends, it reaches
    a halting block or a loop iteration ends.
    """

    def __init__(self, project, config=None):
        """
        Setup machine in its initial state (before the first step)

        Parameters
        ----------
        project : Project
            Project to execute
        config : VmConfig
            Machine configuration, default VmConfig() if None
        """
        self.project = project
        self.config = config if config is not None else VmConfig()
        self.log = logging.getLogger("blockwhisker")
        self.state = VmState(project, self.config.seed)
        self.trace = ExecutionTrace()
        self.trace.cover("entry")
        for hat in project.hats():
            if hat.opcode in opcodes.USER_HATS:
                node = "event:" + hat.id
                self.trace.cover(node)
                self.trace.update(node, "occurs", 1)
                self.trace.update(node, "absent", 0)
        self._current = None
        self._executed = None


    def feed(self, step_input):
        """
        Apply `step_input` and run a step if it advances

        Returns
        -------
        list of str
            Ids of blocks executed in the step
        """
        if step_input is not None and not step_input.advance:
            self.apply_input(step_input)
            return []
        return self.step(step_input)


    def step(self, step_input=None):
        """
        Apply input and execute a single batch

        Parameters
        ----------
        step_input : StepInput
            Input applied before the batch, may be None

        Returns
        -------
        list of str
            Ids of blocks executed in the step (the step trace)
        """
        state = self.state
        if state.stopped:
            raise VmError("Cannot step a stopped program")
        self._executed = []
        if state.step_count == 0:
            for inst in list(state.instances):
                self._activate_hats(inst, "greenflag", None, True)
        if step_input is not None:
            self.apply_input(step_input)
        self._check_loudness()

        sc = state.step_count
        for proc in sorted(state.processes, key=Process.sort_key):
            if state.stopped:
                break
            if not proc.active or proc.start_step > sc:
                continue
            if proc.halt != RUNNING and not self._resume(proc):
                continue
            self._run(proc)

        state.processes = [p for p in state.processes
            if p.instance in state.instances]
        state.step_count += 1
        state.timer_steps += 1
        if state.input.sound_until is not None and \
                state.step_count >= state.input.sound_until:
            state.input.sound_level = -1
            state.input.sound_until = None
        if state.input.pending_answer is not None and not state.ask_focus:
            state.input.pending_answer = None
        executed, self._executed = self._executed, None
        return executed


    def apply_input(self, inp):
        """
        Apply the actions of a step input without stepping
        """
        state = self.state
        if inp.mouse is not None:
            state.input.mouse_x, state.input.mouse_y = inp.mouse
        if inp.mouse_down is not None:
            state.input.mouse_down = inp.mouse_down
        if inp.key_up is not None:
            state.input.keys_down.discard(inp.key_up)
        if inp.key_down is not None:
            state.input.keys_down.add(inp.key_down)
            for inst in list(state.instances):
                self._activate_hats(inst, "keyPressed", inp.key_down, True)
        if inp.drag is not None:
            inst = state.instance(inp.drag[0])
            if inst is not None and inst.visible:
                inst.x, inst.y = self._tidy(inp.drag[1]), self._tidy(inp.drag[2])
        if inp.click_sprite is not None:
            inst = state.instance(inp.click_sprite)
            if inst is not None and inst.visible:
                state.input.mouse_x, state.input.mouse_y = inst.x, inst.y
                self._activate_hats(inst, "spriteClicked", None, True)
        if inp.click_stage:
            self._activate_hats(state.stage, "stageClicked", None, True)
        if inp.answer is not None and state.ask_focus:
            state.input.pending_answer = inp.answer
        if inp.sound is not None:
            self.set_virtual_sound(inp.sound[0], inp.sound[1])


    def set_virtual_sound(self, volume, duration):
        """
        Simulate sound of `volume` for the next `duration` steps

        Parameters
        ----------
        volume : int
            Volume in [0, 100]
        duration : int
            Number of steps
        """
        if not 0 <= volume <= 100:
            raise VmError("Sound volume {} out of range".format(volume))
        self.state.input.sound_level = volume
        self.state.input.sound_until = self.state.step_count + duration


    def snapshot_trace(self):
        """
        Copy of the trace collected so far
        """
        return self.trace.copy()


    # ------------------------------------------------------------------
    # scheduling

    def _activate_hats(self, inst, opcode, arg, immediate):
        """
        Start the scripts of `inst` whose hat is `opcode` and matches `arg`

        Returns
        -------
        list of Process
            Started processes
        """
        started = []
        for script in inst.actor.scripts:
            hat = script.hat
            if hat is None or hat.opcode != opcode:
                continue
            if arg is not None:
                want = hat.literal(0)
                if opcode == "keyPressed":
                    if want != "any" and want != arg:
                        continue
                elif to_text(want).lower() != to_text(arg).lower():
                    continue
            started.append(self._activate(inst, script, immediate))
        return started


    def _activate(self, inst, script, immediate):
        state = self.state
        start = state.step_count if immediate else state.step_count + 1
        node = "event:" + script.hat.id
        self.trace.cover(node)
        self.trace.update(node, "occurs", 0)
        self.trace.update(node, "absent", 1)
        for proc in state.processes:
            if proc.instance is inst and proc.script is script:
                if proc is self._current:
                    proc.restart = True
                    proc.start_step = start
                else:
                    proc.reset(start)
                return proc
        proc = Process(state.next_pid, inst, script, start)
        state.next_pid += 1
        state.processes.append(proc)
        return proc


    def _check_loudness(self):
        state = self.state
        level = state.input.sound_level
        for inst in list(state.instances):
            for script in inst.actor.scripts:
                hat = script.hat
                if hat is None or hat.opcode != "loudnessGreaterThan":
                    continue
                key = (inst.name, hat.id)
                now = level > to_number(hat.literal(0))
                if now and not state.loudness_memory.get(key, False):
                    self._activate(inst, script, True)
                state.loudness_memory[key] = now


    def _resume(self, proc):
        """
        Check whether a halted process continues in this step

        Returns
        -------
        bool
            True if the process is running again
        """
        state = self.state
        sc = state.step_count
        if proc.halt in TIMED:
            if proc.halt == GLIDE_UNTIL:
                start, s, x0, y0, x1, y1 = proc.glide
                k = min(sc - start, s)
                inst = proc.instance
                inst.x = self._tidy(x0 + (x1 - x0) * k / float(s))
                inst.y = self._tidy(y0 + (y1 - y0) * k / float(s))
            if sc <= proc.resume_at:
                self.trace.update(proc.halt_block.id, "true",
                    proc.resume_at - sc + 1)
                return False
            self.trace.update(proc.halt_block.id, "true", 0)
            self.trace.update(proc.halt_block.id, "abort", 1)
            if proc.halt == SAY_UNTIL and proc.instance.bubble == proc.bubble:
                proc.instance.bubble = None
            if proc.halt == GLIDE_UNTIL:
                proc.instance.x, proc.instance.y = proc.glide[4], proc.glide[5]
        elif proc.halt == WAIT_UNTIL:
            if not self._record_condition(proc, proc.halt_block, "abort"):
                return False
            proc.frames[-1].index += 1
        elif proc.halt == ASK_WAIT:
            if state.input.pending_answer is None:
                return False
            state.answer = state.input.pending_answer
            state.input.pending_answer = None
        elif proc.halt == BROADCAST_WAIT:
            if any(p.active for p in proc.waiting_for):
                return False
            proc.waiting_for = []
        proc.halt = RUNNING
        return True


    def _halt(self, proc, halt, block, steps=None):
        proc.halt = halt
        proc.halt_block = block
        if steps is not None:
            proc.resume_at = self.state.step_count + steps
            self.trace.update(block.id, "true", steps + 1)
            self.trace.update(block.id, "abort", 0)
        return HALT


    def _run(self, proc):
        """
        Run process until it halts, finishes or yields at the end of a loop
        iteration
        """
        self._current = proc
        try:
            if not proc.started:
                proc.started = True
                self._cover(proc.script.hat)
            while True:
                if proc.restart:
                    return
                if not proc.frames:
                    proc.halt = DONE
                    return
                frame = proc.frames[-1]
                if frame.index >= len(frame.blocks):
                    if frame.kind == LOOP:
                        if not frame.checking:
                            frame.checking = True
                            return
                        frame.checking = False
                        if self._loop_again(proc, frame):
                            frame.index = 0
                            continue
                        proc.frames.pop()
                        proc.frames[-1].index += 1
                        continue
                    if frame.kind == PROC:
                        self.trace.cover("return:" + frame.definition.hat.id)
                    proc.frames.pop()
                    continue
                block = frame.blocks[frame.index]
                self._cover(block)
                result = getattr(self, "_x_" + block.opcode)(proc, frame, block)
                if result == NEXT:
                    frame.index += 1
                elif result == HALT:
                    return
                elif result == STOP:
                    proc.halt = DONE
                    return
                if self.state.stopped or not proc.active:
                    return
        finally:
            self._current = None
            if proc.restart:
                proc.reset(self.state.step_count + 1)


    def _cover(self, block):
        self.trace.cover(block.id)
        if self._executed is not None:
            self._executed.append(block.id)


    def _loop_again(self, proc, frame):
        block = frame.block
        if block.opcode == "repeatTimes":
            frame.remaining -= 1
            self.trace.update(block.id, "false", frame.remaining)
            return frame.remaining > 0
        if block.opcode == "repeatUntil":
            return not self._record_condition(proc, block, "false")
        return True


    def _record_condition(self, proc, block, against):
        """
        Evaluate the condition of `block` and record its branch distances.
        The false distance is recorded for edge label `against`

        Returns
        -------
        bool
            Value of the condition
        """
        value, t, f = self._condition(block.args[0] if block.args else None,
            proc)
        self.trace.update(block.id, "true", t)
        self.trace.update(block.id, against, f)
        return value


    # ------------------------------------------------------------------
    # expressions

    def _value(self, arg, proc):
        if isinstance(arg, Block):
            if opcodes.shape(arg.opcode) == opcodes.BOOLEAN:
                return self._condition(arg, proc)[0]
            return getattr(self, "_r_" + arg.opcode)(proc, arg)
        if isinstance(arg, Ref):
            if arg.kind == "var":
                owner = self._variable_owner(proc.instance, arg.name, "variables")
                return owner.variables[arg.name] if owner else 0
            if arg.kind == "list":
                owner = self._variable_owner(proc.instance, arg.name, "lists")
                if owner is None:
                    return ""
                return " ".join(to_text(v) for v in owner.lists[arg.name])
            return self._param(proc, arg.name)
        if arg is None:
            return ""
        return arg


    def _arg(self, proc, block, i):
        if i < len(block.args):
            return self._value(block.args[i], proc)
        return ""


    def _num(self, proc, block, i):
        return to_number(self._arg(proc, block, i))


    def _param(self, proc, name):
        for frame in reversed(proc.frames):
            if frame.kind == PROC:
                return frame.params.get(name, 0)
        return 0


    def _condition(self, arg, proc):
        """
        Evaluate boolean expression with branch distances

        Returns
        -------
        tuple
            (value, true distance, false distance)
        """
        if not isinstance(arg, Block) or \
                opcodes.shape(arg.opcode) != opcodes.BOOLEAN:
            return distance.flag(to_bool(self._value(arg, proc)))
        op = arg.opcode
        if op in opcodes.RELATIONAL:
            a = self._arg(proc, arg, 0)
            b = self._arg(proc, arg, 1)
            if is_numeric(a) and is_numeric(b):
                x, y = to_number(a), to_number(b)
                if op == "lt":
                    return distance.lt(x, y)
                if op == "gt":
                    return distance.gt(x, y)
                return distance.eq(x, y)
            c = compare(a, b)
            return distance.flag({"lt": c < 0, "gt": c > 0, "equals": c == 0}[op])
        if op == "and":
            return distance.conjunction(self._condition(arg.args[0], proc),
                self._condition(arg.args[1], proc))
        if op == "or":
            return distance.disjunction(self._condition(arg.args[0], proc),
                self._condition(arg.args[1], proc))
        if op == "not":
            return distance.negation(self._condition(arg.args[0], proc))
        inst = proc.instance
        if op == "touchingSprite":
            name = to_text(self._arg(proc, arg, 0))
            others = [o for o in self.state.instances_of(name) if o is not inst]
            value = any(self._touching(inst, o) for o in others)
            d = min([distance.euclidean(inst.x, inst.y, o.x, o.y)
                for o in others] or [FAR])
            return distance.proximity(value, d)
        if op == "touchingEdge":
            left, right, bottom, top = inst.box()
            w, h = self.project.width / 2.0, self.project.height / 2.0
            value = inst.visible and not inst.actor.is_stage and (
                left <= -w or right >= w or bottom <= -h or top >= h)
            d = min(left + w, w - right, bottom + h, h - top)
            return distance.proximity(value, d)
        if op == "touchingMousePointer":
            mx, my = self.state.input.mouse_x, self.state.input.mouse_y
            left, right, bottom, top = inst.box()
            value = inst.visible and not inst.actor.is_stage and \
                left <= mx <= right and bottom <= my <= top
            return distance.proximity(value,
                distance.euclidean(inst.x, inst.y, mx, my))
        if op == "keyPressedQ":
            key = to_text(self._arg(proc, arg, 0))
            keys = self.state.input.keys_down
            return distance.flag(bool(keys) if key == "any" else key in keys)
        if op == "mouseDown":
            return distance.flag(self.state.input.mouse_down)
        return distance.flag(False)


    def _touching(self, a, b):
        if not a.visible or not b.visible or a.actor.is_stage \
                or b.actor.is_stage:
            return False
        l1, r1, b1, t1 = a.box()
        l2, r2, b2, t2 = b.box()
        return l1 <= r2 and l2 <= r1 and b1 <= t2 and b2 <= t1


    def _target_position(self, proc, target):
        """
        Position of a menu target ("mouse-pointer" or a sprite name) or None
        """
        if target == "mouse-pointer":
            return self.state.input.mouse_x, self.state.input.mouse_y
        inst = self.state.instance(target)
        if inst is None or inst.actor.is_stage:
            return None
        return inst.x, inst.y


    def _r_argument(self, proc, block):
        return self._param(proc, to_text(block.literal(0)))


    def _r_xPosition(self, proc, block):
        return proc.instance.x


    def _r_yPosition(self, proc, block):
        return proc.instance.y


    def _r_direction(self, proc, block):
        return proc.instance.direction


    def _r_mouseX(self, proc, block):
        return self.state.input.mouse_x


    def _r_mouseY(self, proc, block):
        return self.state.input.mouse_y


    def _r_distanceTo(self, proc, block):
        pos = self._target_position(proc, to_text(self._arg(proc, block, 0)))
        if pos is None:
            return FAR
        inst = proc.instance
        return distance.euclidean(inst.x, inst.y, pos[0], pos[1])


    def _r_answer(self, proc, block):
        return self.state.answer


    def _r_timer(self, proc, block):
        return self.state.timer_steps * self.config.timer_increment


    def _r_loudness(self, proc, block):
        return max(self.state.input.sound_level, 0)


    def _r_lengthOfList(self, proc, block):
        name = self._name_arg(block, 0)
        owner = self._variable_owner(proc.instance, name, "lists")
        return len(owner.lists[name]) if owner else 0


    def _r_itemOfList(self, proc, block):
        name = self._name_arg(block, 1)
        owner = self._variable_owner(proc.instance, name, "lists")
        if owner is None:
            return ""
        items = owner.lists[name]
        index = self._arg(proc, block, 0)
        if to_text(index) == "last":
            index = len(items)
        index = finite(index, None)
        if index is None:
            return ""
        index = int(index)
        if 1 <= index <= len(items):
            return items[index - 1]
        return ""


    def _r_add(self, proc, block):
        return normalize_number(
            self._num(proc, block, 0) + self._num(proc, block, 1))


    def _r_subtract(self, proc, block):
        return normalize_number(
            self._num(proc, block, 0) - self._num(proc, block, 1))


    def _r_multiply(self, proc, block):
        return normalize_number(
            self._num(proc, block, 0) * self._num(proc, block, 1))


    def _r_divide(self, proc, block):
        a, b = self._num(proc, block, 0), self._num(proc, block, 1)
        if b == 0:
            if a == 0:
                return 0
            return float("inf") if a > 0 else float("-inf")
        return normalize_number(a / float(b))


    def _r_mod(self, proc, block):
        a, b = self._num(proc, block, 0), self._num(proc, block, 1)
        if b == 0:
            return 0
        if finite(a, None) is None:
            return 0
        if finite(b, None) is None:
            return a if a == 0 or (a > 0) == (b > 0) else b
        q = a / float(b)
        if finite(q, None) is None:
            return 0
        return normalize_number(a - b * math.floor(q))


    def _r_round(self, proc, block):
        return int(math.floor(finite(self._num(proc, block, 0)) + 0.5))


    def _r_random(self, proc, block):
        a, b = self._arg(proc, block, 0), self._arg(proc, block, 1)
        lo, hi = sorted([finite(a), finite(b)])
        if isinstance(lo, int) and isinstance(hi, int):
            return self.state.rng.randint(lo, hi)
        return self.state.rng.uniform(lo, hi)


    def _r_join(self, proc, block):
        return to_text(self._arg(proc, block, 0)) + \
            to_text(self._arg(proc, block, 1))


    # ------------------------------------------------------------------
    # statements

    def _x_if(self, proc, frame, block):
        if self._record_condition(proc, block, "false"):
            frame.index += 1
            proc.frames.append(Frame(block.children[0], BRANCH))
            return PUSHED
        return NEXT


    def _x_ifElse(self, proc, frame, block):
        value = self._record_condition(proc, block, "false")
        frame.index += 1
        proc.frames.append(Frame(block.children[0 if value else 1], BRANCH))
        return PUSHED


    def _x_repeatTimes(self, proc, frame, block):
        n = int(math.floor(finite(self._num(proc, block, 0)) + 0.5))
        self.trace.update(block.id, "true", max(0, 1 - n))
        self.trace.update(block.id, "false", max(n, 0))
        if n <= 0:
            return NEXT
        loop = Frame(block.children[0], LOOP, block)
        loop.remaining = n
        proc.frames.append(loop)
        return PUSHED


    def _x_repeatUntil(self, proc, frame, block):
        if self._record_condition(proc, block, "false"):
            return NEXT
        proc.frames.append(Frame(block.children[0], LOOP, block))
        return PUSHED


    def _x_forever(self, proc, frame, block):
        proc.frames.append(Frame(block.children[0], LOOP, block))
        return PUSHED


    def _x_waitSeconds(self, proc, frame, block):
        steps = self.config.steps_for(finite(self._num(proc, block, 0)))
        frame.index += 1
        return self._halt(proc, WAIT_STEPS, block, steps)


    def _x_waitUntil(self, proc, frame, block):
        if self._record_condition(proc, block, "abort"):
            return NEXT
        return self._halt(proc, WAIT_UNTIL, block)


    def _x_stopAll(self, proc, frame, block):
        self.state.stopped = True
        for p in self.state.processes:
            p.halt = DONE
        return STOP


    def _x_stopScript(self, proc, frame, block):
        return STOP


    def _x_createClone(self, proc, frame, block):
        state = self.state
        target = to_text(self._arg(proc, block, 0))
        if target == "myself":
            parent = proc.instance
        else:
            originals = [i for i in state.instances_of(target) if not i.is_clone]
            parent = originals[0] if originals else None
        if parent is None or parent.actor.is_stage:
            return NEXT
        if state.clone_count() >= self.config.clone_limit:
            self.log.debug("Clone limit reached, '{}' not cloned".format(
                parent.name))
            return NEXT
        name = parent.actor.name
        state.clone_counters[name] = state.clone_counters.get(name, 0) + 1
        clone = parent.clone(state.clone_counters[name])
        state.instances.append(clone)
        self._activate_hats(clone, "startAsClone", None, False)
        return NEXT


    def _x_deleteClone(self, proc, frame, block):
        inst = proc.instance
        if not inst.is_clone:
            return NEXT
        self.state.instances.remove(inst)
        for p in self.state.processes:
            if p.instance is inst:
                p.halt = DONE
        return STOP


    def _broadcast(self, proc, block):
        message = self._arg(proc, block, 0)
        started = []
        for inst in list(self.state.instances):
            started += self._activate_hats(inst, "broadcastReceived", message,
                False)
        return started


    def _x_broadcast(self, proc, frame, block):
        self._broadcast(proc, block)
        return NEXT


    def _x_broadcastAndWait(self, proc, frame, block):
        started = self._broadcast(proc, block)
        if not started:
            return NEXT
        frame.index += 1
        proc.waiting_for = started
        return self._halt(proc, BROADCAST_WAIT, block)


    def _x_callProcedure(self, proc, frame, block):
        definition = proc.instance.actor.procedure(
            to_text(block.literal(0)))
        if definition is None:
            return NEXT
        if len(proc.frames) >= MAX_DEPTH:
            self.log.debug("Call depth exceeded at '{}'".format(block.id))
            return HALT
        names = [to_text(n) for n in definition.hat.args[1:]]
        values = [self._arg(proc, block, i + 1) for i in range(len(names))]
        frame.index += 1
        self._cover(definition.hat)
        proc.frames.append(Frame(definition.body, PROC, block,
            dict(zip(names, values)), definition))
        return PUSHED


    def _x_gotoXY(self, proc, frame, block):
        if not proc.instance.actor.is_stage:
            proc.instance.x = self._tidy(finite(self._num(proc, block, 0)))
            proc.instance.y = self._tidy(finite(self._num(proc, block, 1)))
        return NEXT


    def _x_changeXY(self, proc, frame, block):
        if not proc.instance.actor.is_stage:
            proc.instance.x = self._tidy(
                proc.instance.x + finite(self._num(proc, block, 0)))
            proc.instance.y = self._tidy(
                proc.instance.y + finite(self._num(proc, block, 1)))
        return NEXT


    def _x_setX(self, proc, frame, block):
        if not proc.instance.actor.is_stage:
            proc.instance.x = self._tidy(finite(self._num(proc, block, 0)))
        return NEXT


    def _x_setY(self, proc, frame, block):
        if not proc.instance.actor.is_stage:
            proc.instance.y = self._tidy(finite(self._num(proc, block, 0)))
        return NEXT


    def _x_moveSteps(self, proc, frame, block):
        inst = proc.instance
        if not inst.actor.is_stage:
            n = finite(self._num(proc, block, 0))
            rad = math.radians(90 - inst.direction)
            inst.x = self._tidy(inst.x + n * math.cos(rad))
            inst.y = self._tidy(inst.y + n * math.sin(rad))
        return NEXT


    def _x_turnRight(self, proc, frame, block):
        self._set_direction(proc.instance,
            proc.instance.direction + finite(self._num(proc, block, 0)))
        return NEXT


    def _x_turnLeft(self, proc, frame, block):
        self._set_direction(proc.instance,
            proc.instance.direction - finite(self._num(proc, block, 0)))
        return NEXT


    def _x_pointInDirection(self, proc, frame, block):
        self._set_direction(proc.instance, finite(self._num(proc, block, 0)))
        return NEXT


    def _x_pointTowards(self, proc, frame, block):
        inst = proc.instance
        pos = self._target_position(proc, to_text(self._arg(proc, block, 0)))
        if pos is not None and (pos[0] != inst.x or pos[1] != inst.y):
            self._set_direction(inst,
                math.degrees(math.atan2(pos[0] - inst.x, pos[1] - inst.y)))
        return NEXT


    def _x_glideSecsTo(self, proc, frame, block):
        inst = proc.instance
        steps = self.config.steps_for(finite(self._num(proc, block, 0)))
        x = self._tidy(finite(self._num(proc, block, 1)))
        y = self._tidy(finite(self._num(proc, block, 2)))
        if inst.actor.is_stage:
            return NEXT
        if steps == 0:
            inst.x, inst.y = x, y
            return NEXT
        proc.glide = (self.state.step_count, steps, inst.x, inst.y, x, y)
        frame.index += 1
        return self._halt(proc, GLIDE_UNTIL, block, steps)


    def _bubble(self, proc, kind, text):
        text = to_text(text)
        proc.instance.bubble = (kind, text) if text != "" else None
        return proc.instance.bubble


    def _x_say(self, proc, frame, block):
        self._bubble(proc, "say", self._arg(proc, block, 0))
        return NEXT


    def _x_think(self, proc, frame, block):
        self._bubble(proc, "think", self._arg(proc, block, 0))
        return NEXT


    def _timed_bubble(self, proc, frame, block, kind):
        proc.bubble = self._bubble(proc, kind, self._arg(proc, block, 0))
        steps = self.config.steps_for(finite(self._num(proc, block, 1)))
        frame.index += 1
        return self._halt(proc, SAY_UNTIL, block, steps)


    def _x_sayForSecs(self, proc, frame, block):
        return self._timed_bubble(proc, frame, block, "say")


    def _x_thinkForSecs(self, proc, frame, block):
        return self._timed_bubble(proc, frame, block, "think")


    def _costume(self, inst, value):
        """
        Index of the costume of `inst` selected by `value` (name or number)
        or None
        """
        index = inst.actor.costume_index(to_text(value))
        if index is None and is_numeric(value):
            n = int(math.floor(finite(to_number(value)) + 0.5))
            index = (n - 1) % len(inst.actor.costumes)
        return index


    def _x_switchCostume(self, proc, frame, block):
        index = self._costume(proc.instance, self._arg(proc, block, 0))
        if index is not None:
            proc.instance.costume = index
        return NEXT


    def _x_nextCostume(self, proc, frame, block):
        inst = proc.instance
        inst.costume = (inst.costume + 1) % len(inst.actor.costumes)
        return NEXT


    def _switch_backdrop(self, index):
        stage = self.state.stage
        stage.costume = index
        name = stage.actor.costumes[index]["name"]
        for inst in list(self.state.instances):
            self._activate_hats(inst, "backdropSwitched", name, False)


    def _x_switchBackdrop(self, proc, frame, block):
        index = self._costume(self.state.stage, self._arg(proc, block, 0))
        if index is not None:
            self._switch_backdrop(index)
        return NEXT


    def _x_nextBackdrop(self, proc, frame, block):
        stage = self.state.stage
        self._switch_backdrop((stage.costume + 1) % len(stage.actor.costumes))
        return NEXT


    def _x_show(self, proc, frame, block):
        if not proc.instance.actor.is_stage:
            proc.instance.visible = True
        return NEXT


    def _x_hide(self, proc, frame, block):
        if not proc.instance.actor.is_stage:
            proc.instance.visible = False
        return NEXT


    def _x_setSize(self, proc, frame, block):
        proc.instance.size = max(0, finite(self._num(proc, block, 0)))
        return NEXT


    def _x_changeSize(self, proc, frame, block):
        proc.instance.size = max(0,
            proc.instance.size + finite(self._num(proc, block, 0)))
        return NEXT


    def _x_goToFront(self, proc, frame, block):
        inst = proc.instance
        if not inst.actor.is_stage:
            others = [i.layer for i in self.state.instances if i is not inst]
            if others and inst.layer <= max(others):
                inst.layer = max(others) + 1
        return NEXT


    def _x_playSoundUntilDone(self, proc, frame, block):
        seconds = proc.instance.actor.sounds.get(
            to_text(self._arg(proc, block, 0)))
        if seconds is None:
            return NEXT
        frame.index += 1
        return self._halt(proc, SOUND_UNTIL, block,
            self.config.steps_for(seconds))


    def _x_setVolume(self, proc, frame, block):
        proc.instance.volume = min(100, max(0,
            finite(self._num(proc, block, 0))))
        return NEXT


    def _x_changeVolume(self, proc, frame, block):
        proc.instance.volume = min(100, max(0,
            proc.instance.volume + finite(self._num(proc, block, 0))))
        return NEXT


    def _x_askAndWait(self, proc, frame, block):
        frame.index += 1
        return self._halt(proc, ASK_WAIT, block)


    def _x_resetTimer(self, proc, frame, block):
        self.state.timer_steps = 0
        return NEXT


    def _variable_owner(self, inst, name, kind):
        """
        Instance owning variable or list `name`: the instance itself or the
        stage
        """
        if name in getattr(inst, kind):
            return inst
        stage = self.state.stage
        if name in getattr(stage, kind):
            return stage
        return None


    def _name_arg(self, block, i):
        arg = block.args[i]
        if isinstance(arg, Ref):
            return arg.name
        return to_text(arg)


    def _x_setVariable(self, proc, frame, block):
        name = self._name_arg(block, 0)
        owner = self._variable_owner(proc.instance, name, "variables") \
            or self.state.stage
        owner.variables[name] = self._arg(proc, block, 1)
        return NEXT


    def _x_changeVariable(self, proc, frame, block):
        name = self._name_arg(block, 0)
        owner = self._variable_owner(proc.instance, name, "variables") \
            or self.state.stage
        owner.variables[name] = normalize_number(
            to_number(owner.variables.get(name, 0))
            + self._num(proc, block, 1))
        return NEXT


    def _x_addToList(self, proc, frame, block):
        name = self._name_arg(block, 0)
        owner = self._variable_owner(proc.instance, name, "lists") \
            or self.state.stage
        owner.lists.setdefault(name, []).append(self._arg(proc, block, 1))
        return NEXT


    # ------------------------------------------------------------------
    # helpers

    def _set_direction(self, inst, d):
        if inst.actor.is_stage:
            return
        d = math.fmod(d + 179, 360)
        if d < 0:
            d += 360
        inst.direction = normalize_number(self._tidy(d - 179))


    def _tidy(self, x):
        """
        Round coordinates to remove floating point noise of trigonometry
        """
        if isinstance(x, float):
            return normalize_number(round(x, 9))
        return x


def run_test(project, events, config=None, vm=None):
    """
    Execute a test: the green flag at step 0 followed by the step inputs of
    each event until the events are exhausted or the program stops

    Parameters
    ----------
    project : Project
        Project to execute
    events : list
        Events providing `inputs(state, project, config)`, which returns the
        list of `StepInput` of the event
    config : VmConfig
        Machine configuration
    vm : Vm
        Continue with this machine instead of starting a fresh one

    Returns
    -------
    tuple
        (ExecutionTrace, VmState)
    """
    if vm is None:
        vm = Vm(project, config)
        vm.step()
    for event in events:
        if vm.state.stopped:
            break
        for step_input in event.inputs(vm.state, project, vm.config):
            if vm.state.stopped:
                break
            vm.feed(step_input)
    return vm.trace, vm.state
