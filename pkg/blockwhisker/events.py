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

"""
User input events

Events are extracted from a project either statically (from all blocks) or
dynamically (from the blocks which matter in the current program state).
An `EventSpec` carries the parameters inferred from the program, an `Event`
adds the parameters chosen by the search and turns into step inputs.
"""

import logging
import math
import random
import string
from . import opcodes
from .config import VmConfig
from .error import *
from .Project import Block, Ref
from .values import is_numeric, to_number, to_text
from .Vm import StepInput, Vm
from .VmState import ASK_WAIT

log = logging.getLogger("blockwhisker")

GREENFLAG = "Greenflag"
KEY_PRESS = "KeyPress"
CLICK_SPRITE = "ClickSprite"
CLICK_STAGE = "ClickStage"
TYPE_TEXT = "TypeText"
TYPE_NUMBER = "TypeNumber"
MOUSE_DOWN = "MouseDown"
MOUSE_MOVE = "MouseMove"
MOUSE_MOVE_TO = "MouseMoveTo"
DRAG_SPRITE = "DragSprite"
SOUND = "Sound"
WAIT = "Wait"

# Number of parameters which cannot be inferred from the program
OPEN_PARAMS = {
    KEY_PRESS: 1,
    TYPE_NUMBER: 1,
    MOUSE_MOVE: 2,
    DRAG_SPRITE: 1,
    WAIT: 1,
}

# Target of DragSprite events for touchingEdge
EDGE = "_edge_"

# Fixed members of the TypeText pool
TEXT_SEEDS = ["0", "10", "Hello"]

# Range of numbers typed by TypeNumber events is [-NUMBER_RANGE, NUMBER_RANGE]
NUMBER_RANGE = 100


class EventSpec:
    """
    Event kind with its inferred parameters
    """

    def __init__(self, kind, params=()):
        self.kind = kind
        self.params = tuple(params)


    @property
    def open_params(self):
        return OPEN_PARAMS.get(self.kind, 0)


    def key(self):
        return (self.kind, self.params)


    def __eq__(self, other):
        return isinstance(other, EventSpec) and self.key() == other.key()


    def __ne__(self, other):
        return not self == other


    def __hash__(self):
        return hash(self.key())


    def __repr__(self):
        if not self.params:
            return self.kind
        return "{}({})".format(self.kind,
            ", ".join(to_text(p) for p in self.params))


class Event:
    """
    Executable event, i.e. a spec plus the values of its open parameters
    """

    def __init__(self, spec, values=()):
        """
        Parameters
        ----------
        spec : EventSpec
            Kind and inferred parameters
        values : tuple
            Resolved parameters (duration, coordinates, angle, text, ...)
        """
        self.spec = spec
        self.values = tuple(values)

        # Number of steps the event took in its last execution
        self.steps = None


    @property
    def kind(self):
        return self.spec.kind


    def inputs(self, state, project, config):
        """
        Step inputs of the event in the given state

        Parameters
        ----------
        state : VmState
            State before the event
        project : Project
            Executed project
        config : VmConfig
            Machine configuration

        Returns
        -------
        list of StepInput
            Inputs, each advancing by one step unless `advance` is False
        """
        return apply_event(state, self, project, config)


    def to_dict(self):
        d = {"kind": self.kind, "params": list(self.spec.params),
            "values": list(self.values)}
        if self.steps is not None:
            d["steps"] = self.steps
        return d


    @classmethod
    def from_dict(cls, d):
        event = cls(EventSpec(d["kind"], d.get("params", ())),
            d.get("values", ()))
        event.steps = d.get("steps")
        return event


    def __eq__(self, other):
        return isinstance(other, Event) and self.spec == other.spec \
            and self.values == other.values


    def __ne__(self, other):
        return not self == other


    def __hash__(self):
        return hash((self.spec, self.values))


    def __repr__(self):
        params = [to_text(p) for p in self.spec.params + self.values]
        if not params:
            return self.kind
        return "{}({})".format(self.kind, ", ".join(params))


def _add(out, spec):
    if spec not in out:
        out.append(spec)


def _key_name(key):
    # "any" is satisfied by every key, space stands in for it
    key = to_text(key)
    return "space" if key == "any" else key


def _answer_numeric(script):
    """
    Whether the answer reporter feeds arithmetic or a numeric comparison
    inside `script`
    """
    for block in script.blocks():
        if block.opcode not in opcodes.ARITHMETIC + opcodes.RELATIONAL:
            continue
        answers = [a for a in block.args
            if isinstance(a, Block) and a.opcode == "answer"]
        if not answers:
            continue
        if block.opcode in opcodes.ARITHMETIC:
            return True
        others = [a for a in block.args
            if not (isinstance(a, Block) and a.opcode == "answer")]
        if any(not isinstance(a, (Block, Ref)) and is_numeric(a)
                for a in others):
            return True
    return False


def _sensing(block, actor, script, out):
    """
    Add events of sensing and input-waiting blocks
    """
    op = block.opcode
    if op == "keyPressedQ" and block.literal(0) is not None:
        _add(out, EventSpec(KEY_PRESS, [_key_name(block.literal(0))]))
    elif op == "askAndWait":
        kind = TYPE_NUMBER if _answer_numeric(script) else TYPE_TEXT
        _add(out, EventSpec(kind))
    elif op == "mouseDown":
        _add(out, EventSpec(MOUSE_DOWN))
    elif op in ("mouseX", "mouseY"):
        _add(out, EventSpec(MOUSE_MOVE))
    elif op in ("distanceTo", "pointTowards") and \
            block.literal(0) == "mouse-pointer":
        _add(out, EventSpec(MOUSE_MOVE))
    elif op == "touchingMousePointer" and not actor.is_stage:
        _add(out, EventSpec(MOUSE_MOVE_TO, [actor.name]))
        _add(out, EventSpec(MOUSE_MOVE))
    elif op == "touchingSprite" and not actor.is_stage \
            and block.literal(0) is not None:
        _add(out, EventSpec(DRAG_SPRITE, [actor.name,
            to_text(block.literal(0))]))
    elif op == "touchingEdge" and not actor.is_stage:
        _add(out, EventSpec(DRAG_SPRITE, [actor.name, EDGE]))
    elif op == "loudness":
        _add(out, EventSpec(SOUND, [100]))


def _hat(hat, actor, out):
    """
    Add event triggering a hat
    """
    op = hat.opcode
    if op == "keyPressed":
        _add(out, EventSpec(KEY_PRESS, [_key_name(hat.literal(0))]))
    elif op == "spriteClicked" and not actor.is_stage:
        _add(out, EventSpec(CLICK_SPRITE, [actor.name]))
    elif op in ("stageClicked", "spriteClicked"):
        _add(out, EventSpec(CLICK_STAGE))
    elif op == "loudnessGreaterThan":
        threshold = min(100, max(-1, to_number(hat.literal(0))))
        _add(out, EventSpec(SOUND,
            [int(min(100, max(0, math.floor(threshold) + 1)))]))


def static_extract(project):
    """
    Events of all input handlers and sensing blocks of the project

    Parameters
    ----------
    project : Project
        Validated project

    Returns
    -------
    list of EventSpec
        Wait followed by the events in actor, script and block order, or
        the typing event followed by Wait while a question is pending
    """
    out = [EventSpec(WAIT)]
    for actor in project.actors:
        for script in actor.all_scripts():
            for block in script.blocks():
                if block is script.hat:
                    _hat(block, actor, out)
                else:
                    _sensing(block, actor, script, out)
    return out


def _script_blocks(script, seen):
    """
    Blocks of `script` and of the custom blocks it calls
    """
    for block in script.body:
        for b in block.walk():
            yield b
            if b.opcode == "callProcedure":
                definition = script.actor.procedure(to_text(b.literal(0)))
                if definition is not None and definition not in seen:
                    seen.add(definition)
                    for c in _script_blocks(definition, seen):
                        yield c


def dynamic_extract(state, project):
    """
    Events which matter in the current program state: sensing blocks of
    active scripts and hats of inactive scripts. While a process waits for
    an answer only typing or waiting is possible

    Parameters
    ----------
    state : VmState
        Current state
    project : Project
        Executed project

    Returns
    -------
    list of EventSpec
        Wait followed by the events in actor, script and block order
    """
    for proc in sorted(state.processes, key=lambda p: p.sort_key()):
        if proc.halt == ASK_WAIT:
            kind = TYPE_NUMBER if _answer_numeric(proc.script) else TYPE_TEXT
            return [EventSpec(kind), EventSpec(WAIT)]

    out = [EventSpec(WAIT)]
    for actor in project.actors:
        present = state.instances_of(actor.name)
        if not present:
            continue
        for script in actor.scripts:
            if not script.scheduled:
                continue
            if state.active_processes(script):
                for block in _script_blocks(script, set([script])):
                    if block.opcode != "askAndWait":
                        _sensing(block, actor, script, out)
            elif script.hat.opcode != "spriteClicked" or \
                    any(i.visible for i in present):
                _hat(script.hat, actor, out)
    return out


def text_pool(project, seed):
    """
    Texts typed by TypeText events: literals compared with the answer, one
    random text and a few fixed texts

    Parameters
    ----------
    project : Project
        Validated project
    seed : int
        Seed of the random text

    Returns
    -------
    list of str
        Pool without duplicates
    """
    pool = []
    for script in project.scripts():
        for block in script.blocks():
            if block.opcode not in opcodes.RELATIONAL:
                continue
            if not any(isinstance(a, Block) and a.opcode == "answer"
                    for a in block.args):
                continue
            for a in block.args:
                if not isinstance(a, (Block, Ref)) and to_text(a) not in pool:
                    pool.append(to_text(a))
    rng = random.Random(seed)
    pool.append("".join(rng.choice(string.ascii_letters) for _ in range(8)))
    for text in TEXT_SEEDS:
        if text not in pool:
            pool.append(text)
    return pool


def resolve(spec, codons, project, pool, key_press_bound=50, wait_bound=50):
    """
    Build event from spec and its parameter codons

    Parameters
    ----------
    spec : EventSpec
        Selected event
    codons : list of int
        Parameter codons of the group (missing codons count as 0)
    project : Project
        Executed project (stage size)
    pool : list of str
        TypeText pool
    key_press_bound, wait_bound : int
        Durations are taken modulo these bounds (minimum 1)

    Returns
    -------
    Event
        Event with resolved parameters
    """
    c = list(codons) + [0] * max(0, 2 - len(codons))
    kind = spec.kind
    if kind == KEY_PRESS:
        values = [max(1, c[0] % key_press_bound)]
    elif kind == WAIT:
        values = [max(1, c[0] % wait_bound)]
    elif kind == MOUSE_MOVE:
        w, h = project.width, project.height
        values = [(c[0] % w) - w // 2, (c[1] % h) - h // 2]
    elif kind == DRAG_SPRITE:
        values = [c[0]]
    elif kind == TYPE_NUMBER:
        values = [c[0] % (2 * NUMBER_RANGE + 1) - NUMBER_RANGE]
    elif kind == TYPE_TEXT:
        values = [pool[c[0] % len(pool)]]
    else:
        values = []
    return Event(spec, values)


def _visible_instance(state, actor_name):
    for inst in state.instances_of(actor_name):
        if inst.visible:
            return inst
    return None


def _drag_target(state, project, inst, target, angle):
    """
    Position a dragged sprite is placed at, None if the target is missing
    """
    w2, h2 = project.width / 2.0, project.height / 2.0
    if target == EDGE:
        gaps = [(inst.x + w2, (-w2, inst.y)), (w2 - inst.x, (w2, inst.y)),
            (inst.y + h2, (inst.x, -h2)), (h2 - inst.y, (inst.x, h2))]
        x, y = min(gaps, key=lambda g: g[0])[1]
    else:
        others = state.instances_of(target)
        if not others:
            return None
        x, y = others[0].x, others[0].y
    if angle < 360:
        left, right, bottom, top = inst.box()
        rad = math.radians(angle)
        x += (right - left) * math.cos(rad)
        y += (top - bottom) * math.sin(rad)
    return x, y


def apply_event(state, event, project, config=None):
    """
    Translate event into step inputs for the current state

    Parameters
    ----------
    state : VmState
        State before the event
    event : Event
        Event to apply
    project : Project
        Executed project
    config : VmConfig
        Machine configuration (sound duration)

    Returns
    -------
    list of StepInput
        At least one advancing input
    """
    config = config if config is not None else VmConfig()
    kind = event.kind
    params, values = event.spec.params, event.values
    if kind == KEY_PRESS:
        key, d = params[0], values[0]
        return [StepInput(key_down=key)] + [StepInput() for _ in range(d - 1)] \
            + [StepInput(key_up=key, advance=False)]
    if kind == WAIT:
        return [StepInput() for _ in range(values[0])]
    if kind == MOUSE_MOVE:
        return [StepInput(mouse=(values[0], values[1]))]
    if kind == MOUSE_MOVE_TO:
        inst = _visible_instance(state, params[0])
        if inst is None:
            return [StepInput()]
        return [StepInput(mouse=(inst.x, inst.y))]
    if kind == MOUSE_DOWN:
        return [StepInput(mouse_down=True),
            StepInput(mouse_down=False, advance=False)]
    if kind == CLICK_SPRITE:
        inst = _visible_instance(state, params[0])
        if inst is None:
            return [StepInput()]
        return [StepInput(click_sprite=inst.name)]
    if kind == CLICK_STAGE:
        return [StepInput(click_stage=True)]
    if kind == DRAG_SPRITE:
        inst = _visible_instance(state, params[0])
        pos = None
        if inst is not None:
            pos = _drag_target(state, project, inst, params[1], values[0])
        if pos is None:
            return [StepInput()]
        return [StepInput(drag=(inst.name, pos[0], pos[1]))]
    if kind == SOUND:
        return [StepInput(sound=(params[0], config.sound_duration))]
    if kind in (TYPE_TEXT, TYPE_NUMBER):
        return [StepInput(answer=to_text(values[0]))]
    if kind == GREENFLAG:
        return [StepInput()]
    raise Error("Unknown event kind '{}'".format(kind))


def random_test(project, length, config=None, dynamic=True, rng=None,
        pool=None):
    """
    Generate and execute a random test of `length` events drawn uniformly
    from the static or the dynamic event set

    Parameters
    ----------
    project : Project
        Validated project
    length : int
        Number of events
    config : SearchConfig
        Configuration (parameter bounds, machine configuration)
    dynamic : bool
        Extract events from the running program instead of statically
    rng : random.Random
        Random number generator, seeded from `config.seed` if None
    pool : list of str
        TypeText pool, built from the project if None

    Returns
    -------
    tuple
        (list of Event, ExecutionTrace, VmState)
    """
    from .config import SearchConfig
    config = config if config is not None else SearchConfig(
        budget_executions=1)
    rng = rng if rng is not None else random.Random(config.seed)
    pool = pool if pool is not None else text_pool(project, config.seed)
    vm = Vm(project, config.vm)
    vm.step()
    static = None if dynamic else static_extract(project)
    events = []
    for _ in range(length):
        if vm.state.stopped:
            break
        specs = dynamic_extract(vm.state, project) if dynamic else static
        spec = specs[rng.randrange(len(specs))]
        codons = [rng.randrange(config.codon_max) for _ in range(2)]
        event = resolve(spec, codons, project, pool, config.key_press_bound,
            config.wait_bound)
        start = vm.state.step_count
        for step_input in event.inputs(vm.state, project, vm.config):
            if vm.state.stopped:
                break
            vm.feed(step_input)
        event.steps = vm.state.step_count - start
        events.append(event)
    log.debug("Random test of {} events covers {} nodes".format(
        len(events), len(vm.trace.covered)))
    return events, vm.trace, vm.state
