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

import copy
import math
import random
from fractions import Fraction

# Halt states of a process
RUNNING = "Running"
WAIT_STEPS = "WaitSteps"
WAIT_UNTIL = "WaitUntil"
GLIDE_UNTIL = "GlideUntil"
SAY_UNTIL = "SayUntil"
SOUND_UNTIL = "SoundUntil"
ASK_WAIT = "AskWait"
BROADCAST_WAIT = "BroadcastWait"
DONE = "Done"

# Halt states which end after a fixed number of steps
TIMED = (WAIT_STEPS, GLIDE_UNTIL, SAY_UNTIL, SOUND_UNTIL)

# Frame kinds
TOP = "top"
BRANCH = "branch"
LOOP = "loop"
PROC = "proc"


def seconds_to_steps(x, step_time_ms):
    """
    Convert a duration into a number of steps

    Parameters
    ----------
    x : int, float, Fraction
        Duration in seconds, x >= 0
    step_time_ms : int, float, Fraction
        Duration of a step in milliseconds, > 0

    Returns
    -------
    int
        ceil(x * 1000 / step_time_ms), at least 1 if x > 0
    """
    if x <= 0:
        return 0
    steps = math.ceil(Fraction(str(x)) * 1000 / Fraction(str(step_time_ms)))
    return max(1, int(steps))


class Frame:
    """
    Position inside a block sequence of a running process
    """

    def __init__(self, blocks, kind, block=None, params=None, definition=None):
        self.blocks = blocks
        self.index = 0
        self.kind = kind

        # Loop or call block which opened the frame
        self.block = block

        # Remaining iterations of a repeatTimes loop
        self.remaining = None

        # Whether the loop body ended and the loop condition is checked next
        self.checking = False

        # Parameter values and definition script of a custom block call
        self.params = params
        self.definition = definition


class Process:
    """
    Execution of a script on a single actor instance
    """

    def __init__(self, pid, instance, script, start_step):
        self.pid = pid
        self.instance = instance
        self.script = script
        self.reset(start_step)


    def reset(self, start_step):
        """
        (Re)start the script from its beginning

        Parameters
        ----------
        start_step : int
            First step count at which the process may run
        """
        self.frames = [Frame(self.script.body, TOP)]
        self.halt = RUNNING
        self.start_step = start_step
        self.started = False
        self.restart = False

        # Data of the current halt state
        self.resume_at = None
        self.halt_block = None
        self.glide = None
        self.bubble = None
        self.waiting_for = []


    @property
    def active(self):
        return self.halt != DONE


    def sort_key(self):
        return (self.instance.actor.index, self.script.index,
            self.instance.clone_index)


    def to_dict(self):
        return {
            "pid": self.pid,
            "instance": self.instance.name,
            "script": self.script.hat.id,
            "halt": self.halt,
            "resumeAt": self.resume_at,
            "startStep": self.start_step,
            "frames": [[f.kind, f.index, f.remaining] for f in self.frames],
        }


class ActorState:
    """
    Runtime attributes of an actor instance, i.e. an actor or one of its
    clones
    """

    def __init__(self, actor):
        self.actor = actor
        self.clone_index = 0
        self.x = actor.x
        self.y = actor.y
        self.direction = actor.direction
        self.size = actor.size
        self.visible = actor.visible
        self.costume = actor.current_costume
        self.volume = actor.volume
        self.layer = actor.layer
        self.variables = copy.deepcopy(actor.variables)
        self.lists = copy.deepcopy(actor.lists)

        # None or tuple ("say"|"think", text)
        self.bubble = None


    @property
    def name(self):
        if self.clone_index:
            return "{}#{}".format(self.actor.name, self.clone_index)
        return self.actor.name


    @property
    def is_clone(self):
        return self.clone_index > 0


    def clone(self, index):
        """
        Create a clone of this instance

        Parameters
        ----------
        index : int
            Creation number of the clone (>= 1)

        Returns
        -------
        ActorState
            New instance
        """
        c = copy.copy(self)
        c.variables = copy.deepcopy(self.variables)
        c.lists = copy.deepcopy(self.lists)
        c.clone_index = index
        c.bubble = None
        return c


    def box(self):
        """
        Axis-aligned bounding box (left, right, bottom, top)
        """
        costume = self.actor.costumes[self.costume]
        w = costume["width"] * self.size / 100.0
        h = costume["height"] * self.size / 100.0
        return (self.x - w / 2, self.x + w / 2, self.y - h / 2, self.y + h / 2)


    def to_dict(self):
        return {
            "name": self.name,
            "x": self.x,
            "y": self.y,
            "direction": self.direction,
            "size": self.size,
            "visible": self.visible,
            "costume": self.costume,
            "volume": self.volume,
            "layer": self.layer,
            "variables": self.variables,
            "lists": self.lists,
            "bubble": list(self.bubble) if self.bubble else None,
        }


class InputState:
    """
    State of the simulated input devices
    """

    def __init__(self):
        self.keys_down = set()
        self.mouse_x = 0
        self.mouse_y = 0
        self.mouse_down = False

        # Virtual sound level, -1 means no sound
        self.sound_level = -1

        # Step count at which the sound level reverts to -1
        self.sound_until = None

        # Answer typed for a waiting ask block
        self.pending_answer = None


    def to_dict(self):
        return {
            "keysDown": sorted(self.keys_down),
            "mouse": [self.mouse_x, self.mouse_y],
            "mouseDown": self.mouse_down,
            "soundLevel": self.sound_level,
            "soundUntil": self.sound_until,
            "pendingAnswer": self.pending_answer,
        }


class VmState:
    """
    Complete state of a program execution
    """

    def __init__(self, project, seed):
        """
        Create state before the first step

        Parameters
        ----------
        project : Project
            Executed project
        seed : int
            Seed of the random number generator
        """
        self.step_count = 0
        self.processes = []
        self.instances = [ActorState(a) for a in project.actors]
        self.input = InputState()
        self.answer = ""
        self.timer_steps = 0
        self.rng = random.Random(seed)
        self.seed = seed
        self.stopped = False
        self.next_pid = 1
        self.clone_counters = {}

        # Last evaluation of each loudness hat per instance
        self.loudness_memory = {}


    @property
    def ask_focus(self):
        return any(p.halt == ASK_WAIT for p in self.processes)


    @property
    def stage(self):
        for inst in self.instances:
            if inst.actor.is_stage:
                return inst


    def instance(self, name):
        """
        Actor instance named `name` (e.g. "Cat" or "Cat#2") or None
        """
        for inst in self.instances:
            if inst.name == name:
                return inst
        return None


    def instances_of(self, actor_name):
        """
        Original and clones of actor `actor_name`
        """
        return [i for i in self.instances if i.actor.name == actor_name]


    def clone_count(self, actor_name=None):
        return len([i for i in self.instances if i.is_clone
            and (actor_name is None or i.actor.name == actor_name)])


    def active_processes(self, script):
        return [p for p in self.processes if p.script is script and p.active]


    def to_dict(self):
        """
        Canonical representation
        """
        return {
            "stepCount": self.step_count,
            "stopped": self.stopped,
            "timerSteps": self.timer_steps,
            "answer": self.answer,
            "input": self.input.to_dict(),
            "instances": [i.to_dict() for i in self.instances],
            "processes": [p.to_dict() for p in self.processes],
            "rng": repr(self.rng.getstate()),
        }
