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
Table of supported opcodes

Each opcode maps to a tuple (shape, arity, children, boolean slots). An arity
of None marks a variadic opcode which takes at least one argument (the name
of a custom block).
"""

HAT = "hat"
STACK = "stack"
C = "c"
CAP = "cap"
REPORTER = "reporter"
BOOLEAN = "boolean"

OPCODES = {
    # hats
    "greenflag": (HAT, 0, 0, ()),
    "keyPressed": (HAT, 1, 0, ()),
    "spriteClicked": (HAT, 0, 0, ()),
    "stageClicked": (HAT, 0, 0, ()),
    "broadcastReceived": (HAT, 1, 0, ()),
    "startAsClone": (HAT, 0, 0, ()),
    "backdropSwitched": (HAT, 1, 0, ()),
    "loudnessGreaterThan": (HAT, 1, 0, ()),
    "procedureDefinition": (HAT, None, 0, ()),

    # control
    "if": (C, 1, 1, (0,)),
    "ifElse": (C, 1, 2, (0,)),
    "repeatTimes": (C, 1, 1, ()),
    "repeatUntil": (C, 1, 1, (0,)),
    "forever": (C, 0, 1, ()),
    "waitSeconds": (STACK, 1, 0, ()),
    "waitUntil": (STACK, 1, 0, (0,)),
    "stopAll": (CAP, 0, 0, ()),
    "stopScript": (CAP, 0, 0, ()),
    "createClone": (STACK, 1, 0, ()),
    "deleteClone": (CAP, 0, 0, ()),
    "broadcast": (STACK, 1, 0, ()),
    "broadcastAndWait": (STACK, 1, 0, ()),
    "callProcedure": (STACK, None, 0, ()),
    "argument": (REPORTER, 1, 0, ()),

    # motion
    "gotoXY": (STACK, 2, 0, ()),
    "changeXY": (STACK, 2, 0, ()),
    "setX": (STACK, 1, 0, ()),
    "setY": (STACK, 1, 0, ()),
    "moveSteps": (STACK, 1, 0, ()),
    "turnRight": (STACK, 1, 0, ()),
    "turnLeft": (STACK, 1, 0, ()),
    "pointInDirection": (STACK, 1, 0, ()),
    "pointTowards": (STACK, 1, 0, ()),
    "glideSecsTo": (STACK, 3, 0, ()),
    "xPosition": (REPORTER, 0, 0, ()),
    "yPosition": (REPORTER, 0, 0, ()),
    "direction": (REPORTER, 0, 0, ()),

    # looks
    "say": (STACK, 1, 0, ()),
    "sayForSecs": (STACK, 2, 0, ()),
    "think": (STACK, 1, 0, ()),
    "thinkForSecs": (STACK, 2, 0, ()),
    "switchCostume": (STACK, 1, 0, ()),
    "nextCostume": (STACK, 0, 0, ()),
    "switchBackdrop": (STACK, 1, 0, ()),
    "nextBackdrop": (STACK, 0, 0, ()),
    "show": (STACK, 0, 0, ()),
    "hide": (STACK, 0, 0, ()),
    "setSize": (STACK, 1, 0, ()),
    "changeSize": (STACK, 1, 0, ()),
    "goToFront": (STACK, 0, 0, ()),

    # sound
    "playSoundUntilDone": (STACK, 1, 0, ()),
    "setVolume": (STACK, 1, 0, ()),
    "changeVolume": (STACK, 1, 0, ()),

    # sensing
    "touchingSprite": (BOOLEAN, 1, 0, ()),
    "touchingEdge": (BOOLEAN, 0, 0, ()),
    "touchingMousePointer": (BOOLEAN, 0, 0, ()),
    "keyPressedQ": (BOOLEAN, 1, 0, ()),
    "mouseDown": (BOOLEAN, 0, 0, ()),
    "mouseX": (REPORTER, 0, 0, ()),
    "mouseY": (REPORTER, 0, 0, ()),
    "distanceTo": (REPORTER, 1, 0, ()),
    "askAndWait": (STACK, 1, 0, ()),
    "answer": (REPORTER, 0, 0, ()),
    "timer": (REPORTER, 0, 0, ()),
    "resetTimer": (STACK, 0, 0, ()),
    "loudness": (REPORTER, 0, 0, ()),

    # data
    "setVariable": (STACK, 2, 0, ()),
    "changeVariable": (STACK, 2, 0, ()),
    "addToList": (STACK, 2, 0, ()),
    "lengthOfList": (REPORTER, 1, 0, ()),
    "itemOfList": (REPORTER, 2, 0, ()),

    # operators
    "add": (REPORTER, 2, 0, ()),
    "subtract": (REPORTER, 2, 0, ()),
    "multiply": (REPORTER, 2, 0, ()),
    "divide": (REPORTER, 2, 0, ()),
    "lt": (BOOLEAN, 2, 0, ()),
    "gt": (BOOLEAN, 2, 0, ()),
    "equals": (BOOLEAN, 2, 0, ()),
    "and": (BOOLEAN, 2, 0, (0, 1)),
    "or": (BOOLEAN, 2, 0, (0, 1)),
    "not": (BOOLEAN, 1, 0, (0,)),
    "random": (REPORTER, 2, 0, ()),
    "join": (REPORTER, 2, 0, ()),
    "mod": (REPORTER, 2, 0, ()),
    "round": (REPORTER, 1, 0, ()),
}

# Hats which are triggered directly by user input (or the green flag)
USER_HATS = ["greenflag", "keyPressed", "spriteClicked", "stageClicked",
    "loudnessGreaterThan"]

# Statements whose completion depends on elapsed steps
TIME_DEPENDENT = ["waitSeconds", "sayForSecs", "thinkForSecs", "glideSecsTo",
    "playSoundUntilDone"]

ARITHMETIC = ["add", "subtract", "multiply", "divide"]
RELATIONAL = ["lt", "gt", "equals"]
LOGICAL = ["and", "or"]


def shape(opcode):
    return OPCODES[opcode][0]


def is_hat(opcode):
    return shape(opcode) == HAT


def is_statement(opcode):
    """
    Whether `opcode` is a block which can be stacked in a script (including
    hats), as opposed to a reporter expression
    """
    return shape(opcode) in (HAT, STACK, C, CAP)


def is_expression(opcode):
    return shape(opcode) in (REPORTER, BOOLEAN)
