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
import io
import json
import logging
from . import opcodes
from .error import *
from .validate import validate

log = logging.getLogger("blockwhisker")

# Size of the costume given to sprites which declare none
DEFAULT_COSTUME_SIZE = 40


class Ref:
    """
    Reference to a variable ("var"), list ("list") or custom block
    parameter ("param") inside a block argument
    """

    def __init__(self, kind, name):
        self.kind = kind
        self.name = name


    def to_doc(self):
        return {self.kind: self.name}


    def __repr__(self):
        return "Ref({}, {})".format(self.kind, self.name)


class Block:
    """
    Single block of a script
    """

    def __init__(self, id, opcode, args, children):
        """
        Parameters
        ----------
        id : str
            Project-wide unique id
        opcode : str
            One of `opcodes.OPCODES`
        args : list of mixed
            Literal values, `Ref` objects or nested reporter `Block` objects
        children : list of list of Block
            Nested block sequences of C-blocks
        """
        self.id = id
        self.opcode = opcode
        self.args = args
        self.children = children
        self.script = None


    def walk(self):
        """
        Iterate in pre-order over this block, the reporters nested in its
        arguments and the blocks of its children
        """
        yield self
        for arg in self.args:
            if isinstance(arg, Block):
                for b in arg.walk():
                    yield b
        for child in self.children:
            for block in child:
                for b in block.walk():
                    yield b


    def literal(self, i):
        """
        Return argument `i` if it is a literal, else None
        """
        if i < len(self.args) and not isinstance(self.args[i], (Block, Ref)):
            return self.args[i]
        return None


    def __repr__(self):
        return "Block({}, {})".format(self.id, self.opcode)


class Script:
    """
    Script of an actor, i.e. an optional hat followed by a sequence of
    blocks
    """

    def __init__(self, actor, index, hat, body, procedure=False):
        self.actor = actor
        self.index = index
        self.hat = hat
        self.body = body
        self.procedure = procedure


    @property
    def scheduled(self):
        """
        Whether the script is ever started by the scheduler. Scripts without
        hat are dead code, custom block definitions only run when called
        """
        return self.hat is not None and not self.procedure


    @property
    def name(self):
        """
        Name of the custom block if this script is a definition
        """
        if self.procedure:
            return self.hat.literal(0)
        return None


    def blocks(self):
        """
        Iterate in pre-order over all blocks of the script
        """
        if self.hat is not None:
            yield self.hat
        for block in self.body:
            for b in block.walk():
                yield b


    def statements(self):
        """
        Iterate in pre-order over hat and statement blocks
        """
        for b in self.blocks():
            if opcodes.is_statement(b.opcode):
                yield b


class Actor:
    """
    Actor (a sprite or the stage) as declared in the project document
    """

    def __init__(self, index, name, is_stage):
        self.index = index
        self.name = name
        self.is_stage = is_stage
        self.costumes = []
        self.sounds = {}
        self.variables = {}
        self.lists = {}
        self.scripts = []
        self.custom_blocks = []
        self.x = 0
        self.y = 0
        self.direction = 90
        self.size = 100
        self.visible = True
        self.current_costume = 0
        self.volume = 100
        self.layer = index


    def costume_index(self, name):
        """
        Index of the costume named `name` or None
        """
        for i, costume in enumerate(self.costumes):
            if costume["name"] == name:
                return i
        return None


    def procedure(self, name):
        """
        Definition script of custom block `name` or None
        """
        for script in self.custom_blocks:
            if script.name == name:
                return script
        return None


    def all_scripts(self):
        return self.scripts + self.custom_blocks


class Project:
    """
    Validated block program
    """

    def __init__(self, document, width, height):
        self.document = document
        self.width = width
        self.height = height
        self.actors = []
        self.blocks = {}
        self.warnings = []


    @property
    def stage(self):
        for actor in self.actors:
            if actor.is_stage:
                return actor


    def actor(self, name):
        """
        Actor named `name` or None
        """
        for actor in self.actors:
            if actor.name == name:
                return actor
        return None


    def sprites(self):
        return [a for a in self.actors if not a.is_stage]


    def scripts(self):
        """
        All scripts including custom block definitions in declaration order
        """
        for actor in self.actors:
            for script in actor.all_scripts():
                yield script


    def statements(self):
        """
        Ids of all hat and statement blocks in declaration order, i.e. the
        coverage goals
        """
        return [b.id for s in self.scripts() for b in s.statements()]


    def hats(self, opcode=None):
        """
        All hat blocks, optionally restricted to `opcode`
        """
        return [s.hat for s in self.scripts()
            if s.hat is not None and (opcode is None or s.hat.opcode == opcode)]


    def to_json(self):
        """
        Canonical serialization of the (id-normalized) document
        """
        return json.dumps(self.document, sort_keys=True, indent=1)


def load_project_file(path):
    """
    Load project document from file

    Parameters
    ----------
    path : str
        Path of JSON project document

    Returns
    -------
    Project
        Validated project
    """
    try:
        with io.open(path, encoding="utf-8") as fh:
            document = json.load(fh)
    except (IOError, OSError, ValueError) as e:
        raise Error("Reading project '{}' failed: {}".format(path, e))
    return load_project(document)


def load_project(document):
    """
    Validate project document and build `Project`

    Blocks without id get a deterministic id derived from their position in
    the document. The normalized document (all ids explicit) is kept as
    `Project.document`.

    Parameters
    ----------
    document : dict
        Project document

    Returns
    -------
    Project
        Validated project

    Raises
    ------
    LoadError
        If the document violates the schema
    """
    errors = {}
    if not isinstance(document, dict) or \
            not isinstance(document.get("actors"), list):
        raise LoadError({"/": "MISSING_ACTORS"})
    document = copy.deepcopy(document)
    stage_doc = document.get("stage") or {}
    width = validate("/stage/width", stage_doc.get("width", 480),
        ["pint"], errors)
    height = validate("/stage/height", stage_doc.get("height", 360),
        ["pint"], errors)
    if errors:
        raise LoadError(errors)
    project = Project(document, int(width), int(height))

    loader = _Loader(project, errors)
    for i, actor_doc in enumerate(document["actors"]):
        loader.load_actor(i, actor_doc)
    if len([a for a in project.actors if a.is_stage]) != 1:
        errors["/actors"] = "STAGE_COUNT"
    if errors:
        raise LoadError(errors)

    _collect_warnings(project)
    for msg in project.warnings:
        log.warning(msg)
    return project


class _Loader:
    """
    Helper which walks the document, builds the project structure and
    collects validation errors
    """

    def __init__(self, project, errors):
        self.project = project
        self.errors = errors
        self.names = set()


    def load_actor(self, index, doc):
        path = "/actors/{}".format(index)
        errors = self.errors
        if not isinstance(doc, dict):
            errors[path] = "INVALID_ACTOR"
            return
        name = validate(path + "/name", doc.get("name"),
            ["not_null", "identifier"], errors)
        if name in self.names:
            errors[path + "/name"] = "DUPLICATE_NAME"
        self.names.add(name)
        actor = Actor(index, name, bool(doc.get("isStage", False)))

        for key, fmt in [("x", ["float"]), ("y", ["float"]),
                ("direction", ["float"]), ("size", ["ufloat"]),
                ("volume", ["ufloat"]), ("currentCostume", ["uint"]),
                ("layer", ["int"])]:
            if key in doc:
                validate("{}/{}".format(path, key), doc[key], fmt, errors)
        actor.x = doc.get("x", 0)
        actor.y = doc.get("y", 0)
        actor.direction = doc.get("direction", 90)
        actor.size = doc.get("size", 100)
        actor.visible = bool(doc.get("visible", True))
        actor.current_costume = doc.get("currentCostume", 0)
        actor.volume = min(100, doc.get("volume", 100))
        actor.layer = doc.get("layer", index)
        if path + "/direction" not in errors and \
                not -180 <= actor.direction <= 180:
            errors[path + "/direction"] = "INVALID_DIRECTION"

        costumes = doc.get("costumes") or []
        for j, costume in enumerate(costumes):
            cpath = "{}/costumes/{}".format(path, j)
            validate(cpath + "/name", costume.get("name"),
                ["not_null", "identifier"], errors)
            validate(cpath + "/width", costume.get("width"),
                ["not_null", "ufloat"], errors)
            validate(cpath + "/height", costume.get("height"),
                ["not_null", "ufloat"], errors)
            actor.costumes.append({"name": costume.get("name"),
                "width": costume.get("width"), "height": costume.get("height")})
        if not actor.costumes:
            if actor.is_stage:
                actor.costumes.append({"name": "backdrop1",
                    "width": self.project.width, "height": self.project.height})
            else:
                actor.costumes.append({"name": "costume1",
                    "width": DEFAULT_COSTUME_SIZE,
                    "height": DEFAULT_COSTUME_SIZE})
        if path + "/currentCostume" not in errors and \
                actor.current_costume >= len(actor.costumes):
            errors[path + "/currentCostume"] = "INVALID_COSTUME"

        for j, sound in enumerate(doc.get("sounds") or []):
            spath = "{}/sounds/{}".format(path, j)
            validate(spath + "/name", sound.get("name"),
                ["not_null", "identifier"], errors)
            validate(spath + "/durationSeconds", sound.get("durationSeconds"),
                ["not_null", "ufloat"], errors)
            actor.sounds[sound.get("name")] = sound.get("durationSeconds")

        actor.variables = dict(doc.get("variables") or {})
        actor.lists = dict((k, list(v))
            for k, v in (doc.get("lists") or {}).items())

        for j, script_doc in enumerate(doc.get("scripts") or []):
            script = self.load_script(actor, j, script_doc,
                "{}/scripts/{}".format(path, j), False)
            actor.scripts.append(script)
        for j, script_doc in enumerate(doc.get("customBlocks") or []):
            script = self.load_script(actor, j, script_doc,
                "{}/customBlocks/{}".format(path, j), True)
            actor.custom_blocks.append(script)
        self.project.actors.append(actor)


    def load_script(self, actor, index, doc, path, procedure):
        prefix = "{}/{}{}".format(actor.name, "p" if procedure else "s", index)
        hat = None
        if doc.get("hat") is not None:
            hat = self.load_block(doc["hat"], prefix + "/hat", path + "/hat")
            if hat is not None:
                if not opcodes.is_hat(hat.opcode):
                    self.errors[hat.id] = "NOT_HAT"
                elif procedure != (hat.opcode == "procedureDefinition"):
                    self.errors[hat.id] = "INVALID_PROCEDURE"
        elif procedure:
            self.errors[path] = "MISSING_DEFINITION"
        body = self.load_sequence(doc.get("body") or [], prefix,
            path + "/body")
        script = Script(actor, index, hat, body, procedure)
        for block in script.blocks():
            block.script = script
        return script


    def load_sequence(self, docs, prefix, path):
        seq = []
        for i, doc in enumerate(docs):
            block = self.load_block(doc, "{}/{}".format(prefix, i),
                "{}/{}".format(path, i))
            if block is None:
                continue
            if not opcodes.is_statement(block.opcode) or \
                    opcodes.is_hat(block.opcode):
                self.errors[block.id] = "NOT_STATEMENT"
            elif i + 1 < len(docs) and (
                    opcodes.shape(block.opcode) == opcodes.CAP
                    or block.opcode == "forever"):
                self.errors[block.id] = "BLOCK_AFTER_CAP"
            seq.append(block)
        return seq


    def load_block(self, doc, default_id, path):
        errors = self.errors
        if not isinstance(doc, dict) or "opcode" not in doc:
            errors[path] = "INVALID_BLOCK"
            return None
        if "id" not in doc:
            doc["id"] = default_id
        id = validate(path + "/id", doc["id"], ["not_null", "identifier"],
            errors)
        if path + "/id" in errors:
            return None
        doc["id"] = id
        if id in self.project.blocks:
            errors[id] = "DUPLICATE_ID"
            return None
        opcode = doc["opcode"]
        validate(id, opcode, ["not_null", "opcode"], errors)
        if id in errors:
            return None
        shape, arity, n_children, bool_slots = opcodes.OPCODES[opcode]

        args_doc = doc.get("args") or []
        if not isinstance(args_doc, list):
            errors[id] = "INVALID_ARGS"
            return None
        if arity is None:
            if len(args_doc) < 1:
                errors[id] = "INVALID_ARITY"
        elif len(args_doc) != arity:
            errors[id] = "INVALID_ARITY"

        block = Block(id, opcode, [], [])
        self.project.blocks[id] = block
        for k, arg in enumerate(args_doc):
            if isinstance(arg, dict) and "opcode" in arg:
                nested = self.load_block(arg, "{}/a{}".format(id, k),
                    "{}/args/{}".format(path, k))
                if nested is None:
                    continue
                if not opcodes.is_expression(nested.opcode):
                    errors[nested.id] = "NOT_EXPRESSION"
                elif k in bool_slots and \
                        opcodes.shape(nested.opcode) != opcodes.BOOLEAN \
                        and nested.opcode != "argument":
                    errors[nested.id] = "NOT_BOOLEAN"
                block.args.append(nested)
            elif isinstance(arg, dict):
                kinds = [kind for kind in ("var", "list", "param") if kind in arg]
                if len(kinds) != 1:
                    errors[id] = "INVALID_REFERENCE"
                    continue
                name = validate(id, arg[kinds[0]], ["identifier"], errors)
                block.args.append(Ref(kinds[0], name))
            elif isinstance(arg, list):
                errors[id] = "INVALID_ARGS"
            else:
                if k in bool_slots and arg is not None:
                    errors[id] = "NOT_BOOLEAN"
                block.args.append(arg)

        if opcode in ("keyPressed", "keyPressedQ") and block.literal(0) is not None:
            validate(id, block.literal(0), ["key"], errors)

        children_doc = doc.get("children") or []
        if len(children_doc) > n_children:
            errors[id] = "INVALID_CHILDREN"
        while len(children_doc) < n_children:
            children_doc.append([])
        doc["children"] = children_doc
        for k, child in enumerate(children_doc[:n_children]):
            block.children.append(self.load_sequence(child or [],
                "{}/c{}".format(id, k), "{}/children/{}".format(path, k)))
        return block


def _collect_warnings(project):
    """
    Flag dangling references which do not prevent execution
    """
    w = project.warnings
    sent = set()
    received = set(h.literal(0) for h in project.hats("broadcastReceived"))
    sprites = set(a.name for a in project.sprites())
    backdrops = set(c["name"] for c in project.stage.costumes)
    for actor in project.actors:
        procedures = set(s.name for s in actor.custom_blocks)
        for script in actor.all_scripts():
            for b in script.blocks():
                target = b.literal(0)
                if b.opcode in ("broadcast", "broadcastAndWait"):
                    if isinstance(b.args[0], (Block, Ref)):
                        sent.add(None)
                        continue
                    sent.add(target)
                    if target not in received:
                        w.append("Broadcast '{}' of block '{}' has no "
                            "receiver".format(target, b.id))
                elif b.opcode == "createClone" and target is not None \
                        and target != "myself" and target not in sprites:
                    w.append("Clone target '{}' of block '{}' does not "
                        "exist".format(target, b.id))
                elif b.opcode in ("switchBackdrop", "backdropSwitched") \
                        and target is not None \
                        and str(target) not in backdrops:
                    w.append("Backdrop '{}' of block '{}' does not "
                        "exist".format(target, b.id))
                elif b.opcode == "callProcedure" and target not in procedures:
                    w.append("Custom block '{}' of block '{}' is not "
                        "defined".format(target, b.id))
    if None not in sent:
        for name in sorted(str(n) for n in received - sent):
            w.append("Message '{}' is received but never sent".format(name))
