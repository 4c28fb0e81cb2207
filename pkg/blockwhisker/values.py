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
Forgiving value coercion of the block language. Values are ints, floats,
bools or texts and no coercion ever raises.
"""

import math
import re

_NUMBER_PREFIX = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_NUMBER_FULL = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\s*$")


def to_number(value):
    """
    Convert value to a number

    Texts are parsed by their leading numerals, anything else yields 0.

    Parameters
    ----------
    value : mixed
        Value to convert

    Returns
    -------
    int or float
        Converted value
    """
    if isinstance(value, bool):
        return 1 if value else 0
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if math.isnan(value):
            return 0
        return value
    m = _NUMBER_PREFIX.match(str(value))
    if m is None:
        return 0
    text = m.group(0).strip()
    if re.match(r"^[+-]?\d+$", text):
        return int(text)
    return float(text)


def is_numeric(value):
    """
    Whether value is a number or a text which completely represents one
    """
    if isinstance(value, bool):
        return False
    if isinstance(value, (int, float)):
        return not math.isnan(value)
    return _NUMBER_FULL.match(str(value)) is not None


def to_bool(value):
    """
    Convert value to a boolean. Empty text, "0" and "false" are false,
    numbers are true iff nonzero
    """
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, float)):
        return value != 0
    text = str(value).strip().lower()
    return text not in ("", "0", "false")


def to_text(value):
    """
    Convert value to its text representation
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "NaN"
        if math.isinf(value):
            return "Infinity" if value > 0 else "-Infinity"
        if value == int(value):
            return str(int(value))
        return repr(value)
    return str(value)


def normalize_number(value):
    """
    Turn integral floats into ints and NaN into 0, leave everything else as
    is
    """
    if isinstance(value, float):
        if math.isnan(value):
            return 0
        if not math.isinf(value) and value == int(value):
            return int(value)
    return value


def same(a, b):
    """
    Equality under which NaN equals NaN
    """
    if isinstance(a, float) and isinstance(b, float) and math.isnan(a) \
            and math.isnan(b):
        return True
    return a == b


def compare(a, b):
    """
    Compare two values, numerically if both are numeric and else as case
    insensitive texts

    Returns
    -------
    int
        -1, 0 or 1
    """
    if is_numeric(a) and is_numeric(b):
        x, y = to_number(a), to_number(b)
    else:
        x, y = to_text(a).lower(), to_text(b).lower()
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


def finite(value, default=0):
    """
    Return `value` as number if it is finite, else `default`
    """
    value = to_number(value)
    if isinstance(value, float) and (math.isinf(value) or math.isnan(value)):
        return default
    return value
