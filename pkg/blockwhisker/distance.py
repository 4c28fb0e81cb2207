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
Branch distances of predicates. Every function returns a tuple
(value, true distance, false distance) with non-negative distances, where a
distance of 0 means the predicate already evaluates to the respective
outcome.
"""

import math

# Offset added to relational distances when the predicate is false
K = 1


def gt(a, b):
    if a > b:
        return True, 0, a - b
    return False, b - a + K, 0


def lt(a, b):
    if a < b:
        return True, 0, b - a
    return False, a - b + K, 0


def eq(a, b):
    if a == b:
        return True, 0, K
    return False, abs(a - b), 0


def flag(value):
    """
    Distances of a plain boolean without numeric guidance
    """
    if value:
        return True, 0, 1
    return False, 1, 0


def conjunction(left, right):
    v1, t1, f1 = left
    v2, t2, f2 = right
    return v1 and v2, t1 + t2, min(f1, f2)


def disjunction(left, right):
    v1, t1, f1 = left
    v2, t2, f2 = right
    return v1 or v2, min(t1, t2), f1 + f2


def negation(inner):
    v, t, f = inner
    return not v, f, t


def proximity(value, d):
    """
    Distances of a sensing predicate whose subjects are `d` apart. A true
    predicate forces a true distance of 0
    """
    if value:
        return True, 0, 1
    return False, max(d, 0), 0


def euclidean(x1, y1, x2, y2):
    return math.hypot(x1 - x2, y1 - y2)


def normalize(x):
    """
    Map a distance from [0, inf) to [0, 1)

    Parameters
    ----------
    x : float
        Non-negative distance

    Returns
    -------
    float
        x / (x + 1)
    """
    if math.isinf(x):
        return 1.0
    return x / (x + 1.0)
