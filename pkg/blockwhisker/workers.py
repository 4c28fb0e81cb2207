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

import concurrent.futures
import logging
import multiprocessing
import os
from .error import *
from .validate import validate

log = logging.getLogger("blockwhisker")

# Environment variable capping the number of worker threads
THREADS_ENV = "BLOCKWHISKER_THREADS"


def thread_count():
    """
    Number of worker threads, the number of CPUs capped by
    BLOCKWHISKER_THREADS

    Raises
    ------
    ConfigError
        If BLOCKWHISKER_THREADS is not a positive integer
    """
    n = multiprocessing.cpu_count()
    cap = os.environ.get(THREADS_ENV)
    if cap is not None:
        errors = {}
        validate(THREADS_ENV, cap, ["pint"], errors)
        if errors:
            raise ConfigError(errors)
        n = min(n, int(cap))
    return n


def map_isolated(func, items, threads=None):
    """
    Apply `func` to every item in worker threads

    Each call must work on its own machine, results are merged in item
    order.

    Parameters
    ----------
    func : callable
        Function of one item
    items : list
        Items
    threads : int
        Number of threads, `thread_count()` if None

    Returns
    -------
    list
        Results in the order of `items`
    """
    items = list(items)
    threads = thread_count() if threads is None else threads
    threads = max(1, min(threads, len(items)))
    if threads == 1:
        return [func(item) for item in items]
    log.debug("Running {} items in {} threads".format(len(items), threads))
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(func, items))
