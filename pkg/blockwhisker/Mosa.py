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

import numpy as np
from . import encoding
from .SearchAlgorithm import SearchAlgorithm


def non_dominated_fronts(fitnesses):
    """
    Fast non-dominated sorting of minimized objectives

    Parameters
    ----------
    fitnesses : np.ndarray
        Array of shape (n_individuals, m_objectives)

    Returns
    -------
    list of np.ndarray
        Fronts as arrays of row indices, best front first
    """
    n = len(fitnesses)
    if n == 0:
        return []
    a = fitnesses[:, None, :]
    b = fitnesses[None, :, :]
    dominates = (a <= b).all(axis=2) & (a < b).any(axis=2)
    count = dominates.sum(axis=0)
    remaining = np.ones(n, dtype=bool)
    fronts = []
    while remaining.any():
        front = np.flatnonzero(remaining & (count == 0))
        fronts.append(front)
        remaining[front] = False
        count = count - dominates[front, :].sum(axis=0)
    return fronts


def crowding_distance(fitnesses):
    """
    Parameters
    ----------
    fitnesses : np.ndarray
        Array of shape (n_individuals, m_objectives) of a single front

    Returns
    -------
    np.ndarray
        Crowding distance per individual, boundary individuals get inf
    """
    n = len(fitnesses)
    if n <= 2:
        return np.full(n, np.inf)
    distances = np.zeros(n)
    for column in fitnesses.T:
        order = np.argsort(column, kind="mergesort")
        values = column[order]
        distances[order[0]] = distances[order[-1]] = np.inf
        span = values[-1] - values[0]
        if span > 0:
            distances[order[1:-1]] += (values[2:] - values[:-2]) / span
    return distances


class Mosa(SearchAlgorithm):
    """
    Many-objective sorting algorithm with preference sorting on the
    uncovered goals
    """

    name = "mosa"


    def _search(self):
        size = self.config.population_size
        population = []
        while len(population) < size and not self.exhausted():
            population.append(self.execute(self.random_genotype()))
        if not population:
            return
        population, ranks, crowding = self.select(population)

        generation = 0
        while not self.exhausted() and not self.complete():
            offspring = []
            while len(offspring) < size and not self.exhausted():
                p1 = population[self.tournament(ranks, crowding)]
                p2 = population[self.tournament(ranks, crowding)]
                if self.rng.random() < self.config.crossover_prob:
                    g1, g2 = encoding.crossover(p1.genotype, p2.genotype,
                        self.rng, self.config)
                else:
                    g1, g2 = p1.genotype, p2.genotype
                for g in (g1, g2):
                    if len(offspring) < size and not self.exhausted():
                        offspring.append(self.execute(self.mutate(g)))
            population, ranks, crowding = self.select(population + offspring)
            for i, test in enumerate(population):
                if self.rng.random() < self.config.local_search_prob:
                    population[i] = self.local_search(test)
            generation += 1
            self.log.debug("mosa: generation {}, {} goals uncovered".format(
                generation, len(self.archive.uncovered())))


    def tournament(self, ranks, crowding):
        """
        Binary tournament on (rank, crowding distance)

        Returns
        -------
        int
            Index of the winner
        """
        i = self.rng.randrange(len(ranks))
        j = self.rng.randrange(len(ranks))
        if (ranks[j], -crowding[j]) < (ranks[i], -crowding[i]):
            return j
        return i


    def preference_front(self, tests, goals):
        """
        Indices of the best test per uncovered goal (ties go to the shorter
        test)
        """
        front = []
        for f in goals:
            best = min(range(len(tests)),
                key=lambda i: (tests[i].fitness(f), tests[i].length_key(), i))
            if best not in front:
                front.append(best)
        return front


    def select(self, tests):
        """
        Preference sorting and selection of the next population

        Returns
        -------
        tuple
            (population, rank per individual, crowding distance per
            individual)
        """
        size = self.config.population_size
        goals = self.archive.uncovered()
        if not goals:
            chosen = tests[:size]
            return chosen, [0] * len(chosen), [0.0] * len(chosen)
        fitnesses = np.array([[t.fitness(f) for f in goals] for t in tests],
            dtype=float)
        first = self.preference_front(tests, goals)
        rest = np.array([i for i in range(len(tests)) if i not in first],
            dtype=int)
        fronts = [np.array(first, dtype=int)]
        fronts += [rest[f] for f in non_dominated_fronts(fitnesses[rest])]

        chosen, ranks, crowding = [], [], []
        for rank, front in enumerate(fronts):
            if len(chosen) >= size:
                break
            distances = crowding_distance(fitnesses[front])
            order = np.argsort(-distances, kind="mergesort")
            for k in order[:size - len(chosen)]:
                chosen.append(tests[front[k]])
                ranks.append(rank)
                crowding.append(distances[k])
        return chosen, ranks, crowding
