"""Generational genetic algorithm over tours, with two crossover strategies.

The baseline crossover keeps a prefix of the first parent and fills in the
remaining cities in the order the second parent visits them. The
reversal-invariant variant breeds one candidate from the mate and one from
the reversed mate (each at its own uniformly drawn split) and keeps the
shorter child, so a mate's direction of travel no longer matters; it costs
exactly two length evaluations per offspring instead of one.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import (
    ConfigurationError,
    Instance,
    RunResult,
    Tour,
    make_rng,
    random_tour,
    reverse,
    tour_length,
)

__all__ = [
    "CROSSOVER_VARIANTS",
    "GaConfig",
    "crossover_baseline",
    "crossover_reversal_invariant",
    "init_population",
    "mutate",
    "run_ga",
    "select_parent",
]

CROSSOVER_VARIANTS = ("baseline", "reversal_invariant")

# Relative weight floor added to every member, as a fraction of the longest
# length in the generation. Keeps selection pressure gentle: the longest tour
# still draws with weight floor * longest rather than dropping to zero.
_WEIGHT_FLOOR = 0.5


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 200
    mutation_rate: float = 0.0
    max_generations: int = 30
    max_stall_generations: int = 10
    crossover_variant: str = "baseline"
    elitism: bool = False
    seed: int = 0

    def validate(self) -> None:
        if self.population_size < 2:
            raise ConfigurationError(f"population_size must be >= 2, got {self.population_size}")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigurationError(f"mutation_rate must be in [0, 1], got {self.mutation_rate}")
        if self.max_generations < 1:
            raise ConfigurationError(f"max_generations must be >= 1, got {self.max_generations}")
        if self.max_stall_generations < 1:
            raise ConfigurationError(
                f"max_stall_generations must be >= 1, got {self.max_stall_generations}"
            )
        if self.crossover_variant not in CROSSOVER_VARIANTS:
            raise ConfigurationError(
                f"crossover_variant must be one of {CROSSOVER_VARIANTS}, "
                f"got {self.crossover_variant!r}"
            )


def init_population(
    instance: Instance, size: int, rng: np.random.Generator
) -> list[tuple[Tour, float]]:
    """Random members paired with their lengths."""
    population = []
    for _ in range(size):
        t = random_tour(instance.n, rng)
        population.append((t, tour_length(instance, t)))
    return population


class _RouletteWheel:
    """Cumulative selection weights for one fixed population.

    Weight of a member is (longest length - own length) plus a floor
    proportional to the longest length, so shorter tours are strictly
    favored while every member keeps a real chance. Draws match
    select_parent for the same rng state; building the wheel once per
    generation just hoists the shared prefix-sum work.
    """

    __slots__ = ("cum", "total")

    def __init__(self, lengths: np.ndarray) -> None:
        longest = float(lengths.max())
        weights = (longest - lengths) + _WEIGHT_FLOOR * longest
        self.cum = np.cumsum(weights)
        self.total = float(self.cum[-1])

    def draw(self, rng: np.random.Generator) -> int:
        if self.total <= 0.0:
            # All lengths zero (duplicate points): fall back to uniform.
            return int(rng.integers(self.cum.size))
        k = int(np.searchsorted(self.cum, rng.random() * self.total, side="right"))
        return min(k, self.cum.size - 1)


def select_parent(
    population: list[tuple[Tour, float]], rng: np.random.Generator
) -> Tour:
    """Roulette-wheel pick over length-based weights; shorter is likelier."""
    lengths = np.array([length for _, length in population], dtype=np.float64)
    return population[_RouletteWheel(lengths).draw(rng)][0]


def _draw_split(n: int, rng: np.random.Generator) -> int:
    return int(rng.integers(1, n))


def _check_parents(p1: Tour, p2: Tour, split: int | None) -> None:
    n = len(p1)
    if len(p2) != n:
        raise ValueError(f"parents must have equal length, got {n} and {len(p2)}")
    if n < 2:
        raise ValueError("crossover needs tours over at least two points")
    if split is not None and not 1 <= split <= n - 1:
        raise ValueError(f"split must be in 1..{n - 1}, got {split}")


def crossover_baseline(
    p1: Tour, p2: Tour, split: int | None = None, rng: np.random.Generator | None = None
) -> Tour:
    """Prefix of ``p1`` up to ``split``, then the missing cities in ``p2`` order.

    When ``split`` is None it is drawn uniformly from 1..n-1 using ``rng``.
    """
    _check_parents(p1, p2, split)
    if split is None:
        if rng is None:
            raise ValueError("provide either a split position or an rng")
        split = _draw_split(len(p1), rng)
    head = p1.order[:split]
    taken = np.zeros(len(p1), dtype=bool)
    taken[head] = True
    tail = p2.order[~taken[p2.order]]
    return Tour(np.concatenate([head, tail]))


def _offspring_reversal_invariant(
    p1: Tour, p2: Tour, split1: int, split2: int, instance: Instance
) -> tuple[Tour, float]:
    """Shorter of the children bred from the mate and the reversed mate.

    The mate's child uses split1, the reversed mate's child uses split2.
    Exactly two length evaluations; the tie goes to the unreversed mate's
    child.
    """
    c1 = crossover_baseline(p1, p2, split1)
    c2 = crossover_baseline(p1, reverse(p2), split2)
    l1 = tour_length(instance, c1)
    l2 = tour_length(instance, c2)
    if l2 < l1:
        return c2, l2
    return c1, l1


def crossover_reversal_invariant(
    p1: Tour,
    p2: Tour,
    instance: Instance,
    split: int | None = None,
    rng: np.random.Generator | None = None,
) -> Tour:
    """Reversal-invariant crossover: breed against the mate and its reverse.

    An explicit ``split`` applies to both candidates, which makes the result
    a deterministic function of the parents and exactly as long for a mate
    as for the reversed mate. With ``split`` unset each candidate draws its
    own split from ``rng``, the same policy run_ga uses.
    """
    _check_parents(p1, p2, split)
    if split is None:
        if rng is None:
            raise ValueError("provide either a split position or an rng")
        split1 = _draw_split(len(p1), rng)
        split2 = _draw_split(len(p1), rng)
    else:
        split1 = split2 = split
    return _offspring_reversal_invariant(p1, p2, split1, split2, instance)[0]


def mutate(tour: Tour, rate: float, rng: np.random.Generator) -> Tour:
    """With probability ``rate``, swap one uniformly random position pair.

    Returns the input object itself when no swap was applied, so callers can
    skip re-evaluation with an identity check.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"mutation rate must be in [0, 1], got {rate}")
    if rate <= 0.0:
        return tour
    if rng.random() >= rate:
        return tour
    n = len(tour)
    i = int(rng.integers(n))
    j = int(rng.integers(n))
    while j == i:
        j = int(rng.integers(n))
    if i > j:
        i, j = j, i
    arr = tour.order.copy()
    arr[i], arr[j] = arr[j], arr[i]
    return Tour(arr)


def run_ga(instance: Instance, config: GaConfig, on_generation=None) -> RunResult:
    """Evolve a population and return the best tour ever observed.

    Stops after ``max_generations`` generations, or sooner once the best-ever
    length has not improved for ``max_stall_generations`` consecutive
    generations. ``on_generation(generation, best_length)`` is called after
    each generation when provided.

    fitness_evaluations counts every tour-length computation: one per initial
    member, one per baseline offspring (two for reversal-invariant), plus one
    re-evaluation whenever mutation actually changed an offspring.
    """
    config.validate()
    if instance.n < 2:
        raise ConfigurationError(f"solver needs at least two points, got {instance.n}")
    rng = make_rng(config.seed)
    started = time.perf_counter()
    n = instance.n
    reversal = config.crossover_variant == "reversal_invariant"

    population = init_population(instance, config.population_size, rng)
    evaluations = len(population)
    best_tour, best_length = min(population, key=lambda member: member[1])
    generations = 0
    stall = 0
    while generations < config.max_generations and stall < config.max_stall_generations:
        lengths = np.array([length for _, length in population], dtype=np.float64)
        wheel = _RouletteWheel(lengths)
        offspring: list[tuple[Tour, float]] = []
        for _ in range(config.population_size):
            p1 = population[wheel.draw(rng)][0]
            p2 = population[wheel.draw(rng)][0]
            if reversal:
                split1 = _draw_split(n, rng)
                split2 = _draw_split(n, rng)
                child, length = _offspring_reversal_invariant(
                    p1, p2, split1, split2, instance
                )
                evaluations += 2
            else:
                child = crossover_baseline(p1, p2, _draw_split(n, rng))
                length = tour_length(instance, child)
                evaluations += 1
            mutated = mutate(child, config.mutation_rate, rng)
            if mutated is not child:
                child = mutated
                length = tour_length(instance, child)
                evaluations += 1
            offspring.append((child, length))
        if config.elitism:
            incumbent = min(population, key=lambda member: member[1])
            worst = max(range(len(offspring)), key=lambda k: offspring[k][1])
            offspring[worst] = incumbent
        population = offspring
        generations += 1
        gen_tour, gen_length = min(population, key=lambda member: member[1])
        if gen_length < best_length:
            best_tour, best_length = gen_tour, gen_length
            stall = 0
        else:
            stall += 1
        if on_generation is not None:
            on_generation(generations, best_length)
    return RunResult(
        best_tour=best_tour,
        best_length=best_length,
        iterations=generations,
        fitness_evaluations=evaluations,
        wall_time_ms=(time.perf_counter() - started) * 1e3,
        runs=1,
    )
