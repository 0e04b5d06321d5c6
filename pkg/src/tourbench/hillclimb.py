"""Steepest-descent hill climbing on the transposition graph, with restarts.

The baseline variant walks to the nearest local minimum and stops. The
modified variant holds one allowance for a non-improving move: at a local
minimum it may step to the best not-yet-visited neighbor anyway, and the
allowance is restored once the walk gets strictly below the length of the
minimum that consumed it. A visited set shared across the whole invocation
forbids revisiting any permutation and lets restarts that land on
already-seen ground return immediately.
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
    VisitHook,
    make_rng,
    random_tour,
    tour_length,
)

__all__ = [
    "DEFAULT_MAX_STEPS",
    "DEFAULT_VISITED_CAP",
    "HC_VARIANTS",
    "HcConfig",
    "RunAbortedError",
    "VisitedSet",
    "hill_climb_baseline",
    "hill_climb_modified",
    "run_hc",
    "steepest_step",
]

HC_VARIANTS = ("baseline", "modified")
DEFAULT_MAX_STEPS = 1_000_000
DEFAULT_VISITED_CAP = 10_000_000


class RunAbortedError(RuntimeError):
    """A climb exceeded its step budget; carries the best tour seen so far."""

    def __init__(self, best_tour: Tour, best_length: float, steps: int, evaluations: int) -> None:
        super().__init__(f"step budget exhausted after {steps} steps (best {best_length})")
        self.best_tour = best_tour
        self.best_length = best_length
        self.steps = steps
        self.evaluations = evaluations


class VisitedSet:
    """Exact membership over permutations, with a hard entry cap.

    Once the cap is reached further adds are dropped (add returns False) but
    lookups keep working for everything stored before that, so a long run
    degrades to allowing revisits instead of exhausting memory.
    """

    __slots__ = ("_seen", "cap")

    def __init__(self, cap: int = DEFAULT_VISITED_CAP) -> None:
        if cap < 1:
            raise ValueError(f"cap must be positive, got {cap}")
        self._seen: set[bytes] = set()
        self.cap = cap

    def add(self, tour: Tour) -> bool:
        if len(self._seen) >= self.cap:
            return False
        self._seen.add(tour.key())
        return True

    def __contains__(self, tour: Tour) -> bool:
        return tour.key() in self._seen

    def __len__(self) -> int:
        return len(self._seen)

    def _has_key(self, key: bytes) -> bool:
        return key in self._seen


@dataclass(frozen=True)
class HcConfig:
    restarts: int = 0
    variant: str = "baseline"
    max_steps_per_run: int = DEFAULT_MAX_STEPS
    seed: int = 0
    replenish_allowance: bool = True
    visited_cap: int = DEFAULT_VISITED_CAP

    def validate(self) -> None:
        if self.restarts < 0:
            raise ConfigurationError(f"restarts must be >= 0, got {self.restarts}")
        if self.variant not in HC_VARIANTS:
            raise ConfigurationError(
                f"variant must be one of {HC_VARIANTS}, got {self.variant!r}"
            )
        if self.max_steps_per_run < 1:
            raise ConfigurationError(
                f"max_steps_per_run must be >= 1, got {self.max_steps_per_run}"
            )
        if self.visited_cap < 1:
            raise ConfigurationError(f"visited_cap must be >= 1, got {self.visited_cap}")


_PAIR_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    pairs = _PAIR_CACHE.get(n)
    if pairs is None:
        pairs = np.triu_indices(n, k=1)
        _PAIR_CACHE[n] = pairs
    return pairs


def _neighbor_orders(tour: Tour) -> np.ndarray:
    """All transposition neighbors as rows, in lexicographic (i, j) pair order."""
    order = tour.order
    n = order.size
    i, j = _pair_indices(n)
    rows = np.tile(order, (i.size, 1))
    arange = np.arange(i.size)
    rows[arange, i] = order[j]
    rows[arange, j] = order[i]
    return rows


def _row_lengths(instance: Instance, rows: np.ndarray) -> np.ndarray:
    """tour_length of every row, computed with the same sorted accumulation."""
    table = instance.distance_table()
    nxt = np.empty_like(rows)
    nxt[:, :-1] = rows[:, 1:]
    nxt[:, -1] = rows[:, 0]
    edges = table[rows, nxt]
    edges.sort(axis=1)
    return np.cumsum(edges, axis=1)[:, -1]


def _steepest_counted(
    instance: Instance, tour: Tour, forbidden: VisitedSet | None
) -> tuple[Tour, float, int] | None:
    """Best allowed neighbor, its length, and how many neighbors were evaluated."""
    if len(tour) < 2:
        raise ValueError("steepest descent needs a tour over at least two points")
    rows = _neighbor_orders(tour)
    if forbidden is not None and len(forbidden) > 0:
        allowed = np.fromiter(
            (not forbidden._has_key(row.tobytes()) for row in rows),
            dtype=bool,
            count=rows.shape[0],
        )
        if not allowed.any():
            return None
        keep = np.flatnonzero(allowed)
        rows = rows[keep]
    lengths = _row_lengths(instance, rows)
    k = int(np.argmin(lengths))  # first minimum = lexicographically first pair
    return Tour(rows[k]), float(lengths[k]), int(rows.shape[0])


def steepest_step(
    instance: Instance, tour: Tour, forbidden: VisitedSet | None = None
) -> tuple[Tour, float] | None:
    """Shortest transposition neighbor and its length.

    Ties go to the first pair in lexicographic (i, j) order. Neighbors in
    ``forbidden`` are skipped; None means every neighbor was forbidden.
    """
    found = _steepest_counted(instance, tour, forbidden)
    if found is None:
        return None
    return found[0], found[1]


def _climb_baseline(
    instance: Instance,
    start: Tour,
    max_steps: int,
    on_visit: VisitHook | None = None,
) -> tuple[Tour, float, int, int]:
    current = start
    current_length = tour_length(instance, start)
    if on_visit is not None:
        on_visit(current, current_length)
    steps = 0
    evaluations = 0
    while True:
        neighbor, neighbor_length, evaluated = _steepest_counted(instance, current, None)
        evaluations += evaluated
        if not neighbor_length < current_length:
            return current, current_length, steps, evaluations
        if steps >= max_steps:
            raise RunAbortedError(current, current_length, steps, evaluations)
        current, current_length = neighbor, neighbor_length
        steps += 1
        if on_visit is not None:
            on_visit(current, current_length)


def hill_climb_baseline(
    instance: Instance,
    start: Tour,
    max_steps: int = DEFAULT_MAX_STEPS,
    on_visit: VisitHook | None = None,
) -> tuple[Tour, int]:
    """Steepest descent from ``start`` to a local minimum.

    Returns the local minimum and the number of steps taken. Raises
    RunAbortedError if the next improving step would exceed ``max_steps``.
    """
    tour, _, steps, _ = _climb_baseline(instance, start, max_steps, on_visit)
    return tour, steps


def _climb_modified(
    instance: Instance,
    start: Tour,
    visited: VisitedSet,
    max_steps: int,
    replenish_allowance: bool,
    on_visit: VisitHook | None = None,
) -> tuple[Tour, float, int, bool, int]:
    if start in visited:
        return start, tour_length(instance, start), 0, True, 0
    visited.add(start)
    current = start
    current_length = tour_length(instance, start)
    best, best_length = current, current_length
    if on_visit is not None:
        on_visit(current, current_length)
    steps = 0
    evaluations = 0
    allowance_spent = False
    trigger_length = 0.0
    while True:
        found = _steepest_counted(instance, current, visited)
        if found is None:
            break  # every neighbor already visited
        neighbor, neighbor_length, evaluated = found
        evaluations += evaluated
        if neighbor_length < current_length:
            pass
        elif not allowance_spent:
            allowance_spent = True
            trigger_length = current_length
        else:
            break
        if steps >= max_steps:
            raise RunAbortedError(best, best_length, steps, evaluations)
        current, current_length = neighbor, neighbor_length
        steps += 1
        visited.add(current)
        if on_visit is not None:
            on_visit(current, current_length)
        if current_length < best_length:
            best, best_length = current, current_length
        if allowance_spent and replenish_allowance and current_length < trigger_length:
            allowance_spent = False
    return best, best_length, steps, False, evaluations


def hill_climb_modified(
    instance: Instance,
    start: Tour,
    visited: VisitedSet,
    max_steps: int = DEFAULT_MAX_STEPS,
    replenish_allowance: bool = True,
    on_visit: VisitHook | None = None,
) -> tuple[Tour, int, bool]:
    """One climb with a single-downhill-escape allowance and no revisits.

    Returns (best tour seen, steps taken, early_out). early_out is True when
    ``start`` was already in ``visited``; the climb then does no work. Every
    visited permutation is added to ``visited``, which the caller may share
    across restarts.
    """
    best, _, steps, early_out, _ = _climb_modified(
        instance, start, visited, max_steps, replenish_allowance, on_visit
    )
    return best, steps, early_out


def run_hc(instance: Instance, config: HcConfig) -> RunResult:
    """Run 1 + restarts climbs from random starts and keep the best result.

    The modified variant threads one shared VisitedSet through all climbs.
    A climb that exhausts its step budget contributes its best-so-far tour;
    RunAbortedError propagates only if every climb aborts.

    fitness_evaluations counts neighbor evaluations only (start tours and
    early-outs are not neighbor evaluations).
    """
    config.validate()
    if instance.n < 2:
        raise ConfigurationError(f"solver needs at least two points, got {instance.n}")
    rng = make_rng(config.seed)
    started = time.perf_counter()
    modified = config.variant == "modified"
    visited = VisitedSet(config.visited_cap) if modified else None
    best_tour: Tour | None = None
    best_length = np.inf
    total_steps = 0
    total_evaluations = 0
    early_outs = 0
    aborted = 0
    runs = config.restarts + 1
    for _ in range(runs):
        start = random_tour(instance.n, rng)
        try:
            if modified:
                tour, length, steps, early, evaluations = _climb_modified(
                    instance, start, visited, config.max_steps_per_run,
                    config.replenish_allowance,
                )
            else:
                tour, length, steps, evaluations = _climb_baseline(
                    instance, start, config.max_steps_per_run
                )
                early = False
        except RunAbortedError as err:
            aborted += 1
            tour, length = err.best_tour, err.best_length
            steps, evaluations = err.steps, err.evaluations
            early = False
        total_steps += steps
        total_evaluations += evaluations
        early_outs += int(early)
        if length < best_length:
            best_tour, best_length = tour, length
    if aborted == runs:
        raise RunAbortedError(best_tour, float(best_length), total_steps, total_evaluations)
    return RunResult(
        best_tour=best_tour,
        best_length=float(best_length),
        iterations=total_steps,
        fitness_evaluations=total_evaluations,
        wall_time_ms=(time.perf_counter() - started) * 1e3,
        runs=runs,
        early_outs=early_outs,
    )
