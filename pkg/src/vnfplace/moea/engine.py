"""Shared generational machinery and the NSGA-II driver.

Drivers are deterministic per (scenario, config): one PCG64 stream drives
initialization, selection, and variation, and offspring are evaluated in
batch with order fixed by construction index.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..model import (
    FrontPoint,
    ObjectiveVector,
    ParetoFront,
    Scenario,
    evaluate_batch,
)
from .config import RunResult, SolverConfig
from .sorting import crowding_distance, fast_nondominated_sort, sort_individuals
from .variation import binary_tournament, random_placements, variation


@dataclass
class Individual:
    """A genotype with cached objectives and NSGA bookkeeping."""

    placement: np.ndarray
    objectives: ObjectiveVector
    rank: int = 0
    crowding: float = 0.0


# Survival policies take the combined parent+offspring pool (already ranked)
# and return the next generation.
SurvivalFn = Callable[[list[Individual], int, np.random.Generator], list[Individual]]
OfferFn = Callable[[Individual], None]


@dataclass
class EvaluationBudget:
    """Exact accounting of objective evaluations against a hard cap."""

    limit: int
    used: int = 0

    @property
    def remaining(self) -> int:
        return max(0, self.limit - self.used)

    @property
    def exhausted(self) -> bool:
        return self.used >= self.limit


def evaluate_individuals(
    scenario: Scenario,
    placements: np.ndarray,
    budget: EvaluationBudget,
    offer: OfferFn | None = None,
) -> list[Individual]:
    """Batch-evaluate genotypes, charge the budget, and report each result."""
    if placements.shape[0] == 0:
        return []
    neg, energy, viol = evaluate_batch(scenario, placements)
    budget.used += placements.shape[0]
    individuals = []
    for row, nd, en, vi in zip(placements, neg, energy, viol):
        ind = Individual(row.copy(), ObjectiveVector(int(nd), float(en), float(vi)))
        if offer is not None:
            offer(ind)
        individuals.append(ind)
    return individuals


def assign_ranks_and_crowding(population: list[Individual]) -> None:
    """Constrained-dominance ranks plus per-front crowding on raw objectives."""
    pairs = np.array([ind.objectives.pair for ind in population], dtype=np.float64)
    viols = np.array([ind.objectives.violation for ind in population], dtype=np.float64)
    fronts, ranks = sort_individuals(pairs, viols)
    for ind, rank in zip(population, ranks):
        ind.rank = int(rank)
    for front in fronts:
        dist = crowding_distance(pairs[front])
        for idx, d in zip(front, dist):
            population[idx].crowding = float(d)


def nsga2_survival(
    pool: list[Individual], pop_size: int, rng: np.random.Generator
) -> list[Individual]:
    """Fill by rank, break the straddling front by crowding distance."""
    survivors: list[Individual] = []
    by_rank: dict[int, list[int]] = {}
    for idx, ind in enumerate(pool):
        by_rank.setdefault(ind.rank, []).append(idx)
    for rank in sorted(by_rank):
        front = by_rank[rank]
        if len(survivors) + len(front) <= pop_size:
            survivors.extend(pool[i] for i in front)
        else:
            need = pop_size - len(survivors)
            crowd = np.array([pool[i].crowding for i in front])
            order = np.argsort(-crowd, kind="stable")
            survivors.extend(pool[front[i]] for i in order[:need])
        if len(survivors) >= pop_size:
            break
    return survivors


def make_offspring(
    population: list[Individual],
    count: int,
    scenario: Scenario,
    cfg: SolverConfig,
    mutation_rate: float,
    rng: np.random.Generator,
    use_crowding: bool = True,
) -> np.ndarray:
    """Produce ``count`` children via binary tournaments and variation."""
    ranks = np.array([ind.rank for ind in population])
    crowding = (
        np.array([ind.crowding for ind in population]) if use_crowding else None
    )
    children: list[np.ndarray] = []
    while len(children) < count:
        a = population[binary_tournament(rng, ranks, crowding)].placement
        b = population[binary_tournament(rng, ranks, crowding)].placement
        child_a, child_b = variation(
            a, b, scenario.n, cfg.crossover_rate, mutation_rate, rng
        )
        children.append(child_a)
        if len(children) < count:
            children.append(child_b)
    return np.stack(children)


def run_generations(
    scenario: Scenario,
    cfg: SolverConfig,
    rng: np.random.Generator,
    population: list[Individual],
    pop_size: int,
    generations: int,
    budget: EvaluationBudget,
    survival: SurvivalFn,
    offer: OfferFn | None = None,
    use_crowding: bool = True,
    cap_batches: bool = False,
) -> list[Individual]:
    """Run the (mu + lambda) generational loop for up to ``generations`` steps.

    When ``cap_batches`` is set, offspring batches shrink to the remaining
    budget so the cap is never exceeded; otherwise the final generation may
    overshoot by at most ``pop_size - 1`` evaluations.
    """
    mutation_rate = cfg.resolved_mutation_rate(scenario.m)
    assign_ranks_and_crowding(population)
    for _ in range(generations):
        if budget.exhausted:
            break
        batch = min(pop_size, budget.remaining) if cap_batches else pop_size
        children = make_offspring(
            population, batch, scenario, cfg, mutation_rate, rng, use_crowding
        )
        offspring = evaluate_individuals(scenario, children, budget, offer)
        pool = population + offspring
        assign_ranks_and_crowding(pool)
        population = survival(pool, pop_size, rng)
    return population


def extract_front(population: list[Individual]) -> ParetoFront:
    """Feasible nondominated subset, deduplicated by objective vector."""
    feasible = [ind for ind in population if ind.objectives.feasible]
    if not feasible:
        return ParetoFront(())
    pairs = np.array([ind.objectives.pair for ind in feasible], dtype=np.float64)
    _, ranks = fast_nondominated_sort(pairs)
    best = [ind for ind, rank in zip(feasible, ranks) if rank == 0]
    seen: dict[tuple[float, float], FrontPoint] = {}
    for ind in sorted(
        best, key=lambda i: (i.objectives.pair, tuple(i.placement.tolist()))
    ):
        key = ind.objectives.pair
        if key not in seen:
            seen[key] = FrontPoint(tuple(ind.placement.tolist()), ind.objectives)
    return ParetoFront.from_points(seen.values())


def initial_population(
    scenario: Scenario,
    cfg: SolverConfig,
    rng: np.random.Generator,
    budget: EvaluationBudget,
    offer: OfferFn | None = None,
    size: int | None = None,
    cap_batches: bool = False,
) -> list[Individual]:
    size = cfg.population_size if size is None else size
    if cap_batches:
        size = min(size, budget.remaining)
    genotypes = random_placements(rng, size, scenario.m, scenario.n)
    return evaluate_individuals(scenario, genotypes, budget, offer)


def run_nsga2(scenario: Scenario, cfg: SolverConfig) -> RunResult:
    """Constrained NSGA-II until the evaluation budget is spent."""
    if cfg.algorithm != "nsga2":
        raise ValueError(f"config selects {cfg.algorithm!r}, not nsga2")
    start = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    budget = EvaluationBudget(cfg.max_evaluations)
    population = initial_population(scenario, cfg, rng, budget)
    population = run_generations(
        scenario,
        cfg,
        rng,
        population,
        cfg.population_size,
        generations=cfg.max_evaluations,  # budget is the real stop condition
        budget=budget,
        survival=nsga2_survival,
    )
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    return RunResult("nsga2", cfg.seed, budget.used, elapsed_ms, extract_front(population))
