"""Epsilon-archive NSGA-II with adaptive restarts and automatic termination.

The driver chains "connected runs": plain constrained NSGA-II executed for a
fixed number of generations while every feasible evaluation is offered to an
epsilon-dominance archive.  After each run the population restarts at
``population_factor * archive_size`` (clamped to [10, 10000]), seeded with
the archive members (the factor makes them ~25% of the restart population)
and topped up with random immigrants.  The search stops when
``stagnation_window`` consecutive connected runs add no new epsilon-box, or
when the evaluation budget runs out, whichever comes first.  The archive
contents are the result.
"""

from __future__ import annotations

import time

import numpy as np

from ..model import FrontPoint, ParetoFront, Scenario
from .archive import EpsilonArchive
from .config import (
    MAX_RESTART_POPULATION,
    MIN_RESTART_POPULATION,
    RunResult,
    SolverConfig,
)
from .engine import (
    EvaluationBudget,
    Individual,
    evaluate_individuals,
    initial_population,
    nsga2_survival,
    run_generations,
)
from .variation import random_placements


def _restart_size(archive_size: int, factor: float) -> int:
    sized = int(round(factor * archive_size))
    return min(MAX_RESTART_POPULATION, max(MIN_RESTART_POPULATION, sized))


def _restart_population(
    scenario: Scenario,
    archive: EpsilonArchive,
    pop_size: int,
    injection_cap: int,
    rng: np.random.Generator,
    budget: EvaluationBudget,
) -> list[Individual]:
    """Archive members plus random immigrants; only immigrants cost budget."""
    members = archive.members
    if len(members) > injection_cap:
        members = sorted(members, key=lambda m: (m.objectives.pair, m.placement))
        members = members[:injection_cap]
    injected = [
        Individual(np.array(m.placement, dtype=np.int64), m.objectives)
        for m in members
    ]
    missing = pop_size - len(injected)
    missing = min(missing, budget.remaining)
    if missing > 0:
        genotypes = random_placements(rng, missing, scenario.m, scenario.n)
        injected.extend(evaluate_individuals(scenario, genotypes, budget))
    return injected


def archive_front(archive: EpsilonArchive) -> ParetoFront:
    return ParetoFront.from_points(
        FrontPoint(m.placement, m.objectives) for m in archive.members
    )


def run_eps_nsga2(scenario: Scenario, cfg: SolverConfig) -> RunResult:
    """Run connected NSGA-II rounds against an epsilon-dominance archive."""
    if cfg.algorithm != "eps-nsga2":
        raise ValueError(f"config selects {cfg.algorithm!r}, not eps-nsga2")
    start = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    budget = EvaluationBudget(cfg.max_evaluations)
    archive = EpsilonArchive(cfg.epsilons)

    progress = {"new_box": False}

    def offer(ind: Individual) -> None:
        outcome = archive.offer(ind.placement, ind.objectives)
        if outcome.new_box:
            progress["new_box"] = True

    pop_size = cfg.population_size
    population = initial_population(
        scenario, cfg, rng, budget, offer=offer, size=pop_size, cap_batches=True
    )
    stagnant = 0
    while True:
        progress["new_box"] = False
        population = run_generations(
            scenario,
            cfg,
            rng,
            population,
            pop_size,
            generations=cfg.run_generations,
            budget=budget,
            survival=nsga2_survival,
            offer=offer,
            cap_batches=True,
        )
        stagnant = 0 if progress["new_box"] else stagnant + 1
        if stagnant >= cfg.stagnation_window or budget.exhausted:
            break
        pop_size = _restart_size(len(archive), cfg.population_factor)
        injection_cap = max(1, int(round(cfg.injection_fraction * pop_size)))
        population = _restart_population(
            scenario, archive, pop_size, injection_cap, rng, budget
        )

    elapsed_ms = (time.perf_counter() - start) * 1000.0
    return RunResult(
        "eps-nsga2", cfg.seed, budget.used, elapsed_ms, archive_front(archive)
    )
