"""NSGA-III driver: reference-direction niching replaces crowding distance."""

from __future__ import annotations

import time

import numpy as np

from ..model import Scenario
from .config import RunResult, SolverConfig
from .engine import (
    EvaluationBudget,
    Individual,
    extract_front,
    initial_population,
    run_generations,
)


def reference_points(divisions: int) -> np.ndarray:
    """Das-Dennis points on the 2-objective simplex: (i/H, 1 - i/H)."""
    if divisions < 1:
        raise ValueError("need at least one division")
    ticks = np.arange(divisions + 1) / divisions
    return np.column_stack([ticks, 1.0 - ticks])


def divisions_for(population_size: int) -> int:
    """Largest H with H + 1 points not exceeding the population size."""
    return max(1, population_size - 1)


def normalize_objectives(pairs: np.ndarray) -> np.ndarray:
    """Translate by the ideal point and scale by intercepts.

    Extreme points per axis minimize an achievement scalarizing function with
    the axis-aligned weight; the intercepts come from the line through them.
    Degenerate geometry falls back to the per-axis range (or 1 where flat).
    """
    ideal = pairs.min(axis=0)
    shifted = pairs - ideal
    extremes = np.empty((2, 2))
    for axis in range(2):
        weights = np.full(2, 1e-6)
        weights[axis] = 1.0
        asf = (shifted / weights).max(axis=1)
        extremes[axis] = shifted[np.argmin(asf)]

    intercepts = None
    # line through the two extreme points: x/a1 + y/a2 = 1
    det = extremes[0, 0] * extremes[1, 1] - extremes[1, 0] * extremes[0, 1]
    if abs(det) > 1e-12:
        b = np.linalg.solve(extremes, np.ones(2))
        if np.all(b > 1e-12):
            intercepts = 1.0 / b
    if intercepts is None:
        intercepts = shifted.max(axis=0)
    intercepts = np.where(intercepts > 1e-12, intercepts, 1.0)
    return shifted / intercepts


def associate(normalized: np.ndarray, refs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closest reference direction per point by perpendicular distance."""
    unit = refs / np.linalg.norm(refs, axis=1, keepdims=True)
    along = normalized @ unit.T  # (points, refs)
    proj = along[:, :, None] * unit[None, :, :]
    perp = np.linalg.norm(normalized[:, None, :] - proj, axis=2)
    nearest = perp.argmin(axis=1)
    return nearest, perp[np.arange(normalized.shape[0]), nearest]


def niche_select(
    selected: list[int],
    candidates: list[int],
    need: int,
    pairs: np.ndarray,
    refs: np.ndarray,
    rng: np.random.Generator,
) -> list[int]:
    """Pick ``need`` members of the straddling front by reference-point niching.

    Niche counts start from the already selected individuals; the emptiest
    reference direction is served first, preferring the candidate closest to
    it when the niche is empty and a random associated candidate otherwise.
    """
    involved = np.array(selected + candidates, dtype=np.int64)
    normalized = normalize_objectives(pairs[involved])
    nearest, distance = associate(normalized, refs)
    ref_of = dict(zip(involved.tolist(), nearest.tolist()))
    dist_of = dict(zip(involved.tolist(), distance.tolist()))

    niche_count = np.zeros(refs.shape[0], dtype=np.int64)
    for idx in selected:
        niche_count[ref_of[idx]] += 1

    pool = list(candidates)
    active = np.ones(refs.shape[0], dtype=bool)
    picked: list[int] = []
    while len(picked) < need:
        counts = np.where(active, niche_count, np.iinfo(np.int64).max)
        lowest = counts.min()
        options = np.flatnonzero(counts == lowest)
        ref = int(options[rng.integers(0, options.shape[0])])
        assoc = [idx for idx in pool if ref_of[idx] == ref]
        if not assoc:
            active[ref] = False
            continue
        if niche_count[ref] == 0:
            chosen = min(assoc, key=lambda idx: (dist_of[idx], idx))
        else:
            chosen = assoc[int(rng.integers(0, len(assoc)))]
        picked.append(chosen)
        pool.remove(chosen)
        niche_count[ref] += 1
    return picked


def nsga3_survival_factory(refs: np.ndarray):
    def survival(
        pool: list[Individual], pop_size: int, rng: np.random.Generator
    ) -> list[Individual]:
        by_rank: dict[int, list[int]] = {}
        for idx, ind in enumerate(pool):
            by_rank.setdefault(ind.rank, []).append(idx)
        chosen: list[int] = []
        for rank in sorted(by_rank):
            front = by_rank[rank]
            if len(chosen) + len(front) <= pop_size:
                chosen.extend(front)
                if len(chosen) == pop_size:
                    break
                continue
            need = pop_size - len(chosen)
            if all(pool[i].objectives.violation > 0 for i in front):
                # infeasible tier: niching in objective space is meaningless
                order = sorted(front, key=lambda i: (pool[i].objectives.violation, i))
                chosen.extend(order[:need])
                break
            pairs = np.array([ind.objectives.pair for ind in pool], dtype=np.float64)
            chosen.extend(niche_select(chosen, front, need, pairs, refs, rng))
            break
        return [pool[i] for i in chosen]

    return survival


def run_nsga3(scenario: Scenario, cfg: SolverConfig) -> RunResult:
    """Constrained NSGA-III with axis-normalized reference-point niching."""
    if cfg.algorithm != "nsga3":
        raise ValueError(f"config selects {cfg.algorithm!r}, not nsga3")
    start = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    budget = EvaluationBudget(cfg.max_evaluations)
    refs = reference_points(divisions_for(cfg.population_size))
    population = initial_population(scenario, cfg, rng, budget)
    population = run_generations(
        scenario,
        cfg,
        rng,
        population,
        cfg.population_size,
        generations=cfg.max_evaluations,
        budget=budget,
        survival=nsga3_survival_factory(refs),
        use_crowding=False,
    )
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    return RunResult("nsga3", cfg.seed, budget.used, elapsed_ms, extract_front(population))
