"""Dominance relations, fast nondominated sorting, and crowding distance."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..model import ObjectiveVector


def pareto_dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """Minimization dominance: a <= b componentwise with one strict."""
    not_worse = all(x <= y for x, y in zip(a, b))
    strictly_better = any(x < y for x, y in zip(a, b))
    return not_worse and strictly_better


def constrained_dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    """Feasibility-first dominance.

    A feasible solution dominates any infeasible one; among infeasible
    solutions the smaller aggregate violation dominates; among feasible
    ones plain Pareto dominance on (neg_deployed, energy) applies.
    """
    if a.feasible and not b.feasible:
        return True
    if not a.feasible and b.feasible:
        return False
    if not a.feasible:
        return a.violation < b.violation
    return pareto_dominates(a.pair, b.pair)


def constrained_sort_keys(objectives: np.ndarray, violations: np.ndarray) -> np.ndarray:
    """Map (objectives, violation) to plain 2-D points whose Pareto dominance
    equals constrained dominance.

    Infeasible points collapse to (B + v, B + v) with B larger than every
    feasible coordinate, so any feasible point dominates them and among
    themselves only the violation decides.
    """
    keys = np.array(objectives, dtype=np.float64, copy=True)
    infeasible = violations > 0
    if infeasible.any():
        feasible_vals = keys[~infeasible]
        base = float(np.abs(feasible_vals).max()) + 1.0 if feasible_vals.size else 1.0
        keys[infeasible] = base + violations[infeasible, None]
    return keys


def dominance_matrix(points: np.ndarray) -> np.ndarray:
    """Boolean matrix D with D[i, j] true iff point i dominates point j."""
    le = (points[:, None, :] <= points[None, :, :]).all(axis=2)
    lt = (points[:, None, :] < points[None, :, :]).any(axis=2)
    return le & lt


def fast_nondominated_sort(points: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
    """Partition minimization points into nondominated fronts.

    Returns (fronts, ranks): fronts is a list of index arrays, ranks the
    per-point front number.  Rank r points are nondominated once all ranks
    < r are removed.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if n == 0:
        return [], np.zeros(0, dtype=np.int64)
    dom = dominance_matrix(points)
    dominator_count = dom.sum(axis=0)
    ranks = np.full(n, -1, dtype=np.int64)
    fronts: list[np.ndarray] = []
    current = np.flatnonzero(dominator_count == 0)
    rank = 0
    while current.size:
        ranks[current] = rank
        fronts.append(current)
        dominator_count = dominator_count - dom[current].sum(axis=0)
        rank += 1
        current = np.flatnonzero((dominator_count == 0) & (ranks == -1))
    return fronts, ranks


def sort_individuals(
    objectives: np.ndarray, violations: np.ndarray
) -> tuple[list[np.ndarray], np.ndarray]:
    """Fast nondominated sort under constrained dominance."""
    keys = constrained_sort_keys(objectives, violations)
    return fast_nondominated_sort(keys)


def crowding_distance(front_objectives: np.ndarray) -> np.ndarray:
    """Crowding distances for one mutually nondominated front.

    Per objective the extreme points get +inf and interior points accumulate
    (next - prev) / (max - min); objectives with zero range are skipped.
    Values are invariant under permutation of the front.
    """
    front_objectives = np.asarray(front_objectives, dtype=np.float64)
    size = front_objectives.shape[0]
    dist = np.zeros(size, dtype=np.float64)
    if size <= 2:
        dist[:] = np.inf
        return dist
    for m in range(front_objectives.shape[1]):
        vals = front_objectives[:, m]
        order = np.argsort(vals, kind="stable")
        lo, hi = vals[order[0]], vals[order[-1]]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        if hi > lo:
            gaps = (vals[order[2:]] - vals[order[:-2]]) / (hi - lo)
            dist[order[1:-1]] += gaps
    return dist
