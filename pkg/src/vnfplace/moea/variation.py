"""Variation operators and tournament selection for the integer genotype."""

from __future__ import annotations

import numpy as np


def random_placements(rng: np.random.Generator, count: int, m: int, n: int) -> np.ndarray:
    """Uniform random genotypes: entries in {0, ..., n}, 0 = undeployed."""
    return rng.integers(0, n + 1, size=(count, m), dtype=np.int64)


def variation(
    parent_a: np.ndarray,
    parent_b: np.ndarray,
    n_nodes: int,
    crossover_rate: float,
    mutation_rate: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Uniform crossover followed by per-gene reset mutation.

    With probability ``crossover_rate`` each gene comes independently from
    either parent (p=0.5); otherwise children start as parent copies.
    Mutation redraws each gene uniformly from {0, ..., n_nodes} with
    probability ``mutation_rate``.  Both operators are closed over the
    encoding, so children are always valid genotypes.
    """
    m = parent_a.shape[0]
    if rng.random() < crossover_rate:
        swap = rng.random(m) < 0.5
        child_a = np.where(swap, parent_b, parent_a)
        child_b = np.where(swap, parent_a, parent_b)
    else:
        child_a = parent_a.copy()
        child_b = parent_b.copy()
    for child in (child_a, child_b):
        mask = rng.random(m) < mutation_rate
        hits = int(mask.sum())
        if hits:
            child[mask] = rng.integers(0, n_nodes + 1, size=hits, dtype=np.int64)
    return child_a, child_b


def binary_tournament(
    rng: np.random.Generator, ranks: np.ndarray, crowding: np.ndarray | None
) -> int:
    """Pick the better of two uniformly drawn indices.

    Lower rank wins; equal ranks fall back to larger crowding distance when
    available; remaining ties go to the first pick (deterministic).
    """
    i, j = rng.integers(0, ranks.shape[0], size=2)
    if ranks[i] != ranks[j]:
        return int(i if ranks[i] < ranks[j] else j)
    if crowding is not None and crowding[j] > crowding[i]:
        return int(j)
    return int(i)
