"""Solver configuration and run results."""

from __future__ import annotations

from dataclasses import dataclass

from ..model import ParetoFront

ALGORITHMS = ("nsga2", "nsga3", "eps-nsga2")

# Restart population size bounds for the epsilon-archive driver.
MIN_RESTART_POPULATION = 10
MAX_RESTART_POPULATION = 10_000


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by the three drivers.

    ``mutation_rate=None`` resolves to 1/M for the scenario being solved.
    The ``population_factor`` / ``injection_fraction`` / ``stagnation_window``
    and ``run_generations`` fields only affect the epsilon-archive driver:
    after each connected run it restarts with a population of
    ``population_factor * archive_size`` (clamped to [10, 10000]) seeded with
    the archive members, and stops once ``stagnation_window`` consecutive
    connected runs add no new epsilon-box.
    """

    algorithm: str
    seed: int = 0
    max_evaluations: int = 10_000
    population_size: int = 100
    crossover_rate: float = 0.9
    mutation_rate: float | None = None
    epsilons: tuple[float, float] = (1.0, 0.05)
    population_factor: float = 4.0
    injection_fraction: float = 0.25
    stagnation_window: int = 2
    run_generations: int = 20

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.max_evaluations < self.population_size:
            raise ValueError(
                f"max_evaluations ({self.max_evaluations}) must be >= "
                f"population_size ({self.population_size})"
            )
        for name in ("crossover_rate", "mutation_rate"):
            val = getattr(self, name)
            if val is not None and not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {val}")
        if len(self.epsilons) != 2 or any(e <= 0 for e in self.epsilons):
            raise ValueError(f"epsilons must be two positive numbers, got {self.epsilons}")
        if self.population_factor <= 0:
            raise ValueError("population_factor must be > 0")
        if not 0.0 <= self.injection_fraction <= 1.0:
            raise ValueError("injection_fraction must lie in [0, 1]")
        if self.stagnation_window < 1:
            raise ValueError("stagnation_window must be >= 1")
        if self.run_generations < 1:
            raise ValueError("run_generations must be >= 1")

    def resolved_mutation_rate(self, m: int) -> float:
        return self.mutation_rate if self.mutation_rate is not None else 1.0 / m


@dataclass(frozen=True)
class RunResult:
    """Outcome of one solver run.

    ``evaluations`` counts objective evaluations exactly; ``elapsed_ms`` is
    measured wall-clock time and is the only field excluded from determinism
    guarantees.
    """

    algorithm: str
    seed: int
    evaluations: int
    elapsed_ms: float
    front: ParetoFront
