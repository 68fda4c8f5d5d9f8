"""Problem model for capacity-constrained VNF placement across SDN domain nodes.

A problem instance pairs M VNF demand rows (CPU cores, memory, storage) with
N node capacity rows and an M x N per-placement energy matrix.  A candidate
solution is an integer vector of length M: entry i is 0 when VNF i stays
undeployed, or k >= 1 when VNF i runs on node k-1.  This compressed encoding
guarantees each VNF occupies at most one node, so the only constraints left
to check are the 3N per-node capacity limits.

Objectives are reported in minimization form: (-deployed_count, total_energy),
together with an aggregate capacity-violation score that is zero exactly for
feasible placements.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

RESOURCES = ("cores", "memory", "storage")


@dataclass(frozen=True)
class VnfSpec:
    """Resource demand of one VNF: CPU cores, memory (GB), disk storage (GB)."""

    cores: int
    memory: float
    storage: float

    def __post_init__(self):
        if self.cores < 1:
            raise ValueError(f"vnf cores must be >= 1, got {self.cores}")
        if self.memory <= 0:
            raise ValueError(f"vnf memory must be > 0, got {self.memory}")
        if self.storage <= 0:
            raise ValueError(f"vnf storage must be > 0, got {self.storage}")


@dataclass(frozen=True)
class NodeSpec:
    """Capacity of one domain node: CPU cores, memory (GB), disk storage (GB)."""

    cores: int
    memory: float
    storage: float

    def __post_init__(self):
        if self.cores <= 0:
            raise ValueError(f"node core capacity must be > 0, got {self.cores}")
        if self.memory <= 0:
            raise ValueError(f"node memory capacity must be > 0, got {self.memory}")
        if self.storage <= 0:
            raise ValueError(f"node storage capacity must be > 0, got {self.storage}")


@dataclass(frozen=True, eq=False)
class Scenario:
    """A full placement instance: VNF demands, node capacities, energy matrix.

    ``energy[i][j]`` is the energy cost (kWh) of running VNF i on node j.
    VNF and node identities are their positions in the two lists.
    """

    vnfs: tuple[VnfSpec, ...]
    nodes: tuple[NodeSpec, ...]
    energy: np.ndarray

    def __init__(self, vnfs: Iterable[VnfSpec], nodes: Iterable[NodeSpec], energy):
        object.__setattr__(self, "vnfs", tuple(vnfs))
        object.__setattr__(self, "nodes", tuple(nodes))
        mat = np.array(energy, dtype=np.float64)
        mat.setflags(write=False)
        object.__setattr__(self, "energy", mat)
        if not self.vnfs:
            raise ValueError("scenario needs at least one VNF")
        if not self.nodes:
            raise ValueError("scenario needs at least one node")
        if mat.shape != (len(self.vnfs), len(self.nodes)):
            raise ValueError(
                f"energy matrix shape {mat.shape} does not match "
                f"{len(self.vnfs)} VNFs x {len(self.nodes)} nodes"
            )
        if not np.all(np.isfinite(mat)) or np.any(mat < 0):
            raise ValueError("energy entries must be finite and >= 0")

    @property
    def m(self) -> int:
        return len(self.vnfs)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @cached_property
    def demands(self) -> dict[str, np.ndarray]:
        """Per-resource demand vectors, length M, float64."""
        return {
            r: np.array([getattr(v, r) for v in self.vnfs], dtype=np.float64)
            for r in RESOURCES
        }

    @cached_property
    def capacities(self) -> dict[str, np.ndarray]:
        """Per-resource capacity vectors, length N, float64."""
        return {
            r: np.array([getattr(nd, r) for nd in self.nodes], dtype=np.float64)
            for r in RESOURCES
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.vnfs == other.vnfs
            and self.nodes == other.nodes
            and np.array_equal(self.energy, other.energy)
        )


class ObjectiveVector(NamedTuple):
    """Minimization-form objectives plus aggregate constraint violation.

    ``neg_deployed`` is minus the number of deployed VNFs (so minimizing it
    maximizes deployments); ``violation`` is 0 exactly for feasible solutions.
    """

    neg_deployed: int
    energy: float
    violation: float

    @property
    def feasible(self) -> bool:
        return self.violation == 0.0

    @property
    def pair(self) -> tuple[float, float]:
        """The two optimization objectives, violation excluded."""
        return (self.neg_deployed, self.energy)


class FrontPoint(NamedTuple):
    """One nondominated solution: genotype plus its cached objectives."""

    placement: tuple[int, ...]
    objectives: ObjectiveVector

    @property
    def deployed(self) -> int:
        return -self.objectives.neg_deployed


@dataclass(frozen=True)
class ParetoFront:
    """A mutually nondominated set of (placement, objectives) pairs.

    Points are kept sorted lexicographically by (neg_deployed, energy), i.e.
    highest deployment count first.
    """

    points: tuple[FrontPoint, ...]

    @staticmethod
    def from_points(points: Iterable[FrontPoint]) -> "ParetoFront":
        ordered = sorted(points, key=lambda p: (p.objectives.pair, p.placement))
        return ParetoFront(tuple(ordered))

    def objective_pairs(self) -> list[tuple[float, float]]:
        return [p.objectives.pair for p in self.points]

    def objective_set(self) -> set[tuple[float, float]]:
        return set(self.objective_pairs())

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __bool__(self) -> bool:
        return bool(self.points)


@dataclass(frozen=True)
class ProblemDimensions:
    """Size of the equivalent binary-matrix formulation.

    ``num_decision_variables`` counts the M*N placement indicators;
    ``num_constraints`` counts one single-placement constraint per VNF plus
    three capacity constraints (cores, memory, storage) per node: M + 3N.
    """

    num_decision_variables: int
    num_constraints: int


def problem_dimensions(m: int, n: int) -> ProblemDimensions:
    """Decision-variable and constraint counts for an M x N instance."""
    if m < 1 or n < 1:
        raise ValueError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    return ProblemDimensions(m * n, m + 3 * n)


def dimensions_of(scenario: Scenario) -> ProblemDimensions:
    return problem_dimensions(scenario.m, scenario.n)


def validate_placement(scenario: Scenario, placement) -> np.ndarray:
    """Coerce to an int64 vector and reject anything outside the encoding."""
    arr = np.asarray(placement)
    if arr.ndim != 1 or arr.shape[0] != scenario.m:
        raise ValueError(
            f"placement length {arr.shape} does not match {scenario.m} VNFs"
        )
    if not np.issubdtype(arr.dtype, np.integer):
        as_int = arr.astype(np.int64)
        if not np.array_equal(as_int, arr):
            raise ValueError("placement entries must be integers")
        arr = as_int
    else:
        arr = arr.astype(np.int64)
    if arr.min(initial=0) < 0 or arr.max(initial=0) > scenario.n:
        raise ValueError(
            f"placement entries must lie in 0..{scenario.n} "
            f"(0 = undeployed), got range [{arr.min()}, {arr.max()}]"
        )
    return arr


def node_loads(scenario: Scenario, placements: np.ndarray) -> dict[str, np.ndarray]:
    """Per-node resource loads for a batch of placements.

    ``placements`` is a (K, M) int array; returns (K, N) load arrays keyed
    by resource name.  Summation order is fixed by flat index, so results
    are deterministic.
    """
    k, m = placements.shape
    n = scenario.n
    # bincount over (run, node) flat indices; slot 0 of each run collects
    # the undeployed entries and is dropped.
    flat = (np.arange(k)[:, None] * (n + 1) + placements).ravel()
    loads = {}
    for r in RESOURCES:
        weights = np.broadcast_to(scenario.demands[r], (k, m)).ravel()
        counts = np.bincount(flat, weights=weights, minlength=k * (n + 1))
        loads[r] = counts.reshape(k, n + 1)[:, 1:]
    return loads


def evaluate_batch(
    scenario: Scenario, placements: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate a (K, M) batch of placements.

    Returns (neg_deployed, energy, violation) arrays of length K.  The
    violation is the capacity-normalized overshoot summed over nodes and
    resources: sum_j,r max(0, load_jr - cap_jr) / cap_jr.
    """
    placements = np.atleast_2d(np.asarray(placements, dtype=np.int64))
    k, m = placements.shape
    if m != scenario.m:
        raise ValueError(f"placement width {m} does not match {scenario.m} VNFs")

    deployed_mask = placements > 0
    neg_deployed = -deployed_mask.sum(axis=1)

    cols = np.maximum(placements - 1, 0)
    picked = scenario.energy[np.arange(m)[None, :], cols]
    energy = np.where(deployed_mask, picked, 0.0).sum(axis=1)

    violation = np.zeros(k, dtype=np.float64)
    loads = node_loads(scenario, placements)
    for r in RESOURCES:
        cap = scenario.capacities[r]
        overshoot = np.maximum(0.0, loads[r] - cap[None, :])
        violation += (overshoot / cap[None, :]).sum(axis=1)
    return neg_deployed.astype(np.int64), energy, violation


def evaluate(scenario: Scenario, placement) -> ObjectiveVector:
    """Objectives and violation of one placement vector."""
    arr = validate_placement(scenario, placement)
    neg, en, viol = evaluate_batch(scenario, arr[None, :])
    return ObjectiveVector(int(neg[0]), float(en[0]), float(viol[0]))


def violation_of(scenario: Scenario, placement) -> float:
    """Aggregate capacity violation; 0 exactly when all node limits hold."""
    return evaluate(scenario, placement).violation


def expand_to_matrix(placement, n: int) -> np.ndarray:
    """Unfold the integer encoding into the M x N binary placement matrix."""
    arr = np.asarray(placement, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("placement must be a vector")
    if arr.min(initial=0) < 0 or arr.max(initial=0) > n:
        raise ValueError(f"placement entries must lie in 0..{n}")
    matrix = np.zeros((arr.shape[0], n), dtype=np.int64)
    rows = np.nonzero(arr)[0]
    matrix[rows, arr[rows] - 1] = 1
    return matrix


def compress_matrix(matrix) -> np.ndarray:
    """Inverse of expand_to_matrix; rejects matrices with multi-node rows."""
    mat = np.asarray(matrix, dtype=np.int64)
    if mat.ndim != 2:
        raise ValueError("expected a 2-D binary matrix")
    if not np.isin(mat, (0, 1)).all():
        raise ValueError("matrix entries must be 0 or 1")
    row_sums = mat.sum(axis=1)
    if np.any(row_sums > 1):
        raise ValueError("a VNF may occupy at most one node (row sum > 1)")
    placement = np.zeros(mat.shape[0], dtype=np.int64)
    rows, cols = np.nonzero(mat)
    placement[rows] = cols + 1
    return placement


def max_energy_bound(scenario: Scenario) -> float:
    """Upper bound on any placement's energy: sum of per-VNF row maxima."""
    return float(scenario.energy.max(axis=1).sum())
