"""Seeded random instance generation and JSON persistence.

Generation is a pure function of its config: each field draws from its own
RNG stream derived from the master seed with a fixed spawn key, so adding a
field later can never perturb the draws of existing fields.

Scenario JSON schema (exact field names):

    {"vnfs":  [{"cores": int, "memory": float, "storage": float}, ...],
     "nodes": [{"cores": int, "memory": float, "storage": float}, ...],
     "energy": [[float, ...], ...]}

Front JSON schema: a list of
    {"placement": [int, ...], "deployed": int, "energy": float}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import FrontPoint, NodeSpec, ObjectiveVector, ParetoFront, Scenario, VnfSpec

# Spawn keys of the per-field RNG streams.  Append only; never renumber.
STREAM_VNF_CORES = 0
STREAM_VNF_MEMORY = 1
STREAM_VNF_STORAGE = 2
STREAM_NODE_CORES = 3
STREAM_NODE_MEMORY = 4
STREAM_NODE_STORAGE = 5
STREAM_ENERGY = 6


class ScenarioFormatError(ValueError):
    """A scenario or front document violates the schema; names the field."""


@dataclass(frozen=True)
class GeneratorConfig:
    """Ranges for uniform instance sampling.

    Integer ranges are inclusive on both ends; float ranges are sampled
    uniformly.  Defaults size nodes so that each can host a handful of VNFs
    but capacity constraints stay active on crowded nodes.
    """

    m: int
    n: int
    seed: int
    core_demand: tuple[int, int] = (1, 8)
    memory_demand: tuple[float, float] = (1.0, 16.0)
    storage_demand: tuple[float, float] = (10.0, 200.0)
    energy_range: tuple[float, float] = (0.5, 5.0)
    core_capacity: tuple[int, int] = (16, 64)
    memory_capacity: tuple[float, float] = (32.0, 256.0)
    storage_capacity: tuple[float, float] = (500.0, 5000.0)

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        for name, lo_min in [
            ("core_demand", 1),
            ("memory_demand", 0),
            ("storage_demand", 0),
            ("energy_range", 0),
            ("core_capacity", 1),
            ("memory_capacity", 0),
            ("storage_capacity", 0),
        ]:
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty: [{lo}, {hi}]")
            if lo < lo_min:
                raise ValueError(f"{name} lower bound must be >= {lo_min}, got {lo}")
        # demand/capacity lower bounds of 0 would break spec invariants
        for name in ("memory_demand", "storage_demand", "memory_capacity", "storage_capacity"):
            if getattr(self, name)[0] <= 0:
                raise ValueError(f"{name} lower bound must be > 0")


def _stream(cfg: GeneratorConfig, key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed, spawn_key=(key,))))


def _ints(cfg: GeneratorConfig, key: int, rng_range: tuple[int, int], size: int) -> np.ndarray:
    lo, hi = rng_range
    return _stream(cfg, key).integers(lo, hi, size=size, endpoint=True)


def _floats(cfg: GeneratorConfig, key: int, rng_range: tuple[float, float], size: int) -> np.ndarray:
    lo, hi = rng_range
    return _stream(cfg, key).uniform(lo, hi, size=size)


def generate(cfg: GeneratorConfig) -> Scenario:
    """Draw a scenario; identical configs give identical scenarios."""
    vnf_cores = _ints(cfg, STREAM_VNF_CORES, cfg.core_demand, cfg.m)
    vnf_mem = _floats(cfg, STREAM_VNF_MEMORY, cfg.memory_demand, cfg.m)
    vnf_sto = _floats(cfg, STREAM_VNF_STORAGE, cfg.storage_demand, cfg.m)
    node_cores = _ints(cfg, STREAM_NODE_CORES, cfg.core_capacity, cfg.n)
    node_mem = _floats(cfg, STREAM_NODE_MEMORY, cfg.memory_capacity, cfg.n)
    node_sto = _floats(cfg, STREAM_NODE_STORAGE, cfg.storage_capacity, cfg.n)
    energy = _floats(cfg, STREAM_ENERGY, cfg.energy_range, cfg.m * cfg.n).reshape(cfg.m, cfg.n)

    vnfs = [
        VnfSpec(int(c), float(mem), float(sto))
        for c, mem, sto in zip(vnf_cores, vnf_mem, vnf_sto)
    ]
    nodes = [
        NodeSpec(int(c), float(mem), float(sto))
        for c, mem, sto in zip(node_cores, node_mem, node_sto)
    ]
    return Scenario(vnfs, nodes, energy)


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "vnfs": [{"cores": v.cores, "memory": v.memory, "storage": v.storage} for v in s.vnfs],
        "nodes": [{"cores": n.cores, "memory": n.memory, "storage": n.storage} for n in s.nodes],
        "energy": [list(row) for row in s.energy.tolist()],
    }


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise ScenarioFormatError(f"missing field '{key}' in {where}")
    return doc[key]


def _spec_row(row, idx: int, kind: str, cls):
    if not isinstance(row, dict):
        raise ScenarioFormatError(f"{kind}[{idx}] must be an object")
    where = f"{kind}[{idx}]"
    cores = _require(row, "cores", where)
    memory = _require(row, "memory", where)
    storage = _require(row, "storage", where)
    if not isinstance(cores, int) or isinstance(cores, bool):
        raise ScenarioFormatError(f"{where}.cores must be an integer, got {cores!r}")
    for name, val in (("memory", memory), ("storage", storage)):
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ScenarioFormatError(f"{where}.{name} must be a number, got {val!r}")
    try:
        return cls(cores, float(memory), float(storage))
    except ValueError as exc:
        raise ScenarioFormatError(f"{where}: {exc}") from exc


def scenario_from_dict(doc) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioFormatError("scenario document must be a JSON object")
    vnf_rows = _require(doc, "vnfs", "scenario")
    node_rows = _require(doc, "nodes", "scenario")
    energy = _require(doc, "energy", "scenario")
    if not isinstance(vnf_rows, list) or not vnf_rows:
        raise ScenarioFormatError("'vnfs' must be a non-empty list")
    if not isinstance(node_rows, list) or not node_rows:
        raise ScenarioFormatError("'nodes' must be a non-empty list")
    vnfs = [_spec_row(r, i, "vnfs", VnfSpec) for i, r in enumerate(vnf_rows)]
    nodes = [_spec_row(r, i, "nodes", NodeSpec) for i, r in enumerate(node_rows)]

    if not isinstance(energy, list) or len(energy) != len(vnfs):
        raise ScenarioFormatError(
            f"'energy' must have {len(vnfs)} rows, got "
            f"{len(energy) if isinstance(energy, list) else type(energy).__name__}"
        )
    for i, row in enumerate(energy):
        if not isinstance(row, list) or len(row) != len(nodes):
            raise ScenarioFormatError(f"energy[{i}] must have {len(nodes)} columns")
        for j, val in enumerate(row):
            if not isinstance(val, (int, float)) or isinstance(val, bool):
                raise ScenarioFormatError(f"energy[{i}][{j}] must be a number, got {val!r}")
            if val < 0:
                raise ScenarioFormatError(f"energy[{i}][{j}] must be >= 0, got {val}")
    return Scenario(vnfs, nodes, energy)


def save_scenario(s: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n")


def load_scenario(path) -> Scenario:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"not valid JSON: {exc}") from exc
    return scenario_from_dict(doc)


def front_to_dicts(front: ParetoFront) -> list[dict]:
    return [
        {"placement": list(map(int, p.placement)), "deployed": p.deployed, "energy": p.objectives.energy}
        for p in front.points
    ]


def front_from_dicts(rows) -> ParetoFront:
    if not isinstance(rows, list):
        raise ScenarioFormatError("front document must be a JSON list")
    points = []
    for i, row in enumerate(rows):
        if not isinstance(row, dict):
            raise ScenarioFormatError(f"front[{i}] must be an object")
        where = f"front[{i}]"
        placement = _require(row, "placement", where)
        deployed = _require(row, "deployed", where)
        energy = _require(row, "energy", where)
        if not isinstance(placement, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in placement
        ):
            raise ScenarioFormatError(f"{where}.placement must be a list of integers")
        if not isinstance(deployed, int) or isinstance(deployed, bool):
            raise ScenarioFormatError(f"{where}.deployed must be an integer")
        if not isinstance(energy, (int, float)) or isinstance(energy, bool):
            raise ScenarioFormatError(f"{where}.energy must be a number")
        objectives = ObjectiveVector(-deployed, float(energy), 0.0)
        points.append(FrontPoint(tuple(placement), objectives))
    return ParetoFront.from_points(points)


def save_front(front: ParetoFront, path) -> None:
    Path(path).write_text(json.dumps(front_to_dicts(front), indent=2) + "\n")


def load_front(path) -> ParetoFront:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"not valid JSON: {exc}") from exc
    return front_from_dicts(doc)
