"""Epsilon-dominance archive with one representative per epsilon-box."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ..model import ObjectiveVector


class OfferOutcome(NamedTuple):
    accepted: bool
    new_box: bool


class ArchiveMember(NamedTuple):
    placement: tuple[int, ...]
    objectives: ObjectiveVector


def box_index(pair: tuple[float, float], epsilons: tuple[float, float]) -> tuple[int, int]:
    """Box coordinates: floor(objective / epsilon) per dimension."""
    return (math.floor(pair[0] / epsilons[0]), math.floor(pair[1] / epsilons[1]))


class EpsilonArchive:
    """Archive of feasible solutions coarsened to epsilon resolution.

    Holds at most one member per epsilon-box and no member whose box is
    dominated by another member's box.  Within a box the Pareto-dominant
    point wins; between incomparable same-box points, the one closer to the
    box's lower corner is kept (the incumbent survives exact ties).
    Infeasible offers are always rejected.
    """

    def __init__(self, epsilons: tuple[float, float]):
        if len(epsilons) != 2 or any(e <= 0 for e in epsilons):
            raise ValueError(f"epsilons must be two positive numbers, got {epsilons}")
        self.epsilons = (float(epsilons[0]), float(epsilons[1]))
        self._members: list[ArchiveMember] = []
        self._boxes = np.zeros((0, 2), dtype=np.int64)
        self._pairs = np.zeros((0, 2), dtype=np.float64)

    def __len__(self) -> int:
        return len(self._members)

    @property
    def members(self) -> list[ArchiveMember]:
        return list(self._members)

    def boxes(self) -> list[tuple[int, int]]:
        return [tuple(b) for b in self._boxes.tolist()]

    def _corner_distance(self, pair: np.ndarray, box: np.ndarray) -> float:
        corner = box * np.array(self.epsilons)
        return float(np.hypot(*(pair - corner)))

    def _remove(self, indices: np.ndarray) -> None:
        keep = np.ones(len(self._members), dtype=bool)
        keep[indices] = False
        self._members = [m for m, k in zip(self._members, keep) if k]
        self._boxes = self._boxes[keep]
        self._pairs = self._pairs[keep]

    def _append(self, member: ArchiveMember, box: np.ndarray, pair: np.ndarray) -> None:
        self._members.append(member)
        self._boxes = np.vstack([self._boxes, box[None, :]])
        self._pairs = np.vstack([self._pairs, pair[None, :]])

    def offer(self, placement, objectives: ObjectiveVector) -> OfferOutcome:
        """Consider one evaluated solution for inclusion."""
        if not objectives.feasible:
            return OfferOutcome(False, False)
        member = ArchiveMember(tuple(int(g) for g in placement), objectives)
        pair = np.array(objectives.pair, dtype=np.float64)
        box = np.array(box_index(objectives.pair, self.epsilons), dtype=np.int64)

        if len(self._members):
            same = np.flatnonzero((self._boxes == box).all(axis=1))
            if same.size:
                idx = int(same[0])
                incumbent = self._pairs[idx]
                cand_le = (pair <= incumbent).all()
                cand_lt = (pair < incumbent).any()
                inc_le = (incumbent <= pair).all()
                inc_lt = (incumbent < pair).any()
                if inc_le and inc_lt:
                    return OfferOutcome(False, False)
                if cand_le and cand_lt:
                    replace = True
                else:
                    # incomparable within the box: closer to the corner wins
                    replace = self._corner_distance(pair, box) < self._corner_distance(
                        incumbent, box
                    )
                if replace:
                    self._members[idx] = member
                    self._pairs[idx] = pair
                    return OfferOutcome(True, False)
                return OfferOutcome(False, False)

            le = (self._boxes <= box).all(axis=1)
            if le.any():  # a distinct box that is <= is strictly dominating
                return OfferOutcome(False, False)
            dominated = (box <= self._boxes).all(axis=1)
            if dominated.any():
                self._remove(np.flatnonzero(dominated))

        self._append(member, box, pair)
        return OfferOutcome(True, True)
