"""
Peak height solver, peak classification and peak value functions
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import get_settings
from ..models.mdp import (
    DistanceField, HeightTable, MdpModel, Peak, PeakSet, RewardDistanceTable, StateId
)
from ..models.schemas import PeakKind, PropagationMode
from ..utils.exceptions import SolverConvergenceError
from ..utils.numeric import argmax_lowest, is_tie, tied_maximizers
from .distance_service import DistanceService
from .model_service import ModelService

logger = logging.getLogger(__name__)
settings = get_settings()


class PeakSolver:
    """Solves reward-graph heights and exposes the value function as a list of peaks"""

    def __init__(self, tol: Optional[float] = None, max_sweeps: Optional[int] = None,
                 stable_sweeps: Optional[int] = None):
        self.tol = settings.solver_tol if tol is None else tol
        self.max_sweeps = settings.solver_max_sweeps if max_sweeps is None else max_sweeps
        self.stable_sweeps = settings.solver_stable_sweeps if stable_sweeps is None else stable_sweeps
        self.model_service = ModelService()
        self.distance_service = DistanceService()

    def solve(self, model: MdpModel) -> PeakSet:
        """
        Validate, measure distances, solve heights and classify peaks

        Args:
            model: deterministic model (validated here)

        Returns:
            Solved PeakSet
        """
        self.model_service.require_valid(model)
        fields = self.distance_service.reward_fields(model)
        table = self.distance_service.reward_distance_table(model, fields)
        heights = self.solve_heights(model, table)
        return self.classify_peaks(heights, table, model, fields)

    # ------------------------------------------------------------------
    # Heights
    # ------------------------------------------------------------------

    def solve_heights(self, model: MdpModel, table: RewardDistanceTable) -> HeightTable:
        """
        Fixed point of H_i = v_i + max_j gamma^delta_plus[i][j] * H_j

        Phase 1 iterates from H = v until the sup-norm change drops below
        the solver tolerance or the argmax pointers hold still. Phase 2
        solves the pointer graph exactly (geometric series on cycles,
        back-substitution elsewhere) and re-points any reward whose exact
        heights reveal a strictly better successor.

        Args:
            model: validated model
            table: reward distance table for the model

        Returns:
            HeightTable with exact heights, lowest-index best_next and tie sets
        """
        gamma = model.gamma
        if not 0.0 < gamma < 1.0:
            logger.error(f"Cannot solve heights with gamma {gamma}")
            raise SolverConvergenceError(f"gamma {gamma} outside (0,1); heights diverge")

        values = model.reward_values
        hops = table.delta_plus
        discount = np.power(gamma, hops.astype(float))

        best_next, sweeps = self._iterate(values, discount)
        heights, best_next, rounds = self._close_with_improvement(values, hops, discount, gamma, best_next)

        candidates = discount * heights[None, :]
        tie_sets = tuple(tuple(tied_maximizers(row)) for row in candidates)
        lowest = np.array([ties[0] for ties in tie_sets], dtype=np.int64)
        if not np.array_equal(lowest, best_next):
            best_next = lowest
            heights = self._close(values, hops, gamma, best_next)
            candidates = discount * heights[None, :]
            tie_sets = tuple(tuple(tied_maximizers(row)) for row in candidates)

        logger.info(f"Solved {len(values)} heights in {sweeps} sweeps and {rounds} closure rounds")
        return HeightTable(
            heights=heights,
            best_next=best_next,
            tie_sets=tie_sets,
            sweeps=sweeps,
            closure_rounds=rounds,
        )

    def _iterate(self, values: np.ndarray, discount: np.ndarray) -> Tuple[np.ndarray, int]:
        """Phase 1: synchronous sweeps on the reward graph"""
        heights = values.copy()
        previous = None
        stable = 0
        for sweep in range(1, self.max_sweeps + 1):
            candidates = discount * heights[None, :]
            pointers = np.array([argmax_lowest(row) for row in candidates], dtype=np.int64)
            updated = values + candidates.max(axis=1)
            change = float(np.max(np.abs(updated - heights)))
            heights = updated

            if previous is not None and np.array_equal(pointers, previous):
                stable += 1
            else:
                stable = 0
            previous = pointers

            if change < self.tol or stable >= self.stable_sweeps:
                return pointers, sweep

        logger.error(f"Height iteration did not settle within {self.max_sweeps} sweeps")
        raise SolverConvergenceError(f"height iteration exceeded {self.max_sweeps} sweeps")

    def _close_with_improvement(self, values, hops, discount, gamma, best_next):
        """Phase 2: exact closure, re-pointing on strict improvement until none remains"""
        best_next = best_next.copy()
        n = len(values)
        limit = n * n + 8
        rows = np.arange(n)
        for rounds in range(1, limit + 1):
            heights = self._close(values, hops, gamma, best_next)
            candidates = discount * heights[None, :]
            current = candidates[rows, best_next]
            best = candidates.max(axis=1)
            improvable = [
                i for i in range(n)
                if best[i] > current[i] and not is_tie(float(best[i]), float(current[i]))
            ]
            if not improvable:
                if rounds > 1:
                    logger.info(f"Closure re-pointed rewards over {rounds - 1} rounds")
                return heights, best_next, rounds
            for i in improvable:
                best_next[i] = argmax_lowest(candidates[i])

        logger.error(f"Closure did not stabilize within {limit} rounds")
        raise SolverConvergenceError(f"exact closure exceeded {limit} improvement rounds")

    def _close(self, values: np.ndarray, hops: np.ndarray, gamma: float,
               best_next: np.ndarray) -> np.ndarray:
        """Exact heights for a fixed pointer graph"""
        n = len(values)
        heights = np.zeros(n, dtype=float)
        done = np.zeros(n, dtype=bool)

        for cycle in self.pointer_cycles(best_next):
            length = int(sum(hops[c, best_next[c]] for c in cycle))
            for t in range(len(cycle)):
                rotated = cycle[t:] + cycle[:t]
                total = 0.0
                offset = 0
                for c in rotated:
                    total += gamma ** offset * values[c]
                    offset += int(hops[c, best_next[c]])
                heights[rotated[0]] = total / (1.0 - gamma ** length)
            done[list(cycle)] = True

        for i in range(n):
            chain = []
            j = i
            while not done[j]:
                chain.append(j)
                j = int(best_next[j])
            for k in reversed(chain):
                nxt = int(best_next[k])
                heights[k] = values[k] + gamma ** int(hops[k, nxt]) * heights[nxt]
                done[k] = True
        return heights

    @staticmethod
    def pointer_cycles(best_next: Sequence[int]) -> List[List[int]]:
        """Cycles of the functional graph i -> best_next[i], each starting at its lowest index"""
        n = len(best_next)
        color = [0] * n
        cycles = []
        for i in range(n):
            if color[i]:
                continue
            path = []
            position = {}
            j = i
            while color[j] == 0:
                color[j] = 1
                position[j] = len(path)
                path.append(j)
                j = int(best_next[j])
            if color[j] == 1:
                cycle = path[position[j]:]
                start = cycle.index(min(cycle))
                cycles.append(cycle[start:] + cycle[:start])
            for p in path:
                color[p] = 2
        return sorted(cycles, key=min)

    # ------------------------------------------------------------------
    # Classification
    # ------------------------------------------------------------------

    def classify_peaks(self, heights: HeightTable, table: RewardDistanceTable,
                       model: MdpModel, fields: List[DistanceField]) -> PeakSet:
        """
        Split rewards into Baseline, Combined and Delta peaks

        Rewards on a cycle of best_next form one cycle peak (Baseline for a
        self-pointer, Combined otherwise); every other reward is a Delta
        whose parent is its best_next. Peak ids follow each peak's lowest
        member reward index.
        """
        hops = table.delta_plus
        best_next = heights.best_next
        drafts: List[Tuple[PeakKind, Tuple[int, ...], Optional[int], Optional[int]]] = []

        on_cycle = set()
        for cycle in self.pointer_cycles(best_next):
            length = int(sum(hops[c, best_next[c]] for c in cycle))
            kind = PeakKind.BASELINE if len(cycle) == 1 else PeakKind.COMBINED
            drafts.append((kind, tuple(cycle), length, None))
            on_cycle.update(cycle)

        for i in range(len(best_next)):
            if i not in on_cycle:
                drafts.append((PeakKind.DELTA, (i,), None, int(best_next[i])))

        drafts.sort(key=lambda d: min(d[1]))
        peaks = []
        for peak_id, (kind, members, length, parent) in enumerate(drafts):
            anchors = tuple((model.rewards[m].state, float(heights.heights[m])) for m in members)
            peaks.append(Peak(
                id=peak_id, kind=kind, members=members, anchors=anchors,
                cycle_length=length, parent=parent,
            ))

        counts = {kind.value: sum(1 for p in peaks if p.kind == kind) for kind in PeakKind}
        logger.info(f"Classified {len(peaks)} peaks: {counts}")
        return PeakSet(model=model, fields=fields, table=table, heights=heights, peaks=peaks)

    # ------------------------------------------------------------------
    # Peak value functions
    # ------------------------------------------------------------------

    def propagate_all(self, peakset: PeakSet, peak: Peak,
                      mode: PropagationMode = PropagationMode.ACHIEVABLE) -> np.ndarray:
        """Peak value function at every state, cached on the peak set"""
        return peakset.cached(("peak", peak.id, mode), lambda: self._peak_values(peakset, peak, mode))

    def propagate(self, peakset: PeakSet, peak: Peak, s: StateId,
                  mode: PropagationMode = PropagationMode.ACHIEVABLE) -> float:
        """
        Value of one peak at state s

        Args:
            peakset: solved peak set
            peak: peak to evaluate
            s: query state
            mode: achievable (max over anchors) or literal (closed-form sums)

        Returns:
            Nonnegative value
        """
        return float(self.propagate_all(peakset, peak, mode)[s])

    def value_table(self, peakset: PeakSet,
                    mode: PropagationMode = PropagationMode.ACHIEVABLE) -> np.ndarray:
        """Max over all peaks at every state"""
        def compute() -> np.ndarray:
            if mode == PropagationMode.ACHIEVABLE:
                return peakset.reward_terms.max(axis=0)
            return np.max(np.stack([self.propagate_all(peakset, p, mode) for p in peakset.peaks]), axis=0)

        return peakset.cached(("value", mode), compute)

    def value_at(self, peakset: PeakSet, s: StateId) -> float:
        """Optimal value at s: the best peak under achievable propagation"""
        return float(self.value_table(peakset)[s])

    def _peak_values(self, peakset: PeakSet, peak: Peak, mode: PropagationMode) -> np.ndarray:
        members = list(peak.members)
        if mode == PropagationMode.ACHIEVABLE:
            return peakset.reward_terms[members].max(axis=0)

        gamma = peakset.gamma
        discounts = peakset.discounts
        values = peakset.model.reward_values
        if peak.kind == PeakKind.DELTA:
            return peakset.reward_terms[members[0]].copy()
        scale = 1.0 / (1.0 - gamma ** peak.cycle_length)
        if peak.kind == PeakKind.BASELINE:
            return discounts[members[0]] * values[members[0]] * scale
        return np.sum(discounts[members] * (values[members] * scale)[:, None], axis=0)

    def peak_by_id(self, peakset: PeakSet) -> Dict[int, Peak]:
        return {peak.id: peak for peak in peakset.peaks}
