"""
Tabular ground truth: value iteration, greedy simulation and value comparison
"""
import logging
from typing import Optional, Sequence, Union

import numpy as np

from ..config import get_settings
from ..models.mdp import MdpModel, PeakSet, StateId, Trajectory, ValueTable
from ..models.schemas import ComparisonReport
from ..utils.exceptions import ComparisonError, OracleConvergenceError
from ..utils.numeric import tied_maximizers
from .peak_solver import PeakSolver

logger = logging.getLogger(__name__)
settings = get_settings()


def successor_array(model: MdpModel) -> np.ndarray:
    """(|S|, max actions) successor table, short rows padded with their first successor"""
    width = max(len(successors) for successors in model.actions)
    padded = np.empty((model.num_states, width), dtype=np.int64)
    for s, successors in enumerate(model.actions):
        padded[s, :len(successors)] = successors
        padded[s, len(successors):] = successors[0]
    return padded


class OracleService:
    """Independent tabular checks for the peak solver"""

    def __init__(self, tol: Optional[float] = None, max_sweeps: Optional[int] = None):
        self.tol = settings.oracle_tol if tol is None else tol
        self.max_sweeps = settings.oracle_max_sweeps if max_sweeps is None else max_sweeps

    def value_iteration(self, model: MdpModel, tol: Optional[float] = None,
                        max_sweeps: Optional[int] = None) -> ValueTable:
        """
        Synchronous Bellman sweeps V(s) <- r(s) + gamma * max_a V(T(s, a)) from V = 0

        Args:
            model: validated model
            tol: stop once the sup-norm change is below this
            max_sweeps: sweep budget

        Returns:
            ValueTable with the final residual
        """
        tol = self.tol if tol is None else tol
        max_sweeps = self.max_sweeps if max_sweeps is None else max_sweeps

        succ = successor_array(model)
        rewards = model.state_rewards
        values = np.zeros(model.num_states, dtype=float)
        for sweep in range(1, max_sweeps + 1):
            updated = rewards + model.gamma * values[succ].max(axis=1)
            residual = float(np.max(np.abs(updated - values)))
            values = updated
            if residual < tol:
                logger.info(f"Value iteration converged in {sweep} sweeps (residual {residual:.3e})")
                return ValueTable(values=values, iterations=sweep, residual=residual, gamma=model.gamma)

        logger.error(f"Value iteration exceeded {max_sweeps} sweeps at tolerance {tol}")
        raise OracleConvergenceError(f"max_sweeps exceeded: {max_sweeps} sweeps at tolerance {tol}")

    def simulate(self, model: MdpModel, values: Union[ValueTable, PeakSet], start: StateId,
                 horizon: int, stop_at_cycle: bool = True) -> Trajectory:
        """
        Greedy rollout with collection counting

        Rewards count on every entry to their state, the start state included.
        With stop_at_cycle the rollout ends one full cycle after the first
        state repetition; otherwise it runs the whole horizon.
        """
        if horizon < 1:
            raise ValueError("horizon must be at least 1")
        table, abs_tol = self._greedy_source(values)

        counts = {reward.id: 0 for reward in model.rewards}
        by_state = {reward.state: reward.id for reward in model.rewards}
        if start in by_state:
            counts[by_state[start]] += 1

        visited = [start]
        first_seen = {start: 0}
        cycle = []
        stop = None
        steps = 0
        while steps < horizon:
            current = visited[-1]
            successors = model.actions[current]
            choice = tied_maximizers([table[t] for t in successors], abs_tol=abs_tol)[0]
            nxt = successors[choice]
            if stop is None and nxt in first_seen:
                repeat = len(visited)
                cycle = visited[first_seen[nxt]:repeat]
                stop = repeat + len(cycle) - 1
            visited.append(nxt)
            first_seen.setdefault(nxt, len(visited) - 1)
            steps += 1
            if nxt in by_state:
                counts[by_state[nxt]] += 1
            if stop_at_cycle and stop is not None and len(visited) > stop:
                break

        return Trajectory(visited=visited, counts=counts, cycle=cycle, steps=steps)

    def _greedy_source(self, values: Union[ValueTable, PeakSet]):
        if isinstance(values, PeakSet):
            return PeakSolver().value_table(values), None
        slack = 2.0 * values.error_bound + settings.tie_abs_tol
        return values.values, slack

    def compare_value_functions(self, a: Sequence[float], b: Sequence[float]) -> ComparisonReport:
        """
        Elementwise comparison of two value tables

        Raises:
            ComparisonError: tables differ in length
        """
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.shape != b.shape:
            logger.error(f"Cannot compare value tables of shapes {a.shape} and {b.shape}")
            raise ComparisonError(f"length mismatch: {a.size} vs {b.size}")
        if a.size == 0:
            return ComparisonReport(max_abs_diff=0.0, max_rel_diff=0.0, argmax_state=0)

        diff = np.abs(a - b)
        scale = np.maximum(np.abs(a), np.abs(b))
        rel = np.divide(diff, scale, out=np.zeros_like(diff), where=scale > 0)
        return ComparisonReport(
            max_abs_diff=float(diff.max()),
            max_rel_diff=float(rel.max()),
            argmax_state=int(np.argmax(diff)),
        )
