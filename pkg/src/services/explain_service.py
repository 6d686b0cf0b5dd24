"""
Explanation queries over a solved peak set: dominance, collection, contributions, paths
"""
import logging
from typing import List, Optional, Tuple

from ..config import get_settings
from ..models.mdp import ActionId, DominanceMap, MdpModel, Peak, PeakSet, StateId
from ..models.schemas import (
    CollectionCount, CollectionEntry, CollectionMethod, CollectionReport, ContributionReport,
    DominanceResult, PathEvent, PathTrace, PeakKind, PropagationMode
)
from ..utils.exceptions import PathTraceError
from ..utils.numeric import argmax_lowest, is_tie, tied_maximizers
from .peak_solver import PeakSolver

logger = logging.getLogger(__name__)
settings = get_settings()


class ExplainService:
    """Answers which peak a state leads to, what it collects and why"""

    def __init__(self, solver: Optional[PeakSolver] = None, step_factor: Optional[int] = None):
        self.solver = solver or PeakSolver()
        self.step_factor = settings.path_step_factor if step_factor is None else step_factor

    # ------------------------------------------------------------------
    # Dominance
    # ------------------------------------------------------------------

    def dominant_peak(self, peakset: PeakSet, s: StateId,
                      mode: PropagationMode = PropagationMode.ACHIEVABLE) -> DominanceResult:
        """
        Cycle peak with the largest propagated value at s

        Delta peaks never dominate. All peaks tied with the maximum are
        reported; the lowest id is the dominant one.

        Args:
            peakset: solved peak set
            s: query state
            mode: propagation mode used for the comparison

        Returns:
            DominanceResult, including the cycle the greedy climb actually ends in
        """
        candidates = peakset.cycle_peaks
        values = [self.solver.propagate(peakset, peak, s, mode) for peak in candidates]
        tied = [candidates[i].id for i in tied_maximizers(values)]
        dominant = tied[0]
        value = max(values)
        destination = self.destination(peakset, s)
        return DominanceResult(
            state=s,
            dominant=dominant,
            value=value,
            co_dominant=tied,
            destination=destination,
            detour=destination not in tied,
            mode=mode,
        )

    def region_map(self, peakset: PeakSet,
                   mode: PropagationMode = PropagationMode.ACHIEVABLE) -> DominanceMap:
        """Dominant peak for every state, in state order"""
        results = [self.dominant_peak(peakset, s, mode) for s in range(peakset.model.num_states)]
        detours = sum(1 for r in results if r.detour)
        if detours:
            logger.info(f"{detours} states reach a different cycle than their dominant peak")
        return DominanceMap(
            assignments=tuple(r.dominant for r in results),
            co_dominant=tuple(len(r.co_dominant) > 1 for r in results),
            co_dominant_sets=tuple(tuple(r.co_dominant) for r in results),
            detours=tuple(r.detour for r in results),
            destinations=tuple(r.destination for r in results),
        )

    # ------------------------------------------------------------------
    # Collection
    # ------------------------------------------------------------------

    def chain(self, peakset: PeakSet, s: StateId) -> Tuple[List[int], Peak]:
        """
        Reward events from s: Delta rewards collected once, then the terminal cycle peak

        The first event maximizes gamma^delta(s, s_j) * H_j; later events
        follow best_next until a cycle peak is entered.
        """
        terms = peakset.reward_terms[:, s]
        reward = argmax_lowest(terms)
        peak_of = peakset.peak_of_reward
        by_id = self.solver.peak_by_id(peakset)
        once = []
        while by_id[peak_of[reward]].kind == PeakKind.DELTA:
            once.append(reward)
            reward = int(peakset.heights.best_next[reward])
        return once, by_id[peak_of[reward]]

    def destination(self, peakset: PeakSet, s: StateId) -> int:
        return self.chain(peakset, s)[1].id

    def event_chain(self, peakset: PeakSet, s: StateId) -> CollectionReport:
        """Collected rewards obtained by walking the event chain"""
        once, terminal = self.chain(peakset, s)
        rewards = peakset.rewards
        entries = [CollectionEntry(reward=rewards[i].id, count=CollectionCount.ONCE) for i in once]
        entries += [CollectionEntry(reward=rewards[m].id, count=CollectionCount.INFINITE) for m in terminal.members]
        return CollectionReport(
            state=s, entries=entries, dominant=terminal.id, method=CollectionMethod.EVENT_CHAIN
        )

    def collected_rewards_rule(self, peakset: PeakSet, s: StateId) -> CollectionReport:
        """
        Dominant peak members (infinite) plus every Delta peak whose value at s beats the dominant value (once)
        """
        dominance = self.dominant_peak(peakset, s)
        by_id = self.solver.peak_by_id(peakset)
        rewards = peakset.rewards

        entries = [
            CollectionEntry(reward=rewards[m].id, count=CollectionCount.INFINITE)
            for m in by_id[dominance.dominant].members
        ]
        for peak in peakset.peaks:
            if peak.kind != PeakKind.DELTA:
                continue
            value = self.solver.propagate(peakset, peak, s)
            if value > dominance.value and not is_tie(value, dominance.value):
                entries.append(CollectionEntry(reward=rewards[peak.members[0]].id, count=CollectionCount.ONCE))
        return CollectionReport(
            state=s, entries=entries, dominant=dominance.dominant, method=CollectionMethod.DELTA_RULE
        )

    # ------------------------------------------------------------------
    # Contributions
    # ------------------------------------------------------------------

    def relative_contributions(self, peakset: PeakSet, s: StateId) -> ContributionReport:
        """
        Split the value at s across the collected peaks

        Peak values are sorted descending with a trailing zero appended; each
        consecutive difference divided by the state value is one ratio.
        """
        once, terminal = self.chain(peakset, s)
        peak_of = peakset.peak_of_reward
        by_id = self.solver.peak_by_id(peakset)
        collected = [by_id[peak_of[i]] for i in once] + [terminal]

        scored = [(self.solver.propagate(peakset, peak, s), peak.id) for peak in collected]
        scored.sort(key=lambda item: (-item[0], item[1]))
        ordered = [value for value, _ in scored]
        prepared = ordered + [0.0]
        differences = [prepared[i] - prepared[i + 1] for i in range(len(ordered))]
        total = self.solver.value_at(peakset, s)
        ratios = [d / total for d in differences]
        return ContributionReport(
            state=s,
            value=total,
            peaks=[peak_id for _, peak_id in scored],
            ordered_values=ordered,
            differences=differences,
            ratios=ratios,
        )

    # ------------------------------------------------------------------
    # Policy and paths
    # ------------------------------------------------------------------

    def policy_action(self, model: MdpModel, peakset: PeakSet, s: StateId) -> ActionId:
        """Lowest-numbered action whose successor has the largest value"""
        values = self.solver.value_table(peakset)
        return argmax_lowest([values[t] for t in model.actions[s]])

    def optimal_path(self, model: MdpModel, peakset: PeakSet, s: StateId) -> PathTrace:
        """
        Follow the greedy policy from s until one full cycle after the first repeat

        Args:
            model: validated model
            peakset: solved peak set for the model
            s: start state

        Returns:
            PathTrace whose cycle is a suffix of its states
        """
        limit = self.step_factor * model.num_states
        visited = [s]
        first_seen = {s: 0}
        cycle: List[int] = []
        stop = None
        while stop is None or len(visited) <= stop:
            if len(visited) > limit:
                logger.error(f"Greedy path from {s} did not close a cycle within {limit} steps")
                raise PathTraceError(f"no cycle within {limit} steps from state {s}")
            current = visited[-1]
            nxt = model.successor(current, self.policy_action(model, peakset, current))
            if stop is None and nxt in first_seen:
                repeat = len(visited)
                cycle = visited[first_seen[nxt]:repeat]
                stop = repeat + len(cycle) - 1
            visited.append(nxt)
            first_seen.setdefault(nxt, len(visited) - 1)

        values = self.solver.value_table(peakset)
        top = max(values[state] for state in cycle)
        k_max = next(
            k for k, state in enumerate(visited)
            if state in cycle and is_tie(values[state], top)
        )

        rewards = peakset.rewards
        index = model.reward_index
        events = [
            PathEvent(step=step, reward=rewards[index[state]].id)
            for step, state in enumerate(visited) if state in index
        ]
        return PathTrace(
            start=s,
            states=visited,
            k_max=k_max,
            plus=visited[:k_max + 1],
            cycle=cycle,
            events=events,
        )
