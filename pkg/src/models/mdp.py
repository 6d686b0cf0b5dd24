"""
Internal data structures: the deterministic model and the solved peak decomposition
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .schemas import PeakKind

StateId = int
ActionId = int


@dataclass(frozen=True)
class RewardSpec:
    """Positive reward collected on every entry to its state"""
    id: str
    state: StateId
    value: float


@dataclass(frozen=True)
class MdpModel:
    """
    Dense-indexed deterministic transition system.

    actions[s][a] is the successor of taking action a in state s.
    Construction does not validate; see ModelService.validate_model.
    """
    num_states: int
    actions: Tuple[Tuple[StateId, ...], ...]
    rewards: Tuple[RewardSpec, ...]
    gamma: float
    action_names: Tuple[Tuple[str, ...], ...] = ()
    width: Optional[int] = None
    height: Optional[int] = None

    @property
    def is_grid(self) -> bool:
        return self.width is not None and self.height is not None

    @property
    def num_rewards(self) -> int:
        return len(self.rewards)

    def successor(self, s: StateId, a: ActionId) -> StateId:
        return self.actions[s][a]

    def action_name(self, s: StateId, a: ActionId) -> str:
        if self.action_names:
            return self.action_names[s][a]
        return f"a{a}->{self.actions[s][a]}"

    @cached_property
    def reward_index(self) -> Dict[StateId, int]:
        """Reward state -> reward index"""
        return {reward.state: i for i, reward in enumerate(self.rewards)}

    @cached_property
    def reward_states(self) -> np.ndarray:
        return np.array([reward.state for reward in self.rewards], dtype=np.int64)

    @cached_property
    def reward_values(self) -> np.ndarray:
        return np.array([reward.value for reward in self.rewards], dtype=float)

    @cached_property
    def state_rewards(self) -> np.ndarray:
        """Per-state reward vector r(s)"""
        r = np.zeros(self.num_states, dtype=float)
        for reward in self.rewards:
            r[reward.state] += reward.value
        return r

    def coords(self, s: StateId) -> Tuple[int, int]:
        return s % self.width, s // self.width

    def state_at(self, x: int, y: int) -> StateId:
        return y * self.width + x


@dataclass(frozen=True)
class DistanceField:
    """dist[s] = minimum number of actions from s to target"""
    target: StateId
    dist: np.ndarray


@dataclass(frozen=True)
class RewardDistanceTable:
    """delta_plus[i][j] = hops from reward i to reward j; the diagonal holds phi"""
    delta_plus: np.ndarray

    @property
    def size(self) -> int:
        return int(self.delta_plus.shape[0])


@dataclass(frozen=True)
class HeightTable:
    heights: np.ndarray
    best_next: np.ndarray
    tie_sets: Tuple[Tuple[int, ...], ...]
    sweeps: int
    closure_rounds: int = 1


@dataclass(frozen=True)
class Peak:
    id: int
    kind: PeakKind
    members: Tuple[int, ...]
    anchors: Tuple[Tuple[StateId, float], ...]
    cycle_length: Optional[int] = None
    parent: Optional[int] = None

    @property
    def is_cycle(self) -> bool:
        return self.kind != PeakKind.DELTA


@dataclass
class PeakSet:
    """Solved decomposition of the value function into peaks"""
    model: MdpModel
    fields: List[DistanceField]
    table: RewardDistanceTable
    heights: HeightTable
    peaks: List[Peak]
    _cache: Dict[object, np.ndarray] = field(default_factory=dict, repr=False, compare=False)

    def cached(self, key: object, compute: Callable[[], np.ndarray]) -> np.ndarray:
        """Array stored under key, computed on first request"""
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    @property
    def gamma(self) -> float:
        return self.model.gamma

    @property
    def rewards(self) -> Tuple[RewardSpec, ...]:
        return self.model.rewards

    @cached_property
    def peak_of_reward(self) -> Dict[int, int]:
        mapping = {}
        for peak in self.peaks:
            for member in peak.members:
                mapping[member] = peak.id
        return mapping

    @cached_property
    def cycle_peaks(self) -> List[Peak]:
        return [peak for peak in self.peaks if peak.is_cycle]

    @cached_property
    def discounts(self) -> np.ndarray:
        """gamma ** dist(s, reward j), shape (|R|, |S|)"""
        dist = np.stack([f.dist for f in self.fields]) if self.fields else np.zeros((0, self.model.num_states))
        return np.power(self.gamma, dist.astype(float))

    @cached_property
    def reward_terms(self) -> np.ndarray:
        """H_j * gamma ** dist(s, reward j), shape (|R|, |S|)"""
        return self.heights.heights[:, None] * self.discounts


@dataclass(frozen=True)
class DominanceMap:
    assignments: Tuple[int, ...]
    co_dominant: Tuple[bool, ...]
    co_dominant_sets: Tuple[Tuple[int, ...], ...]
    detours: Tuple[bool, ...]
    destinations: Tuple[int, ...]


@dataclass(frozen=True)
class ValueTable:
    values: np.ndarray
    iterations: int
    residual: float
    gamma: float

    @property
    def error_bound(self) -> float:
        return self.residual * self.gamma / (1.0 - self.gamma)


@dataclass
class Trajectory:
    visited: List[StateId]
    counts: Dict[str, int]
    cycle: List[StateId]
    steps: int
