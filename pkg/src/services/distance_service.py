"""
Hop-distance fields to reward states and minimum cycle lengths
"""
import logging
from typing import List, Optional

import numpy as np
from scipy.sparse.csgraph import dijkstra

from ..models.mdp import DistanceField, MdpModel, RewardDistanceTable, StateId
from ..utils.exceptions import DistanceError
from .model_service import transition_matrix

logger = logging.getLogger(__name__)


class DistanceService:
    """Computes the delta and phi quantities consumed by the peak solver"""

    def distance_to(self, model: MdpModel, target: StateId, reverse_graph=None) -> DistanceField:
        """
        Minimum number of actions from every state to target

        Runs an unweighted search over reversed edges starting at target.

        Args:
            model: validated model
            target: state to reach
            reverse_graph: optional pre-built transposed transition matrix

        Returns:
            DistanceField with dist[target] == 0
        """
        if reverse_graph is None:
            reverse_graph = transition_matrix(model).T.tocsr()
        dist = dijkstra(reverse_graph, directed=True, indices=target, unweighted=True)
        if not np.all(np.isfinite(dist)):
            unreachable = int(np.flatnonzero(~np.isfinite(dist))[0])
            logger.error(f"State {unreachable} cannot reach {target}; model was not validated")
            raise DistanceError(f"internal inconsistency: state {unreachable} cannot reach state {target}")
        return DistanceField(target=target, dist=np.rint(dist).astype(np.int64))

    def reward_fields(self, model: MdpModel) -> List[DistanceField]:
        """One distance field per reward, in reward order"""
        reverse_graph = transition_matrix(model).T.tocsr()
        fields = [self.distance_to(model, reward.state, reverse_graph) for reward in model.rewards]
        logger.info(f"Computed {len(fields)} distance fields over {model.num_states} states")
        return fields

    def min_cycle_length(self, model: MdpModel, s: StateId, field: DistanceField) -> int:
        """phi(s) = min over actions of 1 + dist(T(s, a), s)"""
        if field.target != s:
            raise DistanceError(f"distance field targets {field.target}, not {s}")
        return int(min(1 + field.dist[t] for t in model.actions[s]))

    def reward_distance_table(self, model: MdpModel,
                              fields: Optional[List[DistanceField]] = None) -> RewardDistanceTable:
        """
        Assemble delta_plus: hops between reward states, phi on the diagonal

        Args:
            model: validated model
            fields: distance fields in reward order (computed when omitted)
        """
        if fields is None:
            fields = self.reward_fields(model)
        n = model.num_rewards
        delta_plus = np.zeros((n, n), dtype=np.int64)
        for i, reward in enumerate(model.rewards):
            for j in range(n):
                if i == j:
                    delta_plus[i, i] = self.min_cycle_length(model, reward.state, fields[i])
                else:
                    delta_plus[i, j] = fields[j].dist[reward.state]
        return RewardDistanceTable(delta_plus=delta_plus)
