"""
Model construction and validation against the supported MDP class
"""
import logging
from typing import List, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from ..config import GRID_MOVES
from ..models.mdp import MdpModel, RewardSpec
from ..models.schemas import GraphScenario, GridScenario, ValidationIssue, ValidationReport
from ..utils.exceptions import ModelValidationError

logger = logging.getLogger(__name__)


def transition_matrix(model: MdpModel) -> csr_matrix:
    """Sparse adjacency matrix of in-range transitions (row = source)"""
    rows, cols = [], []
    for s, successors in enumerate(model.actions):
        for t in successors:
            if 0 <= t < model.num_states:
                rows.append(s)
                cols.append(t)
    data = np.ones(len(rows), dtype=np.int8)
    index = (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))
    return csr_matrix((data, index), shape=(model.num_states, model.num_states))


class ModelService:
    """Builds deterministic models from scenarios and checks their class restrictions"""

    def grid_to_model(self, scenario: GridScenario) -> MdpModel:
        """
        Build the grid world model

        States are row-major (index = y * width + x). Each cell gets the
        in-bounds moves in Up, Down, Left, Right order, numbered densely.

        Args:
            scenario: validated grid scenario

        Returns:
            MdpModel with width/height set
        """
        width, height = scenario.width, scenario.height
        actions, names = [], []
        for y in range(height):
            for x in range(width):
                successors, labels = [], []
                for name, dx, dy in GRID_MOVES:
                    nx, ny = x + dx, y + dy
                    if 0 <= nx < width and 0 <= ny < height:
                        successors.append(ny * width + nx)
                        labels.append(name)
                actions.append(tuple(successors))
                names.append(tuple(labels))

        rewards = tuple(
            RewardSpec(id=r.id, state=r.y * width + r.x, value=r.value) for r in scenario.rewards
        )
        logger.info(f"Built {width}x{height} grid model with {len(rewards)} rewards")
        return MdpModel(
            num_states=width * height,
            actions=tuple(actions),
            rewards=rewards,
            gamma=scenario.gamma,
            action_names=tuple(names),
            width=width,
            height=height,
        )

    def graph_to_model(self, scenario: GraphScenario) -> MdpModel:
        """Build a general-graph model; action order is edge order per source"""
        actions: List[List[int]] = [[] for _ in range(scenario.num_states)]
        for source, target in scenario.edges:
            actions[source].append(target)
        rewards = tuple(RewardSpec(id=r.id, state=r.state, value=r.value) for r in scenario.rewards)
        return MdpModel(
            num_states=scenario.num_states,
            actions=tuple(tuple(a) for a in actions),
            rewards=rewards,
            gamma=scenario.gamma,
        )

    def build_model(self, scenario: Union[GridScenario, GraphScenario]) -> MdpModel:
        if isinstance(scenario, GridScenario):
            return self.grid_to_model(scenario)
        return self.graph_to_model(scenario)

    def validate_model(self, model: MdpModel) -> ValidationReport:
        """
        Check the deterministic/continuous/positive/strongly-connected restrictions

        Violations are returned as data; this never raises.
        """
        violations: List[ValidationIssue] = []

        if model.num_states < 1:
            violations.append(ValidationIssue(code="NO_STATES", message="model has no states"))
            return ValidationReport.from_violations(violations)

        if len(model.actions) != model.num_states:
            violations.append(ValidationIssue(
                code="ACTION_TABLE_SIZE",
                message=f"action table has {len(model.actions)} rows for {model.num_states} states",
            ))
            return ValidationReport.from_violations(violations)

        for s, successors in enumerate(model.actions):
            if not successors:
                violations.append(ValidationIssue(code="NO_ACTIONS", message=f"state {s} has no actions"))
            for a, t in enumerate(successors):
                if not 0 <= t < model.num_states:
                    violations.append(ValidationIssue(
                        code="INVALID_SUCCESSOR",
                        message=f"state {s} action {a} leads to unknown state {t}",
                    ))

        if model.num_states > 1 and not self._strongly_connected(model):
            violations.append(ValidationIssue(
                code="NOT_STRONGLY_CONNECTED",
                message="some state cannot reach, or be reached from, state 0",
            ))

        violations.extend(self._check_rewards(model))

        if not 0.0 < model.gamma < 1.0:
            violations.append(ValidationIssue(
                code="GAMMA_OUT_OF_RANGE", message=f"gamma {model.gamma} outside (0,1)"
            ))

        report = ValidationReport.from_violations(violations)
        if not report.ok:
            logger.warning(f"Model validation found {len(violations)} violations")
        return report

    def require_valid(self, model: MdpModel) -> MdpModel:
        """Raise ModelValidationError unless the model validates"""
        report = self.validate_model(model)
        if not report.ok:
            logger.error(f"Model rejected: {[v.code for v in report.violations]}")
            raise ModelValidationError(report)
        return model

    def _strongly_connected(self, model: MdpModel) -> bool:
        """One forward and one reverse reachability pass from state 0"""
        graph = transition_matrix(model)
        forward = breadth_first_order(graph, 0, directed=True, return_predecessors=False)
        reverse = breadth_first_order(graph.T.tocsr(), 0, directed=True, return_predecessors=False)
        return len(forward) == model.num_states and len(reverse) == model.num_states

    def _check_rewards(self, model: MdpModel) -> List[ValidationIssue]:
        issues = []
        if not model.rewards:
            issues.append(ValidationIssue(code="NO_REWARDS", message="model has no rewards"))
        seen_states, seen_ids = set(), set()
        for reward in model.rewards:
            if not reward.value > 0:
                issues.append(ValidationIssue(
                    code="NONPOSITIVE_REWARD", message=f"reward {reward.id} has value {reward.value}"
                ))
            if not 0 <= reward.state < model.num_states:
                issues.append(ValidationIssue(
                    code="REWARD_STATE_OUT_OF_RANGE",
                    message=f"reward {reward.id} references unknown state {reward.state}",
                ))
            if reward.state in seen_states:
                issues.append(ValidationIssue(
                    code="DUPLICATE_REWARD_STATE", message=f"state {reward.state} holds more than one reward"
                ))
            if reward.id in seen_ids:
                issues.append(ValidationIssue(code="DUPLICATE_REWARD_ID", message=f"reward id {reward.id} reused"))
            seen_states.add(reward.state)
            seen_ids.add(reward.id)
        return issues
