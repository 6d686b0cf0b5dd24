"""
Distance field and reward distance table tests
"""
import time
from unittest.mock import patch

import numpy as np
import pytest
from scipy.sparse.csgraph import dijkstra

from src.models.mdp import DistanceField, MdpModel, RewardSpec
from src.services import DistanceService
from src.utils.exceptions import DistanceError

from .builders import corridor_ab, graph, grid


def three_cycle(rewards):
    return graph(3, [(0, 1), (1, 2), (2, 0)], 0.9, rewards)


@pytest.mark.unit
class TestDistanceTo:
    """Test reverse breadth-first distance fields"""

    def setup_method(self):
        """Setup test fixtures"""
        self.service = DistanceService()

    def test_corridor(self):
        """Distances along a corridor count the cells between"""
        field = self.service.distance_to(corridor_ab(), 9)

        assert field.target == 9
        assert field.dist[9] == 0
        assert field.dist[0] == 9
        assert field.dist.dtype == np.int64

    def test_grid_center(self):
        """Corners of a 3x3 grid are two moves from the center"""
        model = grid(3, 3, 0.9, [("a", 1, 1, 1.0)])
        field = self.service.distance_to(model, model.state_at(1, 1))
        for x, y in ((0, 0), (2, 0), (0, 2), (2, 2)):
            assert field.dist[model.state_at(x, y)] == 2

    def test_directed_distances(self):
        """One-way edges are followed forward only"""
        field = self.service.distance_to(three_cycle([("a", 0, 1.0)]), 0)
        assert list(field.dist) == [0, 2, 1]

    def test_unreachable_is_inconsistent(self):
        """A state that cannot reach the target raises"""
        model = MdpModel(num_states=2, actions=((1,), (1,)), rewards=(RewardSpec("a", 0, 1.0),), gamma=0.9)
        with pytest.raises(DistanceError, match="cannot reach"):
            self.service.distance_to(model, 0)


@pytest.mark.unit
class TestMinCycleLength:
    """Test phi"""

    def setup_method(self):
        """Setup test fixtures"""
        self.service = DistanceService()

    def test_grid_cell(self):
        """Every grid cell returns to itself in two moves"""
        model = grid(4, 4, 0.9, [("a", 2, 1, 1.0)])
        for s in (0, 5, 15):
            assert self.service.min_cycle_length(model, s, self.service.distance_to(model, s)) == 2

    def test_self_loop(self):
        """A self loop has length one"""
        model = graph(2, [(0, 0), (0, 1), (1, 0)], 0.9, [("a", 0, 1.0)])
        assert self.service.min_cycle_length(model, 0, self.service.distance_to(model, 0)) == 1

    def test_directed_three_cycle(self):
        """The only way back around a directed triangle takes three"""
        model = three_cycle([("a", 0, 1.0)])
        assert self.service.min_cycle_length(model, 0, self.service.distance_to(model, 0)) == 3

    def test_field_must_target_state(self):
        """The field has to target the queried state"""
        model = corridor_ab()
        with pytest.raises(DistanceError):
            self.service.min_cycle_length(model, 3, DistanceField(target=9, dist=np.zeros(10, dtype=np.int64)))


@pytest.mark.unit
class TestRewardDistanceTable:
    """Test the delta_plus matrix"""

    def setup_method(self):
        """Setup test fixtures"""
        self.service = DistanceService()

    def test_corridor(self):
        """Off-diagonal hops and phi on the diagonal"""
        table = self.service.reward_distance_table(corridor_ab())
        assert table.delta_plus.tolist() == [[2, 6], [6, 2]]
        assert table.size == 2

    def test_single_reward(self):
        """One reward gives a 1x1 table holding phi"""
        model = grid(5, 5, 0.9, [("a", 2, 2, 1.0)])
        assert self.service.reward_distance_table(model).delta_plus.tolist() == [[2]]

    def test_directed_three_cycle(self):
        """Directed hops differ by direction"""
        table = self.service.reward_distance_table(three_cycle([("a", 0, 1.0), ("b", 1, 1.0)]))
        plus = table.delta_plus

        assert plus[0, 1] == 1
        assert plus[1, 0] == 2
        assert plus[0, 1] + plus[1, 0] == 3
        assert plus[0, 0] == plus[1, 1] == 3

    def test_reward_fields_follow_reward_order(self):
        """Fields come back in reward order"""
        model = corridor_ab()
        fields = self.service.reward_fields(model)
        assert [f.target for f in fields] == [3, 9]


@pytest.mark.properties
@pytest.mark.slow
class TestDistanceProperties:
    """Distance invariants over the random suite"""

    def setup_method(self):
        """Setup test fixtures"""
        self.service = DistanceService()

    def test_successor_distances_differ_by_at_most_one(self, random_suite):
        """On grids, one move changes a distance by at most one"""
        for instance in random_suite[:50]:
            model = instance.model
            for field in instance.peakset.fields:
                for s, successors in enumerate(model.actions):
                    for t in successors:
                        assert abs(int(field.dist[s]) - int(field.dist[t])) <= 1

    def test_greedy_descent_matches_distance(self, random_suite):
        """Following any decreasing action reaches the target in dist[s] steps"""
        for instance in random_suite[:50]:
            model = instance.model
            for field in instance.peakset.fields:
                for s in range(model.num_states):
                    steps, current = 0, s
                    while current != field.target:
                        current = next(t for t in model.actions[current] if field.dist[t] == field.dist[current] - 1)
                        steps += 1
                    assert steps == field.dist[s]

    def test_round_trip_at_least_phi(self, random_suite):
        """Going to another reward and back is never shorter than phi"""
        for instance in random_suite:
            plus = instance.peakset.table.delta_plus
            n = plus.shape[0]
            assert np.all(plus >= 1)
            for i in range(n):
                for j in range(n):
                    if i != j:
                        assert plus[i, j] + plus[j, i] >= plus[i, i]


def four_reward_grid(side: int):
    return grid(side, side, 0.9, [("a", 0, 0, 1.0), ("b", 2, 1, 2.0), ("c", 1, 4, 0.5), ("d", 5, 5, 3.0)])


@pytest.mark.unit
class TestDistanceScaling:
    """Test that the distance phase grows with the state space, not faster"""

    def setup_method(self):
        """Setup test fixtures"""
        self.service = DistanceService()

    def searched_work(self, side: int):
        """Nodes plus edges handed to each breadth-first search"""
        with patch("src.services.distance_service.dijkstra", wraps=dijkstra) as search:
            self.service.reward_fields(four_reward_grid(side))
        return [call.args[0].shape[0] + call.args[0].nnz for call in search.call_args_list]

    def test_one_search_per_reward(self):
        """Reward count, not state count, sets the number of searches"""
        assert len(self.searched_work(6)) == 4
        assert len(self.searched_work(12)) == 4

    def test_work_per_field_is_linear_in_area(self):
        """Each search sees the states plus the edges, nothing more"""
        small = self.searched_work(6)
        large = self.searched_work(12)

        # nodes plus 4-connected edges: side^2 + 4 * side * (side - 1)
        assert small == [36 + 120] * 4
        assert large == [144 + 528] * 4
        assert large[0] / small[0] <= 4.5

    @pytest.mark.slow
    def test_wall_clock_factor(self):
        """Quadrupling the area costs at most 3x, best of several runs"""
        small_model = four_reward_grid(6)
        large_model = four_reward_grid(12)

        def best_time(model):
            timings = []
            for _ in range(7):
                started = time.perf_counter()
                self.service.reward_distance_table(model)
                timings.append(time.perf_counter() - started)
            return min(timings)

        assert best_time(large_model) <= 3.0 * best_time(small_model)
