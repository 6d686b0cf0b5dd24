"""
Scenario parsing, model construction and validation tests
"""
import pytest
from pydantic import ValidationError

from src.models.mdp import MdpModel, RewardSpec
from src.models.schemas import (
    GraphReward, GraphScenario, GridScenario, RewardEntry, ValidationIssue, ValidationReport
)
from src.services import ModelService
from src.utils.exceptions import ModelValidationError, ScenarioError
from src.utils.scenario_parser import ScenarioParser, parse_scenario, render_scenario

from .builders import corridor_ab, grid

CORRIDOR_TEXT = """\
grid 10 1
gamma 0.9
reward A 3 0 1.0
reward B 9 0 5.0
"""


@pytest.mark.unit
class TestScenarioParser:
    """Test the line-oriented scenario format"""

    def setup_method(self):
        """Setup test fixtures"""
        self.parser = ScenarioParser()

    def test_parse_corridor(self):
        """Grid header, gamma and rewards are mirrored"""
        scenario = self.parser.parse(CORRIDOR_TEXT)

        assert isinstance(scenario, GridScenario)
        assert (scenario.width, scenario.height) == (10, 1)
        assert scenario.gamma == 0.9
        assert [(r.id, r.x, r.y, r.value) for r in scenario.rewards] == [("A", 3, 0, 1.0), ("B", 9, 0, 5.0)]

    def test_parse_single_cell(self):
        """A 1x1 grid parses; validation rejects it later"""
        scenario = parse_scenario("grid 1 1\ngamma 0.9\nreward A 0 0 1.0\n")
        assert (scenario.width, scenario.height) == (1, 1)
        assert len(scenario.rewards) == 1

    def test_comments_and_blank_lines(self):
        """Comments and blank lines are ignored"""
        text = "# header comment\n\ngrid 2 1   # trailing\n\ngamma 0.5\nreward a 1 0 2.5 # note\n"
        scenario = parse_scenario(text)
        assert scenario.gamma == 0.5
        assert scenario.rewards[0].value == 2.5

    def test_gamma_out_of_range(self):
        """gamma = 1 is rejected with its line number"""
        with pytest.raises(ScenarioError) as exc:
            parse_scenario("grid 3 3\ngamma 1.0\nreward A 0 0 1.0\n")
        assert exc.value.line == 2
        assert "gamma" in str(exc.value)

    def test_duplicate_cell(self):
        """Two rewards on one cell fail on the second line"""
        with pytest.raises(ScenarioError) as exc:
            parse_scenario("grid 3 3\ngamma 0.9\nreward A 0 0 1.0\nreward B 0 0 2.0\n")
        assert exc.value.line == 4
        assert "duplicate reward cell" in str(exc.value)

    def test_nonpositive_value(self):
        """Zero, negative and non-finite values are rejected"""
        for value in ("0", "-1.0", "inf", "nan"):
            with pytest.raises(ScenarioError):
                parse_scenario(f"grid 3 3\ngamma 0.9\nreward A 0 0 {value}\n")

    def test_unknown_key(self):
        """Unknown keys are reported with their line"""
        with pytest.raises(ScenarioError) as exc:
            parse_scenario("grid 3 3\ngamma 0.9\nwall 1 1\n")
        assert exc.value.line == 3
        assert "unknown key" in str(exc.value)

    def test_syntax_error(self):
        """Non-numeric coordinates are syntax errors"""
        with pytest.raises(ScenarioError) as exc:
            parse_scenario("grid 3 3\ngamma 0.9\nreward A 0 zero 1.0\n")
        assert exc.value.line == 3
        assert "syntax error" in str(exc.value)

    def test_missing_gamma_and_duplicate_gamma(self):
        """gamma must appear exactly once"""
        with pytest.raises(ScenarioError, match="missing 'gamma'"):
            parse_scenario("grid 3 3\nreward A 0 0 1.0\n")
        with pytest.raises(ScenarioError, match="duplicate 'gamma'"):
            parse_scenario("grid 3 3\ngamma 0.9\ngamma 0.8\n")

    def test_out_of_bounds_and_bad_header(self):
        """Bounds, header and empty input errors"""
        with pytest.raises(ScenarioError, match="outside"):
            parse_scenario("grid 3 3\ngamma 0.9\nreward A 3 0 1.0\n")
        with pytest.raises(ScenarioError, match="header"):
            parse_scenario("map 3 3\ngamma 0.9\n")
        with pytest.raises(ScenarioError, match="empty"):
            parse_scenario("# nothing here\n")

    def test_parse_graph(self):
        """General-graph form keeps edge order"""
        text = "states 3\nedge 0 1\nedge 1 2\nedge 2 0\nedge 0 2\ngamma 0.8\nreward x 2 3.0\n"
        scenario = parse_scenario(text)

        assert isinstance(scenario, GraphScenario)
        assert scenario.edges == [(0, 1), (1, 2), (2, 0), (0, 2)]
        assert scenario.rewards[0].state == 2

    def test_graph_errors(self):
        """Edges and rewards must reference known, distinct states"""
        with pytest.raises(ScenarioError, match="unknown state"):
            parse_scenario("states 2\nedge 0 5\ngamma 0.9\nreward a 0 1.0\n")
        with pytest.raises(ScenarioError, match="duplicate reward state"):
            parse_scenario("states 2\nedge 0 1\nedge 1 0\ngamma 0.9\nreward a 0 1.0\nreward b 0 2.0\n")

    def test_round_trip(self):
        """render then parse returns an equal scenario"""
        grid_scenario = parse_scenario("grid 4 2\ngamma 0.95\nreward a 0 1 0.1\nreward b 3 0 9.75\n")
        assert parse_scenario(render_scenario(grid_scenario)) == grid_scenario

        graph_scenario = parse_scenario("states 2\nedge 0 1\nedge 1 0\ngamma 0.3\nreward z 1 1e-3\n")
        assert parse_scenario(render_scenario(graph_scenario)) == graph_scenario

    def test_comment_marker_inside_id(self):
        """A '#' anywhere in a reward id is rejected"""
        with pytest.raises(ValidationError, match="invalid reward id"):
            GridScenario(width=2, height=1, gamma=0.9, rewards=[RewardEntry(id="a#b", x=0, y=0, value=1.0)])
        with pytest.raises(ValidationError, match="invalid reward id"):
            GraphReward(id="x#", state=0, value=1.0)


@pytest.mark.unit
class TestGridToModel:
    """Test grid world construction"""

    def setup_method(self):
        """Setup test fixtures"""
        self.service = ModelService()

    def test_two_cells(self):
        """Each cell of a 2x1 grid has one move toward the other"""
        model = grid(2, 1, 0.9, [("a", 0, 0, 1.0)])
        assert model.actions == ((1,), (0,))
        assert model.action_names == (("Right",), ("Left",))

    def test_three_by_three(self):
        """Center cell has four moves in Up, Down, Left, Right order"""
        model = grid(3, 3, 0.9, [("a", 1, 1, 1.0)])
        center = model.state_at(1, 1)

        assert len(model.actions[center]) == 4
        assert model.action_names[center] == ("Up", "Down", "Left", "Right")
        assert model.actions[center] == (model.state_at(1, 2), model.state_at(1, 0),
                                         model.state_at(0, 1), model.state_at(2, 1))
        for x, y in ((0, 0), (2, 0), (0, 2), (2, 2)):
            assert len(model.actions[model.state_at(x, y)]) == 2

    def test_row_major_rewards(self):
        """States are numbered y * width + x"""
        model = grid(4, 3, 0.9, [("a", 2, 1, 1.0)])
        assert model.rewards[0].state == 1 * 4 + 2
        assert model.coords(6) == (2, 1)

    def test_single_cell_has_no_actions(self):
        """A 1x1 grid builds but fails validation"""
        model = grid(1, 1, 0.9, [("a", 0, 0, 1.0)])
        report = self.service.validate_model(model)

        assert not report.ok
        assert [v.code for v in report.violations] == ["NO_ACTIONS"]

    def test_deterministic_numbering(self):
        """Building twice gives the same tables"""
        first = self.service.build_model(parse_scenario(CORRIDOR_TEXT))
        second = self.service.build_model(parse_scenario(CORRIDOR_TEXT))
        assert first.actions == second.actions
        assert first.action_names == second.action_names


@pytest.mark.unit
class TestValidateModel:
    """Test MDP class restrictions"""

    def setup_method(self):
        """Setup test fixtures"""
        self.service = ModelService()

    def _model(self, actions, rewards, gamma=0.9):
        return MdpModel(num_states=len(actions), actions=actions, rewards=rewards, gamma=gamma)

    def test_grid_is_valid(self):
        """Grids are strongly connected"""
        report = self.service.validate_model(corridor_ab())
        assert report.ok
        assert report.violations == []

    def test_not_strongly_connected(self):
        """State 1 only loops on itself"""
        model = self._model(((1,), (1,)), (RewardSpec("a", 0, 1.0),))
        codes = [v.code for v in self.service.validate_model(model).violations]
        assert codes == ["NOT_STRONGLY_CONNECTED"]

    def test_nonpositive_reward(self):
        """Rewards must be positive"""
        model = self._model(((1,), (0,)), (RewardSpec("a", 0, 0.0),))
        codes = [v.code for v in self.service.validate_model(model).violations]
        assert "NONPOSITIVE_REWARD" in codes

    def test_reward_and_successor_problems(self):
        """Bad successors and reward states are all reported"""
        model = self._model(
            ((1, 7), (0,)),
            (RewardSpec("a", 0, 1.0), RewardSpec("a", 0, 2.0), RewardSpec("b", 5, 1.0)),
            gamma=1.0,
        )
        codes = {v.code for v in self.service.validate_model(model).violations}
        assert {"INVALID_SUCCESSOR", "DUPLICATE_REWARD_STATE", "DUPLICATE_REWARD_ID",
                "REWARD_STATE_OUT_OF_RANGE", "GAMMA_OUT_OF_RANGE"} <= codes

    def test_no_rewards(self):
        """At least one reward is required"""
        model = self._model(((1,), (0,)), ())
        assert [v.code for v in self.service.validate_model(model).violations] == ["NO_REWARDS"]

    def test_require_valid_raises(self):
        """require_valid raises with the report attached"""
        model = self._model(((1,), (1,)), (RewardSpec("a", 0, 1.0),))
        with pytest.raises(ModelValidationError) as exc:
            self.service.require_valid(model)
        assert not exc.value.report.ok
        assert "NOT_STRONGLY_CONNECTED" in str(exc.value)

    def test_report_ok_matches_violations(self):
        """ok must agree with the violation list"""
        with pytest.raises(ValidationError):
            ValidationReport(ok=True, violations=[ValidationIssue(code="X", message="x")])
        with pytest.raises(ValidationError):
            ValidationReport(ok=False, violations=[])
