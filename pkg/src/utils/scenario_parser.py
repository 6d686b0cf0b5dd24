"""
Line-oriented scenario parser and renderer
"""
import logging
import re
from typing import Dict, List, Optional, Pattern, Tuple, Union

from pydantic import ValidationError

from ..models.schemas import GraphReward, GraphScenario, GridScenario, RewardEntry
from .exceptions import ScenarioError

logger = logging.getLogger(__name__)

Scenario = Union[GridScenario, GraphScenario]

_INT = r"(\d+)"
_FLOAT = r"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[-+]?inf|nan)"
_ID = r"(\S+)"


class ScenarioParser:
    """Parser for grid and general-graph scenario files"""

    def __init__(self):
        self.patterns = self._build_patterns()

    def parse(self, text: str) -> Scenario:
        """
        Parse scenario text

        Args:
            text: scenario file contents

        Returns:
            GridScenario or GraphScenario mirroring the file
        """
        lines = self._significant_lines(text)
        if not lines:
            raise ScenarioError("empty scenario: expected 'grid' or 'states' header")

        header_no, header = lines[0]
        keyword = header.split()[0]
        if keyword == "grid":
            scenario = self._parse_grid(lines)
        elif keyword == "states":
            scenario = self._parse_graph(lines)
        else:
            raise ScenarioError(f"expected 'grid' or 'states' header, got {keyword!r}", header_no)

        logger.info(f"Parsed {type(scenario).__name__} with {len(scenario.rewards)} rewards")
        return scenario

    def render(self, scenario: Scenario) -> str:
        """Render a scenario back to the file format"""
        out = []
        if isinstance(scenario, GridScenario):
            out.append(f"grid {scenario.width} {scenario.height}")
            out.append(f"gamma {scenario.gamma!r}")
            for reward in scenario.rewards:
                out.append(f"reward {reward.id} {reward.x} {reward.y} {reward.value!r}")
        else:
            out.append(f"states {scenario.num_states}")
            for source, target in scenario.edges:
                out.append(f"edge {source} {target}")
            out.append(f"gamma {scenario.gamma!r}")
            for reward in scenario.rewards:
                out.append(f"reward {reward.id} {reward.state} {reward.value!r}")
        return "\n".join(out) + "\n"

    def _build_patterns(self) -> Dict[str, Pattern]:
        """Full-line patterns per keyword and scenario form"""
        return {
            "grid": re.compile(rf"grid\s+{_INT}\s+{_INT}"),
            "states": re.compile(rf"states\s+{_INT}"),
            "gamma": re.compile(rf"gamma\s+{_FLOAT}"),
            "edge": re.compile(rf"edge\s+{_INT}\s+{_INT}"),
            "grid_reward": re.compile(rf"reward\s+{_ID}\s+{_INT}\s+{_INT}\s+{_FLOAT}"),
            "graph_reward": re.compile(rf"reward\s+{_ID}\s+{_INT}\s+{_FLOAT}"),
        }

    def _significant_lines(self, text: str) -> List[Tuple[int, str]]:
        """Strip comments and blank lines, keeping 1-based line numbers"""
        lines = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.append((number, line))
        return lines

    def _match(self, key: str, line: str, number: int) -> Tuple[str, ...]:
        match = self.patterns[key].fullmatch(line)
        if not match:
            raise ScenarioError(f"syntax error in {line.split()[0]!r} line: {line!r}", number)
        return match.groups()

    def _parse_gamma(self, line: str, number: int, seen: Optional[float]) -> float:
        if seen is not None:
            raise ScenarioError("duplicate 'gamma' line", number)
        (token,) = self._match("gamma", line, number)
        gamma = float(token)
        if not 0.0 < gamma < 1.0:
            raise ScenarioError(f"gamma {token} outside (0,1)", number)
        return gamma

    def _parse_value(self, token: str, number: int) -> float:
        value = float(token)
        if not value > 0.0 or value == float("inf"):
            raise ScenarioError(f"reward value {token} must be a positive finite number", number)
        return value

    def _parse_grid(self, lines: List[Tuple[int, str]]) -> GridScenario:
        header_no, header = lines[0]
        width, height = (int(t) for t in self._match("grid", header, header_no))
        if width < 1 or height < 1:
            raise ScenarioError("grid dimensions must be positive", header_no)

        gamma = None
        rewards = []
        cells = {}
        ids = set()
        for number, line in lines[1:]:
            keyword = line.split()[0]
            if keyword == "gamma":
                gamma = self._parse_gamma(line, number, gamma)
            elif keyword == "reward":
                rid, x, y, value = self._match("grid_reward", line, number)
                x, y = int(x), int(y)
                if x >= width or y >= height:
                    raise ScenarioError(f"reward {rid} at ({x},{y}) outside {width}x{height} grid", number)
                if (x, y) in cells:
                    raise ScenarioError(
                        f"duplicate reward cell ({x},{y}), already used on line {cells[(x, y)]}", number
                    )
                if rid in ids:
                    raise ScenarioError(f"duplicate reward id {rid}", number)
                cells[(x, y)] = number
                ids.add(rid)
                rewards.append(RewardEntry(id=rid, x=x, y=y, value=self._parse_value(value, number)))
            else:
                raise ScenarioError(f"unknown key {keyword!r} in grid scenario", number)

        if gamma is None:
            raise ScenarioError("missing 'gamma' line")
        return self._build(GridScenario, width=width, height=height, gamma=gamma, rewards=rewards)

    def _parse_graph(self, lines: List[Tuple[int, str]]) -> GraphScenario:
        header_no, header = lines[0]
        (n,) = self._match("states", header, header_no)
        num_states = int(n)
        if num_states < 1:
            raise ScenarioError("state count must be positive", header_no)

        gamma = None
        edges = []
        rewards = []
        states = set()
        ids = set()
        for number, line in lines[1:]:
            keyword = line.split()[0]
            if keyword == "gamma":
                gamma = self._parse_gamma(line, number, gamma)
            elif keyword == "edge":
                source, target = (int(t) for t in self._match("edge", line, number))
                if source >= num_states or target >= num_states:
                    raise ScenarioError(f"edge {source}->{target} references an unknown state", number)
                edges.append((source, target))
            elif keyword == "reward":
                rid, state, value = self._match("graph_reward", line, number)
                state = int(state)
                if state >= num_states:
                    raise ScenarioError(f"reward {rid} references unknown state {state}", number)
                if state in states:
                    raise ScenarioError(f"duplicate reward state {state}", number)
                if rid in ids:
                    raise ScenarioError(f"duplicate reward id {rid}", number)
                states.add(state)
                ids.add(rid)
                rewards.append(GraphReward(id=rid, state=state, value=self._parse_value(value, number)))
            else:
                raise ScenarioError(f"unknown key {keyword!r} in graph scenario", number)

        if gamma is None:
            raise ScenarioError("missing 'gamma' line")
        return self._build(GraphScenario, num_states=num_states, edges=edges, gamma=gamma, rewards=rewards)

    def _build(self, model_cls, **data):
        try:
            return model_cls(**data)
        except ValidationError as e:
            logger.error(f"Scenario failed schema validation: {e}")
            raise ScenarioError(str(e))


def parse_scenario(text: str) -> Scenario:
    return ScenarioParser().parse(text)


def render_scenario(scenario: Scenario) -> str:
    return ScenarioParser().render(scenario)
