"""
Pydantic schemas for scenarios, commands and explanation reports
"""
from enum import Enum
from typing import Any, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class PeakKind(str, Enum):
    BASELINE = "baseline"
    COMBINED = "combined"
    DELTA = "delta"


class PropagationMode(str, Enum):
    ACHIEVABLE = "achievable"
    LITERAL = "literal"


class CollectionCount(str, Enum):
    ONCE = "once"
    INFINITE = "infinite"


class CollectionMethod(str, Enum):
    DELTA_RULE = "theorem4"
    EVENT_CHAIN = "event-chain"


class Verb(str, Enum):
    VALIDATE = "validate"
    SOLVE = "solve"
    EXPLAIN = "explain"
    MAP = "map"
    CONTRIBUTIONS = "contributions"
    PATH = "path"
    CHECK = "check"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


def _check_reward_id(v: str) -> str:
    if not v or any(ch.isspace() for ch in v) or "#" in v:
        raise ValueError(f"invalid reward id {v!r}")
    return v


class RewardEntry(BaseModel):
    """Reward placed on a grid cell"""
    model_config = ConfigDict(frozen=True)

    id: str
    x: int = Field(ge=0)
    y: int = Field(ge=0)
    value: float = Field(gt=0)

    @field_validator("id")
    @classmethod
    def id_is_token(cls, v):
        return _check_reward_id(v)


class GridScenario(BaseModel):
    """Grid world scenario: width x height cells, 4-connected moves"""
    model_config = ConfigDict(frozen=True)

    width: int = Field(ge=1)
    height: int = Field(ge=1)
    gamma: float = Field(gt=0, lt=1)
    rewards: List[RewardEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def rewards_fit_grid(self):
        cells = set()
        ids = set()
        for reward in self.rewards:
            if reward.x >= self.width or reward.y >= self.height:
                raise ValueError(f"reward {reward.id} at ({reward.x},{reward.y}) is outside the grid")
            if (reward.x, reward.y) in cells:
                raise ValueError(f"duplicate reward cell ({reward.x},{reward.y})")
            if reward.id in ids:
                raise ValueError(f"duplicate reward id {reward.id}")
            cells.add((reward.x, reward.y))
            ids.add(reward.id)
        return self


class GraphReward(BaseModel):
    """Reward placed on a state of a general graph"""
    model_config = ConfigDict(frozen=True)

    id: str
    state: int = Field(ge=0)
    value: float = Field(gt=0)

    @field_validator("id")
    @classmethod
    def id_is_token(cls, v):
        return _check_reward_id(v)


class GraphScenario(BaseModel):
    """General deterministic transition graph; action order is edge order per source"""
    model_config = ConfigDict(frozen=True)

    num_states: int = Field(ge=1)
    edges: List[Tuple[int, int]] = Field(default_factory=list)
    gamma: float = Field(gt=0, lt=1)
    rewards: List[GraphReward] = Field(default_factory=list)

    @model_validator(mode="after")
    def references_in_range(self):
        for source, target in self.edges:
            if not (0 <= source < self.num_states and 0 <= target < self.num_states):
                raise ValueError(f"edge {source}->{target} references an unknown state")
        states = set()
        ids = set()
        for reward in self.rewards:
            if reward.state >= self.num_states:
                raise ValueError(f"reward {reward.id} references unknown state {reward.state}")
            if reward.state in states:
                raise ValueError(f"duplicate reward state {reward.state}")
            if reward.id in ids:
                raise ValueError(f"duplicate reward id {reward.id}")
            states.add(reward.state)
            ids.add(reward.id)
        return self


class ValidationIssue(BaseModel):
    code: str
    message: str


class ValidationReport(BaseModel):
    """Outcome of checking a model against the supported MDP class"""
    ok: bool
    violations: List[ValidationIssue] = Field(default_factory=list)

    @model_validator(mode="after")
    def ok_matches_violations(self):
        if self.ok != (not self.violations):
            raise ValueError("ok must be true exactly when there are no violations")
        return self

    @classmethod
    def from_violations(cls, violations: List[ValidationIssue]) -> "ValidationReport":
        return cls(ok=not violations, violations=violations)


class DominanceResult(BaseModel):
    """Dominant cycle peak at a query state"""
    state: int
    dominant: int
    value: float
    co_dominant: List[int]
    # Peak whose cycle the greedy hill climb actually ends in
    destination: int
    detour: bool = False
    mode: PropagationMode = PropagationMode.ACHIEVABLE

    @field_validator("co_dominant")
    @classmethod
    def sorted_ids(cls, v):
        return sorted(v)


class CollectionEntry(BaseModel):
    reward: str
    count: CollectionCount


class CollectionReport(BaseModel):
    """Rewards collected from a query state"""
    state: int
    entries: List[CollectionEntry]
    dominant: int
    method: CollectionMethod

    def as_set(self) -> set:
        return {(entry.reward, entry.count) for entry in self.entries}


class ContributionReport(BaseModel):
    """Relative contribution of each collected peak to the value at a state"""
    state: int
    value: float
    peaks: List[int]
    ordered_values: List[float]
    differences: List[float]
    ratios: List[float]


class PathEvent(BaseModel):
    step: int
    reward: str


class PathTrace(BaseModel):
    """Greedy path from a state into and around its terminal cycle"""
    start: int
    states: List[int]
    k_max: int
    plus: List[int]
    cycle: List[int]
    events: List[PathEvent]


class ComparisonReport(BaseModel):
    max_abs_diff: float
    max_rel_diff: float
    argmax_state: int


class Command(BaseModel):
    """One CLI invocation"""
    verb: Verb
    scenario_path: Optional[str] = None
    state: Optional[str] = None
    output_format: OutputFormat = OutputFormat.TEXT
    mode: PropagationMode = PropagationMode.ACHIEVABLE
    ppm_path: Optional[str] = None
    scale: Optional[int] = Field(default=None, ge=1)
    budget: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def state_required(self):
        if self.verb in (Verb.EXPLAIN, Verb.CONTRIBUTIONS, Verb.PATH) and self.state is None:
            raise ValueError(f"--state is required for {self.verb.value}")
        return self


class ReportSection(BaseModel):
    """Group of key/value records, rendered as one blank-line separated block"""
    name: str
    records: List[Tuple[str, Any]] = Field(default_factory=list)

    def add(self, key: str, value: Any) -> "ReportSection":
        self.records.append((key, value))
        return self


class Report(BaseModel):
    verb: Verb
    sections: List[ReportSection] = Field(default_factory=list)

    def section(self, name: str) -> ReportSection:
        section = ReportSection(name=name)
        self.sections.append(section)
        return section
