from .schemas import (
    PeakKind, PropagationMode, CollectionCount, CollectionMethod, Verb, OutputFormat,
    RewardEntry, GridScenario, GraphReward, GraphScenario, ValidationIssue, ValidationReport,
    DominanceResult, CollectionEntry, CollectionReport, ContributionReport, PathEvent,
    PathTrace, ComparisonReport, Command, ReportSection, Report
)
from .mdp import (
    StateId, ActionId, RewardSpec, MdpModel, DistanceField, RewardDistanceTable,
    HeightTable, Peak, PeakSet, DominanceMap, ValueTable, Trajectory
)

__all__ = [
    "PeakKind", "PropagationMode", "CollectionCount", "CollectionMethod", "Verb", "OutputFormat",
    "RewardEntry", "GridScenario", "GraphReward", "GraphScenario", "ValidationIssue",
    "ValidationReport", "DominanceResult", "CollectionEntry", "CollectionReport",
    "ContributionReport", "PathEvent", "PathTrace", "ComparisonReport", "Command",
    "ReportSection", "Report",
    "StateId", "ActionId", "RewardSpec", "MdpModel", "DistanceField", "RewardDistanceTable",
    "HeightTable", "Peak", "PeakSet", "DominanceMap", "ValueTable", "Trajectory"
]
