from .exceptions import (
    PeakExplainerError, ScenarioError, ModelValidationError, DistanceError,
    SolverConvergenceError, PathTraceError, OracleConvergenceError, ComparisonError,
    RenderError, UsageError
)
from .numeric import tie_tolerance, is_tie, tied_maximizers, argmax_lowest, format_float
from .scenario_parser import Scenario, ScenarioParser, parse_scenario, render_scenario
from .map_renderer import MapRenderer, render_ascii_map, render_ppm_map
from .report_writer import ReportWriter

__all__ = [
    "PeakExplainerError", "ScenarioError", "ModelValidationError", "DistanceError",
    "SolverConvergenceError", "PathTraceError", "OracleConvergenceError", "ComparisonError",
    "RenderError", "UsageError",
    "tie_tolerance", "is_tie", "tied_maximizers", "argmax_lowest", "format_float",
    "Scenario", "ScenarioParser", "parse_scenario", "render_scenario",
    "MapRenderer", "render_ascii_map", "render_ppm_map", "ReportWriter"
]
