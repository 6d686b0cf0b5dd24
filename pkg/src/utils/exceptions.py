"""
Custom exceptions for the Reward Peak Explainer
"""
from typing import Optional


class PeakExplainerError(Exception):
    """Base exception for the Reward Peak Explainer"""
    pass


class ScenarioError(PeakExplainerError):
    """Exception raised for malformed scenario text"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ModelValidationError(PeakExplainerError):
    """Exception raised when a model falls outside the supported MDP class"""

    def __init__(self, report):
        self.report = report
        codes = ", ".join(issue.code for issue in report.violations)
        super().__init__(f"model failed validation: {codes}")


class DistanceError(PeakExplainerError):
    """Exception raised when a distance field is inconsistent with the model"""
    pass


class SolverConvergenceError(PeakExplainerError):
    """Exception raised when the peak height solver does not converge"""
    pass


class PathTraceError(PeakExplainerError):
    """Exception raised when a greedy path never closes a cycle"""
    pass


class OracleConvergenceError(PeakExplainerError):
    """Exception raised when value iteration exceeds its sweep budget"""
    pass


class ComparisonError(PeakExplainerError):
    """Exception raised for mismatched value tables"""
    pass


class RenderError(PeakExplainerError):
    """Exception raised when a map cannot be rendered"""
    pass


class UsageError(PeakExplainerError):
    """Exception raised for invalid command-line usage"""
    pass
