from .model_service import ModelService, transition_matrix
from .distance_service import DistanceService
from .peak_solver import PeakSolver
from .explain_service import ExplainService
from .oracle_service import OracleService, successor_array

__all__ = [
    "ModelService", "transition_matrix", "DistanceService", "PeakSolver",
    "ExplainService", "OracleService", "successor_array"
]
