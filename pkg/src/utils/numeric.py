"""
Tie-tolerant comparisons shared by the solver, the explainer and the oracle
"""
from typing import Optional, Sequence

import numpy as np

from ..config import get_settings

settings = get_settings()


def tie_tolerance(a: float, b: float, rel_tol: Optional[float] = None,
                  abs_tol: Optional[float] = None) -> float:
    """Absolute slack within which a and b count as equal."""
    rel = settings.tie_rel_tol if rel_tol is None else rel_tol
    floor = settings.tie_abs_tol if abs_tol is None else abs_tol
    return max(rel * max(abs(a), abs(b)), floor)


def is_tie(a: float, b: float, rel_tol: Optional[float] = None,
           abs_tol: Optional[float] = None) -> bool:
    return abs(a - b) <= tie_tolerance(a, b, rel_tol, abs_tol)


def tied_maximizers(values: Sequence[float], rel_tol: Optional[float] = None,
                    abs_tol: Optional[float] = None) -> list:
    """
    Indices whose value ties the maximum, ascending.

    The first element is the lowest-index maximizer, which is the
    deterministic choice everywhere in the package.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return []
    best = float(arr.max())
    return [i for i, v in enumerate(arr) if is_tie(float(v), best, rel_tol, abs_tol)]


def argmax_lowest(values: Sequence[float], rel_tol: Optional[float] = None,
                  abs_tol: Optional[float] = None) -> int:
    return tied_maximizers(values, rel_tol, abs_tol)[0]


def format_float(value: float, digits: Optional[int] = None) -> str:
    """Render a float with a fixed number of significant digits."""
    digits = settings.float_digits if digits is None else digits
    return f"{float(value):.{digits}g}"
