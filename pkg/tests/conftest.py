"""
Shared fixtures
"""
from dataclasses import dataclass
from typing import List

import pytest

from src.models.mdp import MdpModel, PeakSet, ValueTable
from src.services import OracleService, PeakSolver

from .builders import random_instance

SUITE_SIZE = 200


@dataclass
class SolvedInstance:
    seed: int
    model: MdpModel
    peakset: PeakSet
    oracle: ValueTable


@pytest.fixture(scope="session")
def random_suite() -> List[SolvedInstance]:
    """200 seeded random grid instances, each solved by peaks and by value iteration"""
    solver = PeakSolver()
    oracle = OracleService()
    suite = []
    for seed in range(SUITE_SIZE):
        model = random_instance(seed)
        suite.append(SolvedInstance(
            seed=seed,
            model=model,
            peakset=solver.solve(model),
            oracle=oracle.value_iteration(model),
        ))
    return suite
