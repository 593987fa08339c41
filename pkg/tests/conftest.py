import pytest

from src.core.entities.kspace import KSpaceContext
from src.core.entities.problem import BVProblem

from .factories import model_context, model_problem


@pytest.fixture
def ctx() -> KSpaceContext:
    return model_context()


@pytest.fixture
def small_problem() -> BVProblem:
    return model_problem()
