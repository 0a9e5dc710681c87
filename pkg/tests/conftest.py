import random
from pathlib import Path

import pytest

CORPUS = Path(__file__).parent / "fixtures" / "corpus"


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20240521, help="seed for randomized oracle tests")


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


@pytest.fixture(scope="session")
def corpus() -> Path:
    return CORPUS
