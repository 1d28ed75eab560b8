import sys

import numpy as np
import pytest
from loguru import logger

from gramstab.core import CirculatorySystem, CriterionVerdict, GyroscopicSystem

BAND = 1e-6


def away_from_band(*verdicts: CriterionVerdict) -> bool:
    return all(abs(v.margin) > BAND * max(1.0, abs(v.lhs), abs(v.rhs)) for v in verdicts)


def random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.uniform(-1, 1, (n, n))
    return np.triu(a) + np.triu(a, 1).T


def random_skew(rng: np.random.Generator, n: int) -> np.ndarray:
    a = np.triu(rng.uniform(-1, 1, (n, n)), 1)
    return a - a.T


def random_circulatory(rng: np.random.Generator, n: int) -> CirculatorySystem:
    return CirculatorySystem(K=random_symmetric(rng, n), C=random_skew(rng, n))


def random_gyroscopic(rng: np.random.Generator, n: int) -> GyroscopicSystem:
    return GyroscopicSystem(G=random_skew(rng, n), K=random_symmetric(rng, n))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture(autouse=True)
def stderr_sink():
    # commands swap the sink for the runner's stream; put the default one back
    yield
    logger.remove()
    logger.add(sys.stderr, level="WARNING")
