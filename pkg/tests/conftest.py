import random

import pytest

from altersup import build_observer
from altersup.gridworld import (
    SCENARIO_DELETE,
    SCENARIO_INJECT,
    SCENARIO_REPLACE,
    robot_model,
)
from altersup.randgen import RandomModelConfig, random_model


@pytest.fixture(scope="session")
def replace_model():
    return robot_model(SCENARIO_REPLACE)


@pytest.fixture(scope="session")
def delete_model():
    return robot_model(SCENARIO_DELETE)


@pytest.fixture(scope="session")
def inject_model():
    return robot_model(SCENARIO_INJECT)


@pytest.fixture(scope="session")
def replace_observer(replace_model):
    return build_observer(replace_model)


@pytest.fixture(scope="session")
def delete_observer(delete_model):
    return build_observer(delete_model)


@pytest.fixture(scope="session")
def inject_observer(inject_model):
    return build_observer(inject_model)


@pytest.fixture(scope="session")
def random_models():
    rng = random.Random(1729)
    return [random_model(rng, RandomModelConfig()) for _ in range(60)]
