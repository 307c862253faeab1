import numpy as np
import pytest

from falsestructures.case1.problem import Case1Problem
from falsestructures.modules.experiment_module import module_holder


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--run-experiments",
        action="store_true",
        default=False,
        help="run the long stochastic acceptance experiments",
    )


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    only = [item for item in items if item.get_closest_marker("only")]
    if only:
        config.hook.pytest_deselected(items=[item for item in items if item not in only])
        items[:] = only
    if config.getoption("--run-experiments"):
        return
    skip = pytest.mark.skip(reason="needs --run-experiments")
    for item in items:
        if item.get_closest_marker("experiment"):
            item.add_marker(skip)


@pytest.fixture
def problem() -> Case1Problem:
    return Case1Problem()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def clean_modules():
    module_holder.clear()
    yield module_holder
    module_holder.clear()
