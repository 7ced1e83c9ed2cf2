# Define the accuracy for running the tests
import jax

jax.config.update("jax_enable_x64", True)

import os  # noqa: E402

import pytest  # noqa: E402
import yaml  # noqa: E402

# the CLI leaves logging configuration to pytest when this is set
os.environ["JAX_SZEGO_TESTING"] = "1"

# Identify the path to this current file
test_directory = os.path.dirname(os.path.abspath(__file__))

# Loading the acceptance grids and frozen tolerances
with open(os.path.join(test_directory, "szego_tests_config.yaml"), "r") as f:
    test_config = yaml.safe_load(f)


@pytest.fixture(scope="session", name="test_config")
def _test_config():
    return test_config


def pytest_collection_modifyitems(config, items):
    """This hook skips the slow acceptance runs unless they are enabled in
    szego_tests_config.yaml or requested with JAX_SZEGO_RUN_SLOW=1.
    """
    if test_config.get("run_slow", False) or os.environ.get("JAX_SZEGO_RUN_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="slow acceptance runs are disabled")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
