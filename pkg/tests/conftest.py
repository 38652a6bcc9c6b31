import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from certfree.authority import SystemParams, setup  # noqa: E402
from certfree.group import available_backends, get_group  # noqa: E402


def seeded(seed):
    return random.Random(seed).randbytes


@pytest.fixture
def rng():
    return seeded(1234)


@pytest.fixture(scope="session")
def mock_group():
    return get_group("mock")


@pytest.fixture(scope="session")
def prod_group():
    return get_group("production")


@pytest.fixture(scope="session")
def mock_params(mock_group):
    return SystemParams(mock_group, 1024, 18)


@pytest.fixture(scope="session")
def prod_params(prod_group):
    return SystemParams(prod_group, 1024, 18)


@pytest.fixture(scope="session")
def prod_keys(prod_params):
    return setup(prod_params, seeded(99))


@pytest.fixture(scope="session")
def mock_keys(mock_params):
    return setup(mock_params, seeded(98))


@pytest.fixture(scope="session", params=["mock", "production"])
def any_keys(request, mock_keys, prod_keys):
    return mock_keys if request.param == "mock" else prod_keys


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
