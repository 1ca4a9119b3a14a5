import pytest
from hypothesis import HealthCheck, settings

from leadersel import build_network

from oracles import FIG1_EDGES, FIG1_N

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def fig1():
    """The 9-node benchmark graph with unit gains."""
    return build_network(FIG1_N, FIG1_EDGES)


@pytest.fixture()
def path2():
    return build_network(2, [(0, 1)])


@pytest.fixture()
def path3():
    return build_network(3, [(0, 1), (1, 2)])


@pytest.fixture()
def cycle4():
    return build_network(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
