import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from leadersel import exhaustive_select, greedy_select, greedy_then_swap, laplacian
from leadersel.estimators import (
    ExhaustiveLeaderSelector,
    GreedyLeaderSelector,
    GreedySwapLeaderSelector,
    SwapLeaderSelector,
    network_from_adjacency,
)


def adjacency_of(net):
    lap = laplacian(net)
    adj = -lap
    np.fill_diagonal(adj, 0.0)
    return adj


def test_network_from_adjacency_round_trip(fig1):
    net = network_from_adjacency(adjacency_of(fig1))
    assert net.edges == fig1.edges
    assert np.array_equal(net.kappa, fig1.kappa)


def test_adjacency_validation():
    with pytest.raises(ValueError):
        network_from_adjacency(np.ones((2, 3)))
    with pytest.raises(ValueError):
        network_from_adjacency(np.array([[0.0, 1.0], [0.5, 0.0]]))
    with pytest.raises(ValueError):
        network_from_adjacency(np.array([[1.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        network_from_adjacency(np.array([[0.0, -1.0], [-1.0, 0.0]]))


def test_greedy_selector_matches_functional_api(fig1):
    selector = GreedyLeaderSelector(k=4).fit(fig1)
    report = greedy_select(fig1, 4)
    assert np.array_equal(selector.leaders_, report.leaders.members)
    assert selector.coherence_ == report.coherence
    assert selector.n_nodes_ == fig1.n
    assert selector.report_.algorithm == "greedy"


def test_greedy_selector_from_adjacency(fig1):
    selector = GreedyLeaderSelector(k=4).fit(adjacency_of(fig1))
    assert np.array_equal(selector.leaders_, greedy_select(fig1, 4).leaders.members)


def test_kappa_parameter_used_for_arrays():
    adj = np.array([[0.0, 1.0], [1.0, 0.0]])
    selector = GreedyLeaderSelector(k=1, kappa=[1.0, 10.0]).fit(adj)
    assert selector.leaders_.tolist() == [1]  # larger gain wins the first pick


def test_get_support(fig1):
    selector = ExhaustiveLeaderSelector(k=4).fit(fig1)
    mask = selector.get_support()
    assert mask.dtype == bool and mask.sum() == 4
    assert np.flatnonzero(mask).tolist() == [0, 2, 5, 7]
    assert selector.get_support(indices=True).tolist() == [0, 2, 5, 7]


def test_get_support_requires_fit():
    with pytest.raises(NotFittedError):
        GreedyLeaderSelector(k=2).get_support()


def test_fit_select_shortcut(fig1):
    leaders = GreedySwapLeaderSelector(k=4).fit_select(fig1)
    assert leaders.tolist() == [i for i in greedy_then_swap(fig1, 4).leaders.members]


def test_sklearn_clone_and_params(fig1):
    selector = SwapLeaderSelector(k=3, random_state=7, improvement_tol=1e-8)
    cloned = clone(selector)
    assert cloned.get_params() == selector.get_params()
    params = GreedyLeaderSelector(k=2).get_params()
    assert params == {"k": 2, "kappa": None}
    tuned = GreedyLeaderSelector(k=2).set_params(k=5)
    assert tuned.k == 5


def test_swap_selector_initial(fig1):
    selector = SwapLeaderSelector(initial=[0, 1, 3, 4]).fit(fig1)
    assert selector.leaders_.tolist() == [1, 3, 5, 7]
    assert selector.coherence_ == pytest.approx(3.0576, abs=5e-4)


def test_swap_selector_random_start_reproducible(fig1):
    a = SwapLeaderSelector(k=4, random_state=3).fit(fig1)
    b = SwapLeaderSelector(k=4, random_state=3).fit(fig1)
    assert np.array_equal(a.leaders_, b.leaders_)
    assert len(a.leaders_) == 4


def test_swap_selector_argument_validation(fig1):
    with pytest.raises(ValueError):
        SwapLeaderSelector().fit(fig1)
    with pytest.raises(ValueError):
        SwapLeaderSelector(initial=[0], k=1).fit(fig1)
    with pytest.raises(ValueError):
        SwapLeaderSelector(k=0).fit(fig1)


def test_exhaustive_selector(fig1):
    selector = ExhaustiveLeaderSelector(k=4).fit(fig1)
    report = exhaustive_select(fig1, 4)
    assert np.array_equal(selector.leaders_, report.leaders.members)
    assert selector.coherence_ == pytest.approx(3.0, abs=5e-4)
