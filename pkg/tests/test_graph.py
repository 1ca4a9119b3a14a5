import numpy as np
import pytest

from leadersel import LeaderSet, as_leader_set, build_network, grounded_matrix, laplacian
from leadersel.errors import (
    DisconnectedGraph,
    DuplicateEdge,
    EmptyLeaderSet,
    IndexOutOfRange,
    NonPositiveKappa,
    NonPositiveWeight,
    SelfLoop,
)

from oracles import laplacian_ref


def test_two_path_laplacian():
    net = build_network(2, [(0, 1)], [1, 1])
    assert np.array_equal(laplacian(net), [[1, -1], [-1, 1]])


def test_three_cycle_laplacian():
    net = build_network(3, [(0, 1), (1, 2), (2, 0)])
    assert np.array_equal(laplacian(net), [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])


def test_fig1_degrees(fig1):
    # hand-counted from the edge list
    assert np.array_equal(np.diag(laplacian(fig1)), [2, 3, 2, 3, 3, 2, 2, 3, 2])
    assert np.array_equal(laplacian(fig1), laplacian_ref(fig1.n, [(i, j) for i, j, _ in fig1.edges]))


def test_laplacian_row_sums_are_zero(fig1):
    assert np.array_equal(laplacian(fig1) @ np.ones(fig1.n), np.zeros(fig1.n))


def test_laplacian_row_sums_float_weights():
    rng = np.random.default_rng(3)
    edges = [(0, 1, 0.3), (1, 2, 1.7), (2, 3, 2.9), (0, 3, 0.001), (1, 3, 5.5)]
    net = build_network(4, edges, rng.uniform(0.5, 2, 4))
    assert np.abs(laplacian(net) @ np.ones(4)).max() <= 1e-12


def test_edge_weight_default_and_canonical_order():
    net = build_network(3, [(2, 0), (0, 1, 2.5)])
    assert net.edges == ((0, 1, 2.5), (0, 2, 1.0))


def test_disconnected_named():
    with pytest.raises(DisconnectedGraph) as err:
        build_network(3, [(0, 1)])
    assert err.value.unreachable == 2


def test_self_loop():
    with pytest.raises(SelfLoop):
        build_network(2, [(0, 0), (0, 1)])


def test_duplicate_edge_detected_regardless_of_orientation():
    with pytest.raises(DuplicateEdge):
        build_network(2, [(0, 1), (1, 0)])


def test_non_positive_kappa_names_node():
    with pytest.raises(NonPositiveKappa) as err:
        build_network(2, [(0, 1)], [1.0, 0.0])
    assert err.value.node == 1


def test_non_positive_weight():
    with pytest.raises(NonPositiveWeight):
        build_network(2, [(0, 1, -2.0)])


def test_non_finite_inputs_rejected():
    for w in (float("nan"), float("inf")):
        with pytest.raises(NonPositiveWeight):
            build_network(2, [(0, 1, w)])
    for k in (float("nan"), float("inf")):
        with pytest.raises(NonPositiveKappa):
            build_network(2, [(0, 1)], [1.0, k])


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        build_network(2, [(0, 2)])


def test_kappa_length_mismatch():
    with pytest.raises(ValueError):
        build_network(2, [(0, 1)], [1.0])


def test_bad_node_count():
    with pytest.raises(ValueError):
        build_network(0)


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        build_network(2, [(0, 1)], labels=["a", "a"])


def test_single_node_network():
    net = build_network(1, [], [3.0])
    assert np.array_equal(laplacian(net), [[0.0]])
    assert np.array_equal(grounded_matrix(net, [0]), [[3.0]])


def test_grounded_two_path():
    net = build_network(2, [(0, 1)], [1, 1])
    assert np.array_equal(grounded_matrix(net, [0]), [[2, -1], [-1, 1]])
    assert np.array_equal(grounded_matrix(net, [0, 1]), [[2, -1], [-1, 2]])


def test_grounded_requires_nonempty():
    net = build_network(2, [(0, 1)])
    with pytest.raises(EmptyLeaderSet):
        grounded_matrix(net, [])


def test_grounded_minus_laplacian_is_kappa_on_leaders(fig1):
    rng = np.random.default_rng(11)
    kappa = rng.uniform(0.5, 2, fig1.n)
    net = build_network(fig1.n, fig1.edges, kappa)
    subset = [1, 4, 8]
    diff = grounded_matrix(net, subset) - laplacian(net)
    expected = np.diag([kappa[i] if i in subset else 0 for i in range(net.n)])
    assert np.array_equal(diff != 0, expected != 0)  # support is exactly S
    assert np.allclose(diff, expected, rtol=1e-15, atol=0)
    assert np.all(diff >= 0)


def test_grounded_positive_definite(fig1):
    rng = np.random.default_rng(5)
    for _ in range(20):
        size = int(rng.integers(1, fig1.n + 1))
        subset = sorted(rng.choice(fig1.n, size=size, replace=False).tolist())
        smallest = np.linalg.eigvalsh(grounded_matrix(fig1, subset))[0]
        assert smallest > 0


def test_grounding_augmented_graph_matches_exactly(fig1):
    # Build the (n+1)-node graph with an absorbing node tied to each leader by
    # kappa_i, then delete its row and column: must equal grounded_matrix
    # bit-for-bit when all quantities are integer-valued.
    subset = [0, 2, 5, 7]
    n = fig1.n
    aug = np.zeros((n + 1, n + 1))
    for i, j, w in fig1.edges:
        aug[i, i] += w
        aug[j, j] += w
        aug[i, j] -= w
        aug[j, i] -= w
    for i in subset:
        k = fig1.kappa[i]
        aug[i, i] += k
        aug[n, n] += k
        aug[i, n] -= k
        aug[n, i] -= k
    assert np.array_equal(aug[:n, :n], grounded_matrix(fig1, subset))


def test_leader_set_coercion_sorts_and_dedupes():
    s = as_leader_set([3, 1, 3], 5)
    assert s.members == (1, 3)
    assert 3 in s and 0 not in s
    assert len(s) == 2


def test_leader_set_out_of_range():
    with pytest.raises(IndexOutOfRange):
        as_leader_set([5], 5)
    with pytest.raises(IndexOutOfRange):
        as_leader_set(LeaderSet((7,)), 5)


def test_leader_set_add_remove():
    s = LeaderSet((1, 4))
    assert s.added(2).members == (1, 2, 4)
    assert s.removed(4).members == (1,)


def test_labels_round_trip():
    net = build_network(3, [(0, 1), (1, 2)], labels=["x", "y", "z"])
    assert net.label_of(1) == "y"
    assert net.index_of("z") == 2
    with pytest.raises(IndexOutOfRange):
        net.index_of("w")


def test_default_labels_are_one_based():
    net = build_network(2, [(0, 1)])
    assert net.label_of(0) == 1
    assert net.index_of("2") == 1
    assert net.index_of(1) == 0
    with pytest.raises(IndexOutOfRange):
        net.index_of("0")
    with pytest.raises(IndexOutOfRange):
        net.index_of("3")
