import numpy as np
import pytest

from leadersel import build_network, compute_constants
from leadersel.coherence import SurrogateConstants
from leadersel.errors import EmptyLeaderSet, InvalidNesting, TooLargeForExhaustive
from leadersel.properties import (
    check_derived_nonincreasing,
    check_monotone,
    check_positivity,
    check_submodularity,
    check_trace_derivative_sign,
    enumerate_connected_networks,
    interpolation_derivative,
    merge_reports,
    random_connected_network,
    surrogate_table,
)

from oracles import net_trace_inv


def corrupted(net):
    real = compute_constants(net)
    return SurrogateConstants(0.0, real.max_singleton_trace, real.argmax_node)


def test_surrogate_table_matches_reference(path3):
    consts = compute_constants(path3)
    table = surrogate_table(path3, consts)
    assert table[0] == 0.0
    for mask in range(1, 8):
        subset = [i for i in range(3) if mask >> i & 1]
        expected = consts.offset - net_trace_inv(path3, subset)
        assert table[mask] == pytest.approx(expected, rel=1e-10)


def test_surrogate_table_size_cap():
    net = build_network(13, [(i, i + 1) for i in range(12)])
    with pytest.raises(TooLargeForExhaustive):
        surrogate_table(net)


def test_submodularity_fig1_exhaustive(fig1):
    report = check_submodularity(fig1)
    assert report.passed
    assert report.checked == 4**9
    # equality pairs (A = B) make the tightest slack exactly zero
    assert report.worst_margin == pytest.approx(0.0, abs=1e-9)


def test_submodularity_equality_cases(path3):
    table = surrogate_table(path3)
    for a in range(8):
        assert table[a] + table[a] - table[a | a] - table[a & a] == 0.0
    # nested pairs reduce to equality too (up to summation order rounding)
    for small, big in ((0b001, 0b011), (0b010, 0b110), (0b001, 0b111)):
        margin = table[small] + table[big] - table[small | big] - table[small & big]
        assert abs(margin) <= 1e-12


def test_submodularity_sampled_mode(fig1):
    report = check_submodularity(fig1, mode="sampled", budget=200, seed=5)
    assert report.passed
    assert report.checked == 200
    again = check_submodularity(fig1, mode="sampled", budget=200, seed=5)
    assert report.worst_margin == again.worst_margin


def test_sampled_mode_beyond_exhaustive_cap():
    # graphs too large for the 2^n table still get sampled coverage
    rng = np.random.default_rng(8)
    net = random_connected_network(rng, 20)
    with pytest.raises(TooLargeForExhaustive):
        check_submodularity(net)
    assert check_submodularity(net, mode="sampled", budget=60, seed=2).passed
    assert check_monotone(net, mode="sampled", budget=60, seed=2).passed
    assert check_derived_nonincreasing(net, 3, mode="sampled", budget=60, seed=2).passed


def test_monotone_fig1(fig1):
    report = check_monotone(fig1)
    assert report.passed
    assert report.checked == 3**9
    assert report.worst_margin == pytest.approx(0.0, abs=1e-9)


def test_derived_nonincreasing_fig1_all_nodes(fig1):
    for a in range(fig1.n):
        report = check_derived_nonincreasing(fig1, a)
        assert report.passed
        assert report.checked == 3 ** (fig1.n - 1)


def test_derived_three_path_oracle_example(path3):
    # independent 3x3 oracle for f_0(empty) >= f_0({2})
    consts = compute_constants(path3)
    f = {}
    for mask in range(8):
        subset = [i for i in range(3) if mask >> i & 1]
        f[mask] = 0.0 if not subset else consts.offset - net_trace_inv(path3, subset)
    gain_empty = f[0b001] - f[0b000]
    gain_at_2 = f[0b101] - f[0b100]
    assert gain_empty >= gain_at_2 - 1e-12
    report = check_derived_nonincreasing(path3, 0)
    assert report.passed


def test_positivity_two_path(path2):
    report = check_positivity(path2, samples=50, seed=1)
    assert report.passed
    assert report.worst_margin > 0


def test_positivity_single_node():
    net = build_network(1, [], [2.0])
    report = check_positivity(net, samples=5, seed=0)
    assert report.passed
    assert report.worst_margin == pytest.approx(0.5)


def test_positivity_fig1(fig1):
    report = check_positivity(fig1, samples=500, seed=3)
    assert report.passed


def test_derivative_zero_when_sets_equal(fig1):
    report = check_trace_derivative_sign(fig1, [4], [4], a=6)
    assert report.passed
    assert report.worst_margin == 0.0


def test_derivative_endpoints_match_definition(fig1):
    # at t=0 the interpolated matrix is the grounded matrix of s1, at t=1 of s2
    s1, s2, a = [4], [3, 4], 6
    for t, subset in ((0.0, s1), (1.0, s2)):
        q_t = net_trace_inv(fig1, subset)  # reference trace at the endpoint
        value = interpolation_derivative(fig1, s1, s2, a, t)
        # reference: assemble the expression from scratch
        import numpy.linalg as la
        from oracles import grounded_ref

        edges = [(i, j, w) for i, j, w in fig1.edges]
        q = grounded_ref(fig1.n, edges, fig1.kappa, s1)
        for i in set(s2) - set(s1):
            q[i, i] += t * fig1.kappa[i]
        bumped = q.copy()
        bumped[a, a] += fig1.kappa[a]
        diff = np.zeros((fig1.n, fig1.n))
        for i in set(s2) - set(s1):
            diff[i, i] = fig1.kappa[i]
        m = la.inv(bumped) @ la.inv(bumped) - la.inv(q) @ la.inv(q)
        expected = float(np.trace(m @ diff))
        assert value == pytest.approx(expected, abs=1e-10)
        assert value <= 1e-12


def test_derivative_sign_fig1_grid(fig1):
    report = check_trace_derivative_sign(fig1, [4], [3, 4], a=6, t_grid=np.linspace(0, 1, 11))
    assert report.passed
    assert report.checked == 11


def test_derivative_nesting_validation(fig1):
    with pytest.raises(EmptyLeaderSet):
        check_trace_derivative_sign(fig1, [], [1], a=3)
    with pytest.raises(InvalidNesting):
        check_trace_derivative_sign(fig1, [1, 2], [1], a=3)
    with pytest.raises(InvalidNesting):
        check_trace_derivative_sign(fig1, [1], [1, 3], a=3)
    with pytest.raises(InvalidNesting):
        check_trace_derivative_sign(fig1, [1], [1], a=99)


def test_corrupted_offset_produces_violations(path2):
    # harness hygiene: a deliberately broken surrogate must be caught
    report = check_submodularity(path2, constants=corrupted(path2))
    assert not report.passed
    assert report.violations
    assert report.worst_margin < 0


def test_corrupted_offset_fig1(fig1):
    report = check_submodularity(fig1, constants=corrupted(fig1))
    assert not report.passed
    mono = check_monotone(fig1, constants=corrupted(fig1))
    assert not mono.passed


def test_report_serialization(path2):
    doc = check_positivity(path2, samples=10, seed=0).to_dict()
    assert doc["passed"] is True
    assert doc["property"] == "elementwise_positive"
    assert doc["violations"] == []


def test_merge_reports(path2, fig1):
    reports = [check_positivity(path2, 10, 0), check_positivity(fig1, 10, 0)]
    checked, worst, bad = merge_reports(reports)
    assert checked == 20
    assert bad == 0
    assert worst == min(r.worst_margin for r in reports)


def test_enumerate_connected_counts():
    # labeled connected graph counts, cross-checked against networkx
    counts = [sum(1 for _ in enumerate_connected_networks(n)) for n in range(1, 6)]
    assert counts == [1, 1, 4, 38, 728]


def test_enumerated_graphs_are_valid():
    for net in enumerate_connected_networks(4):
        assert net.n == 4
        assert np.array_equal(net.kappa, np.ones(4))


def test_submodularity_on_random_six_node_graphs():
    rng = np.random.default_rng(61)
    for _ in range(25):
        net = random_connected_network(rng, 6)
        consts = compute_constants(net)
        assert check_submodularity(net, constants=consts).passed
        assert check_monotone(net, constants=consts).passed
        a = int(rng.integers(0, 6))
        assert check_derived_nonincreasing(net, a, constants=consts).passed


def test_random_connected_network_determinism():
    net1 = random_connected_network(np.random.default_rng(99), 12)
    net2 = random_connected_network(np.random.default_rng(99), 12)
    assert net1.edges == net2.edges
    assert np.array_equal(net1.kappa, net2.kappa)
    assert np.all(net1.kappa >= 0.5) and np.all(net1.kappa <= 2.0)


def test_unknown_mode_rejected(path2):
    with pytest.raises(ValueError):
        check_submodularity(path2, mode="blind")
    with pytest.raises(ValueError):
        check_monotone(path2, mode="blind")
    with pytest.raises(ValueError):
        check_derived_nonincreasing(path2, 0, mode="blind")
