"""Machine checks of the structural facts the selection guarantees rest on.

Each check enumerates (or samples) concrete instances and records the
tightest slack it saw, so a pass is evidence and a failure carries the
witness. The checked facts:

* submodularity of the surrogate: f(A) + f(B) >= f(A u B) + f(A n B);
* monotonicity: A subset of B implies f(A) <= f(B), and f >= 0;
* nonincreasing marginal gains: f_a(X) = f(X + {a}) - f(X) shrinks as X grows;
* element-wise positivity of inverse grounded matrices;
* non-positivity of the trace expression
  tr([(Q(t) + kap_a e_a e_a^T)^{-2} - Q(t)^{-2}] (Q_T - Q_S))
  along the diagonal interpolation Q(t) between nested leader sets.

All subsets are represented as bitmasks internally.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .coherence import SurrogateConstants, compute_constants, spd_inverse
from .errors import EmptyLeaderSet, InvalidNesting, TooLargeForExhaustive
from .graph import LeaderSet, Network, as_leader_set, build_network, grounded_matrix

EXHAUSTIVE_NODE_LIMIT = 12
_VIOLATION_TOL = 1e-9
_POSITIVITY_TOL = 1e-12
_DERIVATIVE_TOL = 1e-12
_MAX_RECORDED = 100

PROPERTIES = (
    "submodularity",
    "monotone_nondecreasing",
    "marginal_gain_nonincreasing",
    "elementwise_positive",
    "interpolation_derivative_sign",
)


@dataclass(frozen=True)
class Violation:
    detail: str
    margin: float


@dataclass(frozen=True)
class PropertyReport:
    property: str
    instance: str
    checked: int
    violations: tuple[Violation, ...]
    worst_margin: float

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "instance": self.instance,
            "checked": self.checked,
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "violations": [
                {"detail": v.detail, "margin": v.margin} for v in self.violations
            ],
        }


def _describe(net: Network, extra: str = "") -> str:
    desc = f"n={net.n}, m={len(net.edges)}"
    return f"{desc}, {extra}" if extra else desc


def _mask_trace_table(net: Network) -> np.ndarray:
    """tr(Q_S^{-1}) for every nonempty subset bitmask; +inf at the empty mask."""
    n = net.n
    lap = net._laplacian
    kappa = net.kappa
    table = np.full(2**n, np.inf)
    for mask in range(1, 2**n):
        idx = [i for i in range(n) if mask >> i & 1]
        q = lap.copy()
        q[idx, idx] += kappa[idx]
        table[mask] = float(spd_inverse(q).trace())
    return table


def surrogate_table(net: Network, constants: SurrogateConstants | None = None) -> np.ndarray:
    """Surrogate objective for every subset bitmask (0 at the empty set)."""
    if net.n > EXHAUSTIVE_NODE_LIMIT:
        raise TooLargeForExhaustive(net.n, EXHAUSTIVE_NODE_LIMIT)
    if constants is None:
        constants = compute_constants(net)
    traces = _mask_trace_table(net)
    values = constants.offset - traces
    values[0] = 0.0
    return values


def _lazy_surrogate(net: Network, constants: SurrogateConstants | None):
    """Memoized mask -> surrogate value, for sampled checks on any graph size."""
    if constants is None:
        constants = compute_constants(net)
    lap = net._laplacian
    kappa = net.kappa
    cache: dict[int, float] = {0: 0.0}

    def value(mask: int) -> float:
        if mask not in cache:
            idx = [i for i in range(net.n) if mask >> i & 1]
            q = lap.copy()
            q[idx, idx] += kappa[idx]
            cache[mask] = constants.offset - float(spd_inverse(q).trace())
        return cache[mask]

    return value


def _random_mask(rng: np.random.Generator, n: int) -> int:
    """Uniform subset bitmask, valid for any n."""
    return int.from_bytes(rng.bytes((n + 7) // 8), "little") & ((1 << n) - 1)


def _subset_values(net: Network, mode: str, constants: SurrogateConstants | None):
    """mask -> surrogate value; a dense table for exhaustive mode, lazy otherwise."""
    if mode == "exhaustive":
        table = surrogate_table(net, constants)
        return lambda mask: float(table[mask])
    if mode == "sampled":
        return _lazy_surrogate(net, constants)
    raise ValueError(f"unknown mode {mode!r}")


def check_submodularity(
    net: Network,
    mode: str = "exhaustive",
    budget: int = 10_000,
    seed: int = 0,
    constants: SurrogateConstants | None = None,
) -> PropertyReport:
    """f(A) + f(B) >= f(A u B) + f(A n B) over subset pairs."""
    n = net.n
    worst = np.inf
    checked = 0
    violations: list[Violation] = []

    if mode == "exhaustive":
        values = surrogate_table(net, constants)
        masks = np.arange(2**n, dtype=np.int64)
        checked = int(4**n)
        for a in masks:
            margin = values[a] + values - values[masks | a] - values[masks & a]
            low = float(margin.min())
            worst = min(worst, low)
            if low < -_VIOLATION_TOL and len(violations) < _MAX_RECORDED:
                for b in np.nonzero(margin < -_VIOLATION_TOL)[0]:
                    violations.append(
                        Violation(
                            f"A={_mask_str(int(a), n)} B={_mask_str(int(b), n)}",
                            float(margin[b]),
                        )
                    )
                    if len(violations) >= _MAX_RECORDED:
                        break
    elif mode == "sampled":
        value = _lazy_surrogate(net, constants)
        rng = np.random.default_rng(seed)
        for _ in range(budget):
            a, b = _random_mask(rng, n), _random_mask(rng, n)
            margin = value(a) + value(b) - value(a | b) - value(a & b)
            checked += 1
            worst = min(worst, margin)
            if margin < -_VIOLATION_TOL and len(violations) < _MAX_RECORDED:
                violations.append(
                    Violation(f"A={_mask_str(a, n)} B={_mask_str(b, n)}", margin)
                )
    else:
        raise ValueError(f"unknown mode {mode!r}")

    return PropertyReport(
        property="submodularity",
        instance=_describe(net, f"mode={mode}, seed={seed}"),
        checked=checked,
        violations=tuple(violations),
        worst_margin=float(worst),
    )


def check_monotone(
    net: Network,
    mode: str = "exhaustive",
    budget: int = 10_000,
    seed: int = 0,
    constants: SurrogateConstants | None = None,
) -> PropertyReport:
    """f(S1) <= f(S2) for nested S1 subset of S2 (includes f >= 0 via S1 = empty)."""
    n = net.n
    value = _subset_values(net, mode, constants)
    worst = np.inf
    checked = 0
    violations: list[Violation] = []

    def record(s1: int, s2: int) -> None:
        nonlocal worst, checked
        checked += 1
        margin = value(s2) - value(s1)
        if margin < worst:
            worst = margin
        if margin < -_VIOLATION_TOL and len(violations) < _MAX_RECORDED:
            violations.append(
                Violation(f"S1={_mask_str(s1, n)} S2={_mask_str(s2, n)}", margin)
            )

    if mode == "exhaustive":
        for s2 in range(2**n):
            s1 = s2
            while True:
                record(s1, s2)
                if s1 == 0:
                    break
                s1 = (s1 - 1) & s2
    else:
        rng = np.random.default_rng(seed)
        for _ in range(budget):
            s2 = _random_mask(rng, n)
            s1 = s2 & _random_mask(rng, n)
            record(s1, s2)

    return PropertyReport(
        property="monotone_nondecreasing",
        instance=_describe(net, f"mode={mode}, seed={seed}"),
        checked=checked,
        violations=tuple(violations),
        worst_margin=float(worst),
    )


def check_derived_nonincreasing(
    net: Network,
    a: int,
    mode: str = "exhaustive",
    budget: int = 10_000,
    seed: int = 0,
    constants: SurrogateConstants | None = None,
) -> PropertyReport:
    """The marginal gain of node a never grows as the base set grows.

    For nested S1 subset of S2, both avoiding a:
    f(S1 + {a}) - f(S1) >= f(S2 + {a}) - f(S2).
    """
    a = int(a)
    if not 0 <= a < net.n:
        raise InvalidNesting(f"node {a} out of range [0, {net.n})")
    n = net.n
    value = _subset_values(net, mode, constants)
    bit = 1 << a
    worst = np.inf
    checked = 0
    violations: list[Violation] = []

    def gain(mask: int) -> float:
        return value(mask | bit) - value(mask)

    def record(s1: int, s2: int) -> None:
        nonlocal worst, checked
        checked += 1
        margin = gain(s1) - gain(s2)
        if margin < worst:
            worst = margin
        if margin < -_VIOLATION_TOL and len(violations) < _MAX_RECORDED:
            violations.append(
                Violation(f"a={a} S1={_mask_str(s1, n)} S2={_mask_str(s2, n)}", margin)
            )

    if mode == "exhaustive":
        for s2 in range(2**n):
            if s2 & bit:
                continue
            s1 = s2
            while True:
                record(s1, s2)
                if s1 == 0:
                    break
                s1 = (s1 - 1) & s2
    else:
        rng = np.random.default_rng(seed)
        full = ((1 << n) - 1) ^ bit
        for _ in range(budget):
            s2 = _random_mask(rng, n) & full
            s1 = s2 & _random_mask(rng, n)
            record(s1, s2)

    return PropertyReport(
        property="marginal_gain_nonincreasing",
        instance=_describe(net, f"a={a}, mode={mode}, seed={seed}"),
        checked=checked,
        violations=tuple(violations),
        worst_margin=float(worst),
    )


def check_positivity(net: Network, samples: int = 1000, seed: int = 0) -> PropertyReport:
    """Every entry of Q_S^{-1} is strictly positive for random nonempty S."""
    rng = np.random.default_rng(seed)
    worst = np.inf
    violations: list[Violation] = []
    for _ in range(samples):
        size = int(rng.integers(1, net.n + 1))
        members = tuple(sorted(rng.choice(net.n, size=size, replace=False).tolist()))
        inv = spd_inverse(grounded_matrix(net, LeaderSet(members)))
        low = float(inv.min())
        worst = min(worst, low)
        if low < -_POSITIVITY_TOL and len(violations) < _MAX_RECORDED:
            violations.append(Violation(f"S={members}", low))
    return PropertyReport(
        property="elementwise_positive",
        instance=_describe(net, f"samples={samples}, seed={seed}"),
        checked=samples,
        violations=tuple(violations),
        worst_margin=float(worst),
    )


def interpolation_derivative(net: Network, s1, s2, a: int, t: float) -> float:
    """tr([(Q(t) + kap_a e_a e_a^T)^{-2} - Q(t)^{-2}] D) at one interpolation point.

    Q(t) moves along the diagonal segment from Q_{S1} to Q_{S2} and D is the
    diagonal difference Q_{S2} - Q_{S1}. Nonpositive for nested sets.
    """
    small = as_leader_set(s1, net.n)
    big = as_leader_set(s2, net.n)
    _validate_nesting(net, small, big, a)
    diff_idx = [i for i in big.members if i not in small]
    if not diff_idx:
        return 0.0
    q_t = grounded_matrix(net, small)
    q_t[diff_idx, diff_idx] += t * net.kappa[diff_idx]
    base_inv = spd_inverse(q_t)
    q_a = q_t.copy()
    q_a[a, a] += net.kappa[a]
    bumped_inv = spd_inverse(q_a)
    # tr(M D) with diagonal D touches only diagonal entries of M = A^2 - B^2.
    bumped_sq_diag = np.einsum("ij,ij->i", bumped_inv, bumped_inv)
    base_sq_diag = np.einsum("ij,ij->i", base_inv, base_inv)
    deltas = (bumped_sq_diag - base_sq_diag)[diff_idx] * net.kappa[diff_idx]
    return float(deltas.sum())


def _validate_nesting(net: Network, small: LeaderSet, big: LeaderSet, a: int) -> None:
    if len(small) == 0:
        raise EmptyLeaderSet("the inner leader set must be nonempty")
    if not set(small.members) <= set(big.members):
        raise InvalidNesting(f"{small.members} is not a subset of {big.members}")
    if not 0 <= a < net.n:
        raise InvalidNesting(f"node {a} out of range [0, {net.n})")
    if a in big.members:
        raise InvalidNesting(f"node {a} must lie outside both leader sets")


def check_trace_derivative_sign(
    net: Network, s1, s2, a: int, t_grid=None
) -> PropertyReport:
    """The interpolation derivative expression stays <= tolerance on a t grid."""
    if t_grid is None:
        t_grid = np.linspace(0.0, 1.0, 11)
    worst = np.inf
    checked = 0
    violations: list[Violation] = []
    for t in t_grid:
        value = interpolation_derivative(net, s1, s2, a, float(t))
        margin = -value  # want value <= tol, i.e. margin >= -tol
        checked += 1
        worst = min(worst, margin)
        if value > _DERIVATIVE_TOL and len(violations) < _MAX_RECORDED:
            violations.append(Violation(f"t={float(t)!r}", margin))
    small = as_leader_set(s1, net.n)
    big = as_leader_set(s2, net.n)
    return PropertyReport(
        property="interpolation_derivative_sign",
        instance=_describe(net, f"s1={small.members}, s2={big.members}, a={a}"),
        checked=checked,
        violations=tuple(violations),
        worst_margin=float(worst),
    )


def _mask_str(mask: int, n: int) -> str:
    return "{" + ",".join(str(i) for i in range(n) if mask >> i & 1) + "}"


def merge_reports(reports) -> tuple[int, float, int]:
    """(total checked, min worst margin, total violations) across reports."""
    checked = sum(r.checked for r in reports)
    worst = min((r.worst_margin for r in reports), default=np.inf)
    bad = sum(len(r.violations) for r in reports)
    return checked, float(worst), bad


def combine_reports(property: str, instance: str, reports) -> PropertyReport:
    """Fold many reports of one property into a single aggregated report."""
    checked, worst, _ = merge_reports(reports)
    violations: list[Violation] = []
    for r in reports:
        violations.extend(r.violations)
        if len(violations) >= _MAX_RECORDED:
            break
    return PropertyReport(
        property=property,
        instance=instance,
        checked=checked,
        violations=tuple(violations[:_MAX_RECORDED]),
        worst_margin=worst,
    )


def enumerate_connected_networks(n: int, kappa=None):
    """All labeled connected graphs on n nodes with unit weights."""
    if n == 1:
        yield build_network(1, [], kappa)
        return
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(2 ** len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
        if len(edges) < n - 1:
            continue
        if _connected(n, edges):
            yield build_network(n, edges, kappa)


def _connected(n: int, edges) -> bool:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    joined = 0
    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            joined += 1
    return joined == n - 1


def random_connected_network(
    rng: np.random.Generator,
    n: int,
    extra_edge_prob: float = 0.25,
    kappa_range: tuple[float, float] = (0.5, 2.0),
    weight_range: tuple[float, float] | None = None,
) -> Network:
    """Random tree plus independent extra edges; random gains in kappa_range."""
    edges: list[tuple] = []
    present = set()
    for child in range(1, n):
        parent = int(rng.integers(0, child))
        present.add((parent, child))
    for i, j in itertools.combinations(range(n), 2):
        if (i, j) not in present and rng.random() < extra_edge_prob:
            present.add((i, j))
    for i, j in sorted(present):
        if weight_range is None:
            edges.append((i, j))
        else:
            edges.append((i, j, float(rng.uniform(*weight_range))))
    kappa = rng.uniform(kappa_range[0], kappa_range[1], size=n)
    return build_network(n, edges, kappa)
