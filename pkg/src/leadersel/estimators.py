"""Scikit-learn style estimators wrapping the selection algorithms.

Each selector is fit on a graph, given either as a ``Network`` or as a dense
symmetric adjacency matrix (nonnegative weights, zero diagonal), and exposes
the chosen leaders through fitted attributes and ``get_support`` in the
manner of sklearn feature selectors. Parameters follow sklearn conventions
(``get_params`` / ``set_params`` / ``clone`` all work).

Examples
--------
>>> import numpy as np
>>> from leadersel.estimators import GreedyLeaderSelector
>>> adjacency = np.array([[0., 1., 0.], [1., 0., 1.], [0., 1., 0.]])
>>> selector = GreedyLeaderSelector(k=1).fit(adjacency)
>>> selector.leaders_
array([1])
"""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted, check_random_state

from .graph import Network, build_network
from .selection import (
    DEFAULT_IMPROVEMENT_TOL,
    exhaustive_select,
    greedy_select,
    greedy_then_swap,
    swap_select,
)


def network_from_adjacency(adjacency: np.ndarray, kappa=None) -> Network:
    """Validate a dense adjacency matrix and build a Network from it."""
    adjacency = check_array(adjacency, dtype=float)
    n = adjacency.shape[0]
    if adjacency.shape != (n, n):
        raise ValueError(f"adjacency matrix must be square, got {adjacency.shape}")
    if not np.allclose(adjacency, adjacency.T):
        raise ValueError("adjacency matrix must be symmetric")
    if np.any(np.diag(adjacency) != 0):
        raise ValueError("adjacency matrix must have a zero diagonal")
    if np.any(adjacency < 0):
        raise ValueError("adjacency weights must be nonnegative")
    edges = [
        (i, j, float(adjacency[i, j]))
        for i in range(n)
        for j in range(i + 1, n)
        if adjacency[i, j] != 0
    ]
    return build_network(n, edges, kappa)


class BaseLeaderSelector(BaseEstimator):
    """Shared fit plumbing; subclasses implement ``_select``."""

    def _coerce(self, X) -> Network:
        if isinstance(X, Network):
            return X
        return network_from_adjacency(X, kappa=getattr(self, "kappa", None))

    def fit(self, X, y=None):
        """Select leaders for the graph ``X`` (Network or adjacency matrix)."""
        net = self._coerce(X)
        report = self._select(net)
        self.network_ = net
        self.report_ = report
        self.n_nodes_ = net.n
        self.leaders_ = np.asarray(report.leaders.members, dtype=int)
        self.coherence_ = report.coherence
        return self

    def get_support(self, indices: bool = False):
        """Boolean leader mask over nodes, or the leader indices themselves."""
        check_is_fitted(self, "leaders_")
        if indices:
            return self.leaders_.copy()
        mask = np.zeros(self.n_nodes_, dtype=bool)
        mask[self.leaders_] = True
        return mask

    def fit_select(self, X):
        """Fit and return the leader indices."""
        return self.fit(X).leaders_


class GreedyLeaderSelector(BaseLeaderSelector):
    """Greedy k-leader selection.

    Parameters
    ----------
    k : int
        Number of leaders to select.
    kappa : array-like of shape (n,), optional
        Attachment gains, used only when fitting an adjacency matrix
        (a Network carries its own gains). Defaults to all ones.
    """

    def __init__(self, k: int = 1, kappa=None):
        self.k = k
        self.kappa = kappa

    def _select(self, net: Network):
        return greedy_select(net, self.k)


class SwapLeaderSelector(BaseLeaderSelector):
    """Local-search leader selection by single leader/follower exchanges.

    Parameters
    ----------
    initial : sequence of int, optional
        Starting leader set (node indices). Mutually exclusive with ``k``.
    k : int, optional
        Size of a random starting set drawn with ``random_state``.
    kappa : array-like, optional
        Gains for adjacency-matrix inputs.
    improvement_tol : float
        Minimum trace decrease for an exchange to count as improving.
    max_scans : int, optional
        Cap on full scans; defaults to ``10 * n * k``.
    random_state : int or Generator, optional
        Seeds the random starting set when ``k`` is given.
    """

    def __init__(
        self,
        initial=None,
        k: int | None = None,
        kappa=None,
        improvement_tol: float = DEFAULT_IMPROVEMENT_TOL,
        max_scans: int | None = None,
        random_state=None,
    ):
        self.initial = initial
        self.k = k
        self.kappa = kappa
        self.improvement_tol = improvement_tol
        self.max_scans = max_scans
        self.random_state = random_state

    def _select(self, net: Network):
        if (self.initial is None) == (self.k is None):
            raise ValueError("provide exactly one of 'initial' or 'k'")
        if self.initial is not None:
            start = self.initial
        else:
            if not isinstance(self.k, numbers.Integral) or not 1 <= self.k <= net.n:
                raise ValueError(f"k must be an integer in [1, {net.n}], got {self.k!r}")
            rng = check_random_state(self.random_state)
            start = rng.choice(net.n, size=int(self.k), replace=False)
        return swap_select(
            net, start, improvement_tol=self.improvement_tol, max_scans=self.max_scans
        )


class ExhaustiveLeaderSelector(BaseLeaderSelector):
    """Exact k-leader selection by subset enumeration (small graphs only).

    Parameters
    ----------
    k : int
        Number of leaders.
    kappa : array-like, optional
        Gains for adjacency-matrix inputs.
    max_subsets : int
        Refuse to enumerate more than this many subsets.
    """

    def __init__(self, k: int = 1, kappa=None, max_subsets: int = 10**7):
        self.k = k
        self.kappa = kappa
        self.max_subsets = max_subsets

    def _select(self, net: Network):
        return exhaustive_select(net, self.k, max_subsets=self.max_subsets)


class GreedySwapLeaderSelector(BaseLeaderSelector):
    """Greedy selection refined by the swap local search.

    Parameters
    ----------
    k : int
        Number of leaders.
    kappa : array-like, optional
        Gains for adjacency-matrix inputs.
    improvement_tol : float
        Minimum trace decrease for a swap to count as improving.
    max_scans : int, optional
        Cap on full swap scans.
    """

    def __init__(
        self,
        k: int = 1,
        kappa=None,
        improvement_tol: float = DEFAULT_IMPROVEMENT_TOL,
        max_scans: int | None = None,
    ):
        self.k = k
        self.kappa = kappa
        self.improvement_tol = improvement_tol
        self.max_scans = max_scans

    def _select(self, net: Network):
        return greedy_then_swap(
            net, self.k, improvement_tol=self.improvement_tol, max_scans=self.max_scans
        )
