"""Network model: validated undirected weighted graphs with per-node attachment gains.

A ``Network`` is immutable after construction and always connected. Leader
subsets are carried as ``LeaderSet`` values (sorted, duplicate-free index
tuples). Both are safe to share across threads.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    DisconnectedGraph,
    DuplicateEdge,
    EmptyLeaderSet,
    IndexOutOfRange,
    NonPositiveKappa,
    NonPositiveWeight,
    SelfLoop,
)

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class Network:
    """Connected undirected graph with positive edge weights and gains kappa.

    ``edges`` is canonical: each entry is ``(i, j, w)`` with ``i < j``, sorted.
    ``labels`` maps internal 0-based indices to external names; ``None`` means
    nodes are externally known by 1-based integers.
    """

    n: int
    edges: tuple[Edge, ...]
    kappa: np.ndarray
    labels: tuple[str, ...] | None = None

    @cached_property
    def _laplacian(self) -> np.ndarray:
        lap = np.zeros((self.n, self.n))
        for i, j, w in self.edges:
            lap[i, i] += w
            lap[j, j] += w
            lap[i, j] -= w
            lap[j, i] -= w
        lap.setflags(write=False)
        return lap

    def label_of(self, i: int) -> str | int:
        if self.labels is not None:
            return self.labels[i]
        return i + 1

    def index_of(self, label) -> int:
        """Resolve an external label (or 1-based integer) to an internal index."""
        if self.labels is not None:
            try:
                return self.labels.index(str(label))
            except ValueError:
                raise IndexOutOfRange(label, self.n, what="node label") from None
        try:
            value = int(label)
        except (TypeError, ValueError):
            raise IndexOutOfRange(label, self.n, what="node label") from None
        if not 1 <= value <= self.n:
            raise IndexOutOfRange(label, self.n, what="node label")
        return value - 1


@dataclass(frozen=True)
class LeaderSet:
    """Sorted, duplicate-free tuple of node indices. May be empty."""

    members: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item) -> bool:
        return item in self.members

    def added(self, a: int) -> "LeaderSet":
        return LeaderSet(tuple(sorted(self.members + (a,))))

    def removed(self, i: int) -> "LeaderSet":
        return LeaderSet(tuple(m for m in self.members if m != i))


def as_leader_set(value, n: int) -> LeaderSet:
    """Coerce an iterable of indices (or a LeaderSet) into a validated LeaderSet."""
    if isinstance(value, LeaderSet):
        for m in value.members:
            if not 0 <= m < n:
                raise IndexOutOfRange(m, n)
        return value
    members = [int(m) for m in value]
    for m in members:
        if not 0 <= m < n:
            raise IndexOutOfRange(m, n)
    uniq = tuple(sorted(set(members)))
    return LeaderSet(uniq)


def build_network(
    n: int,
    edges: Sequence[tuple] = (),
    kappa: Sequence[float] | None = None,
    labels: Sequence[str] | None = None,
) -> Network:
    """Validate and construct a Network.

    ``edges`` entries are ``(i, j)`` or ``(i, j, weight)`` with 0-based
    indices; the default weight is 1. ``kappa`` defaults to all ones.

    Raises DisconnectedGraph, SelfLoop, DuplicateEdge, NonPositiveKappa,
    NonPositiveWeight or IndexOutOfRange, each naming the offending element.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"node count must be >= 1, got {n}")

    canon: list[Edge] = []
    seen: set[tuple[int, int]] = set()
    for entry in edges:
        if len(entry) == 2:
            i, j = entry
            w = 1.0
        else:
            i, j, w = entry
        i, j, w = int(i), int(j), float(w)
        for idx in (i, j):
            if not 0 <= idx < n:
                raise IndexOutOfRange(idx, n)
        if i == j:
            raise SelfLoop(i)
        if not (w > 0 and math.isfinite(w)):
            raise NonPositiveWeight(i, j, w)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdge(*key)
        seen.add(key)
        canon.append((key[0], key[1], w))
    canon.sort()

    if kappa is None:
        kap = np.ones(n)
    else:
        kap = np.asarray(list(kappa), dtype=float)
        if kap.shape != (n,):
            raise ValueError(f"kappa must have length {n}, got shape {kap.shape}")
    label_tuple = tuple(str(x) for x in labels) if labels is not None else None
    if label_tuple is not None:
        if len(label_tuple) != n:
            raise ValueError(f"labels must have length {n}, got {len(label_tuple)}")
        if len(set(label_tuple)) != n:
            raise ValueError("labels must be unique")
    for i, value in enumerate(kap):
        if not (value > 0 and math.isfinite(value)):
            lbl = label_tuple[i] if label_tuple else None
            raise NonPositiveKappa(i, float(value), label=lbl)

    _check_connected(n, canon, label_tuple)

    kap = kap.copy()
    kap.setflags(write=False)
    return Network(n=n, edges=tuple(canon), kappa=kap, labels=label_tuple)


def _check_connected(n: int, edges: list[Edge], labels) -> None:
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j, _ in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    for v, ok in enumerate(seen):
        if not ok:
            raise DisconnectedGraph(v, label=labels[v] if labels else None)


def laplacian(net: Network) -> np.ndarray:
    """Weighted graph Laplacian: diagonal = weighted degree, off-diagonal = -w."""
    return net._laplacian.copy()


def grounded_matrix(net: Network, leaders) -> np.ndarray:
    """Laplacian plus the diagonal gain kappa_i on each leader node i.

    Equivalent to grounding an augmented graph that ties every leader to an
    absorbing reference node with edge weight kappa_i. Positive definite for
    any nonempty leader set on a connected graph.
    """
    s = as_leader_set(leaders, net.n)
    if len(s) == 0:
        raise EmptyLeaderSet("grounded matrix requires a nonempty leader set")
    q = net._laplacian.copy()
    idx = np.fromiter(s.members, dtype=int)
    q[idx, idx] += net.kappa[idx]
    return q
