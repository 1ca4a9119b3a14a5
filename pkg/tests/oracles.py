"""Independent reference implementations used to check the package.

Everything here is deliberately naive: plain loops, np.linalg.inv, no reuse
of package code paths beyond the Network container itself.
"""

import numpy as np

FIG1_EDGES_1B = [
    (1, 2), (2, 3), (3, 4), (4, 1),
    (5, 6), (6, 7), (7, 8), (8, 5),
    (8, 9), (4, 9), (2, 5),
]
FIG1_EDGES = [(u - 1, v - 1) for u, v in FIG1_EDGES_1B]
FIG1_N = 9


def laplacian_ref(n, edges):
    lap = np.zeros((n, n))
    for entry in edges:
        if len(entry) == 2:
            i, j = entry
            w = 1.0
        else:
            i, j, w = entry
        lap[i, i] += w
        lap[j, j] += w
        lap[i, j] -= w
        lap[j, i] -= w
    return lap


def grounded_ref(n, edges, kappa, subset):
    q = laplacian_ref(n, edges)
    for i in subset:
        q[i, i] += kappa[i]
    return q


def trace_inv_ref(n, edges, kappa, subset):
    return float(np.trace(np.linalg.inv(grounded_ref(n, edges, kappa, subset))))


def coherence_ref(n, edges, kappa, subset):
    return 0.5 * trace_inv_ref(n, edges, kappa, subset)


def net_trace_inv(net, subset):
    """Reference trace of the inverse grounded matrix for a Network."""
    return trace_inv_ref(net.n, [(i, j, w) for i, j, w in net.edges], net.kappa, subset)


def net_inverse(net, subset):
    return np.linalg.inv(
        grounded_ref(net.n, [(i, j, w) for i, j, w in net.edges], net.kappa, subset)
    )
