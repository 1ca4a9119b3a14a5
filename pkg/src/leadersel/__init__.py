"""Leader selection for consensus networks whose leaders are noisy too.

Evaluate the coherence of a leader set, select leaders greedily, by swap
local search, or exhaustively (with certificates for the approximation
bounds), machine-check the structural properties the bounds rest on, and
cross-validate the closed form by simulating the dynamics.
"""

__version__ = "0.1.0"

from .coherence import (
    CoherenceState,
    SurrogateConstants,
    add_leader,
    add_leader_trace_delta,
    coherence,
    compute_constants,
    init_state,
    singleton_traces,
    surrogate_value,
    swap_benefit,
    swap_leader,
    trace_inverse,
)
from .graph import LeaderSet, Network, as_leader_set, build_network, grounded_matrix, laplacian
from .graphio import read_network, write_network
from .selection import (
    BoundCertificate,
    SelectionReport,
    certify_greedy_bound,
    certify_swap_bound,
    exhaustive_select,
    greedy_select,
    greedy_then_swap,
    select,
    swap_select,
)
from .simulate import SimConfig, SimResult, run_simulation, stationary_covariance

__all__ = [
    "__version__",
    "BoundCertificate",
    "CoherenceState",
    "LeaderSet",
    "Network",
    "SelectionReport",
    "SimConfig",
    "SimResult",
    "SurrogateConstants",
    "add_leader",
    "add_leader_trace_delta",
    "as_leader_set",
    "build_network",
    "certify_greedy_bound",
    "certify_swap_bound",
    "coherence",
    "compute_constants",
    "exhaustive_select",
    "greedy_select",
    "greedy_then_swap",
    "grounded_matrix",
    "init_state",
    "laplacian",
    "read_network",
    "run_simulation",
    "select",
    "singleton_traces",
    "stationary_covariance",
    "surrogate_value",
    "swap_benefit",
    "swap_leader",
    "swap_select",
    "trace_inverse",
    "write_network",
]
