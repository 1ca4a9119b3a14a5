"""Monte Carlo cross-check of the closed-form coherence.

Integrates dx = -Q_S x dt + dW (Euler-Maruyama) and compares the long-run
average of sum_i x_i^2 against the analytic value tr(Q_S^{-1}) / 2. The
discretized chain has its own exactly computable stationary variance, which
is reported alongside so integrator bias is never mistaken for a bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coherence import init_state
from .errors import EmptyLeaderSet, InvalidSimulationConfig, UnstableStepSize
from .graph import Network, as_leader_set, grounded_matrix


@dataclass(frozen=True)
class SimConfig:
    """Integration parameters. ``dt`` and ``burn_in`` default to values derived
    from the extreme eigenvalues of the grounded matrix (0.5 / lambda_max and
    10 / lambda_min)."""

    horizon: float
    dt: float | None = None
    burn_in: float | None = None
    trials: int = 8
    seed: int = 0
    noise_intensity: float = 1.0


@dataclass(frozen=True)
class SimResult:
    empirical_coherence: float
    stderr: float
    analytic_coherence: float
    discretized_coherence: float
    relative_error: float
    config: dict

    def to_dict(self) -> dict:
        return {
            "empirical_coherence": self.empirical_coherence,
            "stderr": self.stderr,
            "analytic_coherence": self.analytic_coherence,
            "discretized_coherence": self.discretized_coherence,
            "relative_error": self.relative_error,
            "config": dict(self.config),
        }


def stationary_covariance(net: Network, leaders) -> np.ndarray:
    """Steady-state covariance Q_S^{-1} / 2 of the continuous-time system.

    Solves the balance equation Q_S Sigma + Sigma Q_S = I for unit-intensity
    noise; its trace is the coherence.
    """
    s = as_leader_set(leaders, net.n)
    if len(s) == 0:
        raise EmptyLeaderSet("stationary covariance requires a nonempty leader set")
    return 0.5 * init_state(net, s).inv


def extreme_eigenvalues(net: Network, leaders) -> tuple[float, float]:
    """(lambda_min, lambda_max) of the grounded matrix, by symmetric eigensolve."""
    q = grounded_matrix(net, leaders)
    eigenvalues = np.linalg.eigvalsh(q)
    return float(eigenvalues[0]), float(eigenvalues[-1])


def discretized_stationary_trace(
    net: Network, leaders, dt: float, noise_intensity: float = 1.0
) -> float:
    """Exact stationary value of E[sum x_i^2] for the Euler-Maruyama chain.

    The chain x' = (I - dt Q) x + sqrt(sigma^2 dt) xi has stationary variance
    sigma^2 / (lambda (2 - dt lambda)) along each eigenmode of Q.
    """
    q = grounded_matrix(net, leaders)
    eigenvalues = np.linalg.eigvalsh(q)
    if dt * eigenvalues[-1] >= 2.0:
        raise UnstableStepSize(dt, float(eigenvalues[-1]))
    return float(np.sum(noise_intensity / (eigenvalues * (2.0 - dt * eigenvalues))))


def run_simulation(net: Network, leaders, cfg: SimConfig) -> SimResult:
    """Simulate the noisy consensus dynamics and estimate the total variance.

    Trials use independent PRNG streams spawned from ``cfg.seed``, so the
    estimate is reproducible per seed and trial merging is order-independent.
    """
    s = as_leader_set(leaders, net.n)
    if len(s) == 0:
        raise EmptyLeaderSet("simulation requires a nonempty leader set")
    if cfg.trials < 2:
        raise InvalidSimulationConfig("at least 2 trials are required for a stderr")
    if cfg.noise_intensity <= 0:
        raise InvalidSimulationConfig("noise_intensity must be > 0")
    if not (math.isfinite(cfg.horizon) and cfg.horizon > 0):
        raise InvalidSimulationConfig(f"horizon must be finite and > 0, got {cfg.horizon!r}")

    lam_min, lam_max = extreme_eigenvalues(net, s)
    dt = cfg.dt if cfg.dt is not None else 0.5 / lam_max
    if dt <= 0:
        raise InvalidSimulationConfig(f"dt must be > 0, got {dt!r}")
    if dt * lam_max >= 2.0:
        raise UnstableStepSize(dt, lam_max)
    burn_in = cfg.burn_in if cfg.burn_in is not None else 10.0 / lam_min
    if not burn_in < cfg.horizon:
        raise InvalidSimulationConfig(
            f"burn_in {burn_in!r} must be smaller than horizon {cfg.horizon!r}"
        )

    steps = int(math.ceil(cfg.horizon / dt))
    burn_steps = min(int(math.ceil(burn_in / dt)), steps - 1)
    keep = steps - burn_steps

    q = grounded_matrix(net, s)
    stepmat = np.eye(net.n) - dt * q
    noise_scale = math.sqrt(cfg.noise_intensity * dt)

    streams = [
        np.random.default_rng(child)
        for child in np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    ]
    x = np.zeros((cfg.trials, net.n))
    sums = np.zeros(cfg.trials)
    chunk = max(1, min(4096, steps))
    done = 0
    while done < steps:
        width = min(chunk, steps - done)
        noise = np.stack(
            [g.standard_normal((width, net.n)) for g in streams], axis=1
        )
        for step in range(width):
            x = x @ stepmat.T + noise_scale * noise[step]
            if done + step >= burn_steps:
                sums += np.einsum("ij,ij->i", x, x)
        done += width

    trial_means = sums / keep
    empirical = float(trial_means.mean())
    stderr = float(trial_means.std(ddof=1) / math.sqrt(cfg.trials))
    state = init_state(net, s)
    analytic = 0.5 * state.trace_inv * cfg.noise_intensity
    discretized = discretized_stationary_trace(net, s, dt, cfg.noise_intensity)
    return SimResult(
        empirical_coherence=empirical,
        stderr=stderr,
        analytic_coherence=analytic,
        discretized_coherence=discretized,
        relative_error=abs(empirical - analytic) / analytic,
        config={
            "dt": dt,
            "horizon": cfg.horizon,
            "burn_in": burn_in,
            "steps": steps,
            "burn_in_steps": burn_steps,
            "trials": cfg.trials,
            "seed": cfg.seed,
            "noise_intensity": cfg.noise_intensity,
        },
    )
