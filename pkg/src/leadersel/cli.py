"""Command-line interface.

All machine-readable output goes to stdout as a single JSON document with an
embedded run manifest; human summaries go to stderr so pipelines stay clean.
Exit codes: 0 success, 2 parse/flag errors, 3 validation errors, 4 numerical
errors, 5 property violations.

BLAS threading (and with it the parallelism of the dense kernels) is
controlled by the usual environment variables, e.g. OMP_NUM_THREADS or
OPENBLAS_NUM_THREADS.
"""

from __future__ import annotations

import functools
import hashlib
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .coherence import (
    SurrogateConstants,
    compute_constants,
    surrogate_value,
    trace_inverse,
)
from .errors import (
    EmptyLeaderSet,
    LeaderSelectionError,
    NumericalError,
    ParseError,
    ValidationError,
)
from .graph import LeaderSet, Network
from .graphio import read_network
from .properties import (
    PROPERTIES,
    check_derived_nonincreasing,
    check_monotone,
    check_positivity,
    check_submodularity,
    check_trace_derivative_sign,
    combine_reports,
)
from .selection import (
    certify_greedy_bound,
    certify_swap_bound,
    exhaustive_select,
    greedy_select,
    greedy_then_swap,
    report_to_dict,
    swap_select,
)
from .simulate import SimConfig, run_simulation

EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4
EXIT_VIOLATION = 5


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParseError as exc:
            click.echo(f"parse error: {exc}", err=True)
            sys.exit(EXIT_PARSE)
        except ValidationError as exc:
            click.echo(f"invalid input: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)
        except NumericalError as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)
        except LeaderSelectionError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)

    return wrapper


def _load_graph(path: str, format: str | None) -> tuple[Network, str]:
    data = Path(path).read_bytes()
    digest = "sha256:" + hashlib.sha256(data).hexdigest()
    return read_network(data, format=format), digest


def _manifest(command: str, arguments: dict, digest: str) -> dict:
    return {
        "command": command,
        "arguments": {k: v for k, v in sorted(arguments.items())},
        "input_digest": digest,
        "tool_version": __version__,
        "outputs": "inline",
    }


def _emit(doc: dict) -> None:
    click.echo(json.dumps(doc, sort_keys=True))


def _parse_leaders(net: Network, text: str) -> LeaderSet:
    tokens = [tok for tok in text.replace(",", " ").split() if tok]
    if not tokens:
        raise EmptyLeaderSet("no leaders given")
    return LeaderSet(tuple(sorted({net.index_of(tok) for tok in tokens})))


_format_option = click.option(
    "--format", "fmt", type=click.Choice(["edgelist", "json"]), default=None,
    help="Graph file format; default sniffs JSON by a leading '{'.",
)


@click.group()
@click.version_option(version=__version__, prog_name="leadersel")
def main() -> None:
    """Leader selection for noisy consensus networks."""


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--leaders", required=True, help="Comma-separated node labels.")
@_format_option
@_handle_errors
def evaluate(graph_file: str, leaders: str, fmt: str | None) -> None:
    """Coherence and surrogate value of a given leader set."""
    net, digest = _load_graph(graph_file, fmt)
    chosen = _parse_leaders(net, leaders)
    constants = compute_constants(net)
    tr = trace_inverse(net, chosen)
    doc = {
        "manifest": _manifest("evaluate", {"leaders": leaders}, digest),
        "leaders": [net.label_of(i) for i in chosen.members],
        "coherence": 0.5 * tr,
        "trace_inverse": tr,
        "surrogate_value": surrogate_value(net, chosen, constants),
        "surrogate_offset": constants.offset,
        "max_singleton_trace": constants.max_singleton_trace,
        "max_singleton_node": net.label_of(constants.argmax_node),
    }
    _emit(doc)
    click.echo(
        f"coherence {doc['coherence']:.6f} for leaders "
        f"{{{', '.join(map(str, doc['leaders']))}}}",
        err=True,
    )


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--algo", type=click.Choice(["greedy", "swap", "exhaustive", "greedy+swap"]),
    required=True,
)
@click.option("--k", type=int, default=None, help="Leader budget.")
@click.option("--initial", default=None, help="Starting leaders for --algo swap.")
@click.option("--seed", type=int, default=None, help="Random start for --algo swap.")
@click.option("--certify/--no-certify", default=False,
              help="Run the exhaustive oracle and attach a bound certificate.")
@click.option("--max-subsets", type=int, default=10**7, show_default=True,
              help="Cap on exhaustive enumeration size.")
@_format_option
@_handle_errors
def select(graph_file, algo, k, initial, seed, certify, max_subsets, fmt) -> None:
    """Run a selection algorithm and print its report."""
    net, digest = _load_graph(graph_file, fmt)
    if algo == "swap":
        if (initial is None) == (seed is None):
            raise click.UsageError("--algo swap needs exactly one of --initial or --seed")
        if seed is not None and k is None:
            raise click.UsageError("--algo swap with --seed needs --k")
    else:
        if initial is not None:
            raise click.UsageError(f"--initial is only valid with --algo swap, not {algo}")
        if k is None:
            raise click.UsageError(f"--algo {algo} needs --k")

    if algo == "greedy":
        report = greedy_select(net, k)
    elif algo == "exhaustive":
        report = exhaustive_select(net, k, max_subsets=max_subsets)
    elif algo == "greedy+swap":
        report = greedy_then_swap(net, k)
    else:
        if initial is not None:
            start = _parse_leaders(net, initial)
        else:
            rng = np.random.default_rng(seed)
            start = rng.choice(net.n, size=k, replace=False)
        report = swap_select(net, start)

    if certify:
        constants = compute_constants(net)
        optimum = exhaustive_select(net, report.budget, max_subsets=max_subsets)
        if report.algorithm == "greedy":
            cert = certify_greedy_bound(report, constants, optimum.coherence)
        elif report.algorithm in ("swap", "greedy_then_swap"):
            cert = certify_swap_bound(report, constants, optimum.coherence)
        else:
            cert = None
        if cert is not None:
            report = report.with_bound(cert)

    arguments = {
        "algo": algo, "k": k, "initial": initial, "seed": seed,
        "certify": certify, "max_subsets": max_subsets,
    }
    doc = {"manifest": _manifest("select", arguments, digest)}
    doc.update(report_to_dict(report, net))
    _emit(doc)
    click.echo(
        f"{algo}: leaders {{{', '.join(map(str, doc['leaders']))}}} "
        f"coherence {report.coherence:.6f}",
        err=True,
    )


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--properties", "props", default=",".join(PROPERTIES),
              show_default=True, help="Comma-separated property names.")
@click.option("--mode", type=click.Choice(["exhaustive", "sampled"]), default="exhaustive",
              show_default=True)
@click.option("--budget", type=int, default=2000, show_default=True,
              help="Tuples per sampled check.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--corrupt-constants", is_flag=True, default=False,
              help="Self-test: zero the surrogate offset, which must produce violations.")
@_format_option
@_handle_errors
def verify(graph_file, props, mode, budget, seed, corrupt_constants, fmt) -> None:
    """Check structural properties on a concrete graph; exit 5 on violation."""
    net, digest = _load_graph(graph_file, fmt)
    names = [p.strip() for p in props.split(",") if p.strip()]
    unknown = set(names) - set(PROPERTIES)
    if unknown:
        raise click.UsageError(f"unknown properties: {sorted(unknown)}")

    constants = None
    if corrupt_constants:
        real = compute_constants(net)
        constants = SurrogateConstants(
            offset=0.0,
            max_singleton_trace=real.max_singleton_trace,
            argmax_node=real.argmax_node,
        )

    rng = np.random.default_rng(seed)
    reports = []
    for name in names:
        if name == "submodularity":
            reports.append(check_submodularity(net, mode, budget, seed, constants))
        elif name == "monotone_nondecreasing":
            reports.append(check_monotone(net, mode, budget, seed, constants))
        elif name == "marginal_gain_nonincreasing":
            for a in range(net.n):
                reports.append(
                    check_derived_nonincreasing(net, a, mode, budget, seed, constants)
                )
        elif name == "elementwise_positive":
            reports.append(check_positivity(net, samples=budget, seed=seed))
        elif name == "interpolation_derivative_sign":
            tuple_reports = _random_derivative_checks(net, rng, budget)
            if tuple_reports:
                reports.append(
                    combine_reports(
                        "interpolation_derivative_sign",
                        f"n={net.n}, random tuples={len(tuple_reports)}, seed={seed}",
                        tuple_reports,
                    )
                )

    passed = all(r.passed for r in reports)
    arguments = {
        "properties": props, "mode": mode, "budget": budget,
        "seed": seed, "corrupt_constants": corrupt_constants,
    }
    doc = {
        "manifest": _manifest("verify", arguments, digest),
        "passed": passed,
        "reports": [r.to_dict() for r in reports],
    }
    _emit(doc)
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        click.echo(
            f"{status:4s}  {r.property:32s} checked={r.checked:<8d} "
            f"worst_margin={r.worst_margin:+.3e}",
            err=True,
        )
    if not passed:
        sys.exit(EXIT_VIOLATION)


def _random_derivative_checks(net: Network, rng: np.random.Generator, budget: int):
    """Random nested (S1, S2, a, t) tuples for the derivative-sign check."""
    if net.n < 2:
        return []
    reports = []
    tuples = max(1, budget // 4)
    for _ in range(tuples):
        a = int(rng.integers(0, net.n))
        rest = [v for v in range(net.n) if v != a]
        size2 = int(rng.integers(1, len(rest) + 1))
        s2 = sorted(rng.choice(rest, size=size2, replace=False).tolist())
        size1 = int(rng.integers(1, len(s2) + 1))
        s1 = sorted(rng.choice(s2, size=size1, replace=False).tolist())
        t = float(rng.random())
        reports.append(check_trace_derivative_sign(net, s1, s2, a, [t]))
    return reports


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--leaders", required=True, help="Comma-separated node labels.")
@click.option("--horizon", type=float, required=True, help="Total simulated time.")
@click.option("--dt", type=float, default=None, help="Step size; default 0.5/lambda_max.")
@click.option("--burn-in", type=float, default=None,
              help="Discarded initial time; default 10/lambda_min.")
@click.option("--trials", type=int, default=8, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--noise-intensity", type=float, default=1.0, show_default=True)
@_format_option
@_handle_errors
def simulate(graph_file, leaders, horizon, dt, burn_in, trials, seed,
             noise_intensity, fmt) -> None:
    """Monte Carlo estimate of the total steady-state variance."""
    net, digest = _load_graph(graph_file, fmt)
    chosen = _parse_leaders(net, leaders)
    cfg = SimConfig(
        horizon=horizon, dt=dt, burn_in=burn_in, trials=trials,
        seed=seed, noise_intensity=noise_intensity,
    )
    result = run_simulation(net, chosen, cfg)
    arguments = {
        "leaders": leaders, "horizon": horizon, "dt": dt, "burn_in": burn_in,
        "trials": trials, "seed": seed, "noise_intensity": noise_intensity,
    }
    doc = {"manifest": _manifest("simulate", arguments, digest)}
    doc["leaders"] = [net.label_of(i) for i in chosen.members]
    doc.update(result.to_dict())
    _emit(doc)
    click.echo(
        f"empirical {result.empirical_coherence:.4f} +- {result.stderr:.4f} "
        f"(analytic {result.analytic_coherence:.4f})",
        err=True,
    )


if __name__ == "__main__":
    main()
