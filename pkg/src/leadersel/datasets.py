"""Bundled example graphs."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .graph import Network
from .graphio import read_network


def fig1_path() -> Path:
    """Path to the bundled 9-node benchmark graph (edge-list format)."""
    return Path(resources.files("leadersel") / "data" / "fig1.edges")


def fig1_network() -> Network:
    """The 9-node benchmark graph with unit gains: two squares joined by an
    edge, plus a ninth node bridging them from below."""
    return read_network(fig1_path().read_text())
