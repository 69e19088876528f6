"""Shared fixtures: the golden graphs and a graph-backed expansion runner."""

from __future__ import annotations

from pathlib import Path

import pytest

from confsel.expansion import ExpansionConfig, ExpansionResult, confounder_select
from confsel.graph import Admg, parse_graph
from confsel.oracle import GraphOracle

GRAPH_DIR = Path(__file__).resolve().parent.parent / "graphs"


def load_graph(name: str) -> Admg:
    return parse_graph((GRAPH_DIR / f"{name}.g").read_text())


def run_expansion(g: Admg, x: str = "X", y: str = "Y", **config) -> ExpansionResult:
    return confounder_select(GraphOracle(g, x, y), x, y, ExpansionConfig(**config))


def families(sets) -> list[list[str]]:
    """Sorted-list form of a family of vertex sets, for readable asserts."""
    return [sorted(s) for s in sets]


@pytest.fixture(scope="session")
def butterfly() -> Admg:
    return load_graph("butterfly")


@pytest.fixture(scope="session")
def warmup() -> Admg:
    return load_graph("warmup")


@pytest.fixture(scope="session")
def latent_pair() -> Admg:
    return load_graph("latent_pair")


@pytest.fixture(scope="session")
def blocking_a() -> Admg:
    return load_graph("blocking_a")


@pytest.fixture(scope="session")
def blocking_b() -> Admg:
    return load_graph("blocking_b")
