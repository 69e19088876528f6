"""Axiomatic properties of the set-lifted separation relations.

For a fixed graph, write J(A, B | C) for "A and B are separated given
C" under a connection kind (the negation of the set-lifted connection
relation).  The confounding-arc and confounding-path relations satisfy
triviality, symmetry, decomposition, weak union, and composition, but
not contraction or intersection; a three-vertex fork witnesses both
failures.
"""

from __future__ import annotations

import pytest

from randgraphs import graphoid_corpus
from confsel.graph import make_admg
from confsel.separation import ConnectionKind, set_connected

LIFTED_KINDS = [
    ConnectionKind.CONF_ARC,
    ConnectionKind.CONF_PATH,
    ConnectionKind.M_CONN,
]


def j(g, kind, a_set, b_set, c_set):
    return not set_connected(g, kind, a_set, b_set, c_set)


@pytest.mark.parametrize("kind", LIFTED_KINDS, ids=lambda k: k.value)
def test_axioms_on_random_instances(kind):
    for g, a, b, c, d in graphoid_corpus(77, 100):
        # (i) triviality
        assert j(g, kind, a, (), c | d)
        # (ii) symmetry
        assert j(g, kind, a, b, d) == j(g, kind, b, a, d)
        # (iii) decomposition and (iv) weak union
        if j(g, kind, a, b | c, d):
            assert j(g, kind, a, b, d)
            assert j(g, kind, a, c, d)
            assert j(g, kind, a, b, c | d)
        # (vii) composition
        if j(g, kind, a, b, d) and j(g, kind, a, c, d):
            assert j(g, kind, a, b | c, d)


@pytest.mark.parametrize(
    "kind", [ConnectionKind.CONF_ARC, ConnectionKind.CONF_PATH], ids=lambda k: k.value
)
def test_fork_witnesses_contraction_failure(kind):
    g = make_admg("ABC", directed=[("C", "A"), ("C", "B")])
    a, b, c = frozenset("A"), frozenset("B"), frozenset("C")
    # Premises of contraction with D = {}:
    assert j(g, kind, a, c, frozenset())
    assert j(g, kind, a, b, c)
    # ... but the conclusion fails:
    assert not j(g, kind, a, b | c, frozenset())


@pytest.mark.parametrize(
    "kind", [ConnectionKind.CONF_ARC, ConnectionKind.CONF_PATH], ids=lambda k: k.value
)
def test_fork_witnesses_intersection_failure(kind):
    g = make_admg("ABC", directed=[("C", "A"), ("C", "B")])
    a, b, c = frozenset("A"), frozenset("B"), frozenset("C")
    # Premises of intersection with D = {}:
    assert j(g, kind, a, b, c)
    assert j(g, kind, a, c, b)
    # ... but the conclusion fails:
    assert not j(g, kind, a, b | c, frozenset())
