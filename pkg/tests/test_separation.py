"""Connectivity relations: the four connection kinds, path enumeration,
district criterion, collider-path criterion, and set lifts."""

from __future__ import annotations

import itertools
import random

import pytest

from bruteforce import bf_connected
from conftest import load_graph
from randgraphs import endpoint_corpus, random_admg
from confsel.graph import GraphError, make_admg
from confsel.separation import (
    PATH_ENUMERATION_MAX_VERTICES,
    ConnectionKind,
    Path,
    SizeCapError,
    collider_connected,
    connected,
    district_criterion,
    enumerate_unblocked_paths,
    set_connected,
)

KINDS = list(ConnectionKind)


def renders(paths):
    return [p.render() for p in paths]


# ------------------------------------------------------------- kind basics


def test_kind_values():
    assert ConnectionKind.DIRECTED.value == "directed"
    assert ConnectionKind.CONF_ARC.value == "conf-arc"
    assert ConnectionKind.CONF_PATH.value == "conf-path"
    assert ConnectionKind.M_CONN.value == "m-conn"


def test_directed_follows_arrows_only(blocking_a):
    assert connected(blocking_a, ConnectionKind.DIRECTED, "A", "C", ())
    assert not connected(blocking_a, ConnectionKind.DIRECTED, "C", "A", ())
    assert not connected(blocking_a, ConnectionKind.DIRECTED, "A", "C", "D")
    # No intermediate vertex, so nothing can block the single edge.
    assert connected(blocking_a, ConnectionKind.DIRECTED, "A", "D", "C")


def test_bidirected_edge_is_unconditionally_confounding():
    g = make_admg("ABC", bidirected=[("A", "B")])
    for cond in [(), ("C",)]:
        assert connected(g, ConnectionKind.CONF_ARC, "A", "B", cond)
        assert connected(g, ConnectionKind.CONF_PATH, "A", "B", cond)
        assert connected(g, ConnectionKind.M_CONN, "A", "B", cond)
    assert not connected(g, ConnectionKind.DIRECTED, "A", "B", ())


# ---------------------------------------------------- ancestral opening


def test_collider_opened_by_conditioned_descendant(blocking_a):
    # A -> D <- B with D -> C: conditioning on C opens the collider D.
    m = ConnectionKind.M_CONN
    assert not connected(blocking_a, m, "A", "B", ())
    assert connected(blocking_a, m, "A", "B", "D")
    assert connected(blocking_a, m, "A", "B", "C")
    assert renders(enumerate_unblocked_paths(blocking_a, m, "A", "B", "C")) == [
        "A -> D <- B"
    ]


def test_unrelated_vertex_does_not_open_collider(blocking_b):
    m = ConnectionKind.M_CONN
    assert not connected(blocking_b, m, "A", "B", ())
    assert not connected(blocking_b, m, "A", "B", "C")
    assert connected(blocking_b, m, "A", "B", "D")
    assert enumerate_unblocked_paths(blocking_b, m, "A", "B", "C") == []


# --------------------------------------------------- confounding variants


def test_confounding_kinds_differ_on_butterfly(butterfly):
    # Given {B} the only head-to-head route X <- C -> B <- D -> Y needs
    # the collider B opened, which conf-path allows and conf-arc forbids.
    assert connected(butterfly, ConnectionKind.CONF_PATH, "X", "Y", "B")
    assert not connected(butterfly, ConnectionKind.CONF_ARC, "X", "Y", "B")
    assert renders(
        enumerate_unblocked_paths(butterfly, ConnectionKind.CONF_PATH, "X", "Y", "B")
    ) == ["X <- C -> B <- D -> Y"]
    assert (
        enumerate_unblocked_paths(butterfly, ConnectionKind.CONF_ARC, "X", "Y", "B")
        == []
    )


def test_butterfly_sufficient_sets_close_every_confounding_path(butterfly):
    for cond in [("B", "C"), ("B", "D")]:
        assert not connected(butterfly, ConnectionKind.CONF_PATH, "X", "Y", cond)


def test_conf_arc_needs_arrowheads_at_both_ends(blocking_a):
    # Every A..B path leaves A along a tail, so nothing confounds.
    assert not connected(blocking_a, ConnectionKind.CONF_ARC, "A", "B", ())
    assert not connected(blocking_a, ConnectionKind.CONF_PATH, "A", "B", "C")


# ------------------------------------------------------- path enumeration


def test_enumerate_butterfly_marginal_connections(butterfly):
    got = enumerate_unblocked_paths(butterfly, ConnectionKind.M_CONN, "X", "Y", ())
    assert renders(got) == [
        "X <- B <- D -> Y",
        "X <- B -> Y",
        "X <- C -> B -> Y",
    ]
    arcs = enumerate_unblocked_paths(butterfly, ConnectionKind.CONF_ARC, "X", "Y", ())
    assert renders(arcs) == renders(got)


def test_enumerate_directed_paths(butterfly):
    got = enumerate_unblocked_paths(butterfly, ConnectionKind.DIRECTED, "C", "Y", ())
    assert got == [Path(("C", "B", "Y"), ("->", "->"))]
    assert str(got[0]) == "C -> B -> Y"


def test_parallel_edges_enumerate_separately():
    g = make_admg("AB", directed=[("A", "B")], bidirected=[("A", "B")])
    both = enumerate_unblocked_paths(g, ConnectionKind.M_CONN, "A", "B", ())
    assert renders(both) == ["A -> B", "A <-> B"]
    arcs = enumerate_unblocked_paths(g, ConnectionKind.CONF_ARC, "A", "B", ())
    assert renders(arcs) == ["A <-> B"]


def test_enumeration_refuses_oversized_graphs():
    n = PATH_ENUMERATION_MAX_VERTICES + 1
    names = [f"V{i}" for i in range(n)]
    g = make_admg(names, directed=[("V0", "V1")])
    with pytest.raises(SizeCapError, match="at most 12 vertices"):
        enumerate_unblocked_paths(g, ConnectionKind.M_CONN, "V0", "V1", ())
    # The walk-based check has no such cap.
    assert connected(g, ConnectionKind.M_CONN, "V0", "V1", ())


# ------------------------------------------------------- query validation


@pytest.mark.parametrize("func", [connected, enumerate_unblocked_paths])
def test_query_validation(butterfly, func):
    with pytest.raises(GraphError, match="unknown vertex"):
        func(butterfly, ConnectionKind.M_CONN, "X", "Z", ())
    with pytest.raises(GraphError, match="endpoints coincide"):
        func(butterfly, ConnectionKind.M_CONN, "X", "X", ())
    with pytest.raises(GraphError, match="may not appear in the conditioning set"):
        func(butterfly, ConnectionKind.M_CONN, "X", "Y", ("Y",))


# ----------------------------------------------------- equivalent criteria


def test_district_criterion_on_goldens(butterfly, latent_pair):
    assert not district_criterion(butterfly, "X", "Y", ())
    assert district_criterion(butterfly, "X", "Y", ("B", "C"))
    assert district_criterion(butterfly, "X", "Y", ("B", "D"))
    assert not district_criterion(butterfly, "X", "Y", ("B",))
    assert district_criterion(latent_pair, "X", "Y", ("B", "D"))
    assert not district_criterion(latent_pair, "X", "Y", ("B", "C"))


def test_district_criterion_negates_conf_path_connection():
    rng = random.Random(515)
    for _ in range(60):
        g = random_admg(rng, max_latent=2)
        obs = sorted(g.observed)
        if len(obs) < 2:
            continue
        a, b = rng.sample(obs, 2)
        rest = [v for v in obs if v not in (a, b)]
        c = frozenset(rng.sample(rest, rng.randint(0, len(rest))))
        assert district_criterion(g, a, b, c) == (
            not connected(g, ConnectionKind.CONF_PATH, a, b, c)
        )


def test_collider_connected_matches_m_connection():
    rng = random.Random(616)
    for _ in range(60):
        g = random_admg(rng)
        vs = sorted(g.vertices)
        a, b = rng.sample(vs, 2)
        rest = [v for v in vs if v not in (a, b)]
        c = frozenset(rng.sample(rest, rng.randint(0, len(rest))))
        assert collider_connected(g, a, b, c) == connected(
            g, ConnectionKind.M_CONN, a, b, c
        )


# ------------------------------------------------------------- set lifts


def test_set_connected_conventions(butterfly):
    k = ConnectionKind.CONF_PATH
    assert set_connected(butterfly, k, ["X"], ["Y"], ["B"])
    assert not set_connected(butterfly, k, ["X"], ["Y"], ["B", "D"])
    assert not set_connected(butterfly, k, [], ["Y"], ["B"])
    assert not set_connected(butterfly, k, ["X"], [], ())
    # Source vertices admit no confounding path, but the m-connection
    # lift still finds the C -> B -> Y pair.
    assert not set_connected(butterfly, k, ["X", "C"], ["Y"], ["B", "D"])
    assert set_connected(butterfly, ConnectionKind.M_CONN, ["C", "D"], ["Y"], ())


def test_set_connected_requires_disjoint_sets(butterfly):
    with pytest.raises(GraphError, match="pairwise disjoint"):
        set_connected(butterfly, ConnectionKind.M_CONN, ["X"], ["X"], ())
    with pytest.raises(GraphError, match="pairwise disjoint"):
        set_connected(butterfly, ConnectionKind.M_CONN, ["X"], ["Y"], ["X"])


def test_set_connected_is_a_disjunction_over_pairs():
    rng = random.Random(717)
    for _ in range(40):
        g = random_admg(rng)
        vs = sorted(g.vertices)
        rng.shuffle(vs)
        a_set, b_set = vs[:1], vs[1:2]
        c_set = vs[2 : 2 + rng.randint(0, len(vs) - 2)]
        kind = rng.choice(KINDS)
        expected = any(
            connected(g, kind, a, b, c_set) for a in a_set for b in b_set
        )
        assert set_connected(g, kind, a_set, b_set, c_set) == expected


# ------------------------------------------------- reference comparisons


def test_connected_matches_path_reference_on_random_graphs():
    rng = random.Random(818)
    for g, x, y in endpoint_corpus(818, 50, max_vertices=6, max_latent=2):
        rest = [v for v in sorted(g.vertices) if v not in (x, y)]
        for _ in range(4):
            c = frozenset(rng.sample(rest, rng.randint(0, len(rest))))
            for kind in KINDS:
                assert connected(g, kind, x, y, c) == bf_connected(g, kind, x, y, c)


def test_connected_agrees_with_own_path_enumeration():
    for g, x, y in endpoint_corpus(919, 40, max_vertices=5):
        rest = [v for v in sorted(g.vertices) if v not in (x, y)]
        for size in range(len(rest) + 1):
            for c in itertools.combinations(rest, size):
                for kind in KINDS:
                    walk = connected(g, kind, x, y, c)
                    paths = enumerate_unblocked_paths(g, kind, x, y, c)
                    assert walk == bool(paths)
