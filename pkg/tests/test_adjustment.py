"""Adjustment-set predicates and exhaustive enumerators."""

from __future__ import annotations

import random

import pytest

from bruteforce import (
    bf_adjustment_pool,
    bf_backdoor,
    bf_connected,
    bf_minimal_sufficient,
    bf_sufficient,
)
from conftest import families
from randgraphs import endpoint_corpus, random_admg
from confsel.adjustment import (
    DEFAULT_POOL_CAP,
    canonical_family,
    enumerate_minimal_mediator_sets,
    enumerate_minimal_primary,
    enumerate_minimal_sufficient,
    enumerate_sufficient,
    format_vertex_set,
    is_adjustment_set,
    is_primary,
    is_sufficient,
    minimal_members,
    pearl_backdoor,
)
from confsel.graph import GraphError, make_admg
from confsel.separation import ConnectionKind, SizeCapError


# ----------------------------------------------------------- family helpers


def test_canonical_family_orders_by_size_then_members():
    got = canonical_family([{"B", "A"}, {"C"}, {"A", "B"}, set(), {"A", "C"}])
    assert got == (frozenset(), frozenset("C"), frozenset("AB"), frozenset("AC"))


def test_minimal_members_drops_strict_supersets():
    got = minimal_members([{"A", "B"}, {"A"}, {"B", "C"}, {"A", "B", "C"}])
    assert got == (frozenset("A"), frozenset("BC"))


def test_format_vertex_set():
    assert format_vertex_set({"D", "B"}) == "{B,D}"
    assert format_vertex_set(()) == "{}"


# -------------------------------------------------------------- predicates


def test_adjustment_set_excludes_descendants(warmup):
    assert is_adjustment_set(warmup, "X", "Y", ("E", "F"))
    assert not is_adjustment_set(warmup, "X", "Y", ("I",))
    assert is_adjustment_set(warmup, "X", "Y", ())


def test_sufficient_goldens(butterfly, latent_pair):
    assert is_sufficient(butterfly, "X", "Y", ("B", "C"))
    assert is_sufficient(butterfly, "X", "Y", ("B", "D"))
    assert not is_sufficient(butterfly, "X", "Y", ("B",))
    assert not is_sufficient(butterfly, "X", "Y", ())
    assert is_sufficient(latent_pair, "X", "Y", ("B", "D"))
    assert not is_sufficient(latent_pair, "X", "Y", ("B", "C"))
    assert is_sufficient(latent_pair, "X", "Y", ("B", "C", "D"))


def test_sufficiency_requires_adjustment_validity(warmup):
    # I blocks the directed path but is a descendant of X.
    assert not is_sufficient(warmup, "X", "Y", ("I", "E", "F"))


def test_pair_validation(butterfly):
    with pytest.raises(GraphError, match="endpoints coincide"):
        is_sufficient(butterfly, "X", "X", ())
    with pytest.raises(GraphError, match="may not contain the endpoints"):
        is_sufficient(butterfly, "X", "Y", ("Y",))
    with pytest.raises(GraphError, match="unknown vertex"):
        is_sufficient(butterfly, "X", "Z", ())


def test_backdoor_goldens(butterfly, warmup):
    assert pearl_backdoor(butterfly, "X", "Y", ("B", "C"))
    assert pearl_backdoor(butterfly, "X", "Y", ("B", "D"))
    assert not pearl_backdoor(butterfly, "X", "Y", ("B",))
    assert pearl_backdoor(warmup, "X", "Y", ("E", "F"))
    assert not pearl_backdoor(warmup, "X", "Y", ("F",))


def test_backdoor_matches_reference():
    rng = random.Random(2024)
    for g, x, y in endpoint_corpus(2024, 60, max_latent=2):
        rest = sorted(g.observed - {x, y})
        for _ in range(4):
            s = frozenset(rng.sample(rest, rng.randint(0, len(rest))))
            assert pearl_backdoor(g, x, y, s) == bf_backdoor(g, x, y, s)


def test_sufficient_matches_reference():
    rng = random.Random(2025)
    for g, x, y in endpoint_corpus(2025, 60, max_latent=2):
        pool = sorted(bf_adjustment_pool(g, x, y))
        for _ in range(4):
            s = frozenset(rng.sample(pool, rng.randint(0, len(pool))))
            assert is_sufficient(g, x, y, s) == bf_sufficient(g, x, y, s)
        # Outside the valid pool, blocking alone is not enough.
        invalid = sorted(g.observed - {x, y} - frozenset(pool))
        if invalid:
            assert not is_sufficient(g, x, y, invalid)


# -------------------------------------------------------------- enumerators


def test_minimal_sufficient_goldens(butterfly, warmup, latent_pair):
    assert families(enumerate_minimal_sufficient(butterfly, "X", "Y")) == [
        ["B", "C"],
        ["B", "D"],
    ]
    assert families(enumerate_minimal_sufficient(warmup, "X", "Y")) == [
        ["D", "N"],
        ["E", "F"],
        ["F", "O"],
        ["F", "T"],
        ["G", "O"],
        ["G", "T"],
        ["N", "W"],
    ]
    assert families(enumerate_minimal_sufficient(latent_pair, "X", "Y")) == [
        ["B", "D"]
    ]


def test_enumerate_sufficient_includes_non_minimal(butterfly):
    assert families(enumerate_sufficient(butterfly, "X", "Y")) == [
        ["B", "C"],
        ["B", "D"],
        ["B", "C", "D"],
    ]


def test_minimal_sufficient_matches_reference():
    for g, x, y in endpoint_corpus(3031, 40, max_vertices=6, max_latent=2):
        got = enumerate_minimal_sufficient(g, x, y)
        assert canonical_family(got) == got
        assert set(got) == set(bf_minimal_sufficient(g, x, y))


def test_pool_cap_guard(butterfly):
    with pytest.raises(SizeCapError, match="exceeding the cap of 1"):
        enumerate_minimal_sufficient(butterfly, "X", "Y", pool_cap=1)
    assert DEFAULT_POOL_CAP == 15


# ---------------------------------------------------------------- primary


def test_primary_relaxes_sufficiency(butterfly):
    # {B} closes every confounding arc (each runs through B) but not the
    # collider route, so it is primary yet not sufficient.
    assert is_primary(butterfly, "X", "Y", (), ("B",))
    assert not is_sufficient(butterfly, "X", "Y", ("B",))
    assert not is_primary(butterfly, "X", "Y", (), ())
    assert families(enumerate_minimal_primary(butterfly, "X", "Y")) == [["B"]]


def test_primary_families_on_warmup(warmup):
    assert families(enumerate_minimal_primary(warmup, "X", "Y")) == [
        ["F"],
        ["D", "N"],
        ["E", "N"],
        ["G", "N"],
        ["G", "O"],
        ["G", "T"],
        ["N", "W"],
    ]


def test_primary_respects_base(warmup):
    # Relative to base {F}, nothing further is needed for (E, Y).
    assert families(enumerate_minimal_primary(warmup, "E", "Y", base=("F",))) == [[]]
    assert is_primary(warmup, "E", "Y", ("F",), ())


def test_primary_pool_excludes_pair_descendants(latent_pair):
    # D is a descendant of C, so the pair-level enumerator finds nothing
    # for (C, X) even though the pair stays confounded given {B}.
    assert enumerate_minimal_primary(latent_pair, "C", "X", base=("B",)) == ()
    assert not is_primary(latent_pair, "C", "X", ("B",), ("D",))
    assert bf_connected(latent_pair, ConnectionKind.CONF_ARC, "C", "X", frozenset("B"))


def test_primary_members_block_all_confounding_arcs():
    rng = random.Random(4042)
    for g, x, y in endpoint_corpus(4042, 40, max_latent=2):
        base_pool = sorted(g.observed - {x, y})
        base = frozenset(rng.sample(base_pool, rng.randint(0, min(2, len(base_pool)))))
        try:
            family = enumerate_minimal_primary(g, x, y, base=base)
        except GraphError:
            continue
        for member in family:
            assert is_primary(g, x, y, base, member)
            assert not bf_connected(
                g, ConnectionKind.CONF_ARC, x, y, base | member
            )


# --------------------------------------------------------------- mediators


def test_mediator_sets_with_explicit_pool(latent_pair):
    got = enumerate_minimal_mediator_sets(
        latent_pair, "C", "X", "U1", base=("B",), pool=("D",)
    )
    assert families(got) == [["D"]]
    got = enumerate_minimal_mediator_sets(
        latent_pair, "C", "X", "U1", base=("B",), pool=("D", "Y")
    )
    assert families(got) == [["D"]]


def test_mediator_default_pool_can_be_empty(latent_pair):
    assert (
        enumerate_minimal_mediator_sets(latent_pair, "C", "X", "U1", base=("B",))
        == ()
    )


def test_mediator_detour_through_other_endpoint_does_not_count():
    g = make_admg("UAB", directed=[("U", "A"), ("A", "B")])
    # U reaches B only through A itself, so nothing needs blocking.
    assert enumerate_minimal_mediator_sets(g, "A", "B", "U") == (frozenset(),)


def test_mediator_requires_distinct_cause(latent_pair):
    with pytest.raises(GraphError, match="cause must be distinct"):
        enumerate_minimal_mediator_sets(latent_pair, "C", "X", "C")
    with pytest.raises(GraphError, match="cause must be distinct"):
        enumerate_minimal_mediator_sets(latent_pair, "C", "X", "U1", base=("U1",))
