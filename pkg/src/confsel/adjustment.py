"""Adjustment-set predicates and brute-force enumerators.

These are the ground-truth notions the interactive engine is tested
against: validity (no descendants of treatment or outcome),
sufficiency (the district criterion), the classic back-door criterion,
and primary/mediator sets relative to a base conditioning set.  The
enumerators are exhaustive and guarded by explicit pool-size caps.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable

from .graph import Admg, GraphError, ancestors, descendants
from .separation import (
    ConnectionKind,
    SizeCapError,
    connected,
    district_criterion,
)

DEFAULT_POOL_CAP = 15


def canonical_family(sets: Iterable[Iterable[str]]) -> tuple[frozenset[str], ...]:
    """Deduplicate a family of vertex sets and order it by size, then
    lexicographically by sorted members."""
    unique = {frozenset(s) for s in sets}
    return tuple(sorted(unique, key=lambda s: (len(s), tuple(sorted(s)))))


def minimal_members(sets: Iterable[Iterable[str]]) -> tuple[frozenset[str], ...]:
    """Inclusion-minimal members of a family, canonically ordered."""
    family = canonical_family(sets)
    return tuple(s for s in family if not any(t < s for t in family))


def format_vertex_set(s: Iterable[str]) -> str:
    return "{" + ",".join(sorted(s)) + "}"


def _check_pool(pool: Iterable[str], cap: int) -> frozenset[str]:
    pool = frozenset(pool)
    if len(pool) > cap:
        raise SizeCapError(
            f"candidate pool has {len(pool)} vertices, exceeding the cap of "
            f"{cap}; raise pool_cap to enumerate anyway"
        )
    return pool


def _minimal_sets(
    pool: Iterable[str], satisfies: Callable[[frozenset[str]], bool]
) -> tuple[frozenset[str], ...]:
    """All inclusion-minimal subsets of ``pool`` satisfying the
    predicate, found size-ascending with superset pruning (the
    predicate need not be monotone)."""
    pool = sorted(pool)
    found: list[frozenset[str]] = []
    for size in range(len(pool) + 1):
        for combo in itertools.combinations(pool, size):
            candidate = frozenset(combo)
            if any(member <= candidate for member in found):
                continue
            if satisfies(candidate):
                found.append(candidate)
    return canonical_family(found)


def _check_pair(g: Admg, x: str, y: str, s: frozenset[str]) -> None:
    g.require_vertices([x, y])
    g.require_vertices(s)
    if x == y:
        raise GraphError(f"endpoints coincide: {x!r}")
    if x in s or y in s:
        raise GraphError("conditioning set may not contain the endpoints")


def is_adjustment_set(g: Admg, x: str, y: str, s: Iterable[str]) -> bool:
    """True iff ``s`` contains no descendant of x or of y."""
    s = frozenset(s)
    _check_pair(g, x, y, s)
    return not s & (descendants(g, [x]) | descendants(g, [y]))


def is_sufficient(g: Admg, x: str, y: str, s: Iterable[str]) -> bool:
    """True iff ``s`` is a valid adjustment set that blocks every
    confounding path between x and y.

    The blocking condition is computed via the district criterion and
    cross-checked against the direct confounding-path relation.
    """
    s = frozenset(s)
    if not is_adjustment_set(g, x, y, s):
        return False
    by_district = district_criterion(g, x, y, s)
    by_path = not connected(g, ConnectionKind.CONF_PATH, x, y, s)
    if by_district != by_path:
        raise AssertionError(
            "district criterion disagrees with the confounding-path relation "
            f"for ({x}, {y}) given {format_vertex_set(s)}"
        )
    return by_district


def pearl_backdoor(g: Admg, x: str, y: str, s: Iterable[str]) -> bool:
    """The back-door criterion: ``s`` contains no descendant of x and
    blocks every path between x and y that has an arrowhead into x."""
    s = frozenset(s)
    _check_pair(g, x, y, s)
    if s & descendants(g, [x]):
        return False
    # The paths with an arrowhead into x are exactly the x-y paths of
    # the graph with x's outgoing edges removed, and with s free of
    # descendants of x the ancestral structure over s agrees between
    # the two graphs.
    trimmed = Admg(
        vertices=g.vertices,
        observed=g.observed,
        directed=frozenset(edge for edge in g.directed if edge[0] != x),
        bidirected=g.bidirected,
    )
    return not connected(trimmed, ConnectionKind.M_CONN, x, y, s)


def _sufficiency_pool(g: Admg, x: str, y: str, observed_only: bool) -> frozenset[str]:
    base = g.observed if observed_only else g.vertices
    return base - {x, y} - descendants(g, [x]) - descendants(g, [y])


def enumerate_minimal_sufficient(
    g: Admg,
    x: str,
    y: str,
    observed_only: bool = True,
    pool_cap: int = DEFAULT_POOL_CAP,
) -> tuple[frozenset[str], ...]:
    """All inclusion-minimal sufficient adjustment sets for (x, y).

    Exhaustive over the candidate pool (observed vertices unless
    ``observed_only`` is false, always excluding descendants of x, y).
    """
    _check_pair(g, x, y, frozenset())
    pool = _check_pool(_sufficiency_pool(g, x, y, observed_only), pool_cap)
    return _minimal_sets(pool, lambda s: is_sufficient(g, x, y, s))


def enumerate_sufficient(
    g: Admg,
    x: str,
    y: str,
    observed_only: bool = True,
    pool_cap: int = DEFAULT_POOL_CAP,
) -> tuple[frozenset[str], ...]:
    """All sufficient adjustment sets (not only minimal ones), in
    canonical order."""
    _check_pair(g, x, y, frozenset())
    pool = sorted(_check_pool(_sufficiency_pool(g, x, y, observed_only), pool_cap))
    found = []
    for size in range(len(pool) + 1):
        for combo in itertools.combinations(pool, size):
            if is_sufficient(g, x, y, frozenset(combo)):
                found.append(frozenset(combo))
    return canonical_family(found)


def is_primary(
    g: Admg, a: str, b: str, base: Iterable[str], c: Iterable[str]
) -> bool:
    """True iff ``c`` is a valid adjustment set for (a, b) and, jointly
    with ``base``, blocks every confounding arc between a and b."""
    c = frozenset(c)
    base = frozenset(base)
    _check_pair(g, a, b, base | c)
    if not is_adjustment_set(g, a, b, c):
        return False
    return not connected(g, ConnectionKind.CONF_ARC, a, b, base | c)


def enumerate_minimal_primary(
    g: Admg,
    a: str,
    b: str,
    base: Iterable[str] = (),
    pool_cap: int = DEFAULT_POOL_CAP,
) -> tuple[frozenset[str], ...]:
    """All inclusion-minimal observed sets primary for (a, b) relative
    to ``base``.

    The search pool is restricted to observed ancestors of a or b,
    which is lossless for minimal primary sets.
    """
    base = frozenset(base)
    _check_pair(g, a, b, base)
    pool = (
        (g.observed & (ancestors(g, [a]) | ancestors(g, [b])))
        - base
        - {a, b}
        - descendants(g, [a])
        - descendants(g, [b])
    )
    pool = _check_pool(pool, pool_cap)
    return _minimal_sets(pool, lambda c: is_primary(g, a, b, base, c))


def enumerate_minimal_mediator_sets(
    g: Admg,
    a: str,
    b: str,
    cause: str,
    base: Iterable[str] = (),
    pool_cap: int = DEFAULT_POOL_CAP,
    pool: Iterable[str] | None = None,
) -> tuple[frozenset[str], ...]:
    """All inclusion-minimal observed sets M that, combined with
    ``base``, sever every directed path from ``cause`` to a or every
    directed path from ``cause`` to b.

    Severance is judged relative to the pair: paths that detour
    through the other endpoint do not count, mirroring the common-
    cause condition (a confounding arc between a and b never passes
    through either of them).

    By default M ranges over observed non-descendants of a and b
    (excluding a, b, cause and the base); callers may substitute their
    own candidate ``pool``.
    """
    base = frozenset(base)
    g.require_vertices([a, b, cause])
    _check_pair(g, a, b, base)
    if cause in (a, b) or cause in base:
        raise GraphError("cause must be distinct from the endpoints and the base")
    if pool is None:
        pool = (
            g.observed
            - {a, b, cause}
            - base
            - descendants(g, [a])
            - descendants(g, [b])
        )
    else:
        pool = frozenset(pool) - {a, b, cause} - base
    pool = _check_pool(pool, pool_cap)

    def blocks(m: frozenset[str]) -> bool:
        return not connected(
            g, ConnectionKind.DIRECTED, cause, a, base | m | {b}
        ) or not connected(g, ConnectionKind.DIRECTED, cause, b, base | m | {a})

    return _minimal_sets(pool, blocks)
