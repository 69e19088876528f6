"""Connection relations on ADMGs.

Four refined kinds of connecting path are supported: plain directed
paths, confounding arcs (arrowheads at both ends, no colliders),
confounding paths (arrowheads at both ends, colliders allowed), and
unrestricted m-connecting paths.  The decision procedure runs a
walk-based reachability over (vertex, incoming-mark) states, where a
collider on a walk is unblocked exactly when it lies in the
conditioning set; an exhaustive simple-path enumerator with ancestral
blocking is provided as a cross-check oracle for small graphs.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graph import Admg, GraphError, ancestors, districts, marginalize

HEAD = "head"
TAIL = "tail"

PATH_ENUMERATION_MAX_VERTICES = 12


class SizeCapError(GraphError):
    """Raised when a brute-force helper is applied beyond its size cap."""


class ConnectionKind(enum.Enum):
    DIRECTED = "directed"
    CONF_ARC = "conf-arc"
    CONF_PATH = "conf-path"
    M_CONN = "m-conn"


def _check_query(g: Admg, a: str, b: str, c: frozenset[str]) -> None:
    g.require_vertices([a, b])
    g.require_vertices(c)
    if a == b:
        raise GraphError(f"endpoints coincide: {a!r}")
    if a in c or b in c:
        raise GraphError("endpoints may not appear in the conditioning set")


def _steps(g: Admg, v: str):
    """Yield (neighbour, side left at v, mark arrived with) triples."""
    for w in g.children_map[v]:
        yield w, TAIL, HEAD
    for w in g.parents_map[v]:
        yield w, HEAD, TAIL
    for w in g.siblings_map[v]:
        yield w, HEAD, HEAD


def connected(g: Admg, kind: ConnectionKind, a: str, b: str, c: Iterable[str]) -> bool:
    """Decide whether an ancestrally unblocked path of ``kind`` joins
    ``a`` and ``b`` given ``c``.

    Runs a breadth-first search over walk states (vertex, incoming
    mark).  A step through vertex v is a collider step when both the
    incoming and outgoing edge ends at v are arrowheads; on a walk such
    a step is admissible exactly when v itself is in ``c``, while a
    non-collider step requires v outside ``c``.  Endpoints are visited
    only once.  For the confounding kinds the first and last edges must
    carry arrowheads at the endpoints.
    """
    c = frozenset(c)
    _check_query(g, a, b, c)

    if kind is ConnectionKind.DIRECTED:
        seen = {a}
        queue = deque([a])
        while queue:
            v = queue.popleft()
            for child in g.children_map[v]:
                if child == b:
                    return True
                if child not in seen and child not in c:
                    seen.add(child)
                    queue.append(child)
        return False

    head_at_ends = kind in (ConnectionKind.CONF_ARC, ConnectionKind.CONF_PATH)
    allow_colliders = kind is not ConnectionKind.CONF_ARC

    visited: set[tuple[str, str]] = set()
    queue: deque[tuple[str, str]] = deque()

    def arrive(w: str, mark: str) -> bool:
        # Returns True when the search may stop with a positive answer.
        if w == a:
            return False
        if w == b:
            return not head_at_ends or mark == HEAD
        if (w, mark) not in visited:
            visited.add((w, mark))
            queue.append((w, mark))
        return False

    for w, leave, mark in _steps(g, a):
        if head_at_ends and leave != HEAD:
            continue
        if arrive(w, mark):
            return True
    while queue:
        v, in_mark = queue.popleft()
        for w, leave, mark in _steps(g, v):
            if in_mark == HEAD and leave == HEAD:
                if not allow_colliders or v not in c:
                    continue
            elif v in c:
                continue
            if arrive(w, mark):
                return True
    return False


@dataclass(frozen=True, order=True)
class Path:
    """A simple path as parallel vertex and edge-token sequences."""

    vertices: tuple[str, ...]
    edges: tuple[str, ...]

    def render(self) -> str:
        parts = [self.vertices[0]]
        for edge, vertex in zip(self.edges, self.vertices[1:]):
            parts.append(edge)
            parts.append(vertex)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()


def _simple_paths(g: Admg, a: str, b: str):
    """Depth-first enumeration of all simple paths from a to b, as
    (vertices, edge tokens); parallel directed/bidirected edges yield
    distinct paths."""
    path = [a]
    edges: list[str] = []
    on_path = {a}

    def extend(v: str):
        for w, token in sorted(
            [(w, "->") for w in g.children_map[v]]
            + [(w, "<-") for w in g.parents_map[v]]
            + [(w, "<->") for w in g.siblings_map[v]]
        ):
            if w == b:
                yield Path(tuple(path) + (b,), tuple(edges) + (token,))
                continue
            if w in on_path:
                continue
            path.append(w)
            edges.append(token)
            on_path.add(w)
            yield from extend(w)
            on_path.discard(w)
            edges.pop()
            path.pop()

    yield from extend(a)


def _path_admissible(
    path: Path, kind: ConnectionKind, c: frozenset[str], anbar_c: frozenset[str]
) -> bool:
    edges = path.edges
    if kind is ConnectionKind.DIRECTED:
        if any(token != "->" for token in edges):
            return False
        return all(v not in c for v in path.vertices[1:-1])
    if kind in (ConnectionKind.CONF_ARC, ConnectionKind.CONF_PATH):
        if edges[0] not in ("<-", "<->") or edges[-1] not in ("->", "<->"):
            return False
    for i in range(1, len(path.vertices) - 1):
        v = path.vertices[i]
        is_collider = edges[i - 1] in ("->", "<->") and edges[i] in ("<-", "<->")
        if is_collider:
            if kind is ConnectionKind.CONF_ARC or v not in anbar_c:
                return False
        elif v in c:
            return False
    return True


def enumerate_unblocked_paths(
    g: Admg, kind: ConnectionKind, a: str, b: str, c: Iterable[str]
) -> list[Path]:
    """All simple paths of ``kind`` from a to b that are ancestrally
    unblocked given ``c`` (a collider is open when it lies in ``c`` or
    has a descendant there), in lexicographic order of vertex sequence.

    Exhaustive; restricted to graphs of at most
    ``PATH_ENUMERATION_MAX_VERTICES`` vertices.
    """
    c = frozenset(c)
    _check_query(g, a, b, c)
    if len(g.vertices) > PATH_ENUMERATION_MAX_VERTICES:
        raise SizeCapError(
            "path enumeration supports at most "
            f"{PATH_ENUMERATION_MAX_VERTICES} vertices, got {len(g.vertices)}"
        )
    anbar_c = c | ancestors(g, c)
    found = [
        path
        for path in _simple_paths(g, a, b)
        if _path_admissible(path, kind, c, anbar_c)
    ]
    return sorted(found)


def district_criterion(g: Admg, x: str, y: str, s: Iterable[str]) -> bool:
    """True iff x and y fall in different districts of the graph
    marginalized onto {x, y} union s; equivalent to the absence of a
    confounding path between x and y given s."""
    s = frozenset(s)
    _check_query(g, x, y, s)
    margin = marginalize(g, s | {x, y})
    for block in districts(margin):
        if x in block:
            return y not in block
    raise AssertionError("districts must cover every vertex")


def collider_connected(g: Admg, a: str, b: str, c: Iterable[str]) -> bool:
    """True iff the graph marginalized onto {a, b} union c has a path
    from a to b whose every intermediate vertex is a collider;
    equivalent to m-connection given c."""
    c = frozenset(c)
    _check_query(g, a, b, c)
    margin = marginalize(g, c | {a, b})
    if (
        b in margin.children_map[a]
        or b in margin.parents_map[a]
        or b in margin.siblings_map[a]
    ):
        return True
    # Interior vertices need arrowheads on both sides, so the path is
    # a (-> or <->) m1 <-> ... <-> mk (<- or <->) b.
    frontier = set(margin.children_map[a]) | set(margin.siblings_map[a])
    frontier -= {b}
    seen = set(frontier)
    queue = deque(frontier)
    while queue:
        m = queue.popleft()
        if m in margin.children_map[b] or m in margin.siblings_map[b]:
            return True
        for w in margin.siblings_map[m]:
            if w not in seen and w != a and w != b:
                seen.add(w)
                queue.append(w)
    return False


def set_connected(
    g: Admg,
    kind: ConnectionKind,
    a_set: Iterable[str],
    b_set: Iterable[str],
    c_set: Iterable[str],
) -> bool:
    """Disjunctive lift of :func:`connected` to disjoint vertex sets:
    some pair (a, b) is connected.  Empty sides are separated."""
    a_set, b_set, c_set = frozenset(a_set), frozenset(b_set), frozenset(c_set)
    if a_set & b_set or a_set & c_set or b_set & c_set:
        raise GraphError("set-lifted relations require pairwise disjoint sets")
    return any(
        connected(g, kind, a, b, c_set) for a in sorted(a_set) for b in sorted(b_set)
    )
