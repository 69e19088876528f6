"""Acyclic directed mixed graphs: representation, parsing, ancestral
relations, districts, and latent projection."""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class GraphError(ValueError):
    """Raised for structurally invalid graphs or invalid graph queries."""


class GraphParseError(GraphError):
    """Raised for malformed graph documents; carries a 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def normalize_pair(a: str, b: str) -> tuple[str, str]:
    """Canonical (lexicographically ordered) form of an unordered pair."""
    return (a, b) if a <= b else (b, a)


def _find_cycle(vertices: frozenset[str], directed: frozenset[tuple[str, str]]):
    children: dict[str, list[str]] = {v: [] for v in vertices}
    for tail, head in directed:
        children[tail].append(head)
    state: dict[str, int] = {}  # 1 = on stack, 2 = done
    for root in sorted(vertices):
        if state.get(root):
            continue
        stack = [(root, iter(sorted(children[root])))]
        state[root] = 1
        path = [root]
        while stack:
            vertex, it = stack[-1]
            advanced = False
            for child in it:
                if state.get(child) == 1:
                    return path[path.index(child):] + [child]
                if not state.get(child):
                    state[child] = 1
                    path.append(child)
                    stack.append((child, iter(sorted(children[child]))))
                    advanced = True
                    break
            if not advanced:
                state[vertex] = 2
                path.pop()
                stack.pop()
    return None


@dataclass(frozen=True)
class Admg:
    """An acyclic directed mixed graph.

    Vertices are identifier strings.  ``directed`` holds (tail, head)
    pairs; ``bidirected`` holds unordered pairs in canonical order.  A
    pair of vertices may carry both a directed and a bidirected edge.
    Vertices outside ``observed`` are latent.  Instances are immutable
    and validated on construction.
    """

    vertices: frozenset[str]
    observed: frozenset[str]
    directed: frozenset[tuple[str, str]]
    bidirected: frozenset[tuple[str, str]]

    def __post_init__(self):
        for name in self.vertices:
            if not IDENTIFIER.match(name):
                raise GraphError(f"invalid vertex name {name!r}")
        if not self.observed <= self.vertices:
            raise GraphError("observed set contains undeclared vertices")
        for tail, head in self.directed:
            if tail == head:
                raise GraphError(f"self-loop {tail} -> {head}")
            if tail not in self.vertices or head not in self.vertices:
                raise GraphError(f"edge {tail} -> {head} uses an undeclared vertex")
        for a, b in self.bidirected:
            if a == b:
                raise GraphError(f"self-loop {a} <-> {b}")
            if (a, b) != normalize_pair(a, b):
                raise GraphError(f"bidirected pair ({a}, {b}) not in canonical order")
            if a not in self.vertices or b not in self.vertices:
                raise GraphError(f"edge {a} <-> {b} uses an undeclared vertex")
        cycle = _find_cycle(self.vertices, self.directed)
        if cycle:
            raise GraphError("directed cycle: " + " -> ".join(cycle))

    @property
    def latent(self) -> frozenset[str]:
        return self.vertices - self.observed

    @cached_property
    def parents_map(self) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {v: set() for v in self.vertices}
        for tail, head in self.directed:
            out[head].add(tail)
        return {v: frozenset(s) for v, s in out.items()}

    @cached_property
    def children_map(self) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {v: set() for v in self.vertices}
        for tail, head in self.directed:
            out[tail].add(head)
        return {v: frozenset(s) for v, s in out.items()}

    @cached_property
    def siblings_map(self) -> dict[str, frozenset[str]]:
        """Bidirected-edge neighbours of each vertex."""
        out: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a, b in self.bidirected:
            out[a].add(b)
            out[b].add(a)
        return {v: frozenset(s) for v, s in out.items()}

    def require_vertices(self, names: Iterable[str]) -> None:
        for name in names:
            if name not in self.vertices:
                raise GraphError(f"unknown vertex {name!r}")


def make_admg(
    vertices: Iterable[str],
    directed: Iterable[tuple[str, str]] = (),
    bidirected: Iterable[tuple[str, str]] = (),
    latent: Iterable[str] = (),
) -> Admg:
    """Convenience constructor normalizing edge containers into an Admg."""
    vs = frozenset(vertices)
    return Admg(
        vertices=vs,
        observed=vs - frozenset(latent),
        directed=frozenset((tail, head) for tail, head in directed),
        bidirected=frozenset(normalize_pair(a, b) for a, b in bidirected),
    )


def parse_graph(text: str) -> Admg:
    """Parse the line-oriented graph format into an Admg.

    The format has four line kinds: ``# comment``, ``vertex NAME``,
    ``latent NAME``, and edges ``A -> B`` / ``A <-> B``.  Declarations
    must precede use.  All diagnostics carry 1-based line numbers.
    """
    vertices: set[str] = set()
    latent: set[str] = set()
    directed: set[tuple[str, str]] = set()
    bidirected: set[tuple[str, str]] = set()
    children: dict[str, set[str]] = {}

    def reaches(source: str, target: str) -> bool:
        seen = {source}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            if v == target:
                return True
            for child in children.get(v, ()):
                if child not in seen:
                    seen.add(child)
                    queue.append(child)
        return False

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) == 2 and tokens[0] in ("vertex", "latent"):
            name = tokens[1]
            if not IDENTIFIER.match(name):
                raise GraphParseError(line_number, f"invalid vertex name {name!r}")
            if name in vertices:
                raise GraphParseError(line_number, f"duplicate declaration of {name!r}")
            vertices.add(name)
            if tokens[0] == "latent":
                latent.add(name)
            continue
        if len(tokens) == 3 and tokens[1] in ("->", "<->"):
            a, b = tokens[0], tokens[2]
            for name in (a, b):
                if name not in vertices:
                    raise GraphParseError(line_number, f"undeclared vertex {name!r}")
            if a == b:
                raise GraphParseError(line_number, f"self-loop at {a!r}")
            if tokens[1] == "->":
                if (a, b) in directed:
                    raise GraphParseError(line_number, f"duplicate edge {a} -> {b}")
                if reaches(b, a):
                    raise GraphParseError(
                        line_number, f"edge {a} -> {b} creates a directed cycle"
                    )
                directed.add((a, b))
                children.setdefault(a, set()).add(b)
            else:
                pair = normalize_pair(a, b)
                if pair in bidirected:
                    raise GraphParseError(line_number, f"duplicate edge {a} <-> {b}")
                bidirected.add(pair)
            continue
        raise GraphParseError(line_number, f"unrecognized line {line!r}")

    return Admg(
        vertices=frozenset(vertices),
        observed=frozenset(vertices - latent),
        directed=frozenset(directed),
        bidirected=frozenset(bidirected),
    )


def serialize_graph(g: Admg) -> str:
    """Canonical text form of a graph; ``parse_graph`` round-trips it."""
    lines = []
    for name in sorted(g.vertices):
        keyword = "vertex" if name in g.observed else "latent"
        lines.append(f"{keyword} {name}")
    for tail, head in sorted(g.directed):
        lines.append(f"{tail} -> {head}")
    for a, b in sorted(g.bidirected):
        lines.append(f"{a} <-> {b}")
    return "\n".join(lines) + "\n"


def _closure(g: Admg, seeds: Iterable[str], step: dict[str, frozenset[str]]):
    seeds = list(seeds)
    g.require_vertices(seeds)
    reached: set[str] = set()
    queue = deque(seeds)
    while queue:
        v = queue.popleft()
        for nxt in step[v]:
            if nxt not in reached:
                reached.add(nxt)
                queue.append(nxt)
    return frozenset(reached)


def ancestors(g: Admg, a: Iterable[str]) -> frozenset[str]:
    """Vertices with a directed path of length >= 1 into some member of
    ``a``.  A member of ``a`` is included only if it reaches another
    member (a vertex is not its own ancestor).
    """
    return _closure(g, a, g.parents_map)


def descendants(g: Admg, a: Iterable[str]) -> frozenset[str]:
    """Mirror of :func:`ancestors` along children."""
    return _closure(g, a, g.children_map)


def districts(g: Admg) -> frozenset[frozenset[str]]:
    """Partition of the vertices into bidirected-connected components."""
    remaining = set(g.vertices)
    blocks = []
    while remaining:
        root = remaining.pop()
        block = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in g.siblings_map[v]:
                if w not in block:
                    block.add(w)
                    remaining.discard(w)
                    queue.append(w)
        blocks.append(frozenset(block))
    return frozenset(blocks)


def marginalize(g: Admg, keep: Iterable[str]) -> Admg:
    """Latent projection of ``g`` onto the vertex set ``keep``.

    The result has a directed edge a -> b iff ``g`` has a directed path
    a to b whose intermediates all lie outside ``keep``, and a
    bidirected edge a <-> b iff ``g`` has a collider-free path between
    a and b with arrowheads at both ends whose intermediates all lie
    outside ``keep``.  Latent/observed status is inherited, and the
    result is again acyclic.
    """
    keep = frozenset(keep)
    g.require_vertices(keep)
    removed = g.vertices - keep

    # Directed reachability from each kept vertex through removed-only
    # intermediates.
    new_directed: set[tuple[str, str]] = set()
    for a in keep:
        seen: set[str] = set()
        queue = deque([a])
        while queue:
            v = queue.popleft()
            for child in g.children_map[v]:
                if child in seen:
                    continue
                seen.add(child)
                if child in keep:
                    new_directed.add((a, child))
                else:
                    queue.append(child)

    # tails[v] = {v} plus every removed vertex with a directed path to v
    # through removed-only intermediates.
    tails: dict[str, frozenset[str]] = {}
    for v in keep:
        bag = {v}
        queue = deque([v])
        while queue:
            w = queue.popleft()
            for parent in g.parents_map[w]:
                if parent in removed and parent not in bag:
                    bag.add(parent)
                    queue.append(parent)
        tails[v] = frozenset(bag)

    new_bidirected: set[tuple[str, str]] = set()
    ordered = sorted(keep)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if any(w in removed for w in tails[a] & tails[b]) or any(
                normalize_pair(u, w) in g.bidirected
                for u in tails[a]
                for w in tails[b]
            ):
                new_bidirected.add((a, b))

    return Admg(
        vertices=keep,
        observed=g.observed & keep,
        directed=frozenset(new_directed),
        bidirected=frozenset(new_bidirected),
    )


def canonical_dag(g: Admg) -> Admg:
    """The DAG that realizes ``g``'s bidirected edges explicitly.

    Each bidirected edge a <-> b is replaced by a fresh latent vertex
    with directed edges into a and b.  The fresh vertices are named U1,
    U2, ... (skipping names already taken), one per bidirected edge in
    canonical order.  Marginalizing the result onto ``g.vertices``
    recovers ``g``.
    """
    fresh: list[str] = []
    directed = set(g.directed)
    taken = set(g.vertices)
    counter = itertools.count(1)
    for a, b in sorted(g.bidirected):
        while True:
            name = f"U{next(counter)}"
            if name not in taken:
                break
        taken.add(name)
        fresh.append(name)
        directed.add((name, a))
        directed.add((name, b))
    return Admg(
        vertices=g.vertices | frozenset(fresh),
        observed=g.observed,
        directed=frozenset(directed),
        bidirected=frozenset(),
    )
