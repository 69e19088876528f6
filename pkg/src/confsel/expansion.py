"""Interactive confounder selection by iterative graph expansion.

The engine explores *working states* (S, B_yes, B_no): S is the set of
confounder candidates discovered so far, and over the vertex universe
S ∪ {x, y} each unordered pair is either assumed confounded (B_yes),
ruled out (B_no), or still uncertain.  A state whose min-cut index is
zero certifies S as a sufficient adjustment set; a state where B_yes
alone connects x and y is hopeless.  Otherwise the engine selects an
uncertain pair, asks the oracle to resolve it (find a common cause,
check whether it is observed, find mediating sets), and branches.

Engines are generators: they yield progress events and oracle queries,
receive answers via ``send``, and return the run outcome.  The drivers
at the bottom of this module connect them to an oracle object; the
session layer connects them to humans over HTTP instead.
"""

from __future__ import annotations

import heapq
import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Generator, Iterable, Union

from .adjustment import canonical_family, format_vertex_set, minimal_members
from .graph import GraphError, normalize_pair
from .oracle import (
    CommonCauseAnswer,
    CommonCauseQuery,
    FindMediatorAnswer,
    FindMediatorQuery,
    IsObservedAnswer,
    IsObservedQuery,
    Oracle,
    OracleAnswer,
    OracleQuery,
    ProtocolError,
    _require_name,
)

INFINITY = math.inf

Pair = tuple[str, str]

STRATEGY_MIN_CUT = "min-cut"
STRATEGY_FIRST = "first"
STRATEGIES = (STRATEGY_MIN_CUT, STRATEGY_FIRST)

ALGORITHM_QUEUE = "queue"
ALGORITHM_RECURSIVE = "recursive"
ALGORITHMS = (ALGORITHM_QUEUE, ALGORITHM_RECURSIVE)

RECURSION_DEPTH_CAP = 200


class BudgetExceededError(RuntimeError):
    """An expansion run exceeded its state or vertex budget."""

    def __init__(self, reason: str) -> None:
        super().__init__(reason)
        self.reason = reason


class DepthCapError(RuntimeError):
    """The recursive engine exceeded its nesting cap."""


@dataclass(frozen=True)
class ExpansionConfig:
    minimal_only: bool = True
    strategy: str = STRATEGY_MIN_CUT
    max_states: int = 10000
    max_vertices: int = 64

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(
                f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}"
            )
        if not isinstance(self.max_states, int) or self.max_states <= 0:
            raise ValueError("max_states must be a positive integer")
        if not isinstance(self.max_vertices, int) or self.max_vertices <= 0:
            raise ValueError("max_vertices must be a positive integer")
        if not isinstance(self.minimal_only, bool):
            raise ValueError("minimal_only must be a boolean")

    def to_jsonable(self) -> dict:
        return {
            "minimal_only": self.minimal_only,
            "strategy": self.strategy,
            "max_states": self.max_states,
            "max_vertices": self.max_vertices,
        }

    @classmethod
    def from_jsonable(cls, data: dict) -> "ExpansionConfig":
        if not isinstance(data, dict):
            raise ValueError("config must be an object")
        unknown = set(data) - {"minimal_only", "strategy", "max_states", "max_vertices"}
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)


def _canonical_pairs(pairs: Iterable[Pair], label: str) -> frozenset[Pair]:
    out = set()
    for pair in pairs:
        u, v = pair
        if (u, v) != normalize_pair(u, v):
            raise GraphError(f"{label} pair {pair!r} is not in canonical order")
        out.add((u, v))
    return frozenset(out)


@dataclass(frozen=True)
class WorkingState:
    """A search node: discovered candidates ``s``, pairs assumed
    confounded ``b_yes``, and pairs ruled out ``b_no``."""

    s: frozenset[str]
    b_yes: frozenset[Pair]
    b_no: frozenset[Pair]

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", frozenset(self.s))
        object.__setattr__(
            self, "b_yes", _canonical_pairs(self.b_yes, "b_yes")
        )
        object.__setattr__(self, "b_no", _canonical_pairs(self.b_no, "b_no"))
        if self.b_yes & self.b_no:
            raise GraphError("a pair cannot be both kept and ruled out")


INITIAL_STATE = WorkingState(frozenset(), frozenset(), frozenset())


def state_vertices(state: WorkingState, x: str, y: str) -> frozenset[str]:
    return state.s | {x, y}


def uncertain_pairs(state: WorkingState, x: str, y: str) -> frozenset[Pair]:
    """All unordered pairs over S ∪ {x, y} not yet classified."""
    vertices = sorted(state_vertices(state, x, y))
    pairs = {
        (u, v)
        for i, u in enumerate(vertices)
        for v in vertices[i + 1 :]
    }
    return frozenset(pairs) - state.b_yes - state.b_no


def _pairs_connect(x: str, y: str, pairs: Iterable[Pair]) -> bool:
    adjacency: dict[str, set[str]] = {}
    for u, v in pairs:
        adjacency.setdefault(u, set()).add(v)
        adjacency.setdefault(v, set()).add(u)
    frontier = deque([x])
    seen = {x}
    while frontier:
        u = frontier.popleft()
        if u == y:
            return True
        for v in adjacency.get(u, ()):
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return False


def _max_flow(
    capacity: dict[tuple[str, str], int],
    adjacency: dict[str, set[str]],
    source: str,
    sink: str,
) -> int:
    """Edmonds-Karp on a symmetric capacity map (mutates ``capacity``)."""
    flow = 0
    while True:
        parents: dict[str, str | None] = {source: None}
        frontier = deque([source])
        while frontier and sink not in parents:
            u = frontier.popleft()
            for v in adjacency.get(u, ()):
                if v not in parents and capacity[(u, v)] > 0:
                    parents[v] = u
                    frontier.append(v)
        if sink not in parents:
            return flow
        bottleneck = None
        v = sink
        while parents[v] is not None:
            u = parents[v]
            residual = capacity[(u, v)]
            bottleneck = residual if bottleneck is None else min(bottleneck, residual)
            v = u
        v = sink
        while parents[v] is not None:
            u = parents[v]
            capacity[(u, v)] -= bottleneck
            capacity[(v, u)] += bottleneck
            v = u
        flow += bottleneck


def _flow_network(
    state: WorkingState, x: str, y: str, omit: Pair | None = None
) -> tuple[dict[tuple[str, str], int], dict[str, set[str]]]:
    uncertain = uncertain_pairs(state, x, y)
    if omit is not None:
        uncertain = uncertain - {omit}
    big = len(uncertain) + 1
    capacity: dict[tuple[str, str], int] = {}
    adjacency: dict[str, set[str]] = {}
    for pairs, weight in ((uncertain, 1), (state.b_yes, big)):
        for u, v in pairs:
            capacity[(u, v)] = weight
            capacity[(v, u)] = weight
            adjacency.setdefault(u, set()).add(v)
            adjacency.setdefault(v, set()).add(u)
    return capacity, adjacency


def min_cut_index(state: WorkingState, x: str, y: str) -> float:
    """The fewest uncertain pairs whose removal disconnects x from y
    over B_yes ∪ B_uncertain; infinite when B_yes alone connects them
    (the state can never certify a sufficient set)."""
    if x == y:
        raise GraphError(f"endpoints coincide: {x!r}")
    if _pairs_connect(x, y, state.b_yes):
        return INFINITY
    capacity, adjacency = _flow_network(state, x, y)
    return _max_flow(capacity, adjacency, x, y)


def _distance_to(
    target: str, pairs: Iterable[Pair]
) -> dict[str, int]:
    adjacency: dict[str, set[str]] = {}
    for u, v in pairs:
        adjacency.setdefault(u, set()).add(v)
        adjacency.setdefault(v, set()).add(u)
    distances = {target: 0}
    frontier = deque([target])
    while frontier:
        u = frontier.popleft()
        for v in adjacency.get(u, ()):
            if v not in distances:
                distances[v] = distances[u] + 1
                frontier.append(v)
    return distances


def select_edge(
    state: WorkingState, x: str, y: str, strategy: str = STRATEGY_MIN_CUT
) -> Pair:
    """Choose the uncertain pair to resolve next.

    ``min-cut``: among pairs that participate in some minimum x-y cut,
    prefer those closest to y (fewest hops over B_yes ∪ B_uncertain
    from either endpoint), breaking ties toward the lexicographically
    largest canonical pair.  ``first``: the lexicographically smallest
    uncertain pair.
    """
    if strategy not in STRATEGIES:
        raise GraphError(f"unknown strategy {strategy!r}")
    uncertain = uncertain_pairs(state, x, y)
    if not uncertain:
        raise GraphError("state has no uncertain pairs to select")
    if strategy == STRATEGY_FIRST:
        return min(uncertain)
    index = min_cut_index(state, x, y)
    if index == 0 or index == INFINITY:
        raise GraphError(
            "pair selection requires a finite positive min-cut index"
        )
    candidates = []
    for pair in sorted(uncertain):
        capacity, adjacency = _flow_network(state, x, y, omit=pair)
        if _max_flow(capacity, adjacency, x, y) == index - 1:
            candidates.append(pair)
    distances = _distance_to(y, uncertain | state.b_yes)
    def pair_distance(pair: Pair) -> float:
        return min(
            distances.get(pair[0], INFINITY), distances.get(pair[1], INFINITY)
        )
    best = min(pair_distance(pair) for pair in candidates)
    return max(pair for pair in candidates if pair_distance(pair) == best)


@dataclass(frozen=True)
class StatePopped:
    state: WorkingState
    mincut: float


@dataclass(frozen=True)
class EdgeSelected:
    pair: Pair


@dataclass(frozen=True)
class StatePushed:
    state: WorkingState
    mincut: float


@dataclass(frozen=True)
class SetEmitted:
    vertices: frozenset[str]


EngineEvent = Union[StatePopped, EdgeSelected, StatePushed, SetEmitted]
EngineItem = Union[EngineEvent, OracleQuery]


@dataclass(frozen=True)
class OracleExchange:
    query: OracleQuery
    answer: OracleAnswer


@dataclass(frozen=True)
class ExpansionResult:
    """Outcome of an expansion run.

    ``sufficient_sets`` lists the emitted sets in discovery order
    (deduplicated); ``trace`` interleaves engine events and oracle
    exchanges; ``exhausted`` is False when a budget stopped the search
    early, with ``reason`` saying why the run ended either way.
    """

    sufficient_sets: tuple[frozenset[str], ...]
    trace: tuple[Union[EngineEvent, OracleExchange], ...]
    exhausted: bool
    reason: str

    @property
    def canonical_sets(self) -> tuple[frozenset[str], ...]:
        return canonical_family(self.sufficient_sets)

    @property
    def minimal_sets(self) -> tuple[frozenset[str], ...]:
        return minimal_members(self.sufficient_sets)


@dataclass(frozen=True)
class _RunOutcome:
    sufficient_sets: tuple[frozenset[str], ...]
    exhausted: bool
    reason: str


_ANSWER_TYPES = {
    CommonCauseQuery: CommonCauseAnswer,
    IsObservedQuery: IsObservedAnswer,
    FindMediatorQuery: FindMediatorAnswer,
}


class _Context:
    """Shared run state: the answer cache, the pop budget, and the
    vertex universe guarded by the vertex budget."""

    def __init__(self, max_states: int, max_vertices: int, seed: Iterable[str]):
        self.cache: dict[OracleQuery, OracleAnswer] = {}
        self.pops_left = max_states
        self.max_vertices = max_vertices
        self.universe: set[str] = set(seed)
        if len(self.universe) > max_vertices:
            raise BudgetExceededError(
                f"vertex budget exceeded: {len(self.universe)} vertices, "
                f"cap is {max_vertices}"
            )

    def spend_pop(self) -> None:
        if self.pops_left <= 0:
            raise BudgetExceededError("state budget exceeded")
        self.pops_left -= 1

    def absorb(self, answer: OracleAnswer) -> None:
        if isinstance(answer, CommonCauseAnswer):
            if answer.vertex is not None:
                self.universe.add(answer.vertex)
        elif isinstance(answer, FindMediatorAnswer):
            for member in answer.sets:
                self.universe.update(member)
        if len(self.universe) > self.max_vertices:
            raise BudgetExceededError(
                f"vertex budget exceeded: {len(self.universe)} vertices, "
                f"cap is {self.max_vertices}"
            )


def _ask(
    ctx: _Context, query: OracleQuery
) -> Generator[OracleQuery, OracleAnswer, OracleAnswer]:
    """Yield the query unless its answer is cached; validate, cache,
    and account for the answer."""
    cached = ctx.cache.get(query)
    if cached is not None:
        return cached
    answer = yield query
    if not isinstance(answer, _ANSWER_TYPES[type(query)]):
        raise ProtocolError(
            f"{query_name(query)} answered with {type(answer).__name__}"
        )
    ctx.absorb(answer)
    ctx.cache[query] = answer
    return answer


def query_name(query: OracleQuery) -> str:
    return type(query).__name__


def _find_primary_steps(
    ctx: _Context,
    a: str,
    b: str,
    base: frozenset[str],
    minimal_only: bool,
) -> Generator[OracleQuery, OracleAnswer, tuple[frozenset[str], ...]]:
    """Discover primary sets for (a, b) on top of ``base`` by breadth-
    first expansion over conditioning sets, smallest first.

    Returns the canonical family of discovered sets (relative to the
    base).  The empty set belongs to the family iff the family is
    exactly {∅}: it can only arise from the seed pop, before anything
    else is enqueued, and trimming never empties a nonempty set
    because the seed answer is cached.
    """
    frontier: list[tuple[int, int, frozenset[str]]] = []
    counter = itertools.count()
    seen: set[frozenset[str]] = set()

    def push(t: frozenset[str]) -> None:
        if t not in seen:
            seen.add(t)
            heapq.heappush(frontier, (len(t), next(counter), t))

    push(base)
    found: list[frozenset[str]] = []
    while frontier:
        ctx.spend_pop()
        _, _, t = heapq.heappop(frontier)
        reply = yield from _ask(ctx, CommonCauseQuery(a, b, t))
        if reply.vertex is None:
            if reply.unblockable:
                continue
            kept = set(t - base)
            if minimal_only:
                for vertex in sorted(kept):
                    probe = yield from _ask(
                        ctx,
                        CommonCauseQuery(a, b, base | (kept - {vertex})),
                    )
                    if probe.vertex is None and not probe.unblockable:
                        kept.discard(vertex)
            found.append(frozenset(kept))
            continue
        cause = reply.vertex
        observed = yield from _ask(ctx, IsObservedQuery(cause))
        mediators = yield from _ask(ctx, FindMediatorQuery(a, b, cause, base))
        if observed.observed:
            push(t | {cause})
        for member in mediators.sets:
            push(t | member)
    return canonical_family(found)


def _child_states(
    state: WorkingState, pair: Pair, family: tuple[frozenset[str], ...]
) -> tuple[list[WorkingState], WorkingState | None]:
    """Successor states after resolving ``pair`` with the discovered
    primary family: expansions that rule the pair out (one per family
    member), plus the keep-state, unless the family settles the pair.

    A family containing ∅ means the pair is already severed: the only
    successor rules it out with no new vertices.  An empty family
    means every way of severing it is hopeless: only the keep-state
    remains.
    """
    ruled_out = frozenset(state.b_no | {pair})
    if frozenset() in family:
        return [WorkingState(state.s, state.b_yes, ruled_out)], None
    expansions = [
        WorkingState(state.s | member, state.b_yes, ruled_out)
        for member in family
    ]
    keep = WorkingState(state.s, state.b_yes | {pair}, state.b_no)
    return expansions, keep


def expansion_steps(
    x: str, y: str, config: ExpansionConfig | None = None
) -> Generator[EngineItem, OracleAnswer | None, _RunOutcome]:
    """The queue engine: pop the most promising state (smallest
    min-cut index, most recently pushed first), certify or branch."""
    config = config or ExpansionConfig()
    _require_name(x, "endpoint")
    _require_name(y, "endpoint")
    if x == y:
        raise GraphError(f"endpoints coincide: {x!r}")
    found: list[frozenset[str]] = []
    try:
        ctx = _Context(config.max_states, config.max_vertices, (x, y))
        frontier: list[tuple[float, int, WorkingState]] = []
        counter = itertools.count()
        seen: set[WorkingState] = set()

        def push(state: WorkingState) -> StatePushed | None:
            if state in seen:
                return None
            seen.add(state)
            index = min_cut_index(state, x, y)
            heapq.heappush(frontier, (index, -next(counter), state))
            return StatePushed(state, index)

        yield push(INITIAL_STATE)
        while frontier:
            ctx.spend_pop()
            index, _, state = heapq.heappop(frontier)
            yield StatePopped(state, index)
            if index == INFINITY:
                continue
            if index == 0:
                yield SetEmitted(state.s)
                if state.s not in found:
                    found.append(state.s)
                continue
            pair = select_edge(state, x, y, config.strategy)
            yield EdgeSelected(pair)
            base = state_vertices(state, x, y) - set(pair)
            family = yield from _find_primary_steps(
                ctx, pair[0], pair[1], base, config.minimal_only
            )
            expansions, keep = _child_states(state, pair, family)
            if keep is not None:
                event = push(keep)
                if event is not None:
                    yield event
            for child in expansions:
                event = push(child)
                if event is not None:
                    yield event
        return _RunOutcome(tuple(found), True, "search space exhausted")
    except BudgetExceededError as err:
        return _RunOutcome(tuple(found), False, err.reason)


def recursive_steps(
    x: str, y: str, config: ExpansionConfig | None = None
) -> Generator[EngineItem, OracleAnswer | None, _RunOutcome]:
    """The depth-first engine: same branching as the queue engine, but
    expansions are explored immediately (in canonical order) with the
    keep-state last.  Visits are deduplicated across the whole run."""
    config = config or ExpansionConfig()
    _require_name(x, "endpoint")
    _require_name(y, "endpoint")
    if x == y:
        raise GraphError(f"endpoints coincide: {x!r}")
    found: list[frozenset[str]] = []
    try:
        ctx = _Context(config.max_states, config.max_vertices, (x, y))
        seen: set[WorkingState] = set()

        def visit(
            state: WorkingState, depth: int
        ) -> Generator[EngineItem, OracleAnswer | None, None]:
            if depth > RECURSION_DEPTH_CAP:
                raise DepthCapError(
                    f"recursive expansion exceeded {RECURSION_DEPTH_CAP} levels"
                )
            if state in seen:
                return
            seen.add(state)
            ctx.spend_pop()
            index = min_cut_index(state, x, y)
            yield StatePopped(state, index)
            if index == INFINITY:
                return
            if index == 0:
                yield SetEmitted(state.s)
                if state.s not in found:
                    found.append(state.s)
                return
            pair = select_edge(state, x, y, config.strategy)
            yield EdgeSelected(pair)
            base = state_vertices(state, x, y) - set(pair)
            family = yield from _find_primary_steps(
                ctx, pair[0], pair[1], base, config.minimal_only
            )
            expansions, keep = _child_states(state, pair, family)
            for child in expansions:
                yield from visit(child, depth + 1)
            if keep is not None:
                yield from visit(keep, depth + 1)

        yield from visit(INITIAL_STATE, 0)
        return _RunOutcome(tuple(found), True, "search space exhausted")
    except BudgetExceededError as err:
        return _RunOutcome(tuple(found), False, err.reason)


def make_engine(
    algorithm: str, x: str, y: str, config: ExpansionConfig | None = None
) -> Generator[EngineItem, OracleAnswer | None, _RunOutcome]:
    if algorithm == ALGORITHM_QUEUE:
        return expansion_steps(x, y, config)
    if algorithm == ALGORITHM_RECURSIVE:
        return recursive_steps(x, y, config)
    raise GraphError(
        f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}"
    )


def _pump(
    engine: Generator,
    oracle: Oracle,
    observer: Callable[[Union[EngineEvent, OracleExchange]], None] | None = None,
):
    """Drive an engine generator with an oracle, collecting the trace."""
    trace: list[Union[EngineEvent, OracleExchange]] = []

    def notify(entry) -> None:
        trace.append(entry)
        if observer is not None:
            observer(entry)

    try:
        item = next(engine)
        while True:
            if isinstance(
                item, (CommonCauseQuery, IsObservedQuery, FindMediatorQuery)
            ):
                answer = oracle.answer(item)
                notify(OracleExchange(item, answer))
                item = engine.send(answer)
            else:
                notify(item)
                item = engine.send(None)
    except StopIteration as stop:
        return stop.value, tuple(trace)
    finally:
        engine.close()


def confounder_select(
    oracle: Oracle,
    x: str,
    y: str,
    config: ExpansionConfig | None = None,
    observer: Callable[[Union[EngineEvent, OracleExchange]], None] | None = None,
    algorithm: str = ALGORITHM_QUEUE,
) -> ExpansionResult:
    """Run a full expansion for the pair (x, y) against an oracle.

    Budget overruns end the run gracefully (``exhausted`` is False);
    every set emitted before the overrun is still reported.
    """
    engine = make_engine(algorithm, x, y, config)
    outcome, trace = _pump(engine, oracle, observer)
    return ExpansionResult(
        sufficient_sets=outcome.sufficient_sets,
        trace=trace,
        exhausted=outcome.exhausted,
        reason=outcome.reason,
    )


def confounder_select_recursive(
    oracle: Oracle,
    x: str,
    y: str,
    config: ExpansionConfig | None = None,
    observer: Callable[[Union[EngineEvent, OracleExchange]], None] | None = None,
) -> ExpansionResult:
    return confounder_select(
        oracle, x, y, config, observer, algorithm=ALGORITHM_RECURSIVE
    )


def find_primary(
    oracle: Oracle,
    a: str,
    b: str,
    base: Iterable[str] = (),
    minimal_only: bool = True,
    max_states: int = 10000,
    max_vertices: int = 64,
) -> tuple[frozenset[str], ...]:
    """Discover the family of primary sets for (a, b) relative to
    ``base`` by querying the oracle.

    Unlike ``confounder_select``, budget overruns raise
    BudgetExceededError: a truncated family is not a meaningful
    answer.
    """
    base = frozenset(base)
    _require_name(a, "endpoint")
    _require_name(b, "endpoint")
    if a == b:
        raise GraphError(f"endpoints coincide: {a!r}")
    if {a, b} & base:
        raise GraphError("base may not contain the endpoints")
    ctx = _Context(max_states, max_vertices, base | {a, b})

    def runner() -> Generator[OracleQuery, OracleAnswer, tuple[frozenset[str], ...]]:
        return (yield from _find_primary_steps(ctx, a, b, base, minimal_only))

    family, _ = _pump(runner(), oracle)
    return family
