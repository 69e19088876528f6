"""The elicitation protocol: queries, answers, and oracles.

The engine is oracle-driven: it emits typed queries (is there an
unblocked common cause? is this vertex observed? which sets mediate
this effect?) and consumes typed answers.  Oracles may be backed by a
ground-truth graph, by a recorded transcript, or by a human.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol, Union

from .adjustment import (
    DEFAULT_POOL_CAP,
    canonical_family,
    enumerate_minimal_mediator_sets,
    format_vertex_set,
)
from .graph import IDENTIFIER, Admg, GraphError, canonical_dag, descendants
from .separation import ConnectionKind, connected


class ProtocolError(ValueError):
    """An ill-formed query or answer, or one that violates the protocol."""


def _require_name(value: object, label: str) -> str:
    if not isinstance(value, str) or not IDENTIFIER.match(value):
        raise ProtocolError(
            f"{label} must be a vertex name matching [A-Za-z_][A-Za-z0-9_]*, "
            f"got {value!r}"
        )
    return value


def _require_name_set(values: Iterable[object], label: str) -> frozenset[str]:
    if isinstance(values, str):
        raise ProtocolError(f"{label} must be a collection of vertex names")
    return frozenset(_require_name(v, label) for v in values)


@dataclass(frozen=True)
class CommonCauseQuery:
    """Ask for a common cause of ``a`` and ``b`` whose effects on both
    are unblocked given ``t``."""

    a: str
    b: str
    t: frozenset[str]

    def __post_init__(self) -> None:
        _require_name(self.a, "endpoint")
        _require_name(self.b, "endpoint")
        object.__setattr__(self, "t", _require_name_set(self.t, "conditioning vertex"))
        if self.a == self.b:
            raise ProtocolError("query endpoints must be distinct")
        if self.a in self.t or self.b in self.t:
            raise ProtocolError("conditioning set may not contain the endpoints")


@dataclass(frozen=True)
class IsObservedQuery:
    """Ask whether ``v`` is observed (measured)."""

    v: str

    def __post_init__(self) -> None:
        _require_name(self.v, "vertex")


@dataclass(frozen=True)
class FindMediatorQuery:
    """Ask for minimal observed sets that, combined with ``base``,
    fully mediate the effect of ``cause`` on ``a`` or on ``b``."""

    a: str
    b: str
    cause: str
    base: frozenset[str]

    def __post_init__(self) -> None:
        _require_name(self.a, "endpoint")
        _require_name(self.b, "endpoint")
        _require_name(self.cause, "cause")
        object.__setattr__(
            self, "base", _require_name_set(self.base, "base vertex")
        )
        if self.a == self.b:
            raise ProtocolError("query endpoints must be distinct")
        if self.cause in (self.a, self.b):
            raise ProtocolError("cause must be distinct from the endpoints")
        if {self.a, self.b, self.cause} & self.base:
            raise ProtocolError(
                "base may not contain the endpoints or the cause"
            )


OracleQuery = Union[CommonCauseQuery, IsObservedQuery, FindMediatorQuery]


@dataclass(frozen=True)
class CommonCauseAnswer:
    """``vertex`` names a common cause, or is None when there is none;
    ``unblockable`` marks a None answer as "confounded but no single
    common cause can be named" (a dead branch)."""

    vertex: str | None
    unblockable: bool = False

    def __post_init__(self) -> None:
        if self.vertex is not None:
            _require_name(self.vertex, "vertex")
            if self.unblockable:
                raise ProtocolError(
                    "unblockable applies only to a 'no common cause' answer"
                )


@dataclass(frozen=True)
class IsObservedAnswer:
    observed: bool


@dataclass(frozen=True)
class FindMediatorAnswer:
    """Zero or more nonempty mediator sets, canonically ordered."""

    sets: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        for member in self.sets:
            names = _require_name_set(member, "mediator")
            if not names:
                raise ProtocolError("mediator sets must be nonempty")
        canonical = canonical_family(self.sets)
        object.__setattr__(self, "sets", canonical)


OracleAnswer = Union[CommonCauseAnswer, IsObservedAnswer, FindMediatorAnswer]

_QUERY_KINDS: dict[str, type] = {
    "common_cause": CommonCauseQuery,
    "is_observed": IsObservedQuery,
    "find_mediator": FindMediatorQuery,
}
_ANSWER_KINDS: dict[type, str] = {
    CommonCauseAnswer: "common_cause",
    IsObservedAnswer: "is_observed",
    FindMediatorAnswer: "find_mediator",
}


def query_kind(query: OracleQuery) -> str:
    if isinstance(query, CommonCauseQuery):
        return "common_cause"
    if isinstance(query, IsObservedQuery):
        return "is_observed"
    if isinstance(query, FindMediatorQuery):
        return "find_mediator"
    raise ProtocolError(f"unknown query type {type(query).__name__}")


def query_to_jsonable(query: OracleQuery) -> dict:
    if isinstance(query, CommonCauseQuery):
        return {
            "kind": "common_cause",
            "a": query.a,
            "b": query.b,
            "t": sorted(query.t),
        }
    if isinstance(query, IsObservedQuery):
        return {"kind": "is_observed", "v": query.v}
    if isinstance(query, FindMediatorQuery):
        return {
            "kind": "find_mediator",
            "a": query.a,
            "b": query.b,
            "cause": query.cause,
            "base": sorted(query.base),
        }
    raise ProtocolError(f"unknown query type {type(query).__name__}")


def _require_keys(data: Mapping, expected: set[str], label: str) -> None:
    if not isinstance(data, Mapping):
        raise ProtocolError(f"{label} must be an object, got {type(data).__name__}")
    actual = set(data)
    if actual != expected:
        missing = sorted(expected - actual)
        extra = sorted(actual - expected)
        parts = []
        if missing:
            parts.append(f"missing keys {missing}")
        if extra:
            parts.append(f"unexpected keys {extra}")
        raise ProtocolError(f"{label}: " + ", ".join(parts))


def query_from_jsonable(data: Mapping) -> OracleQuery:
    if not isinstance(data, Mapping) or "kind" not in data:
        raise ProtocolError("query must be an object with a 'kind' key")
    kind = data["kind"]
    if kind == "common_cause":
        _require_keys(data, {"kind", "a", "b", "t"}, "common_cause query")
        return CommonCauseQuery(data["a"], data["b"], _require_name_set(data["t"], "conditioning vertex"))
    if kind == "is_observed":
        _require_keys(data, {"kind", "v"}, "is_observed query")
        return IsObservedQuery(data["v"])
    if kind == "find_mediator":
        _require_keys(data, {"kind", "a", "b", "cause", "base"}, "find_mediator query")
        return FindMediatorQuery(
            data["a"],
            data["b"],
            data["cause"],
            _require_name_set(data["base"], "base vertex"),
        )
    raise ProtocolError(f"unknown query kind {kind!r}")


def answer_to_jsonable(answer: OracleAnswer) -> dict:
    if isinstance(answer, CommonCauseAnswer):
        return {
            "kind": "common_cause",
            "vertex": answer.vertex,
            "unblockable": answer.unblockable,
        }
    if isinstance(answer, IsObservedAnswer):
        return {"kind": "is_observed", "observed": answer.observed}
    if isinstance(answer, FindMediatorAnswer):
        return {
            "kind": "find_mediator",
            "sets": [sorted(member) for member in answer.sets],
        }
    raise ProtocolError(f"unknown answer type {type(answer).__name__}")


def answer_from_jsonable(data: Mapping) -> OracleAnswer:
    if not isinstance(data, Mapping) or "kind" not in data:
        raise ProtocolError("answer must be an object with a 'kind' key")
    kind = data["kind"]
    if kind == "common_cause":
        _require_keys(data, {"kind", "vertex", "unblockable"}, "common_cause answer")
        vertex = data["vertex"]
        unblockable = data["unblockable"]
        if not isinstance(unblockable, bool):
            raise ProtocolError("unblockable must be a boolean")
        return CommonCauseAnswer(vertex, unblockable)
    if kind == "is_observed":
        _require_keys(data, {"kind", "observed"}, "is_observed answer")
        observed = data["observed"]
        if not isinstance(observed, bool):
            raise ProtocolError("observed must be a boolean")
        return IsObservedAnswer(observed)
    if kind == "find_mediator":
        _require_keys(data, {"kind", "sets"}, "find_mediator answer")
        sets = data["sets"]
        if isinstance(sets, (str, Mapping)) or not isinstance(sets, Iterable):
            raise ProtocolError("sets must be a list of vertex-name lists")
        return FindMediatorAnswer(tuple(frozenset(_require_name_set(m, "mediator")) for m in sets))
    raise ProtocolError(f"unknown answer kind {kind!r}")


def validate_answer(query: OracleQuery, answer: OracleAnswer) -> None:
    """Raise ProtocolError unless ``answer`` is well-formed for ``query``."""
    if isinstance(query, CommonCauseQuery):
        if not isinstance(answer, CommonCauseAnswer):
            raise ProtocolError(
                f"common_cause query answered with {type(answer).__name__}"
            )
        if answer.vertex is not None and answer.vertex in query.t | {query.a, query.b}:
            raise ProtocolError(
                f"common cause {answer.vertex!r} is already part of the query"
            )
        return
    if isinstance(query, IsObservedQuery):
        if not isinstance(answer, IsObservedAnswer):
            raise ProtocolError(
                f"is_observed query answered with {type(answer).__name__}"
            )
        return
    if isinstance(query, FindMediatorQuery):
        if not isinstance(answer, FindMediatorAnswer):
            raise ProtocolError(
                f"find_mediator query answered with {type(answer).__name__}"
            )
        forbidden = {query.a, query.b, query.cause}
        for member in answer.sets:
            overlap = member & forbidden
            if overlap:
                raise ProtocolError(
                    f"mediator set {format_vertex_set(member)} contains "
                    f"{sorted(overlap)}, which the query already fixes"
                )
        return
    raise ProtocolError(f"unknown query type {type(query).__name__}")


class Oracle(Protocol):
    def answer(self, query: OracleQuery) -> OracleAnswer: ...


class GraphOracle:
    """Ground-truth oracle bound to a treatment/outcome pair.

    Candidate common causes and mediators exclude the pair and its
    descendants for the whole run (such vertices can never enter an
    adjustment set for the pair), so answers about other endpoint
    pairs may be narrower than the pair-relative public enumerators.

    Answers are computed on the canonical DAG of the graph: a bare
    bidirected edge stands for a latent common parent, and that parent
    is a perfectly good (unobserved) common cause to report, with its
    own mediators.
    """

    def __init__(
        self,
        g: Admg,
        x: str,
        y: str,
        mediator_pool_cap: int = DEFAULT_POOL_CAP,
    ) -> None:
        g.require_vertices([x, y])
        if x == y:
            raise GraphError(f"endpoints coincide: {x!r}")
        self.graph = g
        self._world = canonical_dag(g)
        self.x = x
        self.y = y
        self.excluded = (
            descendants(self._world, [x])
            | descendants(self._world, [y])
            | {x, y}
        )
        self._pool_cap = mediator_pool_cap

    def answer(self, query: OracleQuery) -> OracleAnswer:
        if isinstance(query, CommonCauseQuery):
            return self.common_cause(query.a, query.b, query.t)
        if isinstance(query, IsObservedQuery):
            return self.is_observed(query.v)
        if isinstance(query, FindMediatorQuery):
            return self.find_mediator(query.a, query.b, query.cause, query.base)
        raise ProtocolError(f"unknown query type {type(query).__name__}")

    def common_cause(
        self, a: str, b: str, t: Iterable[str]
    ) -> CommonCauseAnswer:
        t = frozenset(t)
        self._world.require_vertices([a, b])
        self._world.require_vertices(t)
        candidates = self._world.vertices - t - {a, b} - self.excluded
        for v in sorted(candidates):
            if connected(
                self._world, ConnectionKind.DIRECTED, v, a, t | {b}
            ) and connected(self._world, ConnectionKind.DIRECTED, v, b, t | {a}):
                return CommonCauseAnswer(v)
        unblockable = connected(self._world, ConnectionKind.CONF_ARC, a, b, t)
        return CommonCauseAnswer(None, unblockable=unblockable)

    def is_observed(self, v: str) -> IsObservedAnswer:
        self._world.require_vertices([v])
        return IsObservedAnswer(v in self._world.observed)

    def find_mediator(
        self, a: str, b: str, cause: str, base: Iterable[str]
    ) -> FindMediatorAnswer:
        pool = self._world.observed - self.excluded
        sets = enumerate_minimal_mediator_sets(
            self._world,
            a,
            b,
            cause,
            base=base,
            pool_cap=self._pool_cap,
            pool=pool,
        )
        return FindMediatorAnswer(sets)


class ReplayDivergenceError(Exception):
    """A replayed run issued a query the recorded transcript never answered."""

    def __init__(self, query: OracleQuery) -> None:
        super().__init__(
            f"no recorded answer for query {query_to_jsonable(query)!r}"
        )
        self.query = query


class ReplayOracle:
    """Answers queries from recorded (query, answer) pairs.

    Matching is by query value, not by position, so runs that reorder
    independent queries still replay; each recorded answer is consumed
    at most once.
    """

    def __init__(
        self, pairs: Iterable[tuple[OracleQuery, OracleAnswer]]
    ) -> None:
        self._available: dict[OracleQuery, list[OracleAnswer]] = {}
        self._total = 0
        for query, answer in pairs:
            validate_answer(query, answer)
            self._available.setdefault(query, []).append(answer)
            self._total += 1
        self._used = 0

    def answer(self, query: OracleQuery) -> OracleAnswer:
        bucket = self._available.get(query)
        if not bucket:
            raise ReplayDivergenceError(query)
        self._used += 1
        return bucket.pop(0)

    @property
    def unused_count(self) -> int:
        return self._total - self._used
