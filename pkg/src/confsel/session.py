"""Sessions, transcripts, and replay.

A *transcript* is a JSONL file: a header line (endpoints, algorithm,
config) followed by one strictly-ordered event per line.  Transcripts
are written identically whether the answers came from a ground-truth
oracle or a human, so any recorded run can be replayed, audited, or
resumed.

A *session* holds a paused engine generator: it advances until the
engine needs an answer, exposes the pending query (plus a view of the
search state derived purely from recorded events), and resumes when an
answer arrives.
"""

from __future__ import annotations

import itertools
import json
import math
import threading
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from ._version import __version__
from .expansion import (
    ALGORITHM_QUEUE,
    ALGORITHMS,
    EdgeSelected,
    EngineEvent,
    ExpansionConfig,
    INFINITY,
    OracleExchange,
    SetEmitted,
    StatePopped,
    StatePushed,
    WorkingState,
    _RunOutcome,
    make_engine,
    uncertain_pairs,
)
from .graph import GraphError, IDENTIFIER
from .oracle import (
    CommonCauseAnswer,
    CommonCauseQuery,
    FindMediatorAnswer,
    FindMediatorQuery,
    IsObservedQuery,
    OracleAnswer,
    OracleQuery,
    ProtocolError,
    ReplayDivergenceError,
    ReplayOracle,
    answer_from_jsonable,
    answer_to_jsonable,
    query_from_jsonable,
    query_to_jsonable,
    validate_answer,
)

SCHEMA_VERSION = 1

EVENT_KINDS = (
    "state_pushed",
    "state_popped",
    "edge_selected",
    "query_issued",
    "answer_received",
    "set_emitted",
    "finished",
)

REASON_ABORTED = "aborted"


class TranscriptError(ValueError):
    """A transcript that cannot be decoded."""


class SessionConflictError(Exception):
    """An answer that does not match the session's pending query."""


def _dump(data: Mapping) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def mincut_to_jsonable(value: float) -> Union[int, str]:
    if value == INFINITY:
        return "inf"
    return int(value)


def mincut_from_jsonable(value: object) -> float:
    if value == "inf":
        return INFINITY
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise TranscriptError(
            f"mincut must be a non-negative integer or \"inf\", got {value!r}"
        )
    return value


def _name_list(values: object, label: str) -> list[str]:
    if not isinstance(values, list):
        raise TranscriptError(f"{label} must be a list of vertex names")
    for v in values:
        if not isinstance(v, str) or not IDENTIFIER.match(v):
            raise TranscriptError(f"{label} contains an invalid name {v!r}")
    return sorted(values)


def _pair_list(values: object, label: str) -> list[list[str]]:
    if not isinstance(values, list):
        raise TranscriptError(f"{label} must be a list of vertex pairs")
    pairs = []
    for item in values:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(v, str) and IDENTIFIER.match(v) for v in item)
        ):
            raise TranscriptError(f"{label} contains an invalid pair {item!r}")
        pairs.append([item[0], item[1]])
    return sorted(pairs)


def state_to_jsonable(state: WorkingState) -> dict:
    return {
        "s": sorted(state.s),
        "b_yes": [list(pair) for pair in sorted(state.b_yes)],
        "b_no": [list(pair) for pair in sorted(state.b_no)],
    }


def state_from_jsonable(data: object) -> WorkingState:
    if not isinstance(data, Mapping) or set(data) != {"s", "b_yes", "b_no"}:
        raise TranscriptError(
            "state must be an object with keys s, b_yes, and b_no"
        )
    try:
        return WorkingState(
            s=frozenset(_name_list(data["s"], "s")),
            b_yes=frozenset(tuple(p) for p in _pair_list(data["b_yes"], "b_yes")),
            b_no=frozenset(tuple(p) for p in _pair_list(data["b_no"], "b_no")),
        )
    except GraphError as err:
        raise TranscriptError(str(err)) from err


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    kind: str
    payload: dict

    def to_jsonable(self) -> dict:
        data = {"seq": self.seq, "kind": self.kind}
        data.update(self.payload)
        return data


@dataclass(frozen=True)
class TranscriptHeader:
    x: str
    y: str
    algorithm: str = ALGORITHM_QUEUE
    config: ExpansionConfig = field(default_factory=ExpansionConfig)
    schema_version: int = SCHEMA_VERSION
    engine_version: str = __version__

    def to_jsonable(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "engine_version": self.engine_version,
            "x": self.x,
            "y": self.y,
            "algorithm": self.algorithm,
            "config": self.config.to_jsonable(),
        }


@dataclass(frozen=True)
class SessionTranscript:
    header: TranscriptHeader
    events: tuple[SessionEvent, ...]


def encode_transcript(transcript: SessionTranscript) -> str:
    lines = [_dump(transcript.header.to_jsonable())]
    lines.extend(_dump(event.to_jsonable()) for event in transcript.events)
    return "\n".join(lines) + "\n"


def _decode_query_payload(payload: dict, label: str) -> dict:
    if set(payload) != {"query_id", "query"}:
        raise TranscriptError(f"{label} must carry query_id and query")
    query_id = payload["query_id"]
    if not isinstance(query_id, str) or not query_id:
        raise TranscriptError(f"{label} query_id must be a nonempty string")
    try:
        query = query_from_jsonable(payload["query"])
    except ProtocolError as err:
        raise TranscriptError(str(err)) from err
    return {"query_id": query_id, "query": query_to_jsonable(query)}


def _decode_answer_payload(payload: dict, label: str) -> dict:
    if set(payload) != {"query_id", "answer"}:
        raise TranscriptError(f"{label} must carry query_id and answer")
    query_id = payload["query_id"]
    if not isinstance(query_id, str) or not query_id:
        raise TranscriptError(f"{label} query_id must be a nonempty string")
    try:
        answer = answer_from_jsonable(payload["answer"])
    except ProtocolError as err:
        raise TranscriptError(str(err)) from err
    return {"query_id": query_id, "answer": answer_to_jsonable(answer)}


def _decode_event(data: Mapping, line_number: int) -> SessionEvent:
    label = f"line {line_number}"
    if not isinstance(data, Mapping):
        raise TranscriptError(f"{label}: event must be an object")
    if "seq" not in data or "kind" not in data:
        raise TranscriptError(f"{label}: event must carry seq and kind")
    seq = data["seq"]
    kind = data["kind"]
    if not isinstance(seq, int) or isinstance(seq, bool):
        raise TranscriptError(f"{label}: seq must be an integer")
    if seq != line_number - 1:
        raise TranscriptError(
            f"{label}: seq {seq} out of order (expected {line_number - 1})"
        )
    if kind not in EVENT_KINDS:
        raise TranscriptError(f"{label}: unknown event kind {kind!r}")
    payload = {k: v for k, v in data.items() if k not in ("seq", "kind")}
    try:
        if kind in ("state_pushed", "state_popped"):
            if set(payload) != {"state", "mincut"}:
                raise TranscriptError(f"{kind} must carry state and mincut")
            payload = {
                "state": state_to_jsonable(state_from_jsonable(payload["state"])),
                "mincut": mincut_to_jsonable(
                    mincut_from_jsonable(payload["mincut"])
                ),
            }
        elif kind == "edge_selected":
            if set(payload) != {"edge"}:
                raise TranscriptError("edge_selected must carry edge")
            edge = payload["edge"]
            if (
                not isinstance(edge, list)
                or len(edge) != 2
                or not all(isinstance(v, str) and IDENTIFIER.match(v) for v in edge)
                or not edge[0] < edge[1]
            ):
                raise TranscriptError(f"invalid edge {edge!r}")
            payload = {"edge": list(edge)}
        elif kind == "query_issued":
            payload = _decode_query_payload(payload, kind)
        elif kind == "answer_received":
            payload = _decode_answer_payload(payload, kind)
        elif kind == "set_emitted":
            if set(payload) != {"vertices"}:
                raise TranscriptError("set_emitted must carry vertices")
            payload = {"vertices": _name_list(payload["vertices"], "vertices")}
        elif kind == "finished":
            if set(payload) != {"reason", "exhausted", "sufficient_sets"}:
                raise TranscriptError(
                    "finished must carry reason, exhausted, and sufficient_sets"
                )
            reason = payload["reason"]
            exhausted = payload["exhausted"]
            sets = payload["sufficient_sets"]
            if not isinstance(reason, str) or not reason:
                raise TranscriptError("finished reason must be a nonempty string")
            if not isinstance(exhausted, bool):
                raise TranscriptError("finished exhausted must be a boolean")
            if not isinstance(sets, list):
                raise TranscriptError("sufficient_sets must be a list of sets")
            payload = {
                "reason": reason,
                "exhausted": exhausted,
                "sufficient_sets": [
                    _name_list(member, "sufficient set") for member in sets
                ],
            }
    except TranscriptError as err:
        raise TranscriptError(f"{label}: {err}") from None
    return SessionEvent(seq, kind, payload)


def decode_transcript(text: str) -> SessionTranscript:
    lines = text.splitlines()
    if not lines:
        raise TranscriptError("transcript is empty")
    try:
        header_data = json.loads(lines[0])
    except json.JSONDecodeError as err:
        raise TranscriptError(f"line 1: invalid JSON ({err.msg})") from err
    expected = {"schema_version", "engine_version", "x", "y", "algorithm", "config"}
    if not isinstance(header_data, dict) or set(header_data) != expected:
        raise TranscriptError(
            f"line 1: header must carry exactly {sorted(expected)}"
        )
    if header_data["schema_version"] != SCHEMA_VERSION:
        raise TranscriptError(
            f"line 1: unsupported schema_version {header_data['schema_version']!r}"
        )
    engine_version = header_data["engine_version"]
    if not isinstance(engine_version, str):
        raise TranscriptError("line 1: engine_version must be a string")
    x, y = header_data["x"], header_data["y"]
    for name in (x, y):
        if not isinstance(name, str) or not IDENTIFIER.match(name):
            raise TranscriptError(f"line 1: invalid endpoint {name!r}")
    if x == y:
        raise TranscriptError("line 1: endpoints coincide")
    algorithm = header_data["algorithm"]
    if algorithm not in ALGORITHMS:
        raise TranscriptError(f"line 1: unknown algorithm {algorithm!r}")
    try:
        config = ExpansionConfig.from_jsonable(header_data["config"])
    except (ValueError, TypeError) as err:
        raise TranscriptError(f"line 1: invalid config: {err}") from err
    header = TranscriptHeader(
        x=x,
        y=y,
        algorithm=algorithm,
        config=config,
        engine_version=engine_version,
    )
    events = []
    for index, line in enumerate(lines[1:], start=2):
        if not line.strip():
            raise TranscriptError(f"line {index}: blank line in transcript")
        try:
            data = json.loads(line)
        except json.JSONDecodeError as err:
            raise TranscriptError(f"line {index}: invalid JSON ({err.msg})") from err
        events.append(_decode_event(data, index))
    seen_finished = False
    for event in events:
        if seen_finished:
            raise TranscriptError(
                f"event {event.seq}: transcript continues after finished"
            )
        if event.kind == "finished":
            seen_finished = True
    return SessionTranscript(header, tuple(events))


class Recorder:
    """Appends session events, assigning sequence and query ids."""

    def __init__(self, header: TranscriptHeader) -> None:
        self.header = header
        self.events: list[SessionEvent] = []
        self._query_ids = itertools.count(1)

    def _emit(self, kind: str, payload: dict) -> SessionEvent:
        event = SessionEvent(len(self.events) + 1, kind, payload)
        self.events.append(event)
        return event

    def record_engine_event(self, event: EngineEvent) -> SessionEvent:
        if isinstance(event, StatePushed):
            return self._emit(
                "state_pushed",
                {
                    "state": state_to_jsonable(event.state),
                    "mincut": mincut_to_jsonable(event.mincut),
                },
            )
        if isinstance(event, StatePopped):
            return self._emit(
                "state_popped",
                {
                    "state": state_to_jsonable(event.state),
                    "mincut": mincut_to_jsonable(event.mincut),
                },
            )
        if isinstance(event, EdgeSelected):
            return self._emit("edge_selected", {"edge": list(event.pair)})
        if isinstance(event, SetEmitted):
            return self._emit("set_emitted", {"vertices": sorted(event.vertices)})
        raise TypeError(f"unknown engine event {type(event).__name__}")

    def record_query(self, query: OracleQuery) -> str:
        query_id = f"q{next(self._query_ids)}"
        self._emit(
            "query_issued",
            {"query_id": query_id, "query": query_to_jsonable(query)},
        )
        return query_id

    def record_answer(self, query_id: str, answer: OracleAnswer) -> None:
        self._emit(
            "answer_received",
            {"query_id": query_id, "answer": answer_to_jsonable(answer)},
        )

    def record_finished(
        self,
        reason: str,
        exhausted: bool,
        sufficient_sets: Iterable[frozenset[str]],
    ) -> dict:
        payload = {
            "reason": reason,
            "exhausted": exhausted,
            "sufficient_sets": [sorted(member) for member in sufficient_sets],
        }
        return self._emit("finished", payload).payload

    def observe(self, entry: Union[EngineEvent, OracleExchange]) -> None:
        """Observer callback for the expansion drivers."""
        if isinstance(entry, OracleExchange):
            query_id = self.record_query(entry.query)
            self.record_answer(query_id, entry.answer)
        else:
            self.record_engine_event(entry)

    def transcript(self) -> SessionTranscript:
        return SessionTranscript(self.header, tuple(self.events))


def render_question(query: OracleQuery) -> str:
    """Plain-language phrasing of a query, for humans."""
    if isinstance(query, CommonCauseQuery):
        if query.t:
            given = ",".join(sorted(query.t))
            return (
                f"Is there a common cause C of {query.a} and {query.b} such "
                f"that neither its effect on {query.a} nor its effect on "
                f"{query.b} is fully mediated by {{{given}}}?"
            )
        return f"Is there a common cause C of {query.a} and {query.b}?"
    if isinstance(query, IsObservedQuery):
        return f"Is {query.v} observed?"
    if isinstance(query, FindMediatorQuery):
        target = (
            f"the effect of {query.cause} on {query.a} or the effect of "
            f"{query.cause} on {query.b}"
        )
        if query.base:
            given = ",".join(sorted(query.base))
            return (
                f"Which observed variables, combined with {{{given}}}, fully "
                f"mediate {target}? List zero or more minimal sets."
            )
        return (
            f"Which observed variables fully mediate {target}? "
            f"List zero or more minimal sets."
        )
    raise ProtocolError(f"unknown query type {type(query).__name__}")


def _derive_view(
    events: Iterable[SessionEvent], x: str, y: str
) -> dict:
    """Rebuild the UI-facing search picture from recorded events alone:
    the current working state, the remaining queue in pop-priority
    order, the in-flight probe (the selected pair plus any vertices
    the answers have mentioned since), and the emitted sets."""
    working: dict | None = None
    queue: list[tuple[float, int, dict]] = []
    push_index = itertools.count()
    probe: dict | None = None
    emitted: list[list[str]] = []
    finished: dict | None = None
    for event in events:
        if event.kind == "state_pushed":
            queue.append(
                (
                    mincut_from_jsonable(event.payload["mincut"]),
                    -next(push_index),
                    event.payload["state"],
                )
            )
        elif event.kind == "state_popped":
            for entry in queue:
                if entry[2] == event.payload["state"]:
                    queue.remove(entry)
                    break
            working = dict(event.payload)
            probe = None
        elif event.kind == "edge_selected":
            probe = {"edge": list(event.payload["edge"]), "vertices": []}
        elif event.kind == "answer_received" and probe is not None:
            answer = event.payload["answer"]
            mentioned: list[str] = []
            if answer["kind"] == "common_cause" and answer["vertex"] is not None:
                mentioned = [answer["vertex"]]
            elif answer["kind"] == "find_mediator":
                mentioned = [v for member in answer["sets"] for v in member]
            for vertex in mentioned:
                if vertex not in probe["vertices"]:
                    probe["vertices"].append(vertex)
        elif event.kind == "set_emitted":
            vertices = event.payload["vertices"]
            if vertices not in emitted:
                emitted.append(vertices)
        elif event.kind == "finished":
            finished = dict(event.payload)
            probe = None
    if working is not None:
        state = state_from_jsonable(working["state"])
        working = {
            "s": sorted(state.s),
            "b_yes": [list(p) for p in sorted(state.b_yes)],
            "b_no": [list(p) for p in sorted(state.b_no)],
            "uncertain": [list(p) for p in sorted(uncertain_pairs(state, x, y))],
            "mincut": working["mincut"],
        }
        if probe is not None:
            present = set(working["s"]) | {x, y}
            probe["vertices"] = [
                v for v in probe["vertices"] if v not in present
            ]
    queue_view = [
        {**entry[2], "mincut": mincut_to_jsonable(entry[0])}
        for entry in sorted(queue, key=lambda e: (e[0], e[1]))
    ]
    return {
        "working_state": working,
        "queue": queue_view,
        "probe": probe,
        "emitted_sets": emitted,
        "finished": finished,
    }


class Session:
    """A live run: a paused engine plus its recorded transcript."""

    def __init__(
        self,
        session_id: str,
        x: str,
        y: str,
        config: ExpansionConfig | None = None,
        algorithm: str = ALGORITHM_QUEUE,
    ) -> None:
        if not isinstance(x, str) or not IDENTIFIER.match(x):
            raise GraphError(
                f"invalid endpoint {x!r}: vertex names must match "
                "[A-Za-z_][A-Za-z0-9_]*"
            )
        if not isinstance(y, str) or not IDENTIFIER.match(y):
            raise GraphError(
                f"invalid endpoint {y!r}: vertex names must match "
                "[A-Za-z_][A-Za-z0-9_]*"
            )
        if x == y:
            raise GraphError("endpoints must be distinct")
        config = config or ExpansionConfig()
        self.session_id = session_id
        self.x = x
        self.y = y
        self.algorithm = algorithm
        self.config = config
        self.recorder = Recorder(
            TranscriptHeader(x=x, y=y, algorithm=algorithm, config=config)
        )
        self._engine = make_engine(algorithm, x, y, config)
        self._lock = threading.RLock()
        self.pending: tuple[str, OracleQuery] | None = None
        self._last_answered: str | None = None
        self.finished: dict | None = None
        with self._lock:
            self._advance(None, first=True)

    def _advance(self, to_send: OracleAnswer | None, first: bool = False) -> None:
        try:
            item = next(self._engine) if first else self._engine.send(to_send)
            while True:
                if isinstance(
                    item, (CommonCauseQuery, IsObservedQuery, FindMediatorQuery)
                ):
                    query_id = self.recorder.record_query(item)
                    self.pending = (query_id, item)
                    return
                self.recorder.record_engine_event(item)
                item = self._engine.send(None)
        except StopIteration as stop:
            outcome: _RunOutcome = stop.value
            self.finished = self.recorder.record_finished(
                outcome.reason, outcome.exhausted, outcome.sufficient_sets
            )

    def answer(self, query_id: str, answer: OracleAnswer) -> bool:
        """Apply an answer to the pending query.  Returns False when
        the call repeats the most recently applied answer (idempotent
        retry), True when the answer advanced the session."""
        with self._lock:
            if query_id and query_id == self._last_answered:
                return False
            if self.finished is not None:
                raise SessionConflictError("session is already finished")
            if self.pending is None:
                raise SessionConflictError("session has no pending query")
            pending_id, query = self.pending
            if query_id != pending_id:
                raise SessionConflictError(
                    f"query {query_id!r} is not pending (expected {pending_id!r})"
                )
            validate_answer(query, answer)
            self.recorder.record_answer(pending_id, answer)
            self._last_answered = pending_id
            self.pending = None
            self._advance(answer)
            return True

    def abort(self) -> None:
        with self._lock:
            if self.finished is not None:
                return
            self._engine.close()
            self.pending = None
            emitted = []
            for event in self.recorder.events:
                if event.kind == "set_emitted":
                    vertices = frozenset(event.payload["vertices"])
                    if vertices not in emitted:
                        emitted.append(vertices)
            self.finished = self.recorder.record_finished(
                REASON_ABORTED, False, emitted
            )

    def transcript(self) -> SessionTranscript:
        with self._lock:
            return self.recorder.transcript()

    def view(self) -> dict:
        with self._lock:
            derived = _derive_view(self.recorder.events, self.x, self.y)
            pending = None
            if self.pending is not None:
                query_id, query = self.pending
                pending = {
                    "query_id": query_id,
                    "query": query_to_jsonable(query),
                    "question": render_question(query),
                }
            return {
                "session_id": self.session_id,
                "x": self.x,
                "y": self.y,
                "algorithm": self.algorithm,
                "config": self.config.to_jsonable(),
                "pending_query": pending,
                **derived,
            }


@dataclass(frozen=True)
class ReplayReport:
    """Outcome of replaying a transcript against a fresh engine run."""

    diverged: bool
    detail: str
    completed: bool
    sufficient_sets: tuple[frozenset[str], ...] | None
    exhausted: bool | None
    reason: str | None
    unused_answers: int
    events: tuple[SessionEvent, ...]


def _recorded_pairs(
    transcript: SessionTranscript,
) -> tuple[list[tuple[OracleQuery, OracleAnswer]], str | None]:
    """Extract matched (query, answer) pairs; also report a pairing
    defect, if any, as a divergence message."""
    issued: dict[str, OracleQuery] = {}
    pairs: list[tuple[OracleQuery, OracleAnswer]] = []
    for event in transcript.events:
        if event.kind == "query_issued":
            query_id = event.payload["query_id"]
            if query_id in issued:
                return pairs, f"query id {query_id!r} issued twice"
            issued[query_id] = query_from_jsonable(event.payload["query"])
        elif event.kind == "answer_received":
            query_id = event.payload["query_id"]
            if query_id not in issued:
                return pairs, f"answer for unknown query id {query_id!r}"
            query = issued.pop(query_id)
            answer = answer_from_jsonable(event.payload["answer"])
            try:
                validate_answer(query, answer)
            except ProtocolError as err:
                return pairs, f"recorded answer for {query_id!r} is invalid: {err}"
            pairs.append((query, answer))
    return pairs, None


def _first_difference(
    replayed: tuple[SessionEvent, ...], recorded: tuple[SessionEvent, ...]
) -> str | None:
    for mine, theirs in zip(replayed, recorded):
        if mine != theirs:
            return (
                f"event {theirs.seq} differs: replay produced "
                f"{_dump(mine.to_jsonable())} but transcript records "
                f"{_dump(theirs.to_jsonable())}"
            )
    if len(replayed) < len(recorded):
        extra = recorded[len(replayed)]
        return (
            f"transcript records event {extra.seq} "
            f"({extra.kind}) that the replay never produced"
        )
    if len(replayed) > len(recorded):
        extra = replayed[len(recorded)]
        return (
            f"replay produced an event beyond the transcript: "
            f"{_dump(extra.to_jsonable())}"
        )
    return None


def replay_transcript(transcript: SessionTranscript) -> ReplayReport:
    """Re-run the engine against the transcript's recorded answers and
    compare the event streams.

    A transcript without a completed run (still pending, or aborted)
    replays up to its frontier; a completed transcript must reproduce
    exactly.  Recorded answers the replay never consumed are counted,
    not treated as divergence.
    """
    pairs, defect = _recorded_pairs(transcript)
    recorder = Recorder(transcript.header)
    oracle = ReplayOracle(pairs)
    engine = make_engine(
        transcript.header.algorithm,
        transcript.header.x,
        transcript.header.y,
        transcript.header.config,
    )
    outcome: _RunOutcome | None = None
    if defect is None:
        try:
            item = next(engine)
            while True:
                if isinstance(
                    item, (CommonCauseQuery, IsObservedQuery, FindMediatorQuery)
                ):
                    try:
                        answer = oracle.answer(item)
                    except ReplayDivergenceError:
                        recorder.record_query(item)
                        break
                    query_id = recorder.record_query(item)
                    recorder.record_answer(query_id, answer)
                    item = engine.send(answer)
                else:
                    recorder.record_engine_event(item)
                    item = engine.send(None)
        except StopIteration as stop:
            outcome = stop.value
            recorder.record_finished(
                outcome.reason, outcome.exhausted, outcome.sufficient_sets
            )
        finally:
            engine.close()
    replayed = tuple(recorder.events)
    recorded = transcript.events
    finished_events = [e for e in recorded if e.kind == "finished"]
    claims_completion = any(
        e.payload["reason"] != REASON_ABORTED for e in finished_events
    )
    if defect is not None:
        detail: str | None = defect
    elif outcome is None:
        if claims_completion:
            last = replayed[-1] if replayed else None
            detail = (
                "transcript claims a completed run but the replay needs an "
                "answer the transcript never recorded"
                + (
                    f" (pending {_dump(last.to_jsonable())})"
                    if last is not None and last.kind == "query_issued"
                    else ""
                )
            )
        else:
            expected = recorded
            if finished_events and finished_events[0].payload["reason"] == (
                REASON_ABORTED
            ):
                expected = tuple(e for e in recorded if e.kind != "finished")
            # A truncated transcript may stop mid-run; the replay
            # continuing past its end is resumption, not divergence.
            detail = _first_difference(replayed[: len(expected)], expected)
    else:
        detail = _first_difference(replayed, recorded)
    return ReplayReport(
        diverged=detail is not None,
        detail=detail or "",
        completed=outcome is not None,
        sufficient_sets=outcome.sufficient_sets if outcome else None,
        exhausted=outcome.exhausted if outcome else None,
        reason=outcome.reason if outcome else None,
        unused_answers=oracle.unused_count,
        events=replayed,
    )
