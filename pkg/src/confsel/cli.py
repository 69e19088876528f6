"""Command-line interface.

Exit codes: 0 success (and, for ``check``, a sufficient set),
2 usage or input errors, 3 ``check`` verdict "not sufficient",
4 ``replay`` divergence.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ._version import __version__
from .adjustment import (
    enumerate_minimal_sufficient,
    enumerate_sufficient,
    format_vertex_set,
    is_adjustment_set,
    is_sufficient,
    pearl_backdoor,
)
from .expansion import (
    ALGORITHM_QUEUE,
    ALGORITHMS,
    STRATEGIES,
    STRATEGY_MIN_CUT,
    ExpansionConfig,
    confounder_select,
)
from .graph import Admg, GraphError, parse_graph
from .oracle import (
    CommonCauseAnswer,
    CommonCauseQuery,
    FindMediatorAnswer,
    FindMediatorQuery,
    GraphOracle,
    IsObservedAnswer,
    IsObservedQuery,
    OracleAnswer,
    OracleQuery,
    ProtocolError,
    validate_answer,
)
from .session import (
    Recorder,
    TranscriptError,
    TranscriptHeader,
    decode_transcript,
    encode_transcript,
    render_question,
    replay_transcript,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_SUFFICIENT = 3
EXIT_DIVERGED = 4
EXIT_ABORTED = 130


def _load_graph(path: str) -> Admg:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise GraphError(f"cannot read {path}: {err.strerror or err}") from err
    return parse_graph(text)


def _parse_vertex_set(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    return [part.strip() for part in text.split(",") if part.strip()]


class _PromptOracle:
    """Interactive oracle reading answers from a terminal."""

    def __init__(self, infile, outfile) -> None:
        self._in = infile
        self._out = outfile

    def _say(self, text: str) -> None:
        print(text, file=self._out, flush=True)

    def _read(self, prompt: str) -> str:
        print(prompt, file=self._out, end="", flush=True)
        line = self._in.readline()
        if line == "":
            raise EOFError
        return line.strip()

    def answer(self, query: OracleQuery) -> OracleAnswer:
        self._say("")
        self._say(render_question(query))
        while True:
            try:
                candidate = self._parse(query)
                validate_answer(query, candidate)
                return candidate
            except ProtocolError as err:
                self._say(f"invalid answer: {err}")

    def _parse(self, query: OracleQuery) -> OracleAnswer:
        if isinstance(query, CommonCauseQuery):
            raw = self._read("vertex name, 'none', or 'unblockable' > ")
            if raw.lower() == "none":
                return CommonCauseAnswer(None)
            if raw.lower() == "unblockable":
                return CommonCauseAnswer(None, unblockable=True)
            return CommonCauseAnswer(raw)
        if isinstance(query, IsObservedQuery):
            raw = self._read("yes or no > ").lower()
            if raw in ("y", "yes"):
                return IsObservedAnswer(True)
            if raw in ("n", "no"):
                return IsObservedAnswer(False)
            raise ProtocolError(f"expected yes or no, got {raw!r}")
        if isinstance(query, FindMediatorQuery):
            raw = self._read("sets like {A,B}; {C} or 'none' > ")
            if raw.lower() in ("none", ""):
                return FindMediatorAnswer(())
            members = []
            for chunk in raw.split(";"):
                names = _parse_vertex_set(chunk)
                if names:
                    members.append(frozenset(names))
            return FindMediatorAnswer(tuple(members))
        raise ProtocolError(f"unknown query type {type(query).__name__}")


def _cmd_check(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    s = frozenset(_parse_vertex_set(args.adjust))
    valid = is_adjustment_set(g, args.x, args.y, s)
    sufficient = is_sufficient(g, args.x, args.y, s)
    backdoor = pearl_backdoor(g, args.x, args.y, s)
    print(
        f"adjustment set {format_vertex_set(s)}: "
        f"{'valid' if valid else 'invalid'}"
    )
    print("sufficient" if sufficient else "not sufficient")
    print(f"back-door criterion: {'holds' if backdoor else 'fails'}")
    return EXIT_OK if sufficient else EXIT_NOT_SUFFICIENT


def _cmd_enumerate(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if args.all:
        family = enumerate_sufficient(g, args.x, args.y)
    else:
        family = enumerate_minimal_sufficient(g, args.x, args.y)
    for member in family:
        print(format_vertex_set(member))
    return EXIT_OK


def _cmd_expand(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    config = ExpansionConfig(
        minimal_only=args.minimal_only, strategy=args.strategy
    )
    oracle = GraphOracle(g, args.x, args.y)
    recorder = None
    if args.trace is not None:
        recorder = Recorder(
            TranscriptHeader(
                x=args.x, y=args.y, algorithm=args.algorithm, config=config
            )
        )
    result = confounder_select(
        oracle,
        args.x,
        args.y,
        config,
        observer=recorder.observe if recorder else None,
        algorithm=args.algorithm,
    )
    if recorder is not None:
        recorder.record_finished(
            result.reason, result.exhausted, result.sufficient_sets
        )
        Path(args.trace).write_text(encode_transcript(recorder.transcript()))
    for member in result.canonical_sets:
        print(format_vertex_set(member))
    print("minimal:")
    for member in result.minimal_sets:
        print(format_vertex_set(member))
    if not result.exhausted:
        print(f"warning: search stopped early: {result.reason}", file=sys.stderr)
    return EXIT_OK


def _cmd_session(args: argparse.Namespace) -> int:
    if args.serve is not None:
        import uvicorn

        from .service import create_app

        host, _, port_text = args.serve.rpartition(":")
        host = host or "127.0.0.1"
        try:
            port = int(port_text)
        except ValueError:
            raise GraphError(
                f"invalid address {args.serve!r}: expected HOST:PORT"
            ) from None
        uvicorn.run(create_app(), host=host, port=port)
        return EXIT_OK
    if args.x is None or args.y is None:
        print("error: --x and --y are required without --serve", file=sys.stderr)
        return EXIT_USAGE
    config = ExpansionConfig(
        minimal_only=args.minimal_only, strategy=args.strategy
    )
    recorder = Recorder(
        TranscriptHeader(
            x=args.x, y=args.y, algorithm=args.algorithm, config=config
        )
    )

    def save() -> None:
        if args.transcript is not None:
            Path(args.transcript).write_text(
                encode_transcript(recorder.transcript())
            )

    oracle = _PromptOracle(sys.stdin, sys.stdout)
    try:
        result = confounder_select(
            oracle,
            args.x,
            args.y,
            config,
            observer=recorder.observe,
            algorithm=args.algorithm,
        )
    except (EOFError, KeyboardInterrupt):
        emitted = []
        for event in recorder.events:
            if event.kind == "set_emitted":
                vertices = frozenset(event.payload["vertices"])
                if vertices not in emitted:
                    emitted.append(vertices)
        recorder.record_finished("aborted", False, emitted)
        save()
        print("\nsession aborted", file=sys.stderr)
        return EXIT_ABORTED
    recorder.record_finished(
        result.reason, result.exhausted, result.sufficient_sets
    )
    save()
    print("")
    print("sufficient sets:")
    for member in result.canonical_sets:
        print(format_vertex_set(member))
    print("minimal:")
    for member in result.minimal_sets:
        print(format_vertex_set(member))
    if not result.exhausted:
        print(f"warning: search stopped early: {result.reason}", file=sys.stderr)
    return EXIT_OK


def _cmd_replay(args: argparse.Namespace) -> int:
    try:
        text = Path(args.transcript).read_text()
    except OSError as err:
        raise GraphError(
            f"cannot read {args.transcript}: {err.strerror or err}"
        ) from err
    transcript = decode_transcript(text)
    report = replay_transcript(transcript)
    if report.diverged:
        print(f"divergence: {report.detail}", file=sys.stderr)
        return EXIT_DIVERGED
    if report.unused_answers:
        print(
            f"warning: {report.unused_answers} recorded answer(s) were "
            "never used",
            file=sys.stderr,
        )
    if report.completed:
        for member in sorted(
            report.sufficient_sets, key=lambda s: (len(s), tuple(sorted(s)))
        ):
            print(format_vertex_set(member))
        print(f"replay ok: {report.reason}")
    else:
        print("replay ok: transcript stops at a pending query")
    return EXIT_OK


def _add_expansion_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--minimal-only",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="trim discovered sets to inclusion-minimal ones (default: on)",
    )
    parser.add_argument(
        "--strategy",
        choices=STRATEGIES,
        default=STRATEGY_MIN_CUT,
        help="uncertain-pair selection strategy",
    )
    parser.add_argument(
        "--algorithm",
        choices=ALGORITHMS,
        default=ALGORITHM_QUEUE,
        help="search order: priority queue or depth-first recursion",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confsel",
        description="Interactive confounder selection over causal graphs.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser(
        "check", help="judge one candidate adjustment set"
    )
    check.add_argument("graph", help="graph file")
    check.add_argument("--x", required=True, help="treatment vertex")
    check.add_argument("--y", required=True, help="outcome vertex")
    check.add_argument(
        "--adjust",
        default="",
        help="comma-separated candidate set, e.g. B,C (empty for {})",
    )
    check.set_defaults(handler=_cmd_check)

    enumerate_cmd = commands.add_parser(
        "enumerate", help="enumerate sufficient adjustment sets"
    )
    enumerate_cmd.add_argument("graph", help="graph file")
    enumerate_cmd.add_argument("--x", required=True)
    enumerate_cmd.add_argument("--y", required=True)
    enumerate_cmd.add_argument(
        "--all",
        action="store_true",
        help="print every sufficient set, not only minimal ones",
    )
    enumerate_cmd.set_defaults(handler=_cmd_enumerate)

    expand = commands.add_parser(
        "expand",
        help="run the expansion engine with the graph as its own oracle",
    )
    expand.add_argument("graph", help="graph file")
    expand.add_argument("--x", required=True)
    expand.add_argument("--y", required=True)
    _add_expansion_options(expand)
    expand.add_argument(
        "--trace", metavar="PATH", help="write the run transcript here"
    )
    expand.set_defaults(handler=_cmd_expand)

    session = commands.add_parser(
        "session", help="answer the engine's questions yourself"
    )
    session.add_argument("--x", help="treatment vertex (terminal mode)")
    session.add_argument("--y", help="outcome vertex (terminal mode)")
    _add_expansion_options(session)
    session.add_argument(
        "--transcript", metavar="PATH", help="write the session transcript here"
    )
    session.add_argument(
        "--serve",
        metavar="ADDR",
        help="serve the HTTP session API on HOST:PORT instead",
    )
    session.set_defaults(handler=_cmd_session)

    replay = commands.add_parser(
        "replay", help="re-run a transcript and verify it reproduces"
    )
    replay.add_argument("transcript", help="transcript file (JSONL)")
    replay.set_defaults(handler=_cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except (GraphError, TranscriptError, ProtocolError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
