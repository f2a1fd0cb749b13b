"""Command-line front end: a thin client of the logalg service.

Every subcommand builds the corresponding service request and drives the
FastAPI app through an in-process ASGI transport -- no sockets are opened
and no network is involved; the report printed on stdout is byte-identical
to the HTTP response body.  Documents are read from files, or from stdin
with the filename "-".

Exit codes: 0 affirmative verdict / successful computation, 1 negative
verdict, 2 input or usage error, 3 numeric error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Optional, Sequence

import httpx

from .reports import EXIT_INPUT, exit_code_of


def _read_document(path: str, stdin_used: list) -> str:
    if path == "-":
        if stdin_used:
            raise _UsageError('only one document may be read from stdin ("-")')
        stdin_used.append(path)
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


class _UsageError(Exception):
    pass


def _post(path: str, payload: dict) -> bytes:
    """Send one request through the ASGI app in-process."""
    from .service import create_app

    async def go() -> bytes:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://logalg"
        ) as client:
            response = await client.post(path, json=payload)
            return response.content

    return asyncio.run(go())


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logalg",
        description="Log-algebra decisions: norms, trace comparison, isomorphism.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a model document")
    p.add_argument("document")

    p = sub.add_parser("norm", help="log F-norm of a named element")
    p.add_argument("document")
    p.add_argument("--element", required=True)
    p.add_argument("--mode", choices=("finite", "semifinite"), default="semifinite")

    p = sub.add_parser("rearrange", help="decreasing rearrangement of an element")
    p.add_argument("document")
    p.add_argument("--element", required=True)

    p = sub.add_parser("inclusion", help="decide a log-algebra inclusion")
    p.add_argument("document")
    p.add_argument("--direction", choices=("mu-in-nu", "nu-in-mu"), required=True)

    p = sub.add_parser("coincide", help="decide coincidence of the two log-algebras")
    p.add_argument("document")

    p = sub.add_parser("counterexample", help="build and certify the divergence witness")
    p.add_argument("document")
    p.add_argument("--terms", type=int, required=True)

    p = sub.add_parser("isomorphic", help="decide isomorphism of two inputs")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--level", choices=("algebra", "center"), default="algebra")

    p = sub.add_parser("axioms", help="run the seeded norm-axiom harness")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--mode", choices=("finite", "semifinite"), default="semifinite")

    p = sub.add_parser("serve", help="run the HTTP service (uvicorn)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _request_for(args: argparse.Namespace, stdin_used: list) -> tuple[str, dict]:
    command = args.command
    if command == "validate":
        return "/v1/validate", {"document_text": _read_document(args.document, stdin_used)}
    if command == "norm":
        return "/v1/norm", {
            "document_text": _read_document(args.document, stdin_used),
            "element": args.element,
            "mode": args.mode,
        }
    if command == "rearrange":
        return "/v1/rearrange", {
            "document_text": _read_document(args.document, stdin_used),
            "element": args.element,
        }
    if command == "inclusion":
        return "/v1/inclusion", {
            "document_text": _read_document(args.document, stdin_used),
            "direction": args.direction,
        }
    if command == "coincide":
        return "/v1/coincide", {"document_text": _read_document(args.document, stdin_used)}
    if command == "counterexample":
        return "/v1/counterexample", {
            "document_text": _read_document(args.document, stdin_used),
            "terms": args.terms,
        }
    if command == "isomorphic":
        return "/v1/isomorphic", {
            "left_text": _read_document(args.left, stdin_used),
            "right_text": _read_document(args.right, stdin_used),
            "level": args.level,
        }
    if command == "axioms":
        return "/v1/axioms", {"seed": args.seed, "trials": args.trials, "mode": args.mode}
    raise _UsageError(f"unknown command {command!r}")


def _print_error_detail(report: dict) -> None:
    error = report.get("error")
    if not isinstance(error, dict):
        return
    for record in error.get("errors", []):
        location = record.get("path")
        if location is None and "line" in record:
            location = f"line {record['line']}, column {record.get('column', '?')}"
        message = record.get("message", "")
        prefix = f"{location}: " if location else ""
        print(f"logalg: {prefix}{message}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    stdin_used: list = []
    try:
        path, payload = _request_for(args, stdin_used)
    except _UsageError as exc:
        print(f"logalg: {exc}", file=sys.stderr)
        return EXIT_INPUT

    body = _post(path, payload)
    sys.stdout.write(body.decode("utf-8"))
    sys.stdout.flush()

    report = json.loads(body)
    code = exit_code_of(report)
    if code >= EXIT_INPUT:
        _print_error_detail(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
