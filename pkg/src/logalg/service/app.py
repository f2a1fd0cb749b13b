"""FastAPI service wrapping the command layer.

Every endpoint returns the deterministic report rendering as its body (byte
stable across runs); the HTTP status mirrors the report's exit code:
200 for computed verdicts (affirmative or negative), 422 for input errors,
500 for numeric errors.
"""

from __future__ import annotations

from fastapi import FastAPI, Response

from .. import commands
from ..reports import EXIT_INPUT, EXIT_NUMERIC, exit_code_of, render_report
from .models import (
    AxiomsRequest,
    CounterexampleRequest,
    DocumentRequest,
    InclusionRequest,
    IsomorphicRequest,
    NormRequest,
    RearrangeRequest,
    ReportModel,
)

_STATUS = {EXIT_INPUT: 422, EXIT_NUMERIC: 500}


def _respond(report: dict) -> Response:
    return Response(
        content=render_report(report),
        media_type="application/json",
        status_code=_STATUS.get(exit_code_of(report), 200),
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="logalg",
        description="Log-algebra decisions: rearrangement norms, trace comparison, "
        "passport isomorphism.",
        version="0.1.0",
    )

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/v1/validate", response_model=ReportModel)
    def validate(request: DocumentRequest) -> Response:
        return _respond(commands.cmd_validate(request.document_text))

    @app.post("/v1/norm", response_model=ReportModel)
    def norm(request: NormRequest) -> Response:
        return _respond(
            commands.cmd_norm(request.document_text, request.element, request.mode)
        )

    @app.post("/v1/rearrange", response_model=ReportModel)
    def rearrange(request: RearrangeRequest) -> Response:
        return _respond(commands.cmd_rearrange(request.document_text, request.element))

    @app.post("/v1/inclusion", response_model=ReportModel)
    def inclusion(request: InclusionRequest) -> Response:
        return _respond(
            commands.cmd_inclusion(request.document_text, request.direction)
        )

    @app.post("/v1/coincide", response_model=ReportModel)
    def coincide(request: DocumentRequest) -> Response:
        return _respond(commands.cmd_coincide(request.document_text))

    @app.post("/v1/counterexample", response_model=ReportModel)
    def counterexample(request: CounterexampleRequest) -> Response:
        return _respond(
            commands.cmd_counterexample(request.document_text, request.terms)
        )

    @app.post("/v1/isomorphic", response_model=ReportModel)
    def isomorphic(request: IsomorphicRequest) -> Response:
        return _respond(
            commands.cmd_isomorphic(request.left_text, request.right_text, request.level)
        )

    @app.post("/v1/axioms", response_model=ReportModel)
    def axioms(request: AxiomsRequest) -> Response:
        return _respond(commands.cmd_axioms(request.seed, request.trials, request.mode))

    return app


app = create_app()
