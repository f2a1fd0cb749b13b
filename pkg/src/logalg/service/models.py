"""Pydantic request/response models for the HTTP surface."""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field

Mode = Literal["finite", "semifinite"]


class DocumentRequest(BaseModel):
    """A single model document, sent as its raw JSON text so the service can
    report positioned syntax errors."""

    document_text: str


class NormRequest(DocumentRequest):
    element: str
    mode: Mode = "semifinite"


class RearrangeRequest(DocumentRequest):
    element: str


class InclusionRequest(DocumentRequest):
    direction: Literal["mu-in-nu", "nu-in-mu"]


class CounterexampleRequest(DocumentRequest):
    terms: int = Field(ge=1)


class IsomorphicRequest(BaseModel):
    left_text: str
    right_text: str
    level: Literal["algebra", "center"] = "algebra"


class AxiomsRequest(BaseModel):
    seed: int
    trials: int = Field(ge=1)
    mode: Mode = "semifinite"


class ReportModel(BaseModel):
    """Envelope of every response body (documentation model; the body itself
    is rendered by the deterministic serializer, not by pydantic)."""

    command: str
    diagnostics: dict[str, Any]
    verdict: Optional[dict[str, Any]] = None
    value: Optional[float] = None
    certificate: Optional[dict[str, Any]] = None
    error: Optional[dict[str, Any]] = None

    model_config = {"extra": "allow"}
