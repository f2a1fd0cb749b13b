"""Command execution: one function per user-facing operation.

Both front ends (the HTTP service and the CLI) call into this module.  Each
command returns a finished report dict whose diagnostics carry the exit
code; errors never escape as exceptions.
"""

from __future__ import annotations

from typing import Optional

from .documents import ModelDocument, parse_document, passport_body_json
from .errors import DocumentError, InputError, NumericError
from .isomorphism import (
    AlgebraDescriptor,
    IsoVerdict,
    decide_center,
    decide_commutative,
    decide_direct_sum,
)
from .measure import safe_float
from .rearrangement import (
    MatrixStepFunction,
    StepFunction,
    check_axioms,
    log_norm,
    rearrange,
    rearrange_matrix,
)
from .reports import EXIT_INPUT, EXIT_NO, EXIT_NUMERIC, EXIT_OK
from .trace_comparison import (
    TracePair,
    build_counterexample,
    certify_divergence,
    decide_coincidence,
    decide_inclusion,
)

#: groups echoed in counterexample reports (the full list can be huge)
GROUPS_SHOWN = 8


def _finish(report: dict, exit_code: int) -> dict:
    report["diagnostics"] = {"exitCode": exit_code}
    return report


def _error_report(command: str, kind: str, errors: list, exit_code: int) -> dict:
    return _finish({"command": command, "error": {"kind": kind, "errors": errors}}, exit_code)


def _input_error(command: str, exc: Exception) -> dict:
    if isinstance(exc, DocumentError):
        return _error_report(command, "input-error", exc.errors, EXIT_INPUT)
    return _error_report(command, "input-error", [{"message": str(exc)}], EXIT_INPUT)


def _numeric_error(command: str, exc: Exception) -> dict:
    return _error_report(command, "numeric-error", [{"message": str(exc)}], EXIT_NUMERIC)


def _guarded(command: str, fn) -> dict:
    try:
        return fn()
    except (DocumentError, InputError) as exc:
        return _input_error(command, exc)
    except NumericError as exc:
        return _numeric_error(command, exc)


def _parse_kind(text: str, kinds: tuple[str, ...], what: str) -> ModelDocument:
    doc = parse_document(text)
    if doc.kind not in kinds:
        raise InputError(
            f"{what} must be a {' or '.join(kinds)} document, got kind {doc.kind!r}"
        )
    return doc


def _element_of(doc: ModelDocument, name: Optional[str]):
    if name is None:
        raise InputError("an --element name is required")
    if name not in doc.elements:
        known = ", ".join(sorted(doc.elements)) or "none"
        raise InputError(f"unknown element {name!r} (known: {known})")
    return doc.elements[name]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_validate(document_text: str) -> dict:
    """Parse and validate; semantic violations are a negative verdict, not an
    input error (malformed JSON still is)."""
    command = "validate"
    try:
        doc = parse_document(document_text)
    except DocumentError as exc:
        if any("line" in record for record in exc.errors):
            return _error_report(command, "input-error", exc.errors, EXIT_INPUT)
        return _finish(
            {"command": command, "verdict": {"valid": False}, "violations": exc.errors},
            EXIT_NO,
        )
    return _finish(
        {"command": command, "verdict": {"valid": True}, "kind": doc.kind}, EXIT_OK
    )


def cmd_norm(document_text: str, element: Optional[str], mode: str) -> dict:
    command = "norm"

    def run() -> dict:
        if mode not in ("finite", "semifinite"):
            raise InputError('mode must be "finite" or "semifinite"')
        doc = _parse_kind(document_text, ("cell-model",), "norm input")
        target = _element_of(doc, element)
        if isinstance(target, MatrixStepFunction):
            profile = rearrange_matrix(target)
        else:
            profile = rearrange(target)
        value = log_norm(profile, mode)  # type: ignore[arg-type]
        return _finish(
            {"command": command, "element": element, "mode": mode, "value": value},
            EXIT_OK,
        )

    return _guarded(command, run)


def cmd_rearrange(document_text: str, element: Optional[str]) -> dict:
    command = "rearrange"

    def run() -> dict:
        doc = _parse_kind(document_text, ("cell-model",), "rearrange input")
        target = _element_of(doc, element)
        if isinstance(target, MatrixStepFunction):
            profile = rearrange_matrix(target)
        else:
            profile = rearrange(target)
        return _finish(
            {
                "command": command,
                "element": element,
                "profile": {
                    "segments": [
                        {"length": length, "level": level}
                        for length, level in profile.segments
                    ],
                    "totalLength": profile.total_length,
                },
            },
            EXIT_OK,
        )

    return _guarded(command, run)


def _trace_pair(document_text: str, what: str) -> TracePair:
    doc = _parse_kind(document_text, ("cell-model",), what)
    assert doc.cell_model is not None
    return TracePair(doc.cell_model)


def cmd_inclusion(document_text: str, direction: str) -> dict:
    command = "inclusion"

    def run() -> dict:
        if direction not in ("mu-in-nu", "nu-in-mu"):
            raise InputError('direction must be "mu-in-nu" or "nu-in-mu"')
        verdict = decide_inclusion(_trace_pair(document_text, "inclusion input"), direction)  # type: ignore[arg-type]
        return _finish(
            {
                "command": command,
                "direction": direction,
                "verdict": {"holds": verdict.holds, "reason": verdict.reason},
            },
            EXIT_OK if verdict.holds else EXIT_NO,
        )

    return _guarded(command, run)


def cmd_coincide(document_text: str) -> dict:
    command = "coincide"

    def run() -> dict:
        verdict = decide_coincidence(_trace_pair(document_text, "coincide input"))
        return _finish(
            {
                "command": command,
                "verdict": {"holds": verdict.holds, "reason": verdict.reason},
            },
            EXIT_OK if verdict.holds else EXIT_NO,
        )

    return _guarded(command, run)


def cmd_counterexample(document_text: str, terms: int) -> dict:
    command = "counterexample"

    def run() -> dict:
        if terms < 1:
            raise InputError("--terms must be >= 1")
        pair = _trace_pair(document_text, "counterexample input")
        ce = build_counterexample(pair, terms)
        cert = certify_divergence(ce, pair)
        head = [
            {"n": gr.n, "mass": gr.mass, "g": gr.g_float, "f": gr.f_float}
            for gr in ce.groups[:GROUPS_SHOWN]
        ]
        return _finish(
            {
                "command": command,
                "terms": terms,
                "certificate": {
                    "K": cert.k_terms,
                    "muPartial": cert.mu_partial,
                    "nuPartialLower": cert.nu_partial_lower,
                    "nuPartialUpper": cert.nu_partial_upper,
                    "harmonicLower": cert.harmonic_lower,
                },
                "groupCount": len(ce.groups),
                "groupsHead": head,
            },
            EXIT_OK,
        )

    return _guarded(command, run)


def _iso_report(command: str, level: str, kind: str, verdict: IsoVerdict) -> dict:
    body: dict = {"command": command, "level": level, "inputKind": kind}
    if verdict.isomorphic:
        body["verdict"] = {
            "isomorphic": True,
            "matching": [[i, j] for i, j in (verdict.matching or ())],
        }
        return _finish(body, EXIT_OK)
    assert verdict.obstruction is not None
    body["verdict"] = {
        "isomorphic": False,
        "obstruction": verdict.obstruction.as_dict(),
    }
    return _finish(body, EXIT_NO)


def cmd_isomorphic(left_text: str, right_text: str, level: str = "algebra") -> dict:
    command = "isomorphic"

    def run() -> dict:
        if level not in ("algebra", "center"):
            raise InputError('level must be "algebra" or "center"')
        left = _parse_kind(left_text, ("passport", "algebra"), "left input")
        right = _parse_kind(right_text, ("passport", "algebra"), "right input")
        if left.kind != right.kind:
            raise InputError(
                f"inputs must have the same kind, got {left.kind!r} and {right.kind!r}"
            )
        if left.kind == "passport":
            assert left.passport is not None and right.passport is not None
            verdict = decide_commutative(left.passport, right.passport)
        elif level == "algebra":
            assert left.algebra is not None and right.algebra is not None
            verdict = decide_direct_sum(left.algebra, right.algebra)
        else:
            assert left.algebra is not None and right.algebra is not None
            verdict = decide_center(left.algebra, right.algebra)
        return _iso_report(command, level, left.kind, verdict)

    return _guarded(command, run)


def cmd_axioms(seed: int, trials: int, mode: str) -> dict:
    command = "axioms"

    def run() -> dict:
        report = check_axioms(seed, trials, mode)  # type: ignore[arg-type]
        violations = [
            {
                "trial": v.trial,
                "axiom": v.axiom,
                "lhs": v.lhs,
                "rhs": v.rhs,
                "detail": v.detail,
            }
            for v in report.violations
        ]
        return _finish(
            {
                "command": command,
                "seed": seed,
                "trials": trials,
                "mode": mode,
                "violationCount": len(violations),
                "violations": violations,
            },
            EXIT_OK if report.ok else EXIT_NO,
        )

    return _guarded(command, run)
