"""Model documents: the JSON schema shared by the CLI and the service.

Top level: {"version": 1, "kind": "cell-model" | "passport" | "algebra",
"body": ...}.  Rationals are accepted as "p/q" strings, decimal strings
(converted exactly), or JSON numbers; complex scalars are [re, im] pairs and
matrices are row-major arrays of such pairs.  Parsing either returns a fully
validated document or raises DocumentError carrying every positioned error
(line/column for syntax, JSON-pointer-style paths for semantics).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

import numpy as np

from .errors import DocumentError, InputError
from .isomorphism import AlgebraDescriptor, Block
from .measure import (
    AffineTail,
    CellModel,
    ClosedForm,
    Passport,
    PassportLine,
    SeqSpec,
    validate_passport,
)
from .rearrangement import MatrixStepFunction, StepFunction

KINDS = ("cell-model", "passport", "algebra")

Element = Union[StepFunction, MatrixStepFunction]


@dataclass
class ModelDocument:
    version: int
    kind: str
    cell_model: Optional[CellModel] = None
    elements: dict[str, Element] = field(default_factory=dict)
    passport: Optional[Passport] = None
    algebra: Optional[AlgebraDescriptor] = None

    def __eq__(self, other):
        if not isinstance(other, ModelDocument):
            return NotImplemented
        if (self.version, self.kind, self.cell_model, self.passport, self.algebra) != (
            other.version,
            other.kind,
            other.cell_model,
            other.passport,
            other.algebra,
        ):
            return False
        if set(self.elements) != set(other.elements):
            return False
        return all(_elements_equal(self.elements[k], other.elements[k]) for k in self.elements)


def _elements_equal(a: Element, b: Element) -> bool:
    if isinstance(a, StepFunction) and isinstance(b, StepFunction):
        return a == b
    if isinstance(a, MatrixStepFunction) and isinstance(b, MatrixStepFunction):
        return (
            a.n == b.n
            and len(a.cells) == len(b.cells)
            and all(
                ma == mb and np.array_equal(va, vb)
                for (ma, va), (mb, vb) in zip(a.cells, b.cells)
            )
        )
    return False


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class _Errors:
    def __init__(self):
        self.records: list[dict] = []

    def add(self, path: str, message: str) -> None:
        self.records.append({"path": path, "message": message})

    def raise_if_any(self) -> None:
        if self.records:
            raise DocumentError(self.records)


def _as_object(value: Any, path: str, errs: _Errors) -> Optional[dict]:
    if isinstance(value, dict):
        return value
    errs.add(path, "expected an object")
    return None


def _as_array(value: Any, path: str, errs: _Errors) -> Optional[list]:
    if isinstance(value, list):
        return value
    errs.add(path, "expected an array")
    return None


def _as_int(value: Any, path: str, errs: _Errors) -> Optional[int]:
    if isinstance(value, bool) or not isinstance(value, int):
        errs.add(path, "expected an integer")
        return None
    return value


def _as_rational(value: Any, path: str, errs: _Errors) -> Optional[Fraction]:
    if isinstance(value, bool):
        errs.add(path, "expected a rational")
        return None
    try:
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(value)  # exact binary value of the JSON number
        if isinstance(value, str):
            return Fraction(value)  # "p/q" or a decimal string, exactly
    except (ValueError, ZeroDivisionError, OverflowError):
        pass
    errs.add(path, f"not a rational: {value!r}")
    return None


def _as_real(value: Any, path: str, errs: _Errors) -> Optional[float]:
    r = _as_rational(value, path, errs)
    if r is None:
        return None
    try:
        return float(r)
    except OverflowError:
        errs.add(path, "value out of double range")
        return None


def _as_complex(value: Any, path: str, errs: _Errors) -> Optional[complex]:
    if not isinstance(value, list) or len(value) != 2:
        errs.add(path, "complex scalar must be an [re, im] pair")
        return None
    re = _as_real(value[0], f"{path}/0", errs)
    im = _as_real(value[1], f"{path}/1", errs)
    if re is None or im is None:
        return None
    return complex(re, im)


def _parse_closed_form(value: Any, path: str, errs: _Errors) -> Optional[ClosedForm]:
    obj = _as_object(value, path, errs)
    if obj is None:
        return None
    parts = {}
    for key in ("c", "p", "q"):
        if key not in obj:
            errs.add(f"{path}/{key}", "missing field")
            return None
        parts[key] = _as_rational(obj[key], f"{path}/{key}", errs)
    if any(v is None for v in parts.values()):
        return None
    try:
        return ClosedForm(parts["c"], parts["p"], parts["q"])
    except InputError as exc:
        errs.add(path, str(exc))
        return None


def _parse_seq_tail(
    value: Any, path: str, errs: _Errors
) -> Optional[tuple[ClosedForm, ...]]:
    """A tail is one closed form or (merged passports) an array of them."""
    if isinstance(value, list):
        terms = []
        for k, item in enumerate(value):
            form = _parse_closed_form(item, f"{path}/{k}", errs)
            if form is None:
                return None
            terms.append(form)
        if not terms:
            errs.add(path, "tail array must be non-empty")
            return None
        return tuple(terms)
    form = _parse_closed_form(value, path, errs)
    return None if form is None else (form,)


def _parse_seq_spec(value: Any, path: str, errs: _Errors) -> Optional[SeqSpec]:
    obj = _as_object(value, path, errs)
    if obj is None:
        return None
    prefix: list[Fraction] = []
    raw_prefix = _as_array(obj.get("prefix", []), f"{path}/prefix", errs)
    if raw_prefix is None:
        return None
    ok = True
    for k, item in enumerate(raw_prefix):
        r = _as_rational(item, f"{path}/prefix/{k}", errs)
        if r is None:
            ok = False
        else:
            prefix.append(r)
    tail: tuple[ClosedForm, ...] = ()
    if "tail" in obj and obj["tail"] is not None:
        parsed = _parse_seq_tail(obj["tail"], f"{path}/tail", errs)
        if parsed is None:
            ok = False
        else:
            tail = parsed
    return SeqSpec(tuple(prefix), tail) if ok else None


def _parse_line(value: Any, path: str, errs: _Errors) -> Optional[PassportLine]:
    obj = _as_object(value, path, errs)
    if obj is None:
        return None
    raw_prefix = _as_array(obj.get("prefix", []), f"{path}/prefix", errs)
    if raw_prefix is None:
        return None
    indices = []
    ok = True
    for k, item in enumerate(raw_prefix):
        i = _as_int(item, f"{path}/prefix/{k}", errs)
        if i is None:
            ok = False
        else:
            indices.append(i)
    tail = None
    if "tail" in obj and obj["tail"] is not None:
        tobj = _as_object(obj["tail"], f"{path}/tail", errs)
        if tobj is None:
            ok = False
        else:
            b0 = _as_int(tobj.get("b0"), f"{path}/tail/b0", errs)
            b1 = _as_int(tobj.get("b1"), f"{path}/tail/b1", errs)
            if b0 is None or b1 is None:
                ok = False
            else:
                tail = AffineTail(b0, b1)
    if not ok:
        return None
    return PassportLine.of(indices, tail)


def _parse_passport_body(value: Any, path: str, errs: _Errors) -> Optional[Passport]:
    obj = _as_object(value, path, errs)
    if obj is None:
        return None
    s_line = _parse_line(obj.get("sLine", {}), f"{path}/sLine", errs)
    u_line = _parse_line(obj.get("uLine", {}), f"{path}/uLine", errs)
    u_meas = _parse_seq_spec(obj.get("uMeasures", {}), f"{path}/uMeasures", errs)
    if s_line is None or u_line is None or u_meas is None:
        return None
    passport = Passport(s_line, u_line, u_meas)
    for violation in validate_passport(passport):
        errs.add(path + violation.path, violation.message)
    return passport


def _parse_element(value: Any, path: str, errs: _Errors) -> Optional[Element]:
    obj = _as_object(value, path, errs)
    if obj is None:
        return None
    etype = obj.get("type")
    if etype not in ("scalar-step", "matrix-step"):
        errs.add(f"{path}/type", 'element type must be "scalar-step" or "matrix-step"')
        return None
    raw_cells = _as_array(obj.get("cells", []), f"{path}/cells", errs)
    if raw_cells is None:
        return None

    if etype == "scalar-step":
        cells: list[tuple[float, complex]] = []
        ok = True
        for k, item in enumerate(raw_cells):
            cobj = _as_object(item, f"{path}/cells/{k}", errs)
            if cobj is None:
                ok = False
                continue
            mass = _as_real(cobj.get("mass"), f"{path}/cells/{k}/mass", errs)
            value_c = _as_complex(cobj.get("value"), f"{path}/cells/{k}/value", errs)
            if mass is None or value_c is None:
                ok = False
                continue
            if not mass > 0:
                errs.add(f"{path}/cells/{k}/mass", "mass must be > 0")
                ok = False
                continue
            cells.append((mass, value_c))
        return StepFunction(tuple(cells)) if ok else None

    n = _as_int(obj.get("n"), f"{path}/n", errs)
    if n is None:
        return None
    if n < 1:
        errs.add(f"{path}/n", "matrix size must be >= 1")
        return None
    mcells: list[tuple[float, np.ndarray]] = []
    ok = True
    for k, item in enumerate(raw_cells):
        cobj = _as_object(item, f"{path}/cells/{k}", errs)
        if cobj is None:
            ok = False
            continue
        mass = _as_real(cobj.get("mass"), f"{path}/cells/{k}/mass", errs)
        raw = _as_array(cobj.get("value"), f"{path}/cells/{k}/value", errs)
        if mass is None or raw is None:
            ok = False
            continue
        if not mass > 0:
            errs.add(f"{path}/cells/{k}/mass", "mass must be > 0")
            ok = False
            continue
        if len(raw) != n * n:
            errs.add(
                f"{path}/cells/{k}/value",
                f"matrix must be a row-major array of {n * n} [re, im] pairs",
            )
            ok = False
            continue
        entries = []
        for e, pair in enumerate(raw):
            z = _as_complex(pair, f"{path}/cells/{k}/value/{e}", errs)
            if z is None:
                ok = False
                break
            entries.append(z)
        else:
            mcells.append((mass, np.array(entries, dtype=np.complex128).reshape(n, n)))
    if not ok:
        return None
    try:
        return MatrixStepFunction(n, mcells)
    except InputError as exc:
        errs.add(path, str(exc))
        return None


def _parse_cell_model_body(
    value: Any, path: str, errs: _Errors
) -> tuple[Optional[CellModel], dict[str, Element]]:
    obj = _as_object(value, path, errs)
    if obj is None:
        return None, {}
    raw_cells = _as_array(obj.get("prefixCells", []), f"{path}/prefixCells", errs)
    cells: list[tuple[Fraction, Fraction]] = []
    ok = raw_cells is not None
    if raw_cells is not None:
        for k, item in enumerate(raw_cells):
            cobj = _as_object(item, f"{path}/prefixCells/{k}", errs)
            if cobj is None:
                ok = False
                continue
            mass = _as_rational(cobj.get("mass"), f"{path}/prefixCells/{k}/mass", errs)
            h = _as_rational(cobj.get("h"), f"{path}/prefixCells/{k}/h", errs)
            if mass is None or h is None:
                ok = False
                continue
            if mass <= 0:
                errs.add(f"{path}/prefixCells/{k}/mass", "mass must be > 0")
                ok = False
            if h <= 0:
                errs.add(f"{path}/prefixCells/{k}/h", "h must be > 0")
                ok = False
            if mass > 0 and h > 0:
                cells.append((mass, h))

    tail_mass = tail_h = None
    if "tailMass" in obj and obj["tailMass"] is not None:
        tail_mass = _parse_closed_form(obj["tailMass"], f"{path}/tailMass", errs)
        ok = ok and tail_mass is not None
    if "tailH" in obj and obj["tailH"] is not None:
        tail_h = _parse_closed_form(obj["tailH"], f"{path}/tailH", errs)
        ok = ok and tail_h is not None
    if (tail_mass is None) != (tail_h is None):
        errs.add(path, "tailMass and tailH must both be present or both absent")
        ok = False

    elements: dict[str, Element] = {}
    if "elements" in obj and obj["elements"] is not None:
        eobj = _as_object(obj["elements"], f"{path}/elements", errs)
        if eobj is None:
            ok = False
        else:
            for name in sorted(eobj):
                parsed = _parse_element(eobj[name], f"{path}/elements/{name}", errs)
                if parsed is None:
                    ok = False
                else:
                    elements[name] = parsed

    if not ok:
        return None, elements
    try:
        return CellModel(tuple(cells), tail_mass=tail_mass, tail_h=tail_h), elements
    except InputError as exc:
        errs.add(path, str(exc))
        return None, elements


def parse_document(text: str) -> ModelDocument:
    """Parse and fully validate a model document.

    Raises DocumentError with positioned records: line/column for JSON syntax
    errors, JSON-pointer paths for semantic ones.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            [{"line": exc.lineno, "column": exc.colno, "message": f"syntax error: {exc.msg}"}]
        ) from exc

    errs = _Errors()
    obj = _as_object(data, "", errs)
    errs.raise_if_any()
    assert obj is not None

    version = _as_int(obj.get("version"), "/version", errs)
    if version is not None and version != 1:
        errs.add("/version", f"unsupported document version {version}")
    kind = obj.get("kind")
    if kind not in KINDS:
        errs.add("/kind", f"kind must be one of {', '.join(KINDS)}")
        errs.raise_if_any()
    body = obj.get("body")

    doc = ModelDocument(version=version or 1, kind=kind)
    if kind == "cell-model":
        doc.cell_model, doc.elements = _parse_cell_model_body(body, "/body", errs)
    elif kind == "passport":
        doc.passport = _parse_passport_body(body, "/body", errs)
    else:
        bobj = _as_object(body, "/body", errs)
        if bobj is not None:
            raw_blocks = _as_array(bobj.get("blocks"), "/body/blocks", errs)
            blocks = []
            if raw_blocks is not None:
                if not raw_blocks:
                    errs.add("/body/blocks", "algebra requires at least one block")
                for k, item in enumerate(raw_blocks):
                    iobj = _as_object(item, f"/body/blocks/{k}", errs)
                    if iobj is None:
                        continue
                    size = _as_int(iobj.get("n"), f"/body/blocks/{k}/n", errs)
                    if size is not None and size < 1:
                        errs.add(f"/body/blocks/{k}/n", "matrix size must be >= 1")
                        size = None
                    center = _parse_passport_body(
                        iobj.get("center"), f"/body/blocks/{k}/center", errs
                    )
                    if size is not None and center is not None:
                        blocks.append(Block(size, center))
            if blocks and not errs.records:
                doc.algebra = AlgebraDescriptor(tuple(blocks))
    errs.raise_if_any()
    return doc


# ---------------------------------------------------------------------------
# Serialization (round-trips exactly)
# ---------------------------------------------------------------------------


def _rational_str(x: Fraction) -> str:
    return str(x)


def _closed_form_json(form: ClosedForm) -> dict:
    return {"c": _rational_str(form.c), "p": _rational_str(form.p), "q": _rational_str(form.q)}


def _seq_tail_json(tail: tuple[ClosedForm, ...]):
    if len(tail) == 1:
        return _closed_form_json(tail[0])
    return [_closed_form_json(t) for t in tail]


def _seq_spec_json(seq: SeqSpec) -> dict:
    out: dict[str, Any] = {"prefix": [_rational_str(x) for x in seq.prefix]}
    if seq.tail:
        out["tail"] = _seq_tail_json(seq.tail)
    return out


def _line_json(line: PassportLine) -> dict:
    out: dict[str, Any] = {"prefix": [c.aleph_index for c in line.prefix]}
    if line.tail is not None:
        out["tail"] = {"b0": line.tail.b0, "b1": line.tail.b1}
    return out


def passport_body_json(p: Passport) -> dict:
    return {
        "sLine": _line_json(p.s_line),
        "uLine": _line_json(p.u_line),
        "uMeasures": _seq_spec_json(p.u_measures),
    }


def _complex_json(z: complex) -> list:
    return [z.real, z.imag]


def _element_json(element: Element) -> dict:
    if isinstance(element, StepFunction):
        return {
            "type": "scalar-step",
            "cells": [
                {"mass": mass, "value": _complex_json(value)} for mass, value in element.cells
            ],
        }
    return {
        "type": "matrix-step",
        "n": element.n,
        "cells": [
            {
                "mass": mass,
                "value": [_complex_json(complex(z)) for z in value.reshape(-1)],
            }
            for mass, value in element.cells
        ],
    }


def document_to_jsonable(doc: ModelDocument) -> dict:
    body: dict[str, Any]
    if doc.kind == "cell-model":
        assert doc.cell_model is not None
        model = doc.cell_model
        body = {
            "prefixCells": [
                {"mass": _rational_str(m), "h": _rational_str(h)}
                for m, h in model.prefix_cells
            ]
        }
        if model.tail_mass is not None:
            body["tailMass"] = _closed_form_json(model.tail_mass)
            body["tailH"] = _closed_form_json(model.tail_h)
        if doc.elements:
            body["elements"] = {
                name: _element_json(doc.elements[name]) for name in sorted(doc.elements)
            }
    elif doc.kind == "passport":
        assert doc.passport is not None
        body = passport_body_json(doc.passport)
    else:
        assert doc.algebra is not None
        body = {
            "blocks": [
                {"n": block.n, "center": passport_body_json(block.center)}
                for block in doc.algebra.blocks
            ]
        }
    return {"version": doc.version, "kind": doc.kind, "body": body}


def serialize_document(doc: ModelDocument) -> str:
    return json.dumps(document_to_jsonable(doc), indent=2) + "\n"
