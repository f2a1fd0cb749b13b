import json
from fractions import Fraction

import numpy as np
import pytest

from conftest import algebra_doc, cell_model_doc, passport_body, passport_doc
from logalg.documents import (
    ModelDocument,
    parse_document,
    serialize_document,
)
from logalg.errors import DocumentError

F = Fraction


class TestParse:
    def test_minimal_passport(self):
        doc = parse_document(
            passport_doc(
                {
                    "sLine": {"prefix": [1]},
                    "uLine": {"prefix": [0]},
                    "uMeasures": {"prefix": ["5/2"]},
                }
            )
        )
        assert doc.kind == "passport"
        assert doc.passport.u_measures.value_exact(1) == F(5, 2)

    def test_rational_string_is_exact(self):
        doc = parse_document(cell_model_doc(prefix_cells=[("1/3", "1")]))
        assert doc.cell_model.mass_at(1) == F(1, 3)

    def test_decimal_string_is_exact(self):
        doc = parse_document(cell_model_doc(prefix_cells=[("2.5", "0.1")]))
        assert doc.cell_model.mass_at(1) == F(5, 2)
        assert doc.cell_model.h_at(1) == F(1, 10)

    def test_length_mismatch_path(self):
        text = passport_doc(
            {
                "sLine": {"prefix": []},
                "uLine": {"prefix": [0]},
                "uMeasures": {"prefix": []},
            }
        )
        with pytest.raises(DocumentError) as excinfo:
            parse_document(text)
        assert any(
            record.get("path") == "/body/uMeasures" for record in excinfo.value.errors
        )

    def test_syntax_error_has_line_and_column(self):
        with pytest.raises(DocumentError) as excinfo:
            parse_document("{not json")
        record = excinfo.value.errors[0]
        assert record["line"] == 1
        assert "column" in record

    def test_unknown_kind(self):
        with pytest.raises(DocumentError) as excinfo:
            parse_document(json.dumps({"version": 1, "kind": "mystery", "body": {}}))
        assert any(r.get("path") == "/kind" for r in excinfo.value.errors)

    def test_wrong_version(self):
        text = passport_doc(
            {"sLine": {"prefix": []}, "uLine": {"prefix": []}, "uMeasures": {"prefix": []}}
        )
        broken = text.replace('"version": 1', '"version": 2')
        with pytest.raises(DocumentError) as excinfo:
            parse_document(broken)
        assert any(r.get("path") == "/version" for r in excinfo.value.errors)

    def test_zero_denominator_reported(self):
        with pytest.raises(DocumentError) as excinfo:
            parse_document(cell_model_doc(prefix_cells=[("1/0", "1")]))
        assert any("not a rational" in r["message"] for r in excinfo.value.errors)

    def test_negative_mass_rejected_with_path(self):
        with pytest.raises(DocumentError) as excinfo:
            parse_document(cell_model_doc(prefix_cells=[("-1", "1")]))
        assert any(
            r.get("path") == "/body/prefixCells/0/mass" for r in excinfo.value.errors
        )

    def test_elements_parse(self):
        text = cell_model_doc(
            prefix_cells=[("1", "1")],
            elements={
                "f": {
                    "type": "scalar-step",
                    "cells": [{"mass": 1, "value": [3, 0]}, {"mass": "1/2", "value": [0, -1]}],
                },
                "G": {
                    "type": "matrix-step",
                    "n": 2,
                    "cells": [
                        {"mass": 2, "value": [[1, 0], [0, 0], [0, 0], [1, 0]]}
                    ],
                },
            },
        )
        doc = parse_document(text)
        assert doc.elements["f"].cells[1] == (0.5, -1j)
        assert doc.elements["G"].n == 2
        assert np.array_equal(doc.elements["G"].cells[0][1], np.eye(2))

    def test_matrix_size_mismatch(self):
        text = cell_model_doc(
            elements={
                "G": {"type": "matrix-step", "n": 2, "cells": [{"mass": 1, "value": [[1, 0]]}]}
            }
        )
        with pytest.raises(DocumentError) as excinfo:
            parse_document(text)
        assert any("row-major" in r["message"] for r in excinfo.value.errors)

    def test_bad_complex_pair(self):
        text = cell_model_doc(
            elements={
                "f": {"type": "scalar-step", "cells": [{"mass": 1, "value": [1]}]}
            }
        )
        with pytest.raises(DocumentError):
            parse_document(text)

    def test_multiple_errors_collected(self):
        text = passport_doc(
            {
                "sLine": {"prefix": [2, 1]},
                "uLine": {"prefix": [0]},
                "uMeasures": {"prefix": ["-3", "1"]},
            }
        )
        with pytest.raises(DocumentError) as excinfo:
            parse_document(text)
        assert len(excinfo.value.errors) >= 3


class TestRoundTrip:
    def corpus(self) -> list[str]:
        return [
            passport_doc(passport_body("1")),
            passport_doc(passport_body("2", prefix=["7/3", "1"])),
            passport_doc(
                {
                    "sLine": {"prefix": [0], "tail": {"b0": 1, "b1": 2}},
                    "uLine": {"prefix": [3]},
                    "uMeasures": {"prefix": ["1/7"]},
                }
            ),
            algebra_doc(
                [
                    {"n": 2, "center": passport_body("1")},
                    {"n": 3, "center": passport_body("2")},
                ]
            ),
            cell_model_doc(
                prefix_cells=[("1/2", "3"), ("0.125", "1/7")],
                tail_mass={"c": "1", "p": "0", "q": "1/2"},
                tail_h={"c": "2/3", "p": "1", "q": "1"},
                elements={
                    "f": {
                        "type": "scalar-step",
                        "cells": [{"mass": 0.1, "value": [3.5, -2.25]}],
                    },
                    "G": {
                        "type": "matrix-step",
                        "n": 2,
                        "cells": [
                            {
                                "mass": 1.75,
                                "value": [[0.1, 0.2], [0, 0], [1, -1], [2.5, 0]],
                            }
                        ],
                    },
                },
            ),
        ]

    def test_parse_serialize_parse_is_identity(self):
        for text in self.corpus():
            doc = parse_document(text)
            assert parse_document(serialize_document(doc)) == doc

    def test_serialization_is_stable(self):
        for text in self.corpus():
            doc = parse_document(text)
            once = serialize_document(doc)
            assert serialize_document(parse_document(once)) == once

    def test_document_equality_semantics(self):
        text = self.corpus()[4]
        assert parse_document(text) == parse_document(text)
        other = parse_document(self.corpus()[0])
        assert parse_document(text) != other


class TestReportSerializer:
    def test_float_formatting(self):
        from logalg.reports import dumps_report

        assert dumps_report(0.1) == "0.10000000000000001"
        assert dumps_report(1.0) == "1"
        assert dumps_report(float("inf")) == '"Infinity"'
        assert dumps_report(float("-inf")) == '"-Infinity"'
        assert dumps_report(float("nan")) == '"NaN"'

    def test_fraction_and_structure(self):
        from logalg.reports import dumps_report

        report = {"a": F(1, 3), "b": [1, True, None], "c": {"nested": 2.5}}
        rendered = dumps_report(report)
        assert '"1/3"' in rendered
        assert "true" in rendered
        assert "null" in rendered
        assert rendered == dumps_report(report)
