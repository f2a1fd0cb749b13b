"""Shared fixtures: document builders and the concrete worked instances."""

from __future__ import annotations

import json

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    max_examples=50,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
)
settings.load_profile("ci")


INF_LINE = {"prefix": [], "tail": {"b0": 0, "b1": 1}}


def passport_body(measure_q: str, prefix=(), line=None) -> dict:
    """Passport with an infinite u-line and the measure tail c=1, p=0, q=measure_q."""
    return {
        "sLine": {"prefix": []},
        "uLine": line if line is not None else INF_LINE,
        "uMeasures": {"prefix": list(prefix), "tail": {"c": "1", "p": "0", "q": measure_q}},
    }


def passport_doc(body: dict) -> str:
    return json.dumps({"version": 1, "kind": "passport", "body": body})


def algebra_doc(blocks: list) -> str:
    return json.dumps({"version": 1, "kind": "algebra", "body": {"blocks": blocks}})


def cell_model_doc(
    prefix_cells=(), tail_mass=None, tail_h=None, elements=None
) -> str:
    body: dict = {"prefixCells": [{"mass": m, "h": h} for m, h in prefix_cells]}
    if tail_mass is not None:
        body["tailMass"] = tail_mass
        body["tailH"] = tail_h
    if elements:
        body["elements"] = elements
    return json.dumps({"version": 1, "kind": "cell-model", "body": body})


@pytest.fixture
def harmonic_model_text() -> str:
    """The divergence model: h(m) = m with masses 2^-m."""
    return cell_model_doc(
        tail_mass={"c": "1", "p": "0", "q": "1/2"},
        tail_h={"c": "1", "p": "1", "q": "1"},
    )


@pytest.fixture
def example1_docs() -> tuple[str, str]:
    """The two-block instance: same blocks, measure tails swapped on the right."""
    left = algebra_doc(
        [
            {"n": 2, "center": passport_body("1")},
            {"n": 3, "center": passport_body("2")},
        ]
    )
    right = algebra_doc(
        [
            {"n": 2, "center": passport_body("2")},
            {"n": 3, "center": passport_body("1")},
        ]
    )
    return left, right


def write(tmp_path, name: str, text: str) -> str:
    target = tmp_path / name
    target.write_text(text, encoding="utf-8")
    return str(target)
