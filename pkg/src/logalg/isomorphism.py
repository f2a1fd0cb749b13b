"""Isomorphism decisions for log-algebras over the representable class.

The representable algebras are finite direct sums of blocks, each a
commutative center (described by its passport) tensored with the n x n
matrices.  Two commutative algebras are isomorphic exactly when their
passports have identical first and second lines and the two pointwise
ratios of their third lines are bounded; a single type-I_n block adds the
requirement that the matrix sizes agree; direct sums are isomorphic when
some block bijection matches every pair, and blocks of different matrix
size never match (automorphisms preserve the type-I_n summands).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InputError
from .measure import (
    Passport,
    RatioDecision,
    merge_passports,
    ratio_bounded,
    validate_passport,
)

MAX_BLOCKS = 12


@dataclass(frozen=True)
class Block:
    """A type-I_n summand: matrix size n over a commutative center passport."""

    n: int
    center: Passport

    def __post_init__(self):
        if self.n < 1:
            raise InputError("block matrix size must be >= 1")


@dataclass(frozen=True)
class AlgebraDescriptor:
    blocks: tuple[Block, ...]

    def __post_init__(self):
        if not self.blocks:
            raise InputError("algebra descriptor requires at least one block")


@dataclass(frozen=True)
class Obstruction:
    """Why two algebras fail to be isomorphic."""

    kind: str  # "line mismatch" | "ratio unbounded" | "size mismatch" | "no block matching"
    detail: dict

    def as_dict(self) -> dict:
        return {"kind": self.kind, **self.detail}


@dataclass(frozen=True)
class IsoVerdict:
    isomorphic: bool
    matching: Optional[tuple[tuple[int, int], ...]] = None
    obstruction: Optional[Obstruction] = None

    def __post_init__(self):
        if self.isomorphic and self.matching is None:
            raise InputError("an affirmative verdict must carry a matching")
        if not self.isomorphic and self.obstruction is None:
            raise InputError("a negative verdict must carry an obstruction")


def _require_valid(p: Passport, name: str) -> None:
    problems = validate_passport(p)
    if problems:
        raise InputError(f"{name} passport invalid: {problems[0].message}")


def decide_commutative(px: Passport, py: Passport) -> IsoVerdict:
    """Passport criterion for commutative log-algebra isomorphism.

    Isomorphic iff both weight lines coincide (as sequences) and the two
    pointwise ratios of the measure lines are bounded.  The obstruction
    names the first failing clause.
    """
    _require_valid(px, "left")
    _require_valid(py, "right")
    if not px.s_line.equivalent_to(py.s_line):
        return IsoVerdict(
            False, obstruction=Obstruction("line mismatch", {"line": "sLine"})
        )
    if not px.u_line.equivalent_to(py.u_line):
        return IsoVerdict(
            False, obstruction=Obstruction("line mismatch", {"line": "uLine"})
        )
    left_over_right = ratio_bounded(px.u_measures, py.u_measures)
    if not left_over_right.bounded:
        return IsoVerdict(
            False,
            obstruction=_ratio_obstruction("left-over-right", left_over_right),
        )
    right_over_left = ratio_bounded(py.u_measures, px.u_measures)
    if not right_over_left.bounded:
        return IsoVerdict(
            False,
            obstruction=_ratio_obstruction("right-over-left", right_over_left),
        )
    return IsoVerdict(True, matching=((0, 0),))


def _ratio_obstruction(direction: str, decision: RatioDecision) -> Obstruction:
    return Obstruction(
        "ratio unbounded",
        {"direction": direction, "witnessIndex": decision.witness_index},
    )


def decide_type_in(a: AlgebraDescriptor, b: AlgebraDescriptor) -> IsoVerdict:
    """Single type-I_n blocks: sizes must agree, then the centers decide."""
    if len(a.blocks) != 1 or len(b.blocks) != 1:
        raise InputError("decide_type_in expects single-block descriptors")
    ba, bb = a.blocks[0], b.blocks[0]
    if ba.n != bb.n:
        return IsoVerdict(
            False,
            obstruction=Obstruction("size mismatch", {"left": ba.n, "right": bb.n}),
        )
    return decide_commutative(ba.center, bb.center)


def _pair_verdict(a: Block, b: Block) -> IsoVerdict:
    if a.n != b.n:
        return IsoVerdict(
            False, obstruction=Obstruction("size mismatch", {"left": a.n, "right": b.n})
        )
    return decide_commutative(a.center, b.center)


def decide_direct_sum(a: AlgebraDescriptor, b: AlgebraDescriptor) -> IsoVerdict:
    """Search for a block bijection under which every matched pair is
    isomorphic; blocks of different matrix size never match.

    The search is exhaustive over size-compatible bijections and returns the
    lexicographically first successful matching (ordered by the left block
    index).  When the sizes force a unique candidate bijection and it fails,
    the obstruction of its first failing pair is surfaced; otherwise the
    obstruction is "no block matching".
    """
    if len(a.blocks) > MAX_BLOCKS or len(b.blocks) > MAX_BLOCKS:
        raise InputError(f"direct-sum search is capped at {MAX_BLOCKS} blocks")
    if len(a.blocks) != len(b.blocks):
        return IsoVerdict(
            False,
            obstruction=Obstruction(
                "no block matching",
                {"reason": "block count mismatch",
                 "left": len(a.blocks), "right": len(b.blocks)},
            ),
        )

    sizes_a = sorted(block.n for block in a.blocks)
    sizes_b = sorted(block.n for block in b.blocks)
    if sizes_a != sizes_b:
        return IsoVerdict(
            False,
            obstruction=Obstruction(
                "no block matching", {"reason": "matrix size multisets differ"}
            ),
        )

    candidates: list[list[int]] = [
        [j for j, bb in enumerate(b.blocks) if bb.n == ba.n] for ba in a.blocks
    ]
    forced = all(len(c) == 1 for c in candidates)

    # memoized pair compatibility
    compat: dict[tuple[int, int], IsoVerdict] = {}

    def pair(i: int, j: int) -> IsoVerdict:
        if (i, j) not in compat:
            compat[(i, j)] = _pair_verdict(a.blocks[i], b.blocks[j])
        return compat[(i, j)]

    used: set[int] = set()
    assignment: list[int] = []

    def extend(i: int) -> bool:
        if i == len(a.blocks):
            return True
        for j in candidates[i]:
            if j in used:
                continue
            if not pair(i, j).isomorphic:
                continue
            used.add(j)
            assignment.append(j)
            if extend(i + 1):
                return True
            used.remove(j)
            assignment.pop()
        return False

    if extend(0):
        matching = tuple((i, j) for i, j in enumerate(assignment))
        return IsoVerdict(True, matching=matching)

    if forced:
        for i, c in enumerate(candidates):
            verdict = pair(i, c[0])
            if not verdict.isomorphic:
                assert verdict.obstruction is not None
                detail = dict(verdict.obstruction.detail)
                detail["pair"] = [i, c[0]]
                return IsoVerdict(
                    False, obstruction=Obstruction(verdict.obstruction.kind, detail)
                )
    return IsoVerdict(
        False,
        obstruction=Obstruction(
            "no block matching", {"reason": "no size-compatible bijection matches"}
        ),
    )


def decide_center(a: AlgebraDescriptor, b: AlgebraDescriptor) -> IsoVerdict:
    """Isomorphism of the centers: merge the block center passports of each
    descriptor and compare the merged passports."""
    merged_a = merge_passports([block.center for block in a.blocks])
    merged_b = merge_passports([block.center for block in b.blocks])
    return decide_commutative(merged_a, merged_b)


def extension_exists(
    matching: Sequence[tuple[int, int]], a: AlgebraDescriptor, b: AlgebraDescriptor
) -> bool:
    """Whether a center-level matching extends to the full algebras: every
    matched pair must have equal matrix size."""
    left = [i for i, _ in matching]
    right = [j for _, j in matching]
    if sorted(left) != list(range(len(a.blocks))) or sorted(right) != list(
        range(len(b.blocks))
    ):
        raise InputError("matching must be a bijection between the block lists")
    return all(a.blocks[i].n == b.blocks[j].n for i, j in matching)
