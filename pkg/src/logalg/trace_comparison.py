"""Radon-Nikodym analysis on cell models.

Given a countable model carrying masses mu(i) and a positive density h(i)
(so that the second trace is nu(x) = mu(h x)), inclusion of the log-algebra
for mu into the one for nu holds exactly when h is essentially bounded, and
the two coincide when both h and 1/h are.  When h is unbounded the failure
is witnessed constructively: cells are grouped by floor(h) = n, the first K
nonempty groups receive the value g_k = 1 / (k^2 * group mass), and the
function f = e^g - 1 has a finite mu-integral of log(1 + f) (a partial sum
of 1/k^2) while the nu-integral dominates the harmonic series.
"""

from __future__ import annotations

import math
from bisect import insort
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Union

from .errors import InputError, NumericError
from .measure import (
    CellModel,
    ClosedForm,
    closed_form_bounded,
    closed_form_log,
    closed_form_sup,
    closed_form_value_exact,
    reciprocal_form,
    safe_float,
    MAX_DOUBLINGS,
    WITNESS_THRESHOLD,
)
from .rearrangement import StepFunction

Direction = Literal["mu-in-nu", "nu-in-mu"]
Side = Literal["forward", "inverse"]

#: scan budget for the counterexample construction
MAX_GROUP_INDEX = 10**7
MAX_CELLS_SCANNED = 10**7

CERT_TOL = 1e-9
PI2_OVER_6 = math.pi**2 / 6.0


@dataclass(frozen=True)
class TracePair:
    """A pair of faithful traces on a cell model: mu from the masses and
    nu(x) = mu(hx) from the density column."""

    model: CellModel

    def inverted(self) -> "TracePair":
        """The pair with the roles of mu and nu swapped (h replaced by 1/h)."""
        cells = tuple((m, 1 / h) for m, h in self.model.prefix_cells)
        tail_h = (
            reciprocal_form(self.model.tail_h) if self.model.tail_h is not None else None
        )
        return TracePair(
            CellModel(cells, tail_mass=self.model.tail_mass, tail_h=tail_h)
        )


@dataclass(frozen=True)
class BoundDecision:
    bounded: bool
    bound: Optional[float] = None
    witness_cell: Optional[int] = None


@dataclass(frozen=True)
class Verdict:
    holds: bool
    reason: dict


def _density_form(model: CellModel, side: Side) -> Optional[ClosedForm]:
    if model.tail_h is None:
        return None
    return model.tail_h if side == "forward" else reciprocal_form(model.tail_h)


def essentially_bounded(tp: TracePair, side: Side) -> BoundDecision:
    """Decide sup h < inf (forward) or sup 1/h < inf (inverse), exactly.

    The decision is exact over the prefix-plus-closed-form model class; the
    reported bound is a double.  An unbounded verdict carries a witness cell
    index where the density exceeds 10^6 (found by doubling over the tail).
    """
    if side not in ("forward", "inverse"):
        raise InputError(f"unknown side: {side!r}")
    model = tp.model
    prefix_values = [h if side == "forward" else 1 / h for _, h in model.prefix_cells]
    form = _density_form(model, side)

    if form is None or closed_form_bounded(form):
        candidates = [safe_float(v) for v in prefix_values]
        if form is not None:
            candidates.append(closed_form_sup(form))
        bound = max(candidates) if candidates else 0.0
        return BoundDecision(bounded=True, bound=bound)

    log_threshold = math.log(WITNESS_THRESHOLD)
    witness = None
    m = 1
    for _ in range(MAX_DOUBLINGS):
        if closed_form_log(form, m) > log_threshold:
            witness = model.prefix_len + m
            break
        m *= 2
    return BoundDecision(bounded=False, witness_cell=witness)


def decide_inclusion(tp: TracePair, direction: Direction) -> Verdict:
    """L_log inclusion between the mu- and nu-algebras of the model.

    mu-in-nu holds iff h is essentially bounded; nu-in-mu iff 1/h is.
    """
    if direction not in ("mu-in-nu", "nu-in-mu"):
        raise InputError(f"unknown direction: {direction!r}")
    side: Side = "forward" if direction == "mu-in-nu" else "inverse"
    decision = essentially_bounded(tp, side)
    which = "h" if side == "forward" else "1/h"
    if decision.bounded:
        reason = {"summary": f"{which} bounded", "bound": decision.bound}
    else:
        reason = {"summary": f"{which} unbounded", "witnessCell": decision.witness_cell}
    return Verdict(holds=decision.bounded, reason=reason)


def decide_coincidence(tp: TracePair) -> Verdict:
    """The two log-algebras coincide iff both inclusions hold."""
    forward = decide_inclusion(tp, "mu-in-nu")
    inverse = decide_inclusion(tp, "nu-in-mu")
    return Verdict(
        holds=forward.holds and inverse.holds,
        reason={"mu-in-nu": forward.reason, "nu-in-mu": inverse.reason},
    )


# ---------------------------------------------------------------------------
# Counterexample construction
# ---------------------------------------------------------------------------

Number = Union[Fraction, float]


@dataclass(frozen=True)
class CounterexampleGroup:
    """Cells with floor(h) = n, collectively carrying the value e^g - 1."""

    n: int
    cells: tuple[int, ...]
    mass: Number
    g: Number

    @property
    def g_float(self) -> float:
        return safe_float(self.g)

    @property
    def f_float(self) -> float:
        g = self.g_float
        return math.expm1(g) if g < 709.0 else math.inf


@dataclass(frozen=True)
class Counterexample:
    """The truncated witness function from the unboundedness construction."""

    groups: tuple[CounterexampleGroup, ...]

    def to_step_function(self) -> StepFunction:
        """f restricted to the retained groups, as a plain step function.

        Group values e^g - 1 overflow to inf for large g; use the log-domain
        certificate for large truncations.
        """
        return StepFunction(
            tuple((safe_float(gr.mass), complex(gr.f_float)) for gr in self.groups)
        )


@dataclass(frozen=True)
class DivergenceCertificate:
    """Partial sums certifying mu-integrability and nu-divergence of f.

    mu_partial is the mu-integral of log(1+f) over the retained groups
    (equal to the partial sum of 1/k^2, verified both ways); nu_partial_lower
    is the lower bound sum of n_k/k^2 for the nu-integral, which dominates
    the harmonic partial sum since n_k >= k.
    """

    k_terms: int
    mu_partial: float
    nu_partial_lower: float
    nu_partial_upper: float
    harmonic_lower: float


def _tail_monotone_start(form: ClosedForm) -> int:
    """First tail index from which an unbounded closed form is non-decreasing."""
    if form.q == 1:
        return 1  # p > 0: increasing everywhere
    # q > 1: derivative of the log is p/m + ln q, positive once m > -p/ln q
    if form.p >= 0:
        return 1
    return max(1, math.floor(-float(form.p) / math.log(float(form.q))) + 1)


def build_counterexample(tp: TracePair, k_terms: int) -> Counterexample:
    """Group cells by floor(h) and retain the first k_terms nonempty groups.

    Requires h essentially unbounded.  Cells with h < 1 never enter; a cell
    with h exactly on a boundary joins the lower group (floor).  Fails with
    an "insufficient groups" error when fewer than k_terms nonempty groups
    are found among group indices and cells up to 10^7.
    """
    if k_terms < 1:
        raise InputError("the number of retained groups must be >= 1")
    if essentially_bounded(tp, "forward").bounded:
        raise InputError(
            "h is essentially bounded: the inclusion holds and no counterexample exists"
        )
    model = tp.model

    masses: dict[int, Number] = {}
    cells: dict[int, list[int]] = {}
    pending: list[int] = []  # nonempty groups not yet known to be complete, sorted

    def add_cell(index: int, n: int, mass: Number) -> None:
        if n < 1:
            return
        if n in masses:
            masses[n] = masses[n] + mass
            cells[n].append(index)
        else:
            masses[n] = mass
            cells[n] = [index]
            insort(pending, n)

    for i in range(1, model.prefix_len + 1):
        add_cell(i, math.floor(model.h_at(i)), model.mass_at(i))

    # the tail is present and unbounded (otherwise h would be bounded)
    assert model.tail_h is not None
    monotone_from = _tail_monotone_start(model.tail_h)

    closed: list[int] = []
    m = 0
    while len(closed) < k_terms and m < MAX_CELLS_SCANNED:
        m += 1
        h = model.h_at(model.prefix_len + m)
        n = math.floor(h)
        if n > 0:
            add_cell(model.prefix_len + m, n, model.mass_at(model.prefix_len + m))
        if m >= monotone_from:
            # h is non-decreasing from here on: groups strictly below h are final
            limit = min(n - 1, MAX_GROUP_INDEX)
            while pending and pending[0] <= limit:
                closed.append(pending.pop(0))
            if n - 1 >= MAX_GROUP_INDEX:
                break

    if len(closed) < k_terms:
        raise InputError(
            f"insufficient groups: only {len(closed)} nonempty groups found "
            f"within the scan budget, {k_terms} requested"
        )

    groups = []
    for k, n in enumerate(closed[:k_terms], start=1):
        mass = masses[n]
        if isinstance(mass, Fraction):
            g: Number = 1 / (Fraction(k * k) * mass)
        else:
            if mass <= 0.0 or not math.isfinite(mass):
                raise NumericError(f"group {n} mass degenerated to {mass!r}")
            g = 1.0 / (k * k * mass)
            if not math.isfinite(g):
                raise NumericError(f"group value 1/(k^2 mass) overflowed at k={k}")
        groups.append(
            CounterexampleGroup(n=n, cells=tuple(cells[n]), mass=mass, g=g)
        )
    return Counterexample(groups=tuple(groups))


def certify_divergence(ce: Counterexample, tp: TracePair) -> DivergenceCertificate:
    """Certificate for the built counterexample.

    mu_partial is computed two ways -- through the group masses and values
    (mass_k * log(1 + f_k), with log(1 + e^g - 1) = g identically) and as the
    series sum of 1/k^2 -- and the two must agree within 1e-9.  The
    nu-integral is certified by its lower bound sum of n_k/k^2 (h >= n_k on
    group k); the upper estimate sum of (n_k + 1)/k^2 is reported as well.
    """
    if not ce.groups:
        raise InputError("certificate requires at least one group")

    mu_from_masses = 0.0
    mu_from_series = 0.0
    nu_lower = 0.0
    nu_upper = 0.0
    harmonic = 0.0
    for k, gr in enumerate(ce.groups, start=1):
        if isinstance(gr.mass, Fraction) and isinstance(gr.g, Fraction):
            term = float(gr.mass * gr.g)
        else:
            term = safe_float(gr.mass) * safe_float(gr.g)
        if not math.isfinite(term):
            raise NumericError(f"non-finite mu term at k={k}")
        mu_from_masses += term
        mu_from_series += 1.0 / (k * k)
        nu_lower += gr.n / (k * k)
        nu_upper += (gr.n + 1) / (k * k)
        harmonic += 1.0 / k

    if abs(mu_from_masses - mu_from_series) > CERT_TOL:
        raise NumericError(
            f"mu-partial mismatch: {mu_from_masses!r} via masses vs "
            f"{mu_from_series!r} via the series"
        )
    if mu_from_masses > PI2_OVER_6 + CERT_TOL:
        raise NumericError("mu-partial exceeds pi^2/6")
    if nu_lower < harmonic - CERT_TOL:
        raise NumericError("nu lower bound fell below the harmonic sum")

    return DivergenceCertificate(
        k_terms=len(ce.groups),
        mu_partial=mu_from_masses,
        nu_partial_lower=nu_lower,
        nu_partial_upper=nu_upper,
        harmonic_lower=harmonic,
    )
