"""Measure-side foundations: cardinal weights, closed-form sequences, passports.

The countable models used throughout the package are built from a small,
exactly-decidable family of positive sequences: a finite rational prefix
followed by an optional tail whose value at tail position m is a sum of
terms c * m^p * q^m with rational c, p, q.  Within this family boundedness
of a sequence and of a pointwise ratio of two sequences is decided exactly
(no floating point in the decision), which is what the passport-comparison
and trace-comparison procedures require.

Single-term tails are the external interface; sums of terms arise
internally when passports are merged (measures of equal-weight components
add, and a sum of two closed forms is generally not a single closed form).
"""

from __future__ import annotations

import math
from bisect import insort
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import InputError, NumericRangeError, UnsupportedMergeError

Rational = Union[int, Fraction]

#: Ratio value a witness index must exceed to certify unboundedness.
WITNESS_THRESHOLD = 10**6
#: Doubling-search budget: indices 2^0 .. 2^63.
MAX_DOUBLINGS = 64

_LOG_THRESHOLD = math.log(WITNESS_THRESHOLD)


def _as_fraction(x: Rational, what: str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise InputError(f"{what} must be a rational (int or Fraction), got {type(x).__name__}")


def safe_float(x: Union[Fraction, int, float]) -> float:
    """Convert to double, mapping out-of-range magnitudes to +/-inf."""
    if isinstance(x, float):
        return x
    try:
        return float(x)
    except OverflowError:
        return math.inf if x > 0 else -math.inf


# ---------------------------------------------------------------------------
# Cardinals
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Cardinal:
    """An infinite cardinal, represented by its aleph index (k stands for aleph_k)."""

    aleph_index: int

    def __post_init__(self):
        if not isinstance(self.aleph_index, int):
            raise InputError("aleph index must be an integer")

    def __str__(self) -> str:
        return f"aleph_{self.aleph_index}"


# ---------------------------------------------------------------------------
# Closed forms c * n^p * q^n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedForm:
    """The sequence n |-> c * n^p * q^n for n >= 1, with rational c > 0, q > 0."""

    c: Fraction
    p: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", _as_fraction(self.c, "coefficient c"))
        object.__setattr__(self, "p", _as_fraction(self.p, "exponent p"))
        object.__setattr__(self, "q", _as_fraction(self.q, "base q"))
        if self.c <= 0:
            raise InputError("closed form requires c > 0")
        if self.q <= 0:
            raise InputError("closed form requires q > 0")


def closed_form_value_exact(form: ClosedForm, n: int) -> Optional[Fraction]:
    """Exact value when it stays rational: p a non-negative integer, or n = 1."""
    if n < 1:
        raise InputError("closed form index must be >= 1")
    if n == 1:
        return form.c * form.q
    if form.p.denominator == 1 and form.p >= 0:
        return form.c * Fraction(n) ** int(form.p) * form.q**n
    return None


def closed_form_log(form: ClosedForm, n: int) -> float:
    """log of the value, computed without overflow."""
    if n < 1:
        raise InputError("closed form index must be >= 1")
    return math.log(form.c) + float(form.p) * math.log(n) + n * math.log(form.q)


def eval_closed_form(form: ClosedForm, n: int) -> float:
    """Value at n as a double; exact-rational path when p is a non-negative integer.

    Raises NumericRangeError instead of returning an infinity.
    """
    exact = closed_form_value_exact(form, n)
    if exact is not None:
        value = safe_float(exact)
    else:
        log_value = closed_form_log(form, n)
        value = math.exp(log_value) if log_value < 709.0 else math.inf
    if math.isinf(value):
        raise NumericRangeError(f"closed form value at n={n} exceeds the double range")
    return value


def closed_form_bounded(form: ClosedForm) -> bool:
    """Exact decision of sup_n c*n^p*q^n < infinity: q < 1, or q = 1 and p <= 0."""
    return form.q < 1 or (form.q == 1 and form.p <= 0)


def closed_form_turning_index(form: ClosedForm) -> int:
    """For a bounded form, an index past which the sequence is non-increasing.

    q < 1 with p > 0 peaks near p / ln(1/q); otherwise the maximum is at n = 1.
    """
    if form.q == 1 or form.p <= 0:
        return 1
    turn = float(form.p) / math.log(1.0 / float(form.q))
    return max(1, math.ceil(turn) + 1)


def closed_form_sup(form: ClosedForm) -> float:
    """Supremum of a bounded form, as a double."""
    if not closed_form_bounded(form):
        raise InputError("closed form is unbounded")
    top = closed_form_turning_index(form)
    return max(eval_closed_form(form, n) for n in range(1, top + 1))


def reciprocal_form(form: ClosedForm) -> ClosedForm:
    """The closed form of n |-> 1 / value(n): (1/c, -p, 1/q)."""
    return ClosedForm(1 / form.c, -form.p, 1 / form.q)


# --- sums of closed forms (internal tail representation) -------------------


def _combine_terms(terms: Iterable[ClosedForm]) -> tuple[ClosedForm, ...]:
    by_shape: dict[tuple[Fraction, Fraction], Fraction] = {}
    for t in terms:
        key = (t.q, t.p)
        by_shape[key] = by_shape.get(key, Fraction(0)) + t.c
    combined = [ClosedForm(c, p, q) for (q, p), c in by_shape.items() if c > 0]
    combined.sort(key=lambda t: (t.q, t.p, t.c))
    return tuple(combined)


def _dominant_shape(terms: Sequence[ClosedForm]) -> tuple[Fraction, Fraction]:
    """(q, p) of the asymptotically dominant term of a positive sum."""
    return max((t.q, t.p) for t in terms)


def _terms_value_exact(terms: Sequence[ClosedForm], m: int) -> Optional[Fraction]:
    total = Fraction(0)
    for t in terms:
        v = closed_form_value_exact(t, m)
        if v is None:
            return None
        total += v
    return total


def _terms_value_log(terms: Sequence[ClosedForm], m: int) -> float:
    logs = [closed_form_log(t, m) for t in terms]
    top = max(logs)
    if math.isinf(top):
        return top
    return top + math.log(sum(math.exp(l - top) for l in logs))


def _shift_terms(terms: Sequence[ClosedForm], shift: int) -> tuple[ClosedForm, ...]:
    """Re-anchor a tail: value'(m) = value(m + shift), for shift >= 0.

    c*(m+s)^p*q^(m+s) expands into a sum of closed forms in m when p is a
    non-negative integer (binomial theorem); other exponents are outside the
    representable family.
    """
    if shift == 0:
        return _combine_terms(terms)
    out: list[ClosedForm] = []
    for t in terms:
        if not (t.p.denominator == 1 and t.p >= 0):
            raise UnsupportedMergeError(
                "tail re-anchoring requires non-negative integer exponents"
            )
        p = int(t.p)
        base = t.c * t.q**shift
        for j in range(p + 1):
            coeff = base * math.comb(p, j) * Fraction(shift) ** (p - j)
            out.append(ClosedForm(coeff, Fraction(j), t.q))
    return _combine_terms(out)


# ---------------------------------------------------------------------------
# Sequence specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeqSpec:
    """Positive sequence: rational prefix, then an optional closed-form tail.

    Value at 1-based index i:
      prefix[i-1]                      for i <= len(prefix)
      sum of tail terms at m           for i = len(prefix) + m, m >= 1
    An empty tail denotes a finite sequence.
    """

    prefix: tuple[Fraction, ...] = ()
    tail: tuple[ClosedForm, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "prefix", tuple(_as_fraction(x, "prefix entry") for x in self.prefix)
        )
        object.__setattr__(self, "tail", tuple(self.tail))

    @classmethod
    def of(
        cls,
        prefix: Sequence[Rational] = (),
        tail: Union[ClosedForm, Sequence[ClosedForm], None] = None,
    ) -> "SeqSpec":
        if tail is None:
            terms: tuple[ClosedForm, ...] = ()
        elif isinstance(tail, ClosedForm):
            terms = (tail,)
        else:
            terms = tuple(tail)
        return cls(tuple(Fraction(x) for x in prefix), terms)

    @property
    def is_infinite(self) -> bool:
        return bool(self.tail)

    def length(self) -> Optional[int]:
        """Number of entries for a finite sequence, None when infinite."""
        return None if self.is_infinite else len(self.prefix)

    def value_exact(self, i: int) -> Optional[Fraction]:
        if i < 1:
            raise InputError("sequence index must be >= 1")
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        if not self.tail:
            raise InputError(f"index {i} beyond the end of a finite sequence")
        return _terms_value_exact(self.tail, i - len(self.prefix))

    def value_float(self, i: int) -> float:
        exact = self.value_exact(i)
        if exact is not None:
            return safe_float(exact)
        m = i - len(self.prefix)
        return sum(math.exp(closed_form_log(t, m)) for t in self.tail)

    def value_log(self, i: int) -> float:
        if i < 1:
            raise InputError("sequence index must be >= 1")
        if i <= len(self.prefix):
            return math.log(safe_float(self.prefix[i - 1]))
        if not self.tail:
            raise InputError(f"index {i} beyond the end of a finite sequence")
        return _terms_value_log(self.tail, i - len(self.prefix))

    def canonical(self) -> "SeqSpec":
        return SeqSpec(self.prefix, _combine_terms(self.tail)) if self.tail else self


@dataclass(frozen=True)
class RatioDecision:
    """Outcome of a boundedness question with an optional unboundedness witness."""

    bounded: bool
    witness_index: Optional[int] = None


def _witness_by_doubling(log_ratio, max_doublings: int = MAX_DOUBLINGS) -> Optional[int]:
    n = 1
    for _ in range(max_doublings):
        if log_ratio(n) > _LOG_THRESHOLD:
            return n
        n *= 2
    return None


def ratio_bounded(a: SeqSpec, b: SeqSpec) -> RatioDecision:
    """Exact decision of sup_i a(i)/b(i) < infinity for same-length-class sequences.

    Finite sequences always give a bounded ratio.  Infinite sequences are
    compared via the dominant tail shapes: with tails ~ c*m^p*q^m the ratio is
    bounded iff q_a < q_b, or q_a = q_b and p_a <= p_b.  When unbounded, a
    doubling search reports an index where the ratio exceeds 10^6 (it may give
    up after 64 doublings; the verdict is analytic and stands regardless).
    """
    if a.is_infinite != b.is_infinite:
        raise InputError("ratio of sequences with different length classes")
    if not a.is_infinite:
        if len(a.prefix) != len(b.prefix):
            raise InputError("ratio of finite sequences of different lengths")
        return RatioDecision(bounded=True)
    qa, pa = _dominant_shape(a.tail)
    qb, pb = _dominant_shape(b.tail)
    if qa < qb or (qa == qb and pa <= pb):
        return RatioDecision(bounded=True)
    witness = _witness_by_doubling(lambda i: a.value_log(i) - b.value_log(i))
    return RatioDecision(bounded=False, witness_index=witness)


# ---------------------------------------------------------------------------
# Passport lines and passports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineTail:
    """Weights at tail positions m >= 1 are the aleph indices b0 + b1*m."""

    b0: int
    b1: int

    def weight(self, m: int) -> int:
        return self.b0 + self.b1 * m

    def contains(self, w: int) -> bool:
        return w >= self.b0 + self.b1 and (w - self.b0) % self.b1 == 0

    def position(self, w: int) -> int:
        return (w - self.b0) // self.b1


@dataclass(frozen=True)
class PassportLine:
    """Strictly increasing line of cardinal weights: finite prefix + affine tail."""

    prefix: tuple[Cardinal, ...] = ()
    tail: Optional[AffineTail] = None

    @classmethod
    def of(cls, indices: Sequence[int], tail: Optional[AffineTail] = None) -> "PassportLine":
        return cls(tuple(Cardinal(i) for i in indices), tail)

    @property
    def is_infinite(self) -> bool:
        return self.tail is not None

    def length(self) -> Optional[int]:
        return None if self.tail else len(self.prefix)

    def canonical(self) -> "PassportLine":
        """Minimal-prefix representation: prefix entries extending the arithmetic
        progression of the tail are absorbed into it."""
        if self.tail is None:
            return self
        prefix = list(self.prefix)
        b0, b1 = self.tail.b0, self.tail.b1
        while prefix and prefix[-1].aleph_index == b0:
            b0 -= b1
            prefix.pop()
        return PassportLine(tuple(prefix), AffineTail(b0, b1))

    def equivalent_to(self, other: "PassportLine") -> bool:
        """Equality as weight sequences (representation-independent)."""
        return self.canonical() == other.canonical()


@dataclass(frozen=True)
class Passport:
    """Three-line invariant of a nonatomic sigma-finite Boolean measure algebra.

    s_line: weights of the infinite-measure homogeneous components;
    u_line: weights of the finite-measure components;
    u_measures: the finite measures, aligned index-by-index with u_line.
    """

    s_line: PassportLine
    u_line: PassportLine
    u_measures: SeqSpec


@dataclass(frozen=True)
class Violation:
    path: str
    message: str


def _validate_line(line: PassportLine, path: str, out: list[Violation]) -> None:
    indices = [c.aleph_index for c in line.prefix]
    for k, idx in enumerate(indices):
        if idx < 0:
            out.append(Violation(f"{path}/prefix/{k}", "aleph index must be >= 0"))
    for k in range(1, len(indices)):
        if indices[k] <= indices[k - 1]:
            out.append(Violation(path, f"{path.rsplit('/', 1)[-1]} not strictly increasing"))
            break
    if line.tail is not None:
        if line.tail.b1 < 1:
            out.append(Violation(f"{path}/tail", "tail step b1 must be >= 1"))
        else:
            first = line.tail.weight(1)
            if first < 0:
                out.append(Violation(f"{path}/tail", "tail weights must be >= 0"))
            if indices and indices[-1] >= first:
                out.append(
                    Violation(path, f"{path.rsplit('/', 1)[-1]} not strictly increasing")
                )


def validate_passport(p: Passport) -> list[Violation]:
    """Report every violated passport invariant; an empty list means valid.

    Validation never raises: malformed passports are data to be reported.
    """
    out: list[Violation] = []
    _validate_line(p.s_line, "/sLine", out)
    _validate_line(p.u_line, "/uLine", out)
    line_len = p.u_line.length()
    meas_len = p.u_measures.length()
    if (line_len is None) != (meas_len is None) or (
        line_len is not None and line_len != meas_len
    ):
        out.append(Violation("/uMeasures", "length mismatch"))
    for k, value in enumerate(p.u_measures.prefix):
        if value <= 0:
            out.append(Violation(f"/uMeasures/prefix/{k}", "measure must be > 0"))
    return out


# ---------------------------------------------------------------------------
# Passport merge
# ---------------------------------------------------------------------------


@dataclass
class _SeqView:
    """Infinite positive sequence over positions m >= 1: materialized head
    values followed by closed-form terms anchored after the head."""

    head: list[Fraction]
    terms: tuple[ClosedForm, ...]

    def value_exact(self, m: int) -> Fraction:
        if m <= len(self.head):
            return self.head[m - 1]
        v = _terms_value_exact(self.terms, m - len(self.head))
        if v is None:
            raise UnsupportedMergeError(
                "merge requires exactly evaluable measure tails"
            )
        return v

    def reanchored(self, anchor: int) -> "_SeqView":
        """Equivalent view whose head has exactly ``anchor`` entries."""
        if anchor < len(self.head):
            raise InputError("cannot shorten a materialized head")
        head = list(self.head)
        old = len(self.head)
        for m in range(old + 1, anchor + 1):
            head.append(self.value_exact(m))
        return _SeqView(head, _shift_terms(self.terms, anchor - old))

    def dropped(self, count: int) -> "_SeqView":
        """View of positions m > count, re-indexed to start at 1."""
        if count <= len(self.head):
            return _SeqView(self.head[count:], self.terms)
        return _SeqView([], _shift_terms(self.terms, count - len(self.head)))


def _view_of_measures(measures: SeqSpec, line_prefix_len: int) -> _SeqView:
    """Measures of the u-tail components: position m holds the measure of the
    component at line-tail position m (global index line_prefix_len + m)."""
    q = len(measures.prefix)
    if q >= line_prefix_len:
        return _SeqView(list(measures.prefix[line_prefix_len:]), measures.tail)
    return _SeqView([], _shift_terms(measures.tail, line_prefix_len - q))


def _add_views(a: _SeqView, b: _SeqView) -> _SeqView:
    anchor = max(len(a.head), len(b.head))
    a2, b2 = a.reanchored(anchor), b.reanchored(anchor)
    head = [x + y for x, y in zip(a2.head, b2.head)]
    return _SeqView(head, _combine_terms(a2.terms + b2.terms))


def _progressions_intersect(a: AffineTail, b: AffineTail) -> bool:
    # b0 + b1*m = c0 + c1*m' has integer solutions iff gcd(b1, c1) | (c0 - b0),
    # and then arbitrarily large ones, so some with m, m' >= 1.
    return (b.b0 - a.b0) % math.gcd(a.b1, b.b1) == 0


def merge_passports(passports: Sequence[Passport]) -> Passport:
    """Passport of a direct sum: same-weight components merge, measures add.

    A merged component containing an infinite-measure part is infinite
    (lands in the s-line).  Infinite tails merge only when their affine
    index forms agree; anything outside the representable family raises
    UnsupportedMergeError.
    """
    if not passports:
        raise InputError("mergePassports requires a non-empty list")
    for p in passports:
        problems = validate_passport(p)
        if problems:
            raise InputError(f"cannot merge invalid passport: {problems[0].message}")
    if len(passports) == 1:
        return passports[0]

    finite_s: set[int] = set()
    finite_u: dict[int, Fraction] = {}
    s_forms: list[AffineTail] = []
    u_forms: list[AffineTail] = []
    u_views: list[_SeqView] = []

    for p in passports:
        s_line = p.s_line.canonical()
        u_line = p.u_line.canonical()
        finite_s.update(c.aleph_index for c in s_line.prefix)
        if s_line.tail is not None:
            s_forms.append(s_line.tail)
        for i, c in enumerate(u_line.prefix):
            value = p.u_measures.value_exact(i + 1)
            if value is None:
                raise UnsupportedMergeError("merge requires exactly evaluable measures")
            finite_u[c.aleph_index] = finite_u.get(c.aleph_index, Fraction(0)) + value
        if u_line.tail is not None:
            u_forms.append(u_line.tail)
            u_views.append(_view_of_measures(p.u_measures, len(u_line.prefix)))

    s_form: Optional[AffineTail] = None
    if s_forms:
        if any(f != s_forms[0] for f in s_forms):
            raise UnsupportedMergeError("s-line tails are not index-aligned")
        s_form = s_forms[0]
    u_form: Optional[AffineTail] = None
    u_view: Optional[_SeqView] = None
    if u_forms:
        if any(f != u_forms[0] for f in u_forms):
            raise UnsupportedMergeError("u-line tails are not index-aligned")
        u_form = u_forms[0]
        view = u_views[0]
        for other in u_views[1:]:
            view = _add_views(view, other)
        u_view = view
    if s_form is not None and u_form is not None and _progressions_intersect(s_form, u_form):
        raise UnsupportedMergeError("s-line and u-line tails overlap in weight")

    def in_s(w: int) -> bool:
        return w in finite_s or (s_form is not None and s_form.contains(w))

    # u components absorbed by an equal-weight infinite component
    finite_u = {w: v for w, v in finite_u.items() if not in_s(w)}

    if u_form is not None:
        # materialize enough of the u tail that every finite weight (u side)
        # and every s weight hitting the progression sits in front of it
        t = 0
        for w in finite_u:
            if w >= u_form.weight(1):
                t = max(t, (w - u_form.b0) // u_form.b1)
        for w in finite_s:
            if u_form.contains(w):
                t = max(t, u_form.position(w))
        assert u_view is not None
        for m in range(1, t + 1):
            w = u_form.weight(m)
            if in_s(w):
                continue  # absorbed: the component is infinite
            finite_u[w] = finite_u.get(w, Fraction(0)) + u_view.value_exact(m)
        u_view = u_view.dropped(t)
        u_form = AffineTail(u_form.b0 + u_form.b1 * t, u_form.b1)

    # s-line prefix: drop weights already covered by the s tail
    s_prefix = sorted(w for w in finite_s if s_form is None or not s_form.contains(w))
    u_items = sorted(finite_u.items())
    u_prefix = [w for w, _ in u_items]
    u_meas_prefix = [v for _, v in u_items]
    if u_form is not None:
        assert u_view is not None
        measures = SeqSpec(
            tuple(u_meas_prefix) + tuple(u_view.head), _combine_terms(u_view.terms)
        )
    else:
        measures = SeqSpec(tuple(u_meas_prefix), ())

    merged = Passport(
        s_line=PassportLine.of(s_prefix, s_form).canonical(),
        u_line=PassportLine.of(u_prefix, u_form).canonical(),
        u_measures=measures.canonical(),
    )
    return merged


# ---------------------------------------------------------------------------
# Countable cell models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CellModel:
    """Countable measure model: cell i has mass mu(i) and density value h(i).

    A finite list of (mass, h) cells, optionally followed by closed-form
    tails for both quantities (both tails present or both absent).  Masses
    represent mu cell-by-cell and h the Radon-Nikodym density dnu/dmu.
    """

    prefix_cells: tuple[tuple[Fraction, Fraction], ...] = ()
    tail_mass: Optional[ClosedForm] = None
    tail_h: Optional[ClosedForm] = None

    def __post_init__(self):
        cells = tuple(
            (_as_fraction(m, "cell mass"), _as_fraction(h, "cell h")) for m, h in self.prefix_cells
        )
        object.__setattr__(self, "prefix_cells", cells)
        if (self.tail_mass is None) != (self.tail_h is None):
            raise InputError("tailMass and tailH must both be present or both absent")
        for mass, h in cells:
            if mass <= 0:
                raise InputError("cell masses must be > 0")
            if h <= 0:
                raise InputError("cell h values must be > 0")

    @property
    def has_tail(self) -> bool:
        return self.tail_mass is not None

    @property
    def prefix_len(self) -> int:
        return len(self.prefix_cells)

    def mass_at(self, i: int) -> Union[Fraction, float]:
        """Mass of cell i (1-based); exact when the tail admits a rational path."""
        return self._value_at(i, 0, self.tail_mass)

    def h_at(self, i: int) -> Union[Fraction, float]:
        return self._value_at(i, 1, self.tail_h)

    def _value_at(self, i: int, slot: int, form: Optional[ClosedForm]):
        if i < 1:
            raise InputError("cell index must be >= 1")
        if i <= len(self.prefix_cells):
            return self.prefix_cells[i - 1][slot]
        if form is None:
            raise InputError(f"cell index {i} beyond the end of a finite model")
        m = i - len(self.prefix_cells)
        exact = closed_form_value_exact(form, m)
        return exact if exact is not None else eval_closed_form(form, m)
