import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logalg.errors import InputError, NumericRangeError, UnsupportedMergeError
from logalg.measure import (
    AffineTail,
    Cardinal,
    CellModel,
    ClosedForm,
    Passport,
    PassportLine,
    SeqSpec,
    closed_form_bounded,
    closed_form_turning_index,
    eval_closed_form,
    merge_passports,
    ratio_bounded,
    validate_passport,
)

F = Fraction


class TestClosedForm:
    def test_geometric_term(self):
        assert eval_closed_form(ClosedForm(F(1), F(0), F(1, 2)), 3) == 0.125

    def test_linear_form(self):
        assert eval_closed_form(ClosedForm(F(2), F(1), F(1)), 5) == 10

    def test_polynomial_times_power(self):
        # 16 * (3/2)^4 = 16 * 5.0625
        assert eval_closed_form(ClosedForm(F(1), F(2), F(3, 2)), 4) == 81.0

    def test_overflow_is_an_error(self):
        with pytest.raises(NumericRangeError):
            eval_closed_form(ClosedForm(F(2), F(0), F(2)), 10_000)

    def test_fractional_exponent_float_path(self):
        value = eval_closed_form(ClosedForm(F(1), F(1, 2), F(1)), 9)
        assert value == pytest.approx(3.0, abs=1e-12)

    def test_invalid_parameters_rejected(self):
        with pytest.raises(InputError):
            ClosedForm(F(0), F(0), F(1))
        with pytest.raises(InputError):
            ClosedForm(F(1), F(0), F(-1))

    def test_bounded_constant(self):
        assert closed_form_bounded(ClosedForm(F(7), F(0), F(1))) is True

    def test_unbounded_linear(self):
        assert closed_form_bounded(ClosedForm(F(1), F(1), F(1))) is False

    def test_bounded_polynomial_under_decay(self):
        form = ClosedForm(F(100), F(5), F(1, 2))
        assert closed_form_bounded(form) is True
        # exponential decay dominates: past the turning point values only shrink
        top = closed_form_turning_index(form)
        peak = max(eval_closed_form(form, n) for n in range(1, top + 1))
        for n in list(range(1, 201)) + [1000, 10_000]:
            assert eval_closed_form(form, n) <= peak * (1 + 1e-12)

    @given(
        c=st.fractions(min_value=F(1, 8), max_value=F(8)),
        p=st.fractions(min_value=F(-3), max_value=F(3)),
        q=st.fractions(min_value=F(1, 8), max_value=F(8)),
    )
    def test_bounded_decision_matches_sampling(self, c, p, q):
        form = ClosedForm(c, p, q)
        if closed_form_bounded(form):
            top = closed_form_turning_index(form)
            peak = max(eval_closed_form(form, n) for n in range(1, top + 1))
            for n in (1, 2, 5, 17, 100, 1000):
                try:
                    assert eval_closed_form(form, n) <= peak * (1 + 1e-9)
                except NumericRangeError:
                    pytest.fail("bounded form overflowed")

    def test_bounded_holds_out_to_a_million(self):
        form = ClosedForm(F(3), F(2), F(1, 2))
        top = closed_form_turning_index(form)
        peak = max(eval_closed_form(form, n) for n in range(1, top + 1))
        for n in (10, 100, 1000, 10**4, 10**6):
            assert eval_closed_form(form, n) <= peak * (1 + 1e-12)


class TestRatioBounded:
    def test_decaying_ratio(self):
        a = SeqSpec.of([], ClosedForm(F(1), F(0), F(1)))
        b = SeqSpec.of([], ClosedForm(F(1), F(0), F(2)))
        assert ratio_bounded(a, b).bounded is True

    def test_growing_ratio_with_witness(self):
        a = SeqSpec.of([], ClosedForm(F(1), F(0), F(2)))
        b = SeqSpec.of([], ClosedForm(F(1), F(0), F(1)))
        decision = ratio_bounded(a, b)
        assert decision.bounded is False
        w = decision.witness_index
        assert w is not None
        assert a.value_float(w) / b.value_float(w) > 1e6

    def test_finite_always_bounded(self):
        a = SeqSpec.of([F(1), F(700), F(3)])
        assert ratio_bounded(a, a).bounded is True
        b = SeqSpec.of([F(1, 1000), F(9), F(11)])
        assert ratio_bounded(a, b).bounded is True

    def test_length_class_mismatch(self):
        finite = SeqSpec.of([F(1)])
        infinite = SeqSpec.of([], ClosedForm(F(1), F(0), F(1)))
        with pytest.raises(InputError):
            ratio_bounded(finite, infinite)
        with pytest.raises(InputError):
            ratio_bounded(SeqSpec.of([F(1)]), SeqSpec.of([F(1), F(2)]))

    def test_polynomial_degrees(self):
        deg1 = SeqSpec.of([], ClosedForm(F(5), F(1), F(1)))
        deg2 = SeqSpec.of([], ClosedForm(F(1), F(2), F(1)))
        assert ratio_bounded(deg1, deg2).bounded is True
        assert ratio_bounded(deg2, deg1).bounded is False

    def test_prefix_shift_does_not_change_the_decision(self):
        # same tails behind different prefix lengths
        a = SeqSpec.of([F(9), F(9), F(9)], ClosedForm(F(1), F(0), F(2)))
        b = SeqSpec.of([F(1)], ClosedForm(F(1), F(0), F(2)))
        assert ratio_bounded(a, b).bounded is True
        assert ratio_bounded(b, a).bounded is True

    def test_sum_tails_compare_by_dominant_term(self):
        one_plus_2n = SeqSpec.of(
            [], [ClosedForm(F(1), F(0), F(1)), ClosedForm(F(1), F(0), F(2))]
        )
        pure_2n = SeqSpec.of([], ClosedForm(F(1), F(0), F(2)))
        assert ratio_bounded(one_plus_2n, pure_2n).bounded is True
        assert ratio_bounded(pure_2n, one_plus_2n).bounded is True


class TestSeqSpec:
    def test_values(self):
        seq = SeqSpec.of([F(5)], ClosedForm(F(1), F(0), F(1, 2)))
        assert seq.value_exact(1) == 5
        assert seq.value_exact(2) == F(1, 2)
        assert seq.value_exact(4) == F(1, 8)
        assert seq.value_float(4) == 0.125
        assert math.isclose(seq.value_log(4), math.log(0.125))

    def test_finite_end(self):
        seq = SeqSpec.of([F(5)])
        assert seq.length() == 1
        with pytest.raises(InputError):
            seq.value_exact(2)


def line(indices, tail=None):
    return PassportLine.of(indices, tail)


class TestPassportValidation:
    def test_valid_minimal(self):
        p = Passport(line([1]), line([0]), SeqSpec.of([F(5, 2)]))
        assert validate_passport(p) == []

    def test_uline_not_increasing(self):
        p = Passport(line([]), line([2, 1]), SeqSpec.of([F(1), F(1)]))
        messages = [v.message for v in validate_passport(p)]
        assert "uLine not strictly increasing" in messages

    def test_length_mismatch(self):
        p = Passport(line([]), line([0]), SeqSpec.of([]))
        messages = [v.message for v in validate_passport(p)]
        assert "length mismatch" in messages

    def test_nonpositive_measure(self):
        p = Passport(line([]), line([0]), SeqSpec.of([F(-1)]))
        assert any("must be > 0" in v.message for v in validate_passport(p))

    def test_prefix_must_stay_below_tail(self):
        p = Passport(
            line([]), line([5], AffineTail(0, 1)), SeqSpec.of([F(1)], ClosedForm(F(1), F(0), F(1)))
        )
        assert any("not strictly increasing" in v.message for v in validate_passport(p))

    def test_negative_aleph_reported(self):
        p = Passport(line([-1]), line([0]), SeqSpec.of([F(1)]))
        assert any("aleph index" in v.message for v in validate_passport(p))


class TestPassportLineEquivalence:
    def test_prefix_absorbed_into_tail(self):
        a = line([1], AffineTail(1, 1))  # 1, then 2, 3, 4, ...
        b = line([], AffineTail(0, 1))  # 1, 2, 3, ...
        assert a.equivalent_to(b)
        assert b.equivalent_to(a)

    def test_different_steps_differ(self):
        assert not line([], AffineTail(0, 1)).equivalent_to(line([], AffineTail(0, 2)))

    def test_finite_vs_infinite(self):
        assert not line([1]).equivalent_to(line([1], AffineTail(1, 1)))


class TestMergePassports:
    def test_identity(self):
        p = Passport(line([1]), line([0]), SeqSpec.of([F(5, 2)]))
        assert merge_passports([p]) == p

    def test_same_weight_measures_add(self):
        p = Passport(line([]), line([0]), SeqSpec.of([F(1)]))
        merged = merge_passports([p, p])
        assert merged.u_line == line([0])
        assert merged.u_measures.value_exact(1) == 2

    def test_infinite_component_absorbs_finite(self):
        p1 = Passport(line([1]), line([]), SeqSpec.of([]))
        p2 = Passport(line([]), line([1]), SeqSpec.of([F(3)]))
        merged = merge_passports([p1, p2])
        assert merged.s_line == line([1])
        assert merged.u_line == line([])
        assert merged.u_measures.length() == 0

    def test_tail_measures_add_pointwise(self):
        ones = Passport(
            line([]), line([], AffineTail(0, 1)), SeqSpec.of([], ClosedForm(F(1), F(0), F(1)))
        )
        powers = Passport(
            line([]), line([], AffineTail(0, 1)), SeqSpec.of([], ClosedForm(F(1), F(0), F(2)))
        )
        merged = merge_passports([ones, powers])
        for m in (1, 2, 5, 10):
            assert merged.u_measures.value_exact(m) == 1 + F(2) ** m

    def test_misaligned_tails_rejected(self):
        a = Passport(
            line([]), line([], AffineTail(0, 1)), SeqSpec.of([], ClosedForm(F(1), F(0), F(1)))
        )
        b = Passport(
            line([]), line([], AffineTail(0, 2)), SeqSpec.of([], ClosedForm(F(1), F(0), F(1)))
        )
        with pytest.raises(UnsupportedMergeError):
            merge_passports([a, b])

    def test_empty_list_rejected(self):
        with pytest.raises(InputError):
            merge_passports([])

    def test_invalid_input_rejected(self):
        bad = Passport(line([]), line([0]), SeqSpec.of([]))
        with pytest.raises(InputError):
            merge_passports([bad, bad])

    def test_finite_weight_inside_tail_range_materializes(self):
        # a finite component of weight 3 must bump the tail entry at weight 3
        tail_pass = Passport(
            line([]), line([], AffineTail(0, 1)), SeqSpec.of([], ClosedForm(F(1), F(0), F(1)))
        )
        spot = Passport(line([]), line([3]), SeqSpec.of([F(7)]))
        merged = merge_passports([tail_pass, spot])
        assert validate_passport(merged) == []
        values = [merged.u_measures.value_exact(i) for i in range(1, 6)]
        assert values == [1, 1, 8, 1, 1]

    def test_s_weight_excises_tail_entry(self):
        # an infinite component at weight 2 absorbs the u component there
        tail_pass = Passport(
            line([]), line([], AffineTail(0, 1)), SeqSpec.of([], ClosedForm(F(1), F(0), F(1)))
        )
        s_spot = Passport(line([2]), line([]), SeqSpec.of([]))
        merged = merge_passports([tail_pass, s_spot])
        assert validate_passport(merged) == []
        assert merged.s_line == line([2])
        # u weights: 1, 3, 4, 5, ... (weight 2 became infinite)
        u = merged.u_line.canonical()
        assert [c.aleph_index for c in u.prefix] == [1]
        assert u.tail == AffineTail(2, 1)

    @given(st.permutations(range(4)))
    def test_merge_is_permutation_invariant(self, order):
        # u tails run over even weights, the s tail over odd ones (disjoint)
        parts = [
            Passport(line([1]), line([0]), SeqSpec.of([F(1)])),
            Passport(line([]), line([0, 2]), SeqSpec.of([F(1, 2), F(5)])),
            Passport(
                line([]), line([], AffineTail(0, 2)), SeqSpec.of([], ClosedForm(F(1), F(1), F(1)))
            ),
            Passport(
                line([3], AffineTail(3, 2)),
                line([0]),
                SeqSpec.of([F(2)]),
            ),
        ]
        reference = merge_passports(parts)
        shuffled = merge_passports([parts[i] for i in order])
        assert shuffled == reference

    def test_merge_associates_with_binary_nesting(self):
        a = Passport(line([1]), line([0]), SeqSpec.of([F(1)]))
        b = Passport(line([]), line([2]), SeqSpec.of([F(3)]))
        c = Passport(line([5]), line([0]), SeqSpec.of([F(4)]))
        assert merge_passports([merge_passports([a, b]), c]) == merge_passports(
            [a, merge_passports([b, c])]
        )

    def test_merge_output_validates(self):
        parts = [
            Passport(line([]), line([], AffineTail(0, 1)), SeqSpec.of([], ClosedForm(F(2), F(0), F(1)))),
            Passport(line([0]), line([]), SeqSpec.of([])),
            Passport(line([]), line([4]), SeqSpec.of([F(9, 7)])),
        ]
        assert validate_passport(merge_passports(parts)) == []


class TestCellModel:
    def test_tail_pairing_enforced(self):
        with pytest.raises(InputError):
            CellModel((), tail_mass=ClosedForm(F(1), F(0), F(1, 2)), tail_h=None)

    def test_values(self):
        model = CellModel(
            ((F(1), F(2)),),
            tail_mass=ClosedForm(F(1), F(0), F(1, 2)),
            tail_h=ClosedForm(F(1), F(1), F(1)),
        )
        assert model.mass_at(1) == 1
        assert model.h_at(1) == 2
        assert model.mass_at(2) == F(1, 2)
        assert model.h_at(3) == 2

    def test_positivity(self):
        with pytest.raises(InputError):
            CellModel(((F(0), F(1)),))
        with pytest.raises(InputError):
            CellModel(((F(1), F(-1)),))
