"""Exact value arithmetic, rational linear algebra, gauges and signs."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qprob.errors import (
    BasisMismatch,
    ComplexValued,
    DependentFrame,
    MissingEnclosure,
    NotInSpan,
    NotProportional,
    SingularMatrix,
    ZeroDivisor,
)
from qprob.values import (
    Basis,
    GaugeMap,
    RATIONAL_BASIS,
    SemValue,
    Sign,
    format_rational,
    parse_rational,
    q_coords,
    q_rank,
    sv_ratio,
    sv_sign,
)

SQRT2 = Basis(
    ("1", "sqrt2"),
    (
        ((Fraction(1), Fraction(1)), (Fraction(0), Fraction(0))),
        ((Fraction(707, 500), Fraction(283, 200)), (Fraction(0), Fraction(0))),
    ),
)


def sv(*coeffs) -> SemValue:
    return SQRT2.from_coeffs([Fraction(c) for c in coeffs])


class TestRationalStrings:
    @pytest.mark.parametrize(
        "text,value",
        [("3/10", Fraction(3, 10)), ("-3/10", Fraction(-3, 10)), ("7", Fraction(7))],
    )
    def test_parse(self, text, value):
        assert parse_rational(text) == value

    def test_format_reduced(self):
        assert format_rational(Fraction(6, 4)) == "3/2"
        assert format_rational(Fraction(-2, 1)) == "-2"

    @pytest.mark.parametrize("bad", ["1/0", "0.5", "", "x", "1/2/3"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_rational(bad)


class TestBasis:
    def test_unit_symbol_required(self):
        with pytest.raises(ValueError):
            Basis(("sqrt2", "1"))

    def test_duplicate_symbols(self):
        with pytest.raises(ValueError):
            Basis(("1", "x", "x"))

    def test_default_enclosures(self):
        b = Basis(("1", "x"))
        assert b.enclosures[0] == ((1, 1), (0, 0))
        assert b.enclosures[1] is None


class TestArithmetic:
    def test_two_atom_sum_is_one(self):
        # the two-atom probability with irrational parts cancels to the unit
        assert sv("1/2", "-1/10") + sv("1/2", "1/10") == sv(1, 0)

    def test_additive_inverse(self):
        u = sv("3/4", "-2/7")
        assert (u + (-u)).is_zero()

    def test_scale(self):
        assert sv("3/4", 0).scale(Fraction(2, 3)) == sv("1/2", 0)

    def test_basis_mismatch(self):
        with pytest.raises(BasisMismatch):
            sv(1, 0) + RATIONAL_BASIS.from_rational(1)

    def test_mapping_roundtrip(self):
        v = sv("1/2", "-1/10")
        assert v.to_mapping() == {"1": "1/2", "sqrt2": "-1/10"}
        assert SemValue.from_mapping(SQRT2, v.to_mapping()) == v
        assert SemValue.from_mapping(SQRT2, {}) == SQRT2.zero()


class TestRatio:
    def test_rational_line(self):
        assert sv_ratio(sv("3/10", 0), sv("9/10", 0)) == Fraction(1, 3)

    def test_zero_numerator(self):
        assert sv_ratio(SQRT2.zero(), sv(1, 1)) == 0

    def test_independent_directions(self):
        with pytest.raises(NotProportional):
            sv_ratio(sv(0, 1), sv(1, 0))

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisor):
            sv_ratio(sv(1, 0), SQRT2.zero())


class TestRank:
    def test_unit_vectors(self):
        assert q_rank([sv(1, 0), sv(0, 1)]) == 2

    def test_irrational_pair_is_independent(self):
        assert q_rank([sv("1/2", "-1/10"), sv("1/2", "1/10")]) == 2

    def test_collinear_rationals(self):
        assert q_rank([sv(1, 0), sv("2/3", 0), sv(-5, 0)]) == 1

    def test_empty(self):
        assert q_rank([]) == 0


class TestCoords:
    def test_hand_solved_system(self):
        coords = q_coords(sv("1/2", "1/10"), [sv(1, 0), sv("1/2", "-1/10")])
        assert coords == [Fraction(1), Fraction(-1)]

    def test_first_frame_vector(self):
        frame = [sv(1, 0), sv(0, 1)]
        assert q_coords(frame[0], frame) == [1, 0]

    def test_zero_target(self):
        assert q_coords(SQRT2.zero(), [sv(1, 1)]) == [0]

    def test_not_in_span(self):
        with pytest.raises(NotInSpan):
            q_coords(sv(0, 1), [sv(1, 0)])

    def test_dependent_frame(self):
        with pytest.raises(DependentFrame):
            q_coords(sv(1, 0), [sv(1, 0), sv(2, 0)])


class TestGauges:
    def test_diagonal_rescaling(self):
        gauge = GaugeMap.diagonal([Fraction(1), Fraction(2)])
        assert gauge.apply(sv("1/2", "-1/10")) == sv("1/2", "-1/5")

    def test_identity(self):
        v = sv("2/7", "5/3")
        assert GaugeMap.identity(2).apply(v) == v

    def test_inverse_law(self):
        gauge = GaugeMap.from_rows([[1, 2], [3, 5]])
        v = sv("1/2", "-9/4")
        assert gauge.inverse().apply(gauge.apply(v)) == v

    def test_compose_order(self):
        a = GaugeMap.from_rows([[1, 1], [0, 1]])
        b = GaugeMap.diagonal([2, 3])
        v = sv(1, 1)
        assert a.compose(b).apply(v) == a.apply(b.apply(v))

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrix):
            GaugeMap.from_rows([[1, 2], [2, 4]])

    def test_scalar_zero_rejected(self):
        with pytest.raises(SingularMatrix):
            GaugeMap.scalar(2, 0)

    def test_scalar_commutes_with_diagonal(self):
        s = GaugeMap.scalar(2, Fraction(5, 3))
        d = GaugeMap.diagonal([7, Fraction(-1, 2)])
        assert s.compose(d).matrix == d.compose(s).matrix

    def test_swap_matrix_realises_sqrt2_multiplication(self):
        # multiplication by sqrt2 on span{1, sqrt2} as an explicit matrix
        by_sqrt2 = GaugeMap.from_rows([[0, 2], [1, 0]])
        assert by_sqrt2.apply(sv(1, 0)) == sv(0, 1)
        assert by_sqrt2.apply(sv(0, 1)) == sv(2, 0)


class TestSign:
    def test_positive_with_enclosure(self):
        assert sv_sign(sv("1/2", "-1/10")) == Sign.POSITIVE

    def test_zero(self):
        assert sv_sign(SQRT2.zero()) == Sign.ZERO

    def test_unknown_when_straddling(self):
        wide = Basis(
            ("1", "x"),
            (
                ((Fraction(1), Fraction(1)), (Fraction(0), Fraction(0))),
                ((Fraction(-2), Fraction(2)), (Fraction(0), Fraction(0))),
            ),
        )
        assert sv_sign(wide.from_coeffs([0, Fraction(1, 10)])) == Sign.UNKNOWN

    def test_negative(self):
        assert sv_sign(sv("-1/2", "1/10")) == Sign.NEGATIVE

    def test_missing_enclosure(self):
        plain = Basis(("1", "x"))
        with pytest.raises(MissingEnclosure):
            sv_sign(plain.from_coeffs([0, 1]))

    def test_complex_enclosure(self):
        imaginary = Basis(
            ("1", "i"),
            (
                ((Fraction(1), Fraction(1)), (Fraction(0), Fraction(0))),
                ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))),
            ),
        )
        with pytest.raises(ComplexValued):
            sv_sign(imaginary.from_coeffs([1, 1]))


rationals = st.fractions(
    min_value=-10, max_value=10, max_denominator=9
)
values2 = st.tuples(rationals, rationals).map(lambda c: SQRT2.from_coeffs(list(c)))


def gauges2():
    entries = st.tuples(rationals, rationals, rationals, rationals)

    def build(e):
        a, b, c, d = e
        if a * d - b * c == 0:
            return GaugeMap.identity(2)
        return GaugeMap.from_rows([[a, b], [c, d]])

    return entries.map(build)


class TestGaugeLaws:
    @given(gauges2(), values2, values2)
    def test_exact_additivity(self, gauge, u, v):
        assert gauge.apply(u + v) == gauge.apply(u) + gauge.apply(v)

    @given(gauges2(), values2, rationals)
    def test_rational_homogeneity(self, gauge, v, q):
        assert gauge.apply(v.scale(q)) == gauge.apply(v).scale(q)

    @given(gauges2(), st.lists(values2, max_size=4))
    def test_rank_is_gauge_invariant(self, gauge, vals):
        assert q_rank([gauge.apply(v) for v in vals]) == q_rank(vals)

    @given(values2, values2, values2)
    def test_coords_reconstruct(self, target, f1, f2):
        frame = [f1, f2]
        if q_rank(frame) != 2:
            return
        coords = q_coords(target, frame)
        rebuilt = SQRT2.zero()
        for q, v in zip(coords, frame):
            rebuilt = rebuilt + v.scale(q)
        assert rebuilt == target

    @given(values2, values2)
    def test_ratio_reconstructs(self, u, v):
        if v.is_zero():
            return
        try:
            q = sv_ratio(u, v)
        except NotProportional:
            return
        assert v.scale(q) == u
