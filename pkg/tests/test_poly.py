from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from derlab.errors import ParseError, PreconditionError, RingMismatchError
from derlab.poly import (
    Poly,
    RingSpec,
    arith,
    depends_only_on_last,
    eval_at,
    foreign_variable,
    is_unit,
    parse_poly,
    partial_derivative,
    series_gcd_order,
    series_inverse,
    to_dense,
    truncate,
    uni_antiderivative,
    uni_extended_gcd,
)

from helpers import polys, scalars

R1 = RingSpec.polynomial(1)
R2 = RingSpec.polynomial(2)
R3 = RingSpec.polynomial(3)
S2 = RingSpec.series(2, 3)


def P(text, ring=R3):
    return parse_poly(text, ring)


def test_ring_spec_validation():
    with pytest.raises(ValueError):
        RingSpec(0)
    with pytest.raises(ValueError):
        RingSpec.series(2, 0)
    with pytest.raises(ValueError):
        RingSpec(2, trunc=3)
    assert str(RingSpec.series(2, 8)) == "series 2 trunc 8"


def test_parse_examples():
    f = P("x3^2 + 1/2")
    assert dict(f.terms) == {(0, 0, 2): Fraction(1), (0, 0, 0): Fraction(1, 2)}
    assert P("x1*x1 - x1^2").is_zero()
    assert parse_poly("x1*x1 - x1^2", RingSpec.series(1, 2)).is_zero()
    assert parse_poly("1 + x2 + x2^5", S2) == Poly(S2, {(0, 0): 1, (0, 1): 1})


def test_scalar_invariants():
    c = P("6/4").constant_term()
    assert (c.numerator, c.denominator) == (3, 2)
    assert P("0").constant_term() == 0
    with pytest.raises(TypeError):
        Poly.const(R2, 0.5)


@pytest.mark.parametrize(
    "text, message",
    [
        ("x4", "variable index out of range"),
        ("x0 + 1", "variable index out of range"),
        ("x1^-2", "negative exponent"),
        ("x1 +", "unexpected end of input"),
        ("2 x1", "unexpected 'x1'"),
        ("(x1 + 1", "expected ')'"),
        ("y1", "unknown identifier"),
        ("1/0", "division by zero"),
        ("dx1", "derivation symbol"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(ParseError) as info:
        P(text)
    assert message in str(info.value)
    assert info.value.pos is not None


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        P("x1 + x9")
    assert info.value.pos == 5


def test_arith_examples():
    x1, x3 = P("x1"), P("x3")
    assert arith("add", x1, -x1).is_zero()
    assert arith("mul", x3 + 1, x3 - 1) == P("x3^2 - 1")
    s = RingSpec.series(2, 2)
    assert arith("mul", P("1 + x2", s), P("1 + x2", s)) == P("1 + 2*x2", s)
    assert arith("scalar_mul", x1, Fraction(1, 2)) == P("1/2*x1")
    with pytest.raises(RingMismatchError):
        arith("add", P("x1", R2), P("x1", R3))


@pytest.mark.parametrize(
    "text, j, expected",
    [("x3^2", 3, "2*x3"), ("x3^2 + 1", 1, "0"), ("x1*x2^3", 2, "3*x1*x2^2")],
)
def test_partial_derivative_examples(text, j, expected):
    assert partial_derivative(P(text), j) == P(expected)


def test_partial_derivative_index_out_of_range():
    with pytest.raises(IndexError):
        partial_derivative(P("x1"), 4)


def test_is_unit_examples():
    assert is_unit(P("3/2", R2))
    assert not is_unit(P("1 + x2", R2))
    assert is_unit(P("1 + x2", RingSpec.series(2, 4)))
    assert not is_unit(P("0", R2))
    assert not is_unit(P("0", RingSpec.series(2, 4)))


def test_depends_only_on_last_examples():
    assert depends_only_on_last(P("x3^2 + 1"))
    assert not depends_only_on_last(P("x1*x3"))
    assert foreign_variable(P("x1*x3")) == 1
    assert foreign_variable(P("x2*x3 + x1")) == 1
    assert depends_only_on_last(P("0"))


def test_extended_gcd_examples():
    g, rs = uni_extended_gcd([P("x2", R2), P("x2 + 1", R2)])
    assert g == 1 and rs == [P("-1", R2), P("1", R2)]
    g, rs = uni_extended_gcd([P("2*x2^2", R2), P("0", R2)])
    assert g == P("x2^2", R2) and rs == [P("1/2", R2), P("0", R2)]
    g, rs = uni_extended_gcd([P("x2^2", R2), P("0", R2)])
    assert g == P("x2^2", R2) and rs == [P("1", R2), P("0", R2)]
    g, rs = uni_extended_gcd([P("0", R2), P("0", R2)])
    assert g.is_zero() and all(r.is_zero() for r in rs)
    g, rs = uni_extended_gcd([], ring=R2)
    assert g.is_zero() and rs == []


def test_extended_gcd_rejects_bad_input():
    with pytest.raises(PreconditionError):
        uni_extended_gcd([P("x1", R2)])
    with pytest.raises(PreconditionError):
        uni_extended_gcd([P("x2", S2)])


def test_series_gcd_order_examples():
    s = RingSpec.series(2, 8)
    g, w = series_gcd_order([P("1 + x2", s), P("x2^3", s)])
    assert g == 1 and w == 0 and is_unit(g)
    g, w = series_gcd_order([P("x2^2", s), P("x2^3 + x2^5", s)])
    assert g == P("x2^2", s) and w == 0
    g, w = series_gcd_order([P("0", s)])
    assert g.is_zero() and w is None


def test_series_inverse():
    s = RingSpec.series(2, 6)
    f = P("2 + x2 - 3*x2^2", s)
    assert f * series_inverse(f) == 1
    with pytest.raises(PreconditionError):
        series_inverse(P("x2", s))


@pytest.mark.parametrize(
    "text, expected, ring",
    [("x3^2", "1/3*x3^3", R3), ("0", "0", R3), ("2*x2 + 3", "x2^2 + 3*x2", R2)],
)
def test_antiderivative_examples(text, expected, ring):
    assert uni_antiderivative(P(text, ring)) == P(expected, ring)


def test_antiderivative_series_truncates():
    assert uni_antiderivative(P("x2^2", S2)).is_zero()
    with pytest.raises(PreconditionError):
        uni_antiderivative(P("x1", R2))


def test_eval_examples():
    assert eval_at(P("x1^2 + x2", R2), [2, 3]) == 7
    assert eval_at(P("0"), [5, 6, 7]) == 0
    assert eval_at(P("1/6*x3^3"), [0, 0, 2]) == Fraction(4, 3)
    with pytest.raises(PreconditionError):
        eval_at(P("x1", S2), [1, 1])


def test_exact_quotient():
    f, g = P("x1^2 - x2^2", R2), P("x1 + x2", R2)
    assert f.exact_quotient(g) == P("x1 - x2", R2)
    assert P("x1^2 + 1", R2).exact_quotient(g) is None
    with pytest.raises(ZeroDivisionError):
        f.exact_quotient(P("0", R2))


def test_printing():
    assert str(P("0")) == "0"
    assert str(P("x1 - 1/6*x3^3")) == "x1 - 1/6*x3^3"
    assert str(P("-x1 + 2*x2*x3^2 - 1")) == "-x1 + 2*x2*x3^2 - 1"
    assert str(P("-1/2")) == "-1/2"


# -- properties ------------------------------------------------------------------------

ring_and_three = st.sampled_from([R1, R2, R3]).flatmap(
    lambda r: st.tuples(polys(r), polys(r), polys(r))
)


@given(ring_and_three)
def test_ring_axioms(fgh):
    f, g, h = fgh
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f + g == g + f
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert f - f == 0


@given(ring_and_three, st.lists(scalars, min_size=3, max_size=3))
def test_mul_agrees_with_evaluation(fgh, point):
    f, g, _ = fgh
    pt = point[: f.ring.nvars]
    assert eval_at(f * g, pt) == eval_at(f, pt) * eval_at(g, pt)
    assert eval_at(f + g, pt) == eval_at(f, pt) + eval_at(g, pt)


@given(ring_and_three, st.integers(1, 3))
def test_leibniz_for_partials(fgh, j):
    f, g, _ = fgh
    j = min(j, f.ring.nvars)
    assert (f * g).diff(j) == f.diff(j) * g + f * g.diff(j)


@settings(max_examples=150)
@given(st.lists(polys(R2, max_deg=5, univariate=True), min_size=1, max_size=4))
def test_bezout_soundness(qs):
    g, rs = uni_extended_gcd(qs)
    total = sum((r * q for r, q in zip(rs, qs)), Poly.zero(R2))
    assert total == g
    if g:
        lead = max(g.terms)
        assert g.terms[lead] == 1
        for q in qs:
            assert q.exact_quotient(g) is not None
    else:
        assert all(q.is_zero() for q in qs)
    # independent gcd from sympy, compared after the same monic normalization
    x = sympy.Symbol("x")
    expected = sympy.Poly(0, x, domain="QQ")
    for q in qs:
        expected = expected.gcd(sympy.Poly(to_dense(q)[::-1] or [0], x, domain="QQ"))
    if expected.is_zero:
        assert g.is_zero()
    else:
        assert to_dense(g)[::-1] == expected.monic().all_coeffs()


@given(polys(R2, max_deg=5, univariate=True))
def test_antiderivative_inverse(f):
    F = uni_antiderivative(f)
    assert F.diff(2) == f
    assert F.constant_term() == 0


@given(polys(RingSpec.series(2, 5), max_deg=5, univariate=True))
def test_antiderivative_inverse_series(f):
    assert truncate(uni_antiderivative(f).diff(2), 4) == truncate(f, 4)


@given(ring_and_three, st.integers(1, 5))
def test_truncation_is_a_ring_morphism(fgh, N):
    f, g, _ = fgh
    assert truncate(f * g, N) == truncate(truncate(f, N) * truncate(g, N), N)
    assert truncate(f + g, N) == truncate(f, N) + truncate(g, N)


@given(st.integers(1, 6), polys(R2), polys(R2))
def test_series_mul_matches_truncated_polynomial_product(N, f, g):
    s = RingSpec.series(2, N)
    fs, gs = Poly(s, f.terms), Poly(s, g.terms)
    assert dict((fs * gs).terms) == dict(truncate(f * g, N).terms)


def test_immutability_and_hashing():
    f = P("x1 + 1")
    with pytest.raises(TypeError):
        f.terms[(0, 0, 0)] = 5
    assert hash(f) == hash(P("1 + x1"))
    assert len({f, P("1 + x1")}) == 1
