from fractions import Fraction

import pytest
import sympy
from hypothesis import example, given, settings
from hypothesis import strategies as st

from newtonisol import Dyadic, Interval, Polynomial
from newtonisol.arith import parse_rational
from newtonisol.poly import DegreeError, cauchy_bound, linear_root

X = sympy.Symbol("x")

small_ints = st.integers(min_value=-50, max_value=50)
polys = st.lists(small_ints, min_size=2, max_size=9).filter(lambda cs: cs[-1] != 0).map(Polynomial)
dyadics = st.builds(Dyadic, st.integers(min_value=-(1 << 40), max_value=1 << 40), st.integers(min_value=-60, max_value=10))


def to_sympy(f: Polynomial):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in f.coeffs])), X)


# -- dyadics and intervals ---------------------------------------------------


def test_dyadic_canonical_form():
    assert Dyadic(12) == Dyadic(3, 2)
    assert (Dyadic(12).mantissa, Dyadic(12).exponent) == (3, 2)
    z = Dyadic(0, 17)
    assert (z.mantissa, z.exponent) == (0, 0)


@given(dyadics, dyadics)
def test_dyadic_arithmetic_is_exact(a, b):
    fa, fb = a.to_fraction(), b.to_fraction()
    assert (a + b).to_fraction() == fa + fb
    assert (a - b).to_fraction() == fa - fb
    assert (a * b).to_fraction() == fa * fb
    assert a.half().to_fraction() == fa / 2
    assert (a < b) == (fa < fb)
    m = (a + b).half()
    assert m.mantissa % 2 == 1 or m.mantissa == 0


@given(dyadics)
def test_dyadic_text_round_trip(a):
    assert Dyadic.parse(str(a)) == a


def test_dyadic_serialization_forms():
    assert str(Dyadic(3, 2)) == "12"
    assert str(Dyadic(3, -2)) == "3*2^-2"
    assert Dyadic.parse("-5*2^-3").to_fraction() == Fraction(-5, 8)


def test_dyadic_rounding_directions():
    q = Fraction(1, 3)
    lo, hi = Dyadic.round(q, 10, "floor"), Dyadic.round(q, 10, "ceil")
    assert lo.to_fraction() <= q <= hi.to_fraction()
    assert hi.to_fraction() - lo.to_fraction() == Fraction(1, 1024)
    with pytest.raises(ValueError):
        Dyadic.from_fraction(Fraction(1, 3))


@given(dyadics, dyadics)
def test_midpoint_strictly_inside(a, b):
    if a == b:
        return
    I = Interval(min(a, b), max(a, b))
    assert I.lo < I.midpoint < I.hi
    left, right = I.split()
    assert left.hi == right.lo == I.midpoint
    assert left.width + right.width == I.width


def test_interval_json_round_trip():
    I = Interval.of(Fraction(-3, 8), 5)
    assert Interval.from_json(I.to_json()) == I
    with pytest.raises(ValueError):
        Interval.of(2, 1)


def test_interval_intersection():
    A, B = Interval.of(0, 2), Interval.of(1, 3)
    assert A.intersection(B) == Interval.of(1, 2)
    assert Interval.of(0, 1).intersection(Interval.of(1, 2)) == Interval.of(1, 1)
    assert Interval.of(0, 1).intersection(Interval.of(2, 3)) is None


def test_parse_rational_forms():
    assert parse_rational("-6") == -6
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("3*2^-5") == Fraction(3, 32)
    for bad in ("abc", "0.5", "1e-3", "1/0", "inf"):
        with pytest.raises(ValueError):
            parse_rational(bad)


# -- polynomials: examples -----------------------------------------------------


def test_eval_examples():
    f = Polynomial([-2, 0, 1])
    assert f.eval(1) == -1
    assert f.eval(0) == -2
    assert Polynomial.parse("-6,11,-6,1").eval(2) == 0


def test_taylor_shift_examples():
    assert Polynomial([-1, 0, 1]).taylor_shift(3) == Polynomial([8, 6, 1])
    f = Polynomial([5, -7, 0, 2])
    assert f.taylor_shift(0) == f
    M, eps = Fraction(2) ** 20, Fraction(1, 2 ** 20)
    g = Polynomial([M * eps ** 2, -eps ** 2, -M, 1])
    assert g.taylor_shift(0) == g


def test_derivative_examples():
    assert Polynomial([-2, 0, 1]).derivative(1) == Polynomial([0, 2])
    cube = Polynomial([0, 0, 0, 1])
    assert cube.derivative(2) == Polynomial([0, 6])
    assert cube.normalized_derivative(2) == Polynomial([0, 3])
    f = Polynomial([8, 6, 1])
    assert f.derivative(0) == f


def test_square_free_part_examples():
    assert Polynomial([1, -2, 1]).square_free_part().monic() == Polynomial([-1, 1])
    f = Polynomial([-2, 0, 1])
    assert f.square_free_part().monic() == f
    assert (f * f).square_free_part().monic() == f


def test_json_and_parse():
    f = Polynomial.from_json({"coeffs": ["-6", "11", "-6", "1"]})
    assert f == Polynomial.parse("-6,11,-6,1")
    assert Polynomial.from_json(f.to_json()) == f
    assert Polynomial.parse("1/2,0,1").coeffs[0] == Fraction(1, 2)


def test_linear_helper_and_degree():
    assert linear_root(Polynomial([3, 2])) == Fraction(-3, 2)
    assert Polynomial([0, 0, 5, 0]).degree == 2
    with pytest.raises(DegreeError):
        linear_root(Polynomial([1, 0, 1]))


def test_from_roots_expansion():
    assert Polynomial.from_roots([1, 2, 3]) == Polynomial([-6, 11, -6, 1])


# -- polynomials: properties -----------------------------------------------------


@given(polys, dyadics)
def test_shift_round_trip(f, z):
    assert f.taylor_shift(z).taylor_shift(-z) == f


@given(polys, dyadics)
def test_shift_value_and_coefficients(f, z):
    g = f.taylor_shift(z)
    assert g.eval(0) == f.eval(z)
    for j in range(f.degree + 1):
        assert g.coeffs[j] == f.normalized_derivative(j).eval(z)


@given(polys, st.fractions(min_value=-20, max_value=20, max_denominator=64))
def test_shift_matches_sympy(f, z):
    ref = sympy.expand(to_sympy(f).as_expr().subs(X, X + sympy.Rational(z.numerator, z.denominator)))
    assert to_sympy(f.taylor_shift(z)).as_expr() - ref == 0


@settings(max_examples=60)
@given(polys, polys)
def test_square_free_part_matches_sympy(a, b):
    f = a * a * b
    ours = f.square_free_part().monic()
    ref = sympy.Poly(sympy.sqf_part(to_sympy(f).as_expr()), X).monic()
    assert sympy.expand(to_sympy(ours).as_expr() - ref.as_expr()) == 0
    assert ours.is_square_free()


@given(polys)
@example(Polynomial([22, 44, 22]))
def test_cauchy_bound_encloses_roots(f):
    B = float(cauchy_bound(f))
    # same roots without multiplicity; nroots does not converge on repeated roots
    g = sympy.Poly(sympy.sqf_part(to_sympy(f).as_expr()), X)
    for r in g.nroots(n=30, maxsteps=200):
        assert abs(complex(r)) <= B * (1 + 1e-12)
