from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osculate.series import (
    BadConstantTerm,
    Laurent,
    NonInvertibleConstantTerm,
    NonzeroLowOrderTerm,
    NonzeroValuation,
    TruncSeries,
    WindowOverflow,
    X,
    XBAR,
    Y,
    from_json,
    geometric,
    kernel,
    solve_T,
    solve_X,
    solve_Y0,
    to_json,
)

N = 6

small = st.integers(-5, 5)
rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@st.composite
def laurents(draw, max_terms=3):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(-2, 2), st.integers(-1, 1), st.integers(0, 2)),
        small, max_size=max_terms))
    return Laurent.from_exponents(terms)


@st.composite
def scalar_series(draw, order=N, unit=False):
    coeffs = draw(st.lists(rationals, min_size=order + 1, max_size=order + 1))
    if unit:
        coeffs[0] = 1
    return TruncSeries(coeffs)


@st.composite
def laurent_series(draw, order=3):
    return TruncSeries([draw(laurents()) for _ in range(order + 1)])


def binomial_sqrt(a, order):
    """(1 + a t)^(1/2) by the generalised binomial theorem."""
    out = []
    for n in range(order + 1):
        c = Fraction(1)
        for k in range(n):
            c *= Fraction(1, 2) - k
        c /= factorial(n)
        out.append(c * a ** n)
    return TruncSeries(out)


# -- ring examples -----------------------------------------------------------

def test_difference_of_squares():
    assert TruncSeries([1, 1], 2) * TruncSeries([1, -1], 2) == TruncSeries([1, 0, -1])


def test_laurent_square():
    assert (X + XBAR) ** 2 == Laurent.from_exponents({(2, 0, 0): 1, (0, 0, 0): 2, (-2, 0, 0): 1})


def test_product_truncates_to_smaller_order():
    a = TruncSeries([1, 1, 1, 1])
    b = TruncSeries([1, 2])
    assert (a * b).order == 1
    assert (a + b).order == 1


def test_laurent_stores_no_zeros():
    z = X - X
    assert not z.terms
    assert (X + 1 - 1).terms == X.terms


@settings(max_examples=40, deadline=None)
@given(laurent_series(), laurent_series(), laurent_series())
def test_ring_axioms_laurent(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a
    assert 0 + a == a
    assert a - a == TruncSeries.constant(0, a.order)


@settings(max_examples=40, deadline=None)
@given(scalar_series(), scalar_series(), rationals)
def test_ring_axioms_scalar(a, b, k):
    assert (a + b) * k == a * k + b * k
    assert a * b == b * a


# -- invert / sqrt -------------------------------------------------------------

def test_invert_geometric():
    assert TruncSeries([1, -1], 3).invert() == TruncSeries([1, 1, 1, 1])
    assert TruncSeries([1, 1], 3).invert() == TruncSeries([1, -1, 1, -1])


def test_invert_two_plus_T():
    # long division of 1 by 2 + 2t + 8t^2 gives 1/2 - t/2 - 3t^2/2
    T = TruncSeries([0, 2, 8])
    assert (2 + T).invert() == TruncSeries([Fraction(1, 2), Fraction(-1, 2), Fraction(-3, 2)])


def test_invert_rejects_zero_constant():
    with pytest.raises(NonInvertibleConstantTerm):
        TruncSeries([0, 1], 3).invert()
    with pytest.raises(NonInvertibleConstantTerm):
        TruncSeries([1 + X, 1], 3).invert()


def test_invert_unit_monomial_constant():
    s = TruncSeries([X, 1, Y], 4)
    assert s * s.invert() == TruncSeries.constant(1, 4)


@settings(max_examples=40, deadline=None)
@given(scalar_series())
def test_invert_property(s):
    if s[0] == 0:
        return
    assert s * s.invert() == TruncSeries.constant(1, N)


@settings(max_examples=40, deadline=None)
@given(scalar_series(unit=True))
def test_sqrt_property(s):
    r = s.sqrt()
    assert r[0] == 1
    assert r * r == s


def test_sqrt_examples():
    assert TruncSeries.constant(1, 5).sqrt() == TruncSeries.constant(1, 5)
    assert TruncSeries([1, 2, 1], 5).sqrt() == TruncSeries([1, 1], 5)
    expected = TruncSeries([1, -4, -8, -32, -160])
    assert TruncSeries([1, -8], 4).sqrt() == expected
    assert binomial_sqrt(-8, 4) == expected
    assert TruncSeries([1, -8], 15).sqrt() == binomial_sqrt(-8, 15)


def test_sqrt_rejects_bad_constant():
    with pytest.raises(BadConstantTerm):
        TruncSeries([4, 1], 3).sqrt()


# -- division by t^k ---------------------------------------------------------------

def test_divide_by_t_power():
    assert TruncSeries.t(4, 2).divide_by_t_power(2) == TruncSeries.constant(1, 2)
    q = TruncSeries([0, 0, 8, 72], 3).divide_by_t_power(2)
    assert q == TruncSeries([8, 72]) and q.order == 1
    with pytest.raises(NonzeroLowOrderTerm):
        TruncSeries([0, 1, 1], 3).divide_by_t_power(2)


def test_quotient_numerator_valuation():
    M = 6
    root = TruncSeries([1, -8], M).sqrt()
    numerator = TruncSeries([3, -15, -4], M) - 3 * TruncSeries([1, -1], M) * root
    assert numerator.valuation() == 2
    assert numerator[2] == 8 and numerator[3] == 72


# -- parts and substitution ------------------------------------------------------

def test_parts_examples():
    s = TruncSeries([X + 1 + XBAR], 0)
    assert s.positive_part() == TruncSeries([X], 0)
    t_s = TruncSeries([0, X ** 2 + XBAR ** 3], 1)
    assert t_s.negative_part() == TruncSeries([0, XBAR ** 3], 1)


@settings(max_examples=40, deadline=None)
@given(laurent_series())
def test_parts_sum(F):
    assert F.positive_part() + F.negative_part() + F.zero_part() == F
    for var in ("x", "y"):
        assert F.positive_part(var) + F.negative_part(var) + F.zero_part(var) == F


def test_substitute():
    Y0 = solve_Y0(5)
    outer = TruncSeries([Y * Y], 5)
    sub = outer.substitute("y", Y0)
    assert sub == Y0 * Y0
    assert sub[2] == (1 + X) ** 2
    c = TruncSeries([Fraction(3, 2)], 5)
    assert c.substitute("y", Y0) == c
    with pytest.raises(NonzeroValuation):
        outer.substitute("y", TruncSeries([1, 1], 5))


# -- roots -----------------------------------------------------------------------

def test_solve_T():
    T = solve_T(12)
    assert T[0] == 0
    assert T.truncate(4) == TruncSeries([0, 2, 8, 40, 224])
    t = TruncSeries.t(12)
    assert T == 2 * t * (1 + T) ** 2
    # (1 - 4t - sqrt(1-8t)) / (4t)
    radical = (1 - 4 * t - TruncSeries([1, -8], 13).sqrt()) * Fraction(1, 4)
    assert T == radical.divide_by_t_power(1)
    assert TruncSeries([1, -8], 12) * (1 + T) ** 2 == (1 - T) ** 2


def test_solve_X_catalan():
    Xs = solve_X(10)
    assert list(Xs) == [0] + [comb(2 * n, n) // (n + 1) for n in range(1, 11)]


def test_solve_Y0():
    Y0 = solve_Y0(8)
    assert Y0[0] == 0
    assert Y0[1] == 1 + X
    assert Y0[2] == (1 + X) ** 2 * (1 + XBAR)
    assert Y0.specialize(x=1) == solve_T(8)
    # K(x, Y0) = x Y0 - t(1+x)(1+Y0)(x+Y0)
    t = TruncSeries.t(8)
    assert X * Y0 - t * (1 + X) * (1 + Y0) * (X + Y0) == TruncSeries.constant(0, 8)


def test_kernel_series():
    K = kernel(3)
    assert K.order == 3 and K[0] == X * Y and not K[2]


def test_vieta():
    N = 8
    Y0 = solve_Y0(N)
    t = TruncSeries.t(N)
    alpha = -t * (1 + X)
    beta = X - t * (1 + X) ** 2
    gamma = -t * X * (1 + X)
    assert alpha * X * X + beta * X * Y0 + gamma * Y0 * Y0 == TruncSeries.constant(0, N)


def test_Y0_support_window():
    Y0 = solve_Y0(12)
    for n in range(1, 13):
        lo, hi = Y0[n].exponent_range("x")
        assert -n - 2 <= lo and hi <= n + 2
    with pytest.raises(ValueError):
        solve_Y0(5, exponent_window=3)
    assert issubclass(WindowOverflow, Exception)


def test_geometric():
    assert geometric(8, 3) == TruncSeries([1, 8, 64, 512])


# -- serialisation -----------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(laurent_series())
def test_json_round_trip(F):
    assert from_json(to_json(F)) == F


def test_json_shape():
    obj = to_json(TruncSeries([Fraction(1, 2), 2 * X], 1))
    assert obj == {"order": 1, "variables": ["x"], "coeffs": [[[0, "1", "2"]], [[1, "2", "1"]]]}
