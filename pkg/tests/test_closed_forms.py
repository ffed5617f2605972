from fractions import Fraction
from math import comb

import pytest

from osculate import closed_forms as cf
from osculate.enumerator import Mode, WalkerSystem, complete_gf, enumerate_dp
from osculate.series import Laurent, TruncSeries, U, X, Y, solve_T


def totals(start, mode, N):
    return TruncSeries(enumerate_dp(WalkerSystem(start, mode), N, track_osculations=False).totals())


def complete(start, mode, N, weight_u=False):
    return complete_gf(enumerate_dp(WalkerSystem(start, mode), N, track_osculations=weight_u), weight_u=weight_u)


def test_osculating_length_examples():
    O = cf.osculating_length_gf(1, 1, 10)
    assert O.truncate(2) == TruncSeries([1, 8, 40])
    assert O == cf.osculating_11_quotient(10)
    O01 = cf.osculating_length_gf(0, 1, 5)
    assert O01[0] == 1 and O01[1] == 2
    for start in [(2, 3), (1, 0), (4, 1)]:
        assert cf.osculating_length_gf(*start, 4)[0] == 1


@pytest.mark.parametrize("start", [(0, 1), (1, 0), (1, 2), (2, 1), (2, 2)])
def test_osculating_length_matches_enumerator(start):
    assert cf.osculating_length_gf(*start, 12) == totals(start, Mode.OSCULATING, 12)


def test_osculating_rejects_origin():
    for fn in (cf.osculating_length_gf, cf.osculation_refined_gf):
        with pytest.raises(cf.BadStart):
            fn(0, 0, 4)
    with pytest.raises(cf.BadStart):
        cf.vicious_length_gf(-1, 2, 4)


def test_vicious_length():
    assert cf.vicious_length_gf(0, 3, 6).is_zero()
    V = cf.vicious_length_gf(1, 1, 8)
    assert V.truncate(4) == TruncSeries([1, 4, 20, 112, 672])
    assert V == cf.vicious_11_binomial(8)
    assert V == (solve_T(9) * Fraction(1, 2)).divide_by_t_power(1)
    assert cf.vicious_length_gf(2, 3, 12) == totals((2, 3), Mode.VICIOUS, 12)


def test_refined_examples():
    R = cf.osculation_refined_gf(1, 1, 8)
    assert R.specialize(u=1) == cf.osculating_length_gf(1, 1, 8)
    hist = enumerate_dp(WalkerSystem((1, 1), Mode.OSCULATING), 2).osculation_histogram(2)
    assert R[2] == sum(c * U ** k for k, c in hist.items())
    assert R[2].specialize(u=1) == 40
    hist_series = complete((2, 1), Mode.OSCULATING, 8, weight_u=True).specialize(x=1, y=1)
    assert cf.osculation_refined_gf(2, 1, 8) == hist_series


def test_gv_determinant():
    for i, j in [(1, 1), (2, 3)]:
        assert cf.gv_determinant(i, j, i, j, 0, 0) == 1
    for n in range(7):
        s = sum(cf.gv_determinant(1, 1, 1, 1, r, n) for r in range(n + 1))
        direct = Fraction(2, (n + 1) * (n + 2) ** 2) * sum(
            comb(n + 2, r) * comb(n + 2, r + 1) * comb(n + 2, r + 2) for r in range(n + 1))
        assert s == direct == cf.baxter_numbers(n + 1)[-1]
        grand = sum(cf.gv_determinant(1, 1, k, l, r, n)
                    for k in range(1, n + 2) for l in range(1, n + 2) for r in range(n + 1))
        assert grand == cf.vicious_length_gf(1, 1, n)[n]


def test_gv_nonnegative():
    for n in range(5):
        for k in range(1, n + 3):
            for l in range(1, n + 3):
                for r in range(n + 1):
                    assert cf.gv_determinant(2, 1, k, l, r, n) >= 0


@pytest.mark.parametrize("start", [(1, 1), (1, 2), (2, 2)])
def test_vicious_complete(start):
    V = cf.vicious_complete_gf(*start, 8)
    assert V[0] == Laurent.monomial(1, *start)
    assert V == complete(start, Mode.VICIOUS, 8)


def test_vicious_11_multiple_of_xy():
    V = cf.vicious_complete_gf(1, 1, 6)
    for c in V:
        lo_x, _ = Laurent.coerce(c).exponent_range("x")
        lo_y, _ = Laurent.coerce(c).exponent_range("y")
        assert lo_x >= 1 and lo_y >= 1


@pytest.mark.parametrize("start", [(1, 1), (0, 1), (2, 1), (0, 3)])
def test_osculating_complete(start):
    O = cf.osculating_complete_gf(*start, 8)
    assert O[0] == Laurent.monomial(1, *start)
    assert O == complete(start, Mode.OSCULATING, 8)


def test_osculating_complete_01_display():
    N = 7
    O = cf.osculating_complete_gf(0, 1, N)
    V11 = cf.vicious_complete_gf(1, 1, N)
    lhs = TruncSeries([1, 1], N) * O
    rhs = Y + ((X + Y + X * Y) * V11 * Laurent.monomial(1, -1, -1)).shift(1)
    assert lhs == rhs


def test_osculating_complete_at_one():
    O = cf.osculating_complete_gf(1, 1, 8)
    assert O.specialize(x=1, y=1) == cf.osculating_length_gf(1, 1, 8)


def test_complete_relation_fails_at_origin():
    # O_00 is the single empty star while every vicious series on the right vanishes
    report = cf.check_prop2(0, 0, 4)[0]
    assert not report.passed
    assert report.first_nonzero["t_power"] == 1


def test_baxter_numbers():
    assert cf.baxter_numbers(8) == [1, 2, 6, 22, 92, 422, 2074, 10754]
    bax = cf.baxter_series(6)
    assert bax.B == TruncSeries([0, 1, 2, 6, 22, 92, 422])


@pytest.mark.parametrize("source", ["closed", "enumerator"])
def test_baxter_identities(source):
    reports = cf.baxter_identities(10, source)
    assert len(reports) == 11
    assert all(r.passed for r in reports), [r.line() for r in reports if not r.passed]


def test_baxter_bad_order():
    with pytest.raises(ValueError):
        cf.baxter_identities(1)
    with pytest.raises(ValueError):
        cf.baxter_ode_residual(3)


def test_baxter_ode():
    res = cf.baxter_ode_residual(30)
    assert res.order == 28 and res.is_zero()
    b = [0] + cf.baxter_numbers(12)
    b[3] += 1
    assert not cf.baxter_ode_residual(12, TruncSeries(b)).is_zero()


def test_watermelon_ode():
    W = complete((1, 1), Mode.OSCULATING, 24).coefficient(1, 1)
    assert cf.watermelon_ode_residual(W).is_zero()
    bumped = W + TruncSeries.t(24, 5)
    assert not cf.watermelon_ode_residual(bumped).is_zero()


@pytest.mark.parametrize("i", [0, 1, 2])
def test_two_walker_suite(i):
    reports = cf.two_walker_suite(i, 14)
    assert all(r.passed for r in reports), [r.line() for r in reports if not r.passed]


def test_two_walker_catalan():
    reports = cf.two_walker_suite(1, 4)
    assert reports[0].identity == "X = t(1+X)^2"
    with pytest.raises(cf.BadStart):
        cf.two_walker_suite(-1, 4)


@pytest.mark.parametrize("check, start, N", [
    (cf.check_prop1, (1, 1), 12),
    (cf.check_prop1, (0, 1), 12),
    (cf.check_prop3, (2, 1), 10),
    (cf.check_gv, (2, 1), 6),
    (cf.check_prop2, (1, 2), 6),
])
def test_check_wrappers(check, start, N):
    reports = check(*start, N)
    assert reports and all(r.passed for r in reports)
    assert all((r.i, r.j) == start for r in reports)
