import pytest

from osculate import kernel as kv
from osculate.closed_forms import BadStart
from osculate.enumerator import Mode
from osculate.series import TruncSeries, X, Y, solve_Y0

STARTS = [(1, 1), (0, 1), (2, 1)]


def assert_all_pass(reports):
    bad = [r.line() for r in reports if not r.passed]
    assert not bad, bad


def test_orbit():
    orbit = kv.build_orbit()
    assert tuple(orbit) == kv.ORBIT
    assert [p for p in orbit if kv.is_framed(p)] == list(kv.ORBIT[:3])
    for p in orbit:
        assert kv.phi(kv.phi(p)) == p and kv.psi(kv.psi(p)) == p
    assert_all_pass(kv.check_orbit(8))
    with pytest.raises(ValueError):
        kv.check_orbit(0)


def test_framed_pairs_cancel_kernel():
    powers = kv.Y0Powers(10)
    for pair in kv.ORBIT:
        residual, shift = kv.kernel_at(pair, powers)
        assert residual.is_zero()
        if kv.is_framed(pair):
            assert shift == 0
    # the (x, x/Y0) pair is the Vieta relation once Y0^2 is cleared
    assert kv.kernel_at(kv.ORBIT[5], powers)[1] == 2
    assert kv.vieta_residual(10, powers).is_zero()


def test_kernel_root_order_25():
    Y0 = solve_Y0(25)
    t = TruncSeries.t(25)
    assert (X * Y0 - t * (1 + X) * (1 + Y0) * (X + Y0)).is_zero()


@pytest.mark.parametrize("start", STARTS)
def test_main_equation(start):
    assert_all_pass(kv.check_main_equation(*start, 8))


def test_main_equation_needs_boundary():
    residual = kv.main_equation_residual(1, 1, 6, with_boundary=False)
    assert residual.valuation() == 2


def test_main_equation_degenerate_origin():
    # from gaps (0,0) no move is legal, but the boundary rows subtract 12 of 8
    assert not kv.check_main_equation(0, 0, 4)[0].passed


@pytest.mark.parametrize("start", STARTS)
def test_framed_system(start):
    reports = kv.check_framed_system(*start, 8)
    assert len(reports) == 14
    assert_all_pass(reports)


def test_framed_system_univariate_order():
    reports = kv.check_framed_system(1, 1, 4, N1=12)
    assert {r.order_checked for r in reports} == {4, 12}


@pytest.mark.parametrize("start", STARTS)
def test_boundary(start):
    assert_all_pass(kv.check_boundary(*start, 8))


def test_reconstruct_boundary_first_terms():
    P, Q = kv.reconstruct_boundary(1, 1, 6)
    O = kv.star_series(1, 1, Mode.OSCULATING, 6)
    P_enum, Q_enum = kv.boundary(O)
    assert P == P_enum and Q == Q_enum
    # length-1 stars with a closed upper gap end at gaps (1,0) and (2,0),
    # which P = t(1+x)O(x,0) carries at t^2
    assert P[1] == 0
    assert P[2] == (1 + X) * (X + X * X)
    assert P.negative_part().is_zero() and P.zero_part().is_zero()
    for bad in [(0, 0), (-1, 2)]:
        with pytest.raises(BadStart):
            kv.reconstruct_boundary(*bad, 4)


@pytest.mark.parametrize("start", [(1, 1), (2, 1), (1, 3)])
def test_quasivicious(start):
    assert_all_pass(kv.check_quasivicious(*start, 8, N1=12))


def test_quasivicious_rejects_zero_gap():
    with pytest.raises(BadStart):
        kv.check_quasivicious(0, 1, 4)


@pytest.mark.parametrize("start", STARTS)
def test_refined_equation(start):
    assert_all_pass(kv.check_refined_equation(*start, 7, N1=12))


def test_refined_u1_is_main_equation():
    refined = kv.refined_equation_residual(2, 1, 6).specialize(u=1)
    assert refined == kv.main_equation_residual(2, 1, 6)


@pytest.mark.parametrize("start", STARTS)
def test_prop2_derivation(start):
    reports = kv.check_prop2_derivation(*start, 8)
    assert all(r.check_name == "prop2-derivation" for r in reports)
    assert_all_pass(reports)


def test_report_json_shape():
    r = kv.check_main_equation(1, 1, 4)[0]
    assert set(r.to_json()) == {"check_name", "identity", "i", "j", "order", "passed", "first_failure"}
    bad = kv.check_main_equation(0, 0, 4)[0].to_json()
    assert set(bad["first_failure"]) == {"t_power", "x_exp", "y_exp", "u_deg", "value"}


def test_x_bar_round_trip():
    Q = TruncSeries([0, Y, 3 * Y * Y], 2)
    assert kv.xbar_to_y(kv.y_to_xbar(Q)) == Q
