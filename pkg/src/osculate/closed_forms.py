"""Explicit generating functions for osculating and vicious stars.

Every formula here is evaluated as a truncated series (or exact integer) so
it can be compared coefficientwise with the enumerator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .enumerator import Mode, WalkerSystem, complete_gf, enumerate_dp
from .report import IdentityReport
from .series import U, X, XBAR, Y, YBAR, Laurent, TruncSeries, geometric, solve_T, solve_X


class BadStart(ValueError):
    pass


class NegativeExponentSurvived(ArithmeticError):
    pass


class IdentityViolation(AssertionError):
    pass


def _t(order):
    return TruncSeries.t(order)


def _check_start(i, j, *, osculating):
    if i < 0 or j < 0:
        raise BadStart(f"start gaps must be nonnegative, got ({i},{j})")
    if osculating and (i, j) == (0, 0):
        raise BadStart("osculating star generating functions require (i,j) != (0,0)")


def _one_minus_8t_inverse(order):
    return geometric(8, order)


def osculating_length_gf(i, j, N):
    """O_ij(1,1) from the T-form; the second (t/(1+t)) form is asserted equal."""
    _check_start(i, j, osculating=True)
    T = solve_T(N)
    t = _t(N)
    inv_1_2T = (1 + 2 * T).invert()
    inv_2_T = (2 + T).invert()
    first = 1 - 3 * T ** (j + 1) * inv_1_2T + 3 * T ** (i + j + 1) * inv_2_T - 3 * T ** (i + 1) * inv_1_2T
    bracket = T ** j * (2 + T) - T ** (i + j) * (1 + 2 * T) + T ** i * (2 + T)
    second = 1 - 3 * t * (1 + t).invert() * bracket
    if first != second:
        raise IdentityViolation(f"the two T-forms of O_{i},{j}(1,1) disagree")
    return first * _one_minus_8t_inverse(N)


def osculating_11_quotient(N):
    """(3 - 15t - 4t^2 - 3(1-t)sqrt(1-8t)) / (8t^2(1+t))."""
    M = N + 2
    root = TruncSeries([1, -8], M).sqrt()
    numerator = TruncSeries([3, -15, -4], M) - 3 * TruncSeries([1, -1], M) * root
    return numerator.divide_by_t_power(2) * Fraction(1, 8) * TruncSeries([1, 1], N).invert()


def vicious_length_gf(i, j, N):
    _check_start(i, j, osculating=False)
    T = solve_T(N)
    return (1 - T ** i) * (1 - T ** j) * _one_minus_8t_inverse(N)


def vicious_11_binomial(N):
    """Coefficients 2^n/(n+2) * C(2n+2, n+1)."""
    return TruncSeries([Fraction(2 ** n, n + 2) * comb(2 * n + 2, n + 1) for n in range(N + 1)])


def osculation_refined_gf(i, j, N):
    """Length and osculation generating function, u-polynomial coefficients."""
    _check_start(i, j, osculating=True)
    T = solve_T(N)
    two_one_T = 2 * (1 + T)
    inner = (
        T ** (j + 1)
        - T ** (i + j + 1) * (two_one_T - U) * (two_one_T - U * T).invert()
        + T ** (i + 1)
    )
    factor = (4 - U) * ((1 + T) ** 2 - U * T ** 2).invert()
    return (1 - factor * inner) * _one_minus_8t_inverse(N)


# -- Gessel-Viennot ----------------------------------------------------------

def _binom(n, m):
    if m < 0 or m > n:
        return 0
    return comb(n, m)


def gv_determinant(i, j, k, l, r, n):
    """Vicious (i,j)-stars of length n ending at -n+2r, +2k, +2k+2l."""
    cols = (r, r + k, r + k + l)
    rows = (0, i, i + j)
    m = [[_binom(n, c - s) for c in cols] for s in rows]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def vicious_complete_gf(i, j, N):
    """Sum of GV determinants over r, as a series with x^k y^l coefficients.

    A zero start gap gives the zero series (two equal rows).
    """
    _check_start(i, j, osculating=False)
    coeffs = []
    for n in range(N + 1):
        terms = {}
        for k in range(1, i + n + 1):
            for l in range(1, j + n + 1):
                v = sum(gv_determinant(i, j, k, l, r, n) for r in range(n + 1))
                if v:
                    terms[(k, l, 0)] = v
        coeffs.append(Laurent.from_exponents(terms).simplify())
    return TruncSeries(coeffs)


def prop2_rhs(i, j, vicious, N):
    """x^i y^j + t (x+y+xy)/(xy) (V_ij + V_i+1,j + V_i,j+1), all truncated at N."""
    total = vicious[(i, j)] + vicious[(i + 1, j)] + vicious[(i, j + 1)]
    prefactor = (X + Y + X * Y) * XBAR * YBAR
    return Laurent.monomial(1, i, j) + (total * prefactor).shift(1)


def osculating_complete_gf(i, j, N, vicious=None):
    """O_ij(x,y) from the vicious complete series; ``vicious`` may be supplied.

    ``vicious`` maps (i, j) to a complete series; by default the
    Gessel-Viennot sums are used.
    """
    _check_start(i, j, osculating=False)
    if vicious is None:
        vicious = {key: vicious_complete_gf(*key, N) for key in ((i, j), (i + 1, j), (i, j + 1))}
    result = prop2_rhs(i, j, vicious, N) * TruncSeries([1, 1], N).invert()
    for n, c in enumerate(result):
        for (ex, ey, _), _v in Laurent.coerce(c).items():
            if ex < 0 or ey < 0:
                raise NegativeExponentSurvived(f"x^{ex} y^{ey} at t^{n}")
    return result


# -- Baxter numbers ----------------------------------------------------------

@dataclass(frozen=True)
class BaxterSeries:
    b: tuple
    B: TruncSeries


def baxter_numbers(count):
    """b_1 .. b_count from the sum over r of three binomial products."""
    out = []
    for m in range(count):
        s = sum(comb(m + 2, r) * comb(m + 2, r + 1) * comb(m + 2, r + 2) for r in range(m + 1))
        value = Fraction(2 * s, (m + 1) * (m + 2) ** 2)
        assert value.denominator == 1
        out.append(value.numerator)
    return out


def baxter_series(N):
    b = baxter_numbers(N)
    return BaxterSeries(tuple(b), TruncSeries([0] + b, N))


def _watermelon_sources(N, source):
    """Complete series O_01, O_10, O_11 and V_11 through t^N."""
    if source == "enumerator":
        def O(i, j):
            return complete_gf(enumerate_dp(WalkerSystem((i, j), Mode.OSCULATING), N))
        V11 = complete_gf(enumerate_dp(WalkerSystem((1, 1), Mode.VICIOUS), N))
    elif source == "closed":
        cache = {}

        def V(i, j):
            if (i, j) not in cache:
                cache[(i, j)] = vicious_complete_gf(i, j, N)
            return cache[(i, j)]

        def O(i, j):
            keys = ((i, j), (i + 1, j), (i, j + 1))
            return osculating_complete_gf(i, j, N, {k: V(*k) for k in keys})
        V11 = V(1, 1)
    else:
        raise ValueError(f"unknown source {source!r}")
    return O(0, 1), O(1, 0), O(1, 1), V11


def baxter_identities(N, source="closed"):
    """Watermelon identities through t^N; O and V from ``source``.

    ``source`` is "closed" (vicious series from determinants, osculating
    from the complete relation) or "enumerator".
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    bax = baxter_series(N + 2)
    B = bax.B
    t = _t(N + 2)
    inv_1t = TruncSeries([1, 1], N + 2).invert()
    O01, O10, O11, V11 = _watermelon_sources(N, source)
    reports = []

    def rep(name, lhs, rhs):
        reports.append(IdentityReport.from_equal(name, lhs, rhs, N, check_name="baxter"))

    xy = V11.coefficient(1, 1)
    rep("[t^n xy]V_11 = b_(n+1)", xy, TruncSeries(bax.b, N))
    rep("[x1y0]O_01 = B/(1+t)", O01.coefficient(1, 0), B * inv_1t)
    rep("[x1y0]O_10 - 1/(1+t) = B/(1+t)", O10.coefficient(1, 0) - inv_1t, B * inv_1t)
    rep("t/(1+t) [xy]V_11 = B/(1+t)", t * inv_1t * xy, B * inv_1t)
    o01 = O01.coefficient(1, 0)
    o10 = O10.coefficient(1, 0)
    alternating = [sum((-1) ** (n - k) * bax.b[k - 1] for k in range(1, n + 1)) for n in range(N + 1)]
    rep("o_01^(1,0)(n) = sum_k (-1)^(n-k) b_k", o01, TruncSeries(alternating))
    rep("o_10^(1,0)(n) = o_01^(1,0)(n) + (-1)^n", o10, o01 + TruncSeries([(-1) ** n for n in range(N + 1)]))
    o11_10 = O11.coefficient(1, 0)
    o11_01 = O11.coefficient(0, 1)
    o11_11 = O11.coefficient(1, 1)
    rep("[x1y0]O_01 = t[x1y0]O_10 + t[x1y0]O_11", o01, (o10 + o11_10).shift(1))
    base = (1 - t) * B - t
    rep("[x1y0]O_11 = ((1-t)B - t)/(t(1+t))", o11_10, (base * inv_1t).divide_by_t_power(1))
    rep("[x1y0]O_11 = t[x0y1]O_11 + t[x1y1]O_11", o11_10, (o11_01 + o11_11).shift(1))
    rep("[x0y1]O_11 = [x1y0]O_11", o11_01, o11_10)
    watermelon = ((1 - t) * base * inv_1t).divide_by_t_power(2)
    rep("[x1y1]O_11 = (1-t)((1-t)B - t)/(t^2(1+t))", o11_11, watermelon)
    return reports


def baxter_ode_residual(N, B=None):
    """12t - 6(1-2t)B - 2t(3-14t-8t^2)B' - t^2(1+t)(1-8t)B'', through t^(N-2)."""
    if N < 4:
        raise ValueError("N must be at least 4")
    if B is None:
        B = baxter_series(N).B
    B = B.truncate(N)
    d1 = B.derivative()
    d2 = d1.derivative()
    M = N - 2
    res = (
        TruncSeries([0, 12], M)
        - 6 * TruncSeries([1, -2], M) * B
        - 2 * TruncSeries([0, 3, -14, -8], M) * d1
        - TruncSeries([0, 0, 1, -7, -8], M) * d2
    )
    return res.truncate(M)


# polynomial coefficients (ascending powers of t) of the ODE satisfied by the
# osculating watermelon series [x^1 y^1] O_11, obtained by substituting
# B = t^2(1+t)W/(1-t)^2 + t/(1-t) into the Baxter ODE and clearing t^2(1-t)^9
_WATERMELON_ODE = (
    (20, -12, -8),                       # inhomogeneous term
    (-20, 72, 164, -40, -24, 16),        # W
    (0, -10, 60, 48, -92, -38, 32),      # W'
    (0, 0, -1, 8, 2, -16, -1, 8),        # W''
)


def watermelon_ode_residual(W):
    """Residual of the watermelon ODE for a series W, through t^(order-2)."""
    M = W.order - 2
    d1 = W.derivative()
    d2 = d1.derivative()
    const, c0, c1, c2 = (TruncSeries(c, M) for c in _WATERMELON_ODE)
    return (const + c0 * W + c1 * d1 + c2 * d2).truncate(M)


# -- two walkers -------------------------------------------------------------

def two_walker_series(i, N):
    """(O_i(x) with u, W_i(x), V_i(x)) from the p=2 enumerator."""
    O = complete_gf(enumerate_dp(WalkerSystem((i,), Mode.OSCULATING), N), weight_u=True)
    W = complete_gf(enumerate_dp(WalkerSystem((i,), Mode.QUASI_VICIOUS), N))
    V = complete_gf(enumerate_dp(WalkerSystem((i,), Mode.VICIOUS), N))
    return O, W, V


def _at_x0(series):
    return series.select(lambda ex, ey, eu: ex == 0)


def two_walker_suite(i, N):
    """Every two-walker identity, against the p=2 enumerator."""
    if i < 0:
        raise BadStart("start gap must be nonnegative")
    Xs = solve_X(N + 1)
    t = _t(N + 1)
    reports = []

    def rep(name, lhs, rhs):
        reports.append(IdentityReport.from_equal(name, lhs, rhs, N, check_name="two-walker", i=i))

    rep("X = t(1+X)^2", Xs, t * (1 + Xs) ** 2)
    radical = (1 - 2 * t - TruncSeries([1, -4], N + 1).sqrt()) * Fraction(1, 2)
    rep("X = (1-2t-sqrt(1-4t))/(2t)", Xs.truncate(N), radical.divide_by_t_power(1))
    Xs = Xs.truncate(N)
    t = _t(N)
    O, W, V = two_walker_series(i, N)
    O1, W1, V1 = two_walker_series(i + 1, N)
    kernel = 1 - t * (1 + X) * (1 + XBAR)
    O0 = _at_x0(O)
    W0 = _at_x0(W)
    W10 = _at_x0(W1)
    rep("(osc2) (1-t(1+x)(1+xb))O(x) = x^i - t(2+xb+x(1-u))O(0)",
        kernel * O, Laurent.monomial(1, i) - t * (2 + XBAR + X * (1 - U)) * O0)
    rep("V(x) = W(x) - W(0)", V, W - W0)
    rep("(vicious2) (1-t(1+x)(1+xb))V(x) = x^i - W(0)", kernel * V, Laurent.monomial(1, i) - W0)
    rep("W_i(0) = X^i", W0, Xs ** i)
    one_tuX = 1 - t * U * Xs
    rep("O_i(0) = X^i/(1-tuX)", O0, Xs ** i * one_tuX.invert())
    quad = (1 + Xs) ** 2 - U * Xs ** 2
    rep("O_i(0) = X^(i+1)/(t((1+X)^2-uX^2))", O0, (Xs ** (i + 1) * quad.invert()).divide_by_t_power(1).truncate(N - 1))
    O_len = O.specialize(x=1)
    V_len = V.specialize(x=1)
    one_4t = TruncSeries([1, -4], N)
    rep("(1-4t)O_i(t;1) = 1 - (4-u)tX^i/(1-tuX)", one_4t * O_len, 1 - (4 - U) * t * Xs ** i * one_tuX.invert())
    rep("(1-4t)O_i(t;1) = 1 - (4-u)X^(i+1)/((1+X)^2-uX^2)", one_4t * O_len, 1 - (4 - U) * Xs ** (i + 1) * quad.invert())
    rep("(1-4t)V_i(t;1) = 1 - X^i", one_4t * V_len, 1 - Xs ** i)
    ut2 = (1 + U * t) ** 2 - U
    rep("(1-tuX)(1-u+2tu+tuX) = (1+ut)^2 - u", one_tuX * (1 - U + 2 * t * U + t * U * Xs), ut2)
    rep("((1+ut)^2-u)O_i(0) = (1-u+2tu)W_i(0) + tuW_(i+1)(0)",
        ut2 * O0, (1 - U + 2 * t * U) * W0 + t * U * W10)
    lhs = ut2 * O
    xi = Laurent.monomial(1, i)
    rhs = (
        xi * (1 - U + 2 * t * U + X * t * U * (1 - U))
        + t * (1 + 2 * X + X * X * (1 - U)) * XBAR * ((1 - U + 2 * t * U) * V + t * U * V1)
    )
    rep("((1+ut)^2-u)O_i(x) = complete osculating/vicious relation", lhs, rhs)
    O_u1 = O.specialize(u=1)
    rep("(2+t)O_i(x) = 2x^i + t(1+2x)/x (2V_i + V_(i+1))",
        (2 + t) * O_u1, 2 * xi + t * (1 + 2 * X) * XBAR * (2 * V + V1))
    return reports


# -- closed forms against the enumerator ------------------------------------

def check_prop1(i, j, N):
    """Length generating functions against the enumerator totals."""
    _check_start(i, j, osculating=True)
    reports = []

    def rep(name, lhs, rhs):
        reports.append(IdentityReport.from_equal(name, lhs, rhs, N, check_name="prop1", i=i, j=j))

    osc = TruncSeries(enumerate_dp(WalkerSystem((i, j), Mode.OSCULATING), N, track_osculations=False).totals())
    vic = TruncSeries(enumerate_dp(WalkerSystem((i, j), Mode.VICIOUS), N, track_osculations=False).totals())
    rep("O(1,1) T-form = enumerator", osculating_length_gf(i, j, N), osc)
    rep("(1-T^i)(1-T^j)/(1-8t) = enumerator", vicious_length_gf(i, j, N), vic)
    if (i, j) == (1, 1):
        rep("O_11(1,1) = (3-15t-4t^2-3(1-t)sqrt(1-8t))/(8t^2(1+t))", osculating_11_quotient(N), osc)
        rep("V_11(1,1) = 2^n/(n+2) C(2n+2,n+1)", vicious_11_binomial(N), vic)
        rep("V_11(1,1) = T/(2t)", (solve_T(N + 1) * Fraction(1, 2)).divide_by_t_power(1), vic)
    return reports


def check_prop2(i, j, N):
    """Complete osculating series from determinants against the enumerator."""
    _check_start(i, j, osculating=False)
    O = complete_gf(enumerate_dp(WalkerSystem((i, j), Mode.OSCULATING), N, track_osculations=False))
    closed = osculating_complete_gf(i, j, N)
    return [IdentityReport.from_equal(
        "(1+t)O = x^iy^j + t(x+y+xy)/(xy)(V_ij + V_i+1,j + V_i,j+1)", closed, O, N,
        check_name="prop2", i=i, j=j)]


def check_prop3(i, j, N):
    """Osculation-refined closed form against the enumerator histogram."""
    _check_start(i, j, osculating=True)
    reports = []

    def rep(name, lhs, rhs):
        reports.append(IdentityReport.from_equal(name, lhs, rhs, N, check_name="prop3", i=i, j=j))

    table = enumerate_dp(WalkerSystem((i, j), Mode.OSCULATING), N)
    hist = complete_gf(table, weight_u=True).specialize(x=1, y=1)
    closed = osculation_refined_gf(i, j, N)
    rep("O(t;u) closed form = enumerator osculation histogram", closed, hist)
    rep("O(t;1) = length generating function", closed.specialize(u=1), osculating_length_gf(i, j, N))
    free = [table.osculation_histogram(n).get(0, 0) for n in range(N + 1)]
    rep("O(t;0) = osculation-free counts", closed.specialize(u=0), TruncSeries(free))
    qv = enumerate_dp(WalkerSystem((i, j), Mode.QUASI_VICIOUS), N, track_osculations=False).totals()
    rep("O(t;0) = quasi-vicious counts", closed.specialize(u=0), TruncSeries(qv))
    return reports


def check_gv(i, j, N):
    """Determinants against the positional vicious enumeration, all endpoints."""
    _check_start(i, j, osculating=False)
    table = enumerate_dp(WalkerSystem((i, j), Mode.VICIOUS), N, track_position=True, track_osculations=False)
    mismatches = []
    for n in range(N + 1):
        for k in range(1, i + n + 1):
            for l in range(1, j + n + 1):
                for r in range(n + 1):
                    det = gv_determinant(i, j, k, l, r, n)
                    got = table.counts.get((n, (k, l), 0, r), 0)
                    if det != got:
                        mismatches.append((n, k, l, r, det, got))
    # any count outside the index box would also be a disagreement
    for (n, (k, l), _, r), c in table.counts.items():
        if c and not (1 <= k <= i + n and 1 <= l <= j + n and 0 <= r <= n):
            mismatches.append((n, k, l, r, 0, c))
    first = None
    if mismatches:
        n, k, l, r, det, got = min(mismatches)
        first = {"t_power": n, "x_exp": k, "y_exp": l, "u_deg": 0, "value": f"r={r}: det {det} vs count {got}"}
    reports = [IdentityReport("v(k,l;r,n) determinant = fixed-endpoint vicious count", N, first,
                              check_name="gv", i=i, j=j)]
    V = complete_gf(table.without_position())
    reports.append(IdentityReport.from_equal("sum over r of determinants = complete vicious series",
                                             vicious_complete_gf(i, j, N), V, N, check_name="gv", i=i, j=j))
    return reports
