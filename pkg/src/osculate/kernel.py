"""Kernel-method checks for osculating and quasi-vicious stars.

The kernel is K(x,y) = xy - t(1+x)(1+y)(x+y).  Y0 is its power-series root
in y; the orbit of (x, Y0) under the two root-swapping involutions yields
three pairs that may be substituted into the functional equation.  Every
check below compares series coming from the enumerator with the kernel-side
expressions coefficient by coefficient.
"""

from __future__ import annotations

from functools import lru_cache

from .closed_forms import BadStart, osculation_refined_gf
from .enumerator import Mode, WalkerSystem, complete_gf, enumerate_dp
from .report import IdentityReport
from .series import U, X, XBAR, Y, YBAR, Laurent, TruncSeries, geometric, kernel, solve_T, solve_Y0


class NonzeroConstantPart(ArithmeticError):
    pass


UNIVARIATE_ORDER = 25


@lru_cache(maxsize=None)
def star_series(i, j, mode, N, weight_u=False):
    """Complete series of (i,j)-stars from the enumerator (cached)."""
    table = enumerate_dp(WalkerSystem((i, j), Mode(mode)), N, track_osculations=weight_u)
    return complete_gf(table, weight_u=weight_u)


def at_y0(F):
    """F(x, 0)."""
    return F.select(lambda ex, ey, eu: ey == 0)


def at_x0(F):
    """F(0, y)."""
    return F.select(lambda ex, ey, eu: ex == 0)


def boundary(O):
    """P(x) = t(1+x)O(x,0) and Q(y) = t(1+y)O(0,y)."""
    P = ((1 + X) * at_y0(O)).shift(1)
    Q = ((1 + Y) * at_x0(O)).shift(1)
    return P, Q


def y_to_xbar(F):
    """F(x̄) for a series in y alone."""
    return F.transform(lambda ex, ey, eu: (ex - ey, 0, eu))


def xbar_to_y(F):
    """Inverse of :func:`y_to_xbar` on series in x̄ alone."""
    return F.transform(lambda ex, ey, eu: (0, -ex, eu))


# -- orbit -------------------------------------------------------------------

# an orbit element x^a Y0^b is stored as (a, b)

def phi(pair):
    (X_, Y_) = pair
    return ((Y_[0] - X_[0], Y_[1] - X_[1]), Y_)


def psi(pair):
    (X_, Y_) = pair
    return (X_, (X_[0] - Y_[0], X_[1] - Y_[1]))


ORBIT = (
    ((1, 0), (0, 1)),     # (x, Y0)
    ((-1, 1), (0, 1)),    # (x̄Y0, Y0)
    ((-1, 1), (-1, 0)),   # (x̄Y0, x̄)
    ((0, -1), (-1, 0)),   # (1/Y0, x̄)
    ((0, -1), (1, -1)),   # (1/Y0, x/Y0)
    ((1, 0), (1, -1)),    # (x, x/Y0) = (x, Y1)
)

# K(X,Y) = XY - t(X + Y + X^2 + Y^2 + 2XY + X^2 Y + X Y^2), as
# {(deg X, deg Y): [coeff of t^0, coeff of t^1]}
_KERNEL_TERMS = {
    (1, 1): (1, -2),
    (1, 0): (0, -1),
    (0, 1): (0, -1),
    (2, 0): (0, -1),
    (0, 2): (0, -1),
    (2, 1): (0, -1),
    (1, 2): (0, -1),
}


def build_orbit():
    """Alternate Φ and Ψ from (x, Y0) until the start pair returns."""
    orbit = [ORBIT[0]]
    moves = (phi, psi)
    step = 0
    while True:
        nxt = moves[step % 2](orbit[-1])
        step += 1
        if nxt == orbit[0]:
            break
        orbit.append(nxt)
        if len(orbit) > 12:
            raise RuntimeError("orbit failed to close")
    return orbit


def is_framed(pair):
    return all(b >= 0 for _, b in pair)


class Y0Powers:
    """Cached powers of Y0 through a fixed order."""

    def __init__(self, N):
        self.N = N
        self.Y0 = solve_Y0(N)
        self._powers = [TruncSeries.constant(1, N), self.Y0]

    def __call__(self, k):
        while len(self._powers) <= k:
            self._powers.append(self._powers[-1] * self.Y0)
        return self._powers[k]

    def monomial(self, a, b, coeff=1):
        """coeff * x^a * Y0^b, b >= 0."""
        return self(b) * Laurent.monomial(coeff, a)

    def element(self, elem):
        return self.monomial(*elem)


def kernel_at(pair, powers):
    """K(X, Y) with denominators in Y0 cleared; returns (series, multiplier b)."""
    (a1, b1), (a2, b2) = pair
    terms = {}
    for (p, q), tc in _KERNEL_TERMS.items():
        key = (p * a1 + q * a2, p * b1 + q * b2)
        acc = terms.setdefault(key, [0, 0])
        acc[0] += tc[0]
        acc[1] += tc[1]
    shift = -min(b for _, b in terms)
    shift = max(shift, 0)
    N = powers.N
    total = TruncSeries.constant(0, N)
    for (a, b), (c0, c1) in terms.items():
        coeff = TruncSeries([c0, c1], N)
        total = total + coeff * powers.monomial(a, b + shift)
    return total, shift


def vieta_residual(N, powers=None):
    """α x² + β x Y0 + γ Y0² with K(x,y) = αy² + βy + γ."""
    powers = powers or Y0Powers(N)
    t = TruncSeries.t(N)
    alpha = -t * (1 + X)
    beta = X - t * (1 + X) ** 2
    gamma = -t * X * (1 + X)
    Y0 = powers(1)
    return alpha * X * X + beta * X * Y0 + gamma * powers(2)


def check_orbit(N):
    if N < 1:
        raise ValueError("N must be at least 1")
    orbit = build_orbit()
    reports = []

    def rep(name, residual):
        reports.append(IdentityReport.from_residual(name, residual, N, check_name="orbit"))

    ok = tuple(orbit) == ORBIT
    reports.append(IdentityReport(
        "orbit of (x,Y0) is the expected six pairs", N,
        None if ok else {"t_power": 0, "x_exp": 0, "y_exp": 0, "u_deg": 0, "value": str(orbit)},
        check_name="orbit",
    ))
    inv_ok = all(phi(phi(p)) == p and psi(psi(p)) == p for p in orbit)
    closed = all(phi(p) in orbit and psi(p) in orbit for p in orbit)
    reports.append(IdentityReport(
        "Φ, Ψ are involutions and the orbit is closed", N,
        None if (inv_ok and closed) else {"t_power": 0, "x_exp": 0, "y_exp": 0, "u_deg": 0, "value": "structure"},
        check_name="orbit",
    ))
    framed = [p for p in orbit if is_framed(p)]
    reports.append(IdentityReport(
        "framed pairs are (x,Y0), (x̄Y0,Y0), (x̄Y0,x̄)", N,
        None if framed == list(ORBIT[:3]) else {"t_power": 0, "x_exp": 0, "y_exp": 0, "u_deg": 0, "value": str(framed)},
        check_name="orbit",
    ))
    powers = Y0Powers(N)
    for pair in orbit:
        residual, shift = kernel_at(pair, powers)
        rep(f"K{_pair_name(pair)} * Y0^{shift} = 0", residual)
    rep("α x² + β x Y0 + γ Y0² = 0 (Y0 Y1 = x)", vieta_residual(N, powers))
    return reports


def _elem_name(elem):
    a, b = elem
    parts = []
    if a:
        parts.append("x" if a == 1 else "x̄" if a == -1 else f"x^{a}")
    if b:
        parts.append("Y0" if b == 1 else f"Y0^{b}")
    return "".join(parts) or "1"


def _pair_name(pair):
    return f"({_elem_name(pair[0])},{_elem_name(pair[1])})"


# -- functional equation -----------------------------------------------------

def main_equation_residual(i, j, N, with_boundary=True):
    """K O - x^(i+1) y^(j+1) + (x+y+xy)(P(x)+Q(y)) with enumerator series."""
    O = star_series(i, j, Mode.OSCULATING, N)
    P, Q = boundary(O)
    residual = kernel(N) * O - Laurent.monomial(1, i + 1, j + 1)
    if with_boundary:
        residual = residual + (X + Y + X * Y) * (P + Q)
    return residual


def check_main_equation(i, j, N):
    if i < 0 or j < 0:
        raise BadStart("start gaps must be nonnegative")
    residual = main_equation_residual(i, j, N)
    return [IdentityReport.from_residual(
        "K(x,y)O(x,y) = x^(i+1)y^(j+1) - (x+y+xy)(P(x)+Q(y))", residual, N,
        check_name="main-eq", i=i, j=j)]


def _plug(F, var, elem, powers):
    """F with ``var`` replaced by the orbit element x^a Y0^b."""
    a, b = elem
    idx = "xyu".index(var)
    if b == 0:
        def move(ex, ey, eu):
            e = (ex, ey, eu)[idx]
            rest = [ex, ey, eu]
            rest[idx] = 0
            return (rest[0] + a * e, rest[1], rest[2])
        return F.transform(move).truncate(powers.N)
    return F.substitute(var, powers.monomial(a, b))


def _framed_rhs(i, j, pair, powers, N):
    """t X^i Y^j (1+X+Y)/(1+t), valid on the kernel."""
    Xe, Ye = pair
    mono = (i * Xe[0] + j * Ye[0], i * Xe[1] + j * Ye[1])
    factor = 1 + powers.element(Xe) + powers.element(Ye)
    return (powers.element(mono) * factor * geometric(-1, N)).shift(1)


def pq_rhs(i, j, N, powers=None):
    """Right-hand side of the P(x)+Q(x̄) relation, via the on-kernel identity."""
    powers = powers or Y0Powers(N)
    f1, f2, f3 = (_framed_rhs(i, j, p, powers, N) for p in ORBIT[:3])
    return f1 - f2 + f3


def check_framed_system(i, j, N, N1=None):
    if (i, j) == (0, 0) or i < 0 or j < 0:
        raise BadStart("framed system requires (i,j) != (0,0)")
    powers = Y0Powers(N)
    O = star_series(i, j, Mode.OSCULATING, N)
    P, Q = boundary(O)
    reports = []

    def rep(name, lhs, rhs, order=N):
        reports.append(IdentityReport.from_equal(name, lhs, rhs, order, check_name="framed-system", i=i, j=j))

    lhs = {}
    for pair in ORBIT[:3]:
        Xe, Ye = pair
        lhs[pair] = _plug(P, "x", Xe, powers) + _plug(Q, "y", Ye, powers)
        rhs = _framed_rhs(i, j, pair, powers, N)
        rep(f"P(X)+Q(Y) = tX^iY^j(1+X+Y)/(1+t) at {_pair_name(pair)}", lhs[pair], rhs)
        # cleared form: (P(X)+Q(Y))(X+Y+XY) = X^(i+1) Y^(j+1)
        Xs, Ys = powers.element(Xe), powers.element(Ye)
        top = powers.element((( i + 1) * Xe[0] + (j + 1) * Ye[0], (i + 1) * Xe[1] + (j + 1) * Ye[1]))
        rep(f"(P(X)+Q(Y))(X+Y+XY) = X^(i+1)Y^(j+1) at {_pair_name(pair)}",
            lhs[pair] * (Xs + Ys + Xs * Ys), top)
    # direct division where the divisor x+Y0+xY0 has the unit constant x
    Y0 = powers(1)
    div = (X + Y0 + X * Y0).invert()
    rep("P(x)+Q(Y0) = x^(i+1)Y0^(j+1)/(x+Y0+xY0)", lhs[ORBIT[0]],
        powers.monomial(i + 1, j + 1) * div)
    rep("P(x̄Y0)+Q(x̄) = x̄^(i+j)Y0^(i+1)/(x+Y0+xY0)", lhs[ORBIT[2]],
        powers.monomial(-(i + j), i + 1) * div)
    rep("(P(x̄Y0)+Q(Y0))(1+x+Y0) = x̄^i Y0^(i+j+1)", lhs[ORBIT[1]] * (1 + X + Y0),
        powers.monomial(-i, i + j + 1))
    rhs_pq = pq_rhs(i, j, N, powers)
    rep("P(x)+Q(x̄) = three-term Y0 expression", P + y_to_xbar(Q), rhs_pq)
    division_form = (powers.monomial(i + 1, j + 1) + powers.monomial(-(i + j), i + 1)) * div - (
        _framed_rhs(i, j, ORBIT[1], powers, N))
    rep("three-term Y0 expression, division form of first and third terms", division_form, rhs_pq)
    reports.extend(_x1_corollaries(i, j, N1))
    return reports


def _x1_corollaries(i, j, N1=None):
    """P(1)+Q(1) in terms of T, and (1-8t)O(1,1) = 1 - 3P(1) - 3Q(1)."""
    N1 = N1 or UNIVARIATE_ORDER
    T = solve_T(N1)
    O = star_series(i, j, Mode.OSCULATING, N1)
    P, Q = boundary(O)
    P1 = P.specialize(x=1)
    Q1 = Q.specialize(y=1)
    t_form = (T ** (j + 1) + T ** (i + 1)) * (1 + 2 * T).invert() - T ** (i + j + 1) * (2 + T).invert()
    via_y0 = pq_rhs(i, j, N1).specialize(x=1)
    name = "framed-system"
    return [
        IdentityReport.from_equal("P(1)+Q(1) = T-expression", P1 + Q1, t_form, check_name=name, i=i, j=j),
        IdentityReport.from_equal("three-term Y0 expression at x=1 = T-expression", via_y0, t_form, check_name=name, i=i, j=j),
        IdentityReport.from_equal("(1-8t)O(1,1) = 1 - 3P(1) - 3Q(1)", TruncSeries([1, -8], N1) * O.specialize(x=1, y=1),
                                  1 - 3 * P1 - 3 * Q1, check_name=name, i=i, j=j),
    ]


def reconstruct_boundary(i, j, N, powers=None):
    """P(x) and Q(y) as the positive and negative parts of the P(x)+Q(x̄) relation."""
    if (i, j) == (0, 0) or i < 0 or j < 0:
        raise BadStart("boundary reconstruction requires (i,j) != (0,0)")
    rhs = pq_rhs(i, j, N, powers)
    middle = rhs.zero_part("x")
    if not middle.is_zero():
        raise NonzeroConstantPart(f"x^0 part of the P(x)+Q(x̄) right-hand side: {middle.first_nonzero()}")
    return rhs.positive_part("x"), xbar_to_y(rhs.negative_part("x"))


def check_boundary(i, j, N):
    powers = Y0Powers(N)
    P_rec, Q_rec = reconstruct_boundary(i, j, N, powers)
    O = star_series(i, j, Mode.OSCULATING, N)
    P, Q = boundary(O)
    name = "boundary"
    reports = [
        IdentityReport.from_equal("P = positive part of P(x)+Q(x̄) right-hand side", P_rec, P, N, check_name=name, i=i, j=j),
        IdentityReport.from_equal("Q(x̄) = negative part of P(x)+Q(x̄) right-hand side", Q_rec, Q, N, check_name=name, i=i, j=j),
    ]
    bad_p = P.select(lambda ex, ey, eu: ex <= 0 or ey != 0)
    bad_q = Q.select(lambda ex, ey, eu: ey <= 0 or ex != 0)
    reports.append(IdentityReport.from_residual("P has coefficients in xQ[x]", bad_p, N, check_name=name, i=i, j=j))
    reports.append(IdentityReport.from_residual("Q(x̄) has coefficients in x̄Q[x̄]", bad_q, N, check_name=name, i=i, j=j))
    numerator = Laurent.monomial(1, i + 1, j + 1) - (X + Y + X * Y) * (P_rec + Q_rec)
    rebuilt = TruncSeries(numerator.coeffs, N) * kernel(N).invert()
    reports.append(IdentityReport.from_equal("O(x,y) rebuilt from reconstructed P, Q", rebuilt, O, N, check_name=name, i=i, j=j))
    return reports


# -- quasi-vicious stars -----------------------------------------------------

def check_quasivicious(i, j, N, N1=None):
    if i < 1 or j < 1:
        raise BadStart("quasi-vicious checks need i, j >= 1")
    N1 = N1 or UNIVARIATE_ORDER
    powers = Y0Powers(N)
    W = star_series(i, j, Mode.QUASI_VICIOUS, N)
    V = star_series(i, j, Mode.VICIOUS, N)
    Wx0, W0y = at_y0(W), at_x0(W)
    reports = []

    def rep(name, lhs, rhs, order=N):
        reports.append(IdentityReport.from_equal(name, lhs, rhs, order, check_name="quasivicious", i=i, j=j))

    xiyj = Laurent.monomial(1, i, j)
    rep("V = W(x,y) - W(x,0) - W(0,y)", V, W - Wx0 - W0y)
    t = TruncSeries.t(N)
    rep("(1 - t(1+x̄)(x+y)(1+ȳ))V = x^i y^j - W(x,0) - W(0,y)",
        (1 - t * (1 + XBAR) * (X + Y) * (1 + YBAR)) * V, xiyj - Wx0 - W0y)
    for pair in ORBIT[:3]:
        Xe, Ye = pair
        lhs = _plug(Wx0, "x", Xe, powers) + _plug(W0y, "y", Ye, powers)
        mono = (i * Xe[0] + j * Ye[0], i * Xe[1] + j * Ye[1])
        rep(f"W(X,0)+W(0,Y) = X^iY^j at {_pair_name(pair)}", lhs, powers.element(mono))
    kernel_rhs = powers.monomial(i, j) - powers.monomial(-i, i + j) + powers.monomial(-(i + j), i)
    rep("W(x,0)+W(0,x̄) = x^iY0^j - x̄^iY0^(i+j) + x̄^(i+j)Y0^i", Wx0 + y_to_xbar(W0y), kernel_rhs)
    middle = kernel_rhs.zero_part("x")
    reports.append(IdentityReport.from_residual("x^0 part of the W(x,0)+W(0,x̄) right-hand side vanishes", middle, N,
                                                check_name="quasivicious", i=i, j=j))
    rep("W(x,0) = positive part", kernel_rhs.positive_part("x"), Wx0)
    rep("W(0,y) = negative part", xbar_to_y(kernel_rhs.negative_part("x")), W0y)
    # univariate corollaries
    T = solve_T(N1)
    W1 = star_series(i, j, Mode.QUASI_VICIOUS, N1)
    V1 = star_series(i, j, Mode.VICIOUS, N1)
    boundary_sum = at_y0(W1).specialize(x=1) + at_x0(W1).specialize(y=1)
    rep("W(1,0)+W(0,1) = T^j - T^(i+j) + T^i", boundary_sum, T ** j - T ** (i + j) + T ** i, N1)
    rep("(1-8t)V(1,1) = 1 - W(1,0) - W(0,1)", TruncSeries([1, -8], N1) * V1.specialize(x=1, y=1),
        1 - boundary_sum, N1)
    return reports


# -- osculation-refined equation ---------------------------------------------

def refined_equation_residual(i, j, N):
    O = star_series(i, j, Mode.OSCULATING, N, weight_u=True)
    P, Q = boundary(O)
    base = X + Y + X * Y
    return (
        kernel(N) * O
        - Laurent.monomial(1, i + 1, j + 1)
        + (base + Y * Y * (1 - U)) * P
        + (base + X * X * (1 - U)) * Q
    )


def check_refined_equation(i, j, N, N1=None):
    if (i, j) == (0, 0) or i < 0 or j < 0:
        raise BadStart("refined equation checks require (i,j) != (0,0)")
    N1 = N1 or UNIVARIATE_ORDER
    name = "refined"
    reports = [IdentityReport.from_residual(
        "K O = x^(i+1)y^(j+1) - (x+y+xy+y^2(1-u))P(x) - (x+y+xy+x^2(1-u))Q(y)",
        refined_equation_residual(i, j, N), N, check_name=name, i=i, j=j)]
    O = star_series(i, j, Mode.OSCULATING, N, weight_u=True)
    P, Q = boundary(O)
    unweighted = star_series(i, j, Mode.OSCULATING, N)
    reports.append(IdentityReport.from_equal("u=1 gives the unweighted series", O.specialize(u=1), unweighted, N,
                                             check_name=name, i=i, j=j))
    powers = Y0Powers(N)
    for pair in ORBIT[:3]:
        Xe, Ye = pair
        Xs, Ys = powers.element(Xe), powers.element(Ye)
        base = Xs + Ys + Xs * Ys
        lhs = (base + Ys * Ys * (1 - U)) * _plug(P, "x", Xe, powers) + (base + Xs * Xs * (1 - U)) * _plug(Q, "y", Ye, powers)
        top = powers.element(((i + 1) * Xe[0] + (j + 1) * Ye[0], (i + 1) * Xe[1] + (j + 1) * Ye[1]))
        reports.append(IdentityReport.from_equal(f"refined equation at {_pair_name(pair)}", lhs, top, N,
                                                 check_name=name, i=i, j=j))
    # x = 1 evaluation
    T = solve_T(N1)
    O1 = star_series(i, j, Mode.OSCULATING, N1, weight_u=True)
    P1, Q1 = boundary(O1)
    S = P1.specialize(x=1) + Q1.specialize(y=1)
    two_one_T = 2 * (1 + T)
    rhs = T ** (j + 1) - (2 - U + 2 * T) * T ** (i + j + 1) * (two_one_T - U * T).invert() + T ** (i + 1)
    reports.append(IdentityReport.from_equal("(P(1)+Q(1))((1+T)^2-uT^2) = T-expression",
                                             S * ((1 + T) ** 2 - U * T ** 2), rhs, N1, check_name=name, i=i, j=j))
    O11 = O1.specialize(x=1, y=1)
    reports.append(IdentityReport.from_equal("(1-8t)O(1,1) = 1 - (4-u)(P(1)+Q(1))",
                                             TruncSeries([1, -8], N1) * O11, 1 - (4 - U) * S, N1,
                                             check_name=name, i=i, j=j))
    reports.append(IdentityReport.from_equal("O(1,1) = refined closed form", O11, osculation_refined_gf(i, j, N1), N1,
                                             check_name=name, i=i, j=j))
    return reports


# -- from the kernel equations to the complete relation ----------------------

def check_prop2_derivation(i, j, N):
    if i < 0 or j < 0:
        raise BadStart("start gaps must be nonnegative")
    name = "prop2-derivation"
    O = star_series(i, j, Mode.OSCULATING, N)
    P, Q = boundary(O)
    Ws = {k: star_series(*k, Mode.QUASI_VICIOUS, N) for k in ((i, j), (i + 1, j), (i, j + 1))}
    Vs = {k: star_series(*k, Mode.VICIOUS, N) for k in Ws}
    reports = []

    def rep(ident, lhs, rhs, order=N):
        reports.append(IdentityReport.from_equal(ident, lhs, rhs, order, check_name=name, i=i, j=j))

    one_t = TruncSeries([1, 1], N)
    rep("(1+t)P(x)/t = sum of three W(x,0)", (one_t * P).divide_by_t_power(1),
        sum((at_y0(w) for w in Ws.values()), TruncSeries.constant(0, N)), N - 1)
    rep("(1+t)Q(y)/t = sum of three W(0,y)", (one_t * Q).divide_by_t_power(1),
        sum((at_x0(w) for w in Ws.values()), TruncSeries.constant(0, N)), N - 1)
    powers = Y0Powers(N)
    t = TruncSeries.t(N)
    for pair in ORBIT[:3]:
        Xs, Ys = powers.element(pair[0]), powers.element(pair[1])
        # 1/(X+Y+XY) = t(1+X+Y)/((1+t)XY), cleared
        rep(f"(1+t)XY = t(1+X+Y)(X+Y+XY) at {_pair_name(pair)}",
            one_t * Xs * Ys, t * (1 + Xs + Ys) * (Xs + Ys + Xs * Ys))
    total = Vs[(i, j)] + Vs[(i + 1, j)] + Vs[(i, j + 1)]
    rep("(1+t)O = x^iy^j + t(x+y+xy)/(xy)(V_ij + V_i+1,j + V_i,j+1)",
        one_t * O, Laurent.monomial(1, i, j) + (total * (X + Y + X * Y) * XBAR * YBAR).shift(1))
    return reports
