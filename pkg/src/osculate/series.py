"""Exact truncated power series in ``t`` over Laurent polynomials.

Coefficients live in one of three rings, all handled by the same code:

* plain rationals (``int`` or :class:`fractions.Fraction`),
* :class:`Laurent` polynomials in ``x``, ``y`` (exponents in Z) and ``u``.

A :class:`TruncSeries` stores the coefficients of ``t^0 .. t^N``.  Binary
operations between series of different orders truncate to the smaller one.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

VARIABLES = ("x", "y", "u")

# Exponent triples are packed into one int so that monomial products are a
# single integer addition.  Valid while every exponent stays below _HALF.
_SHIFT = 1 << 20
_HALF = _SHIFT >> 1


class NonInvertibleConstantTerm(ArithmeticError):
    pass


class BadConstantTerm(ArithmeticError):
    pass


class NonzeroLowOrderTerm(ArithmeticError):
    pass


class NonzeroValuation(ArithmeticError):
    pass


class WindowOverflow(RuntimeError):
    """A Laurent coefficient left the exponent window it was expected to fit."""


def pack(ex=0, ey=0, eu=0):
    return (ex * _SHIFT + ey) * _SHIFT + eu


def unpack(key):
    eu = (key + _HALF) % _SHIFT - _HALF
    key = (key - eu) // _SHIFT
    ey = (key + _HALF) % _SHIFT - _HALF
    ex = (key - ey) // _SHIFT
    return ex, ey, eu


def _is_scalar(c):
    return isinstance(c, numbers.Rational)


def _normalize(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _inv_scalar(c):
    if c == 0:
        raise NonInvertibleConstantTerm("zero constant term")
    return _normalize(Fraction(1) / c)


class Laurent:
    """Sparse Laurent polynomial in x, y, u with rational coefficients.

    Stored zero coefficients are never kept.  Instances are treated as
    immutable; every operation returns a new object.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: packed exponent -> nonzero rational
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, coeff=1, x=0, y=0, u=0):
        return cls._raw({pack(x, y, u): coeff} if coeff else {})

    @classmethod
    def from_exponents(cls, mapping):
        """Build from ``{(ex, ey, eu): c}``; shorter tuples are zero-padded."""
        terms = {}
        for exps, c in mapping.items():
            if isinstance(exps, int):
                exps = (exps,)
            k = pack(*exps)
            terms[k] = terms.get(k, 0) + c
        return cls(terms)

    @classmethod
    def coerce(cls, c):
        if isinstance(c, Laurent):
            return c
        return cls._raw({0: c} if c else {})

    # -- inspection -------------------------------------------------------

    def items(self):
        for k, c in self.terms.items():
            yield unpack(k), c

    def coefficient(self, x=0, y=0, u=0):
        return self.terms.get(pack(x, y, u), 0)

    def is_monomial(self):
        return len(self.terms) == 1

    def exponent_range(self, var):
        idx = VARIABLES.index(var)
        exps = [e[idx] for e, _ in self.items()]
        if not exps:
            return None
        return min(exps), max(exps)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Laurent):
            return self.terms == other.terms
        if _is_scalar(other):
            if not other:
                return not self.terms
            return self.terms == {0: other}
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (ex, ey, eu), c in sorted(self.items(), key=lambda kv: kv[0]):
            mono = "*".join(
                f"{v}^{e}" if e != 1 else v
                for v, e in zip(VARIABLES, (ex, ey, eu))
                if e
            )
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if _is_scalar(other):
            if not other:
                return self
            other = Laurent._raw({0: other})
        elif not isinstance(other, Laurent):
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Laurent._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if _is_scalar(other) or isinstance(other, Laurent):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            if not other:
                return Laurent._raw({})
            return Laurent._raw({k: c * other for k, c in self.terms.items()})
        if not isinstance(other, Laurent):
            return NotImplemented
        out = {}
        _accumulate_product(out, self.terms, other.terms)
        return Laurent._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            inv = _inv_scalar(other)
            return self * inv
        if isinstance(other, Laurent):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = Laurent._raw({0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self):
        if len(self.terms) != 1:
            raise NonInvertibleConstantTerm(f"{self!r} is not a unit monomial")
        (k, c), = self.terms.items()
        return Laurent._raw({-k: _inv_scalar(c)})

    # -- transformations --------------------------------------------------

    def transform(self, fn):
        """Apply ``fn(ex, ey, eu) -> (ex', ey', eu')`` to every monomial."""
        out = {}
        for exps, c in self.items():
            k = pack(*fn(*exps))
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k)
        return Laurent._raw(out)

    def specialize(self, **values):
        """Evaluate some variables at rationals, e.g. ``specialize(x=1, u=0)``.

        The result is a scalar when no variables remain.
        """
        idx = [(VARIABLES.index(v), val) for v, val in values.items()]
        out = {}
        for exps, c in self.items():
            exps = list(exps)
            for i, val in idx:
                e = exps[i]
                if e:
                    if val == 0:
                        if e > 0:
                            c = 0
                            break
                        raise ZeroDivisionError(f"{VARIABLES[i]}=0 with negative exponent")
                    c = c * Fraction(val) ** e
                exps[i] = 0
            if not c:
                continue
            k = pack(*exps)
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k)
        return Laurent._raw({k: _normalize(v) for k, v in out.items()}).simplify()

    def select(self, predicate):
        """Keep monomials whose exponent triple satisfies ``predicate``."""
        return Laurent._raw({k: c for k, c in self.terms.items() if predicate(*unpack(k))})

    def simplify(self):
        """Collapse to a scalar when only the constant monomial is present."""
        if not self.terms:
            return 0
        if len(self.terms) == 1 and 0 in self.terms:
            return self.terms[0]
        return self


def _accumulate_product(out, a, b):
    get = out.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            out[k] = get(k, 0) + ca * cb


def _terms_of(c):
    if isinstance(c, Laurent):
        return c.terms
    return {0: c} if c else {}


# ---------------------------------------------------------------------------


class TruncSeries:
    """Power series in t known through ``t^order``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order=None):
        coeffs = list(coeffs)
        if order is not None:
            coeffs = coeffs[: order + 1] + [0] * (order + 1 - len(coeffs))
        if not coeffs:
            raise ValueError("a series needs at least the t^0 coefficient")
        self.coeffs = coeffs

    @property
    def order(self):
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, order):
        return cls([c], order)

    @classmethod
    def t(cls, order, power=1):
        coeffs = [0] * (order + 1)
        if power <= order:
            coeffs[power] = 1
        return cls(coeffs)

    @classmethod
    def polynomial(cls, coeffs, order):
        """Series from a finite coefficient list ``[c0, c1, ...]``."""
        return cls(coeffs, order)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        body = " + ".join(f"({c})*t^{n}" for n, c in enumerate(self.coeffs) if c)
        return f"TruncSeries({body or '0'}, order={self.order})"

    def truncate(self, order):
        return TruncSeries(self.coeffs[: order + 1], order)

    def is_zero(self):
        return not any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            n = min(self.order, other.order)
            return all(a == b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1]))
        if _is_scalar(other) or isinstance(other, Laurent):
            return self == TruncSeries.constant(other, self.order)
        return NotImplemented

    __hash__ = None

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            return other
        if _is_scalar(other) or isinstance(other, Laurent):
            return TruncSeries.constant(other, self.order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = min(self.order, other.order)
        return TruncSeries([_add(a, b) for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])])

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other) or isinstance(other, Laurent):
            return TruncSeries([_simplify(c * other) for c in self.coeffs])
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return _series_mul(self, other)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n):
        if n < 0:
            return self.invert() ** (-n)
        result = TruncSeries.constant(1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * _inv_scalar(other)
        if isinstance(other, Laurent):
            return self * other.inverse()
        if isinstance(other, TruncSeries):
            return self * other.invert()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.invert() * other

    # -- series-specific operations ----------------------------------------

    def invert(self):
        """Multiplicative inverse; the constant term must be a unit."""
        c0 = self.coeffs[0]
        if isinstance(c0, Laurent):
            inv0 = c0.inverse()
        else:
            inv0 = _inv_scalar(c0)
        laurent = any(isinstance(c, Laurent) for c in self.coeffs)
        out = [inv0]
        for n in range(1, self.order + 1):
            acc = {} if laurent else 0
            for k in range(1, n + 1):
                a = self.coeffs[k]
                if not a:
                    continue
                if laurent:
                    _accumulate_product(acc, _terms_of(a), _terms_of(out[n - k]))
                else:
                    acc += a * out[n - k]
            if laurent:
                acc = Laurent({k: v for k, v in acc.items() if v})
            out.append(_simplify(-(inv0 * acc)))
        return TruncSeries(out)

    def sqrt(self):
        """Square root with constant term 1, by Newton iteration r <- (r + s/r)/2."""
        if self.coeffs[0] != 1:
            raise BadConstantTerm(f"constant term {self.coeffs[0]!r} is not 1")
        root = TruncSeries.constant(1, 0)
        prec = 1
        while prec < self.order + 1:
            prec = min(2 * prec, self.order + 1)
            target = self.truncate(prec - 1)
            r = TruncSeries(root.coeffs, prec - 1)
            root = (r + target * r.invert()) * Fraction(1, 2)
            root = TruncSeries([_normalize(c) if _is_scalar(c) else c for c in root.coeffs])
        return root.truncate(self.order)

    def shift(self, k):
        """Multiply by t^k (k >= 0), keeping the order."""
        if k == 0:
            return self
        return TruncSeries([0] * k + self.coeffs[: max(0, self.order + 1 - k)], self.order)

    def divide_by_t_power(self, k):
        """Exact division by t^k; the result has order N - k."""
        if k > self.order + 1:
            raise ValueError("cannot divide beyond the known order")
        for n in range(k):
            if self.coeffs[n]:
                raise NonzeroLowOrderTerm(f"coefficient of t^{n} is {self.coeffs[n]!r}")
        return TruncSeries(self.coeffs[k:])

    def derivative(self):
        if self.order == 0:
            return TruncSeries([0])
        return TruncSeries([n * c for n, c in enumerate(self.coeffs) if n][: self.order])

    def valuation(self):
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def map(self, fn):
        return TruncSeries([_simplify(fn(c)) for c in self.coeffs])

    def specialize(self, **values):
        def ev(c):
            return c.specialize(**values) if isinstance(c, Laurent) else c
        return self.map(ev)

    def select(self, predicate):
        def sel(c):
            if isinstance(c, Laurent):
                return c.select(predicate)
            return c if predicate(0, 0, 0) else 0
        return self.map(sel)

    def transform(self, fn):
        def tr(c):
            return Laurent.coerce(c).transform(fn)
        return self.map(tr)

    def coefficient(self, x=0, y=0, u=0):
        """Scalar series of one monomial's coefficients, e.g. [x^1 y^0]."""
        out = []
        for c in self.coeffs:
            if isinstance(c, Laurent):
                out.append(c.coefficient(x, y, u))
            else:
                out.append(c if (x, y, u) == (0, 0, 0) else 0)
        return TruncSeries(out)

    def positive_part(self, var="x"):
        i = VARIABLES.index(var)
        return self.select(lambda *e: e[i] > 0)

    def negative_part(self, var="x"):
        i = VARIABLES.index(var)
        return self.select(lambda *e: e[i] < 0)

    def zero_part(self, var="x"):
        i = VARIABLES.index(var)
        return self.select(lambda *e: e[i] == 0)

    def substitute(self, var, inner):
        """Replace ``var`` by the series ``inner``, which must have no t^0 term.

        Coefficients must be polynomial (non-negative exponents) in ``var``.
        """
        if inner.coeffs[0]:
            raise NonzeroValuation("substituted series has a nonzero t^0 term")
        idx = VARIABLES.index(var)
        order = min(self.order, inner.order)
        # group t^n var^k pieces by k
        groups = {}
        for n, c in enumerate(self.coeffs[: order + 1]):
            if not c:
                continue
            for (exps, v) in Laurent.coerce(c).items():
                k = exps[idx]
                if k < 0:
                    raise ValueError(f"negative power of {var} cannot be substituted")
                if n + k > order:
                    continue
                rest = list(exps)
                rest[idx] = 0
                groups.setdefault(k, [0] * (order + 1))
                groups[k][n] = _add(groups[k][n], Laurent.monomial(v, *rest))
        result = TruncSeries.constant(0, order)
        inner = inner.truncate(order)
        power = TruncSeries.constant(1, order)
        for k in range(0, max(groups, default=-1) + 1):
            if k:
                power = power * inner
            if k in groups:
                result = result + TruncSeries([_simplify(c) for c in groups[k]]) * power
        return result

    def first_nonzero(self):
        """Multi-index of the first nonzero coefficient, or None."""
        for n, c in enumerate(self.coeffs):
            if not c:
                continue
            if isinstance(c, Laurent):
                (ex, ey, eu), v = min(c.items(), key=lambda kv: kv[0])
            else:
                ex = ey = eu = 0
                v = c
            return {"t_power": n, "x_exp": ex, "y_exp": ey, "u_deg": eu, "value": str(v)}
        return None


def _simplify(c):
    if isinstance(c, Laurent):
        return c.simplify()
    return _normalize(c)


def _add(a, b):
    if isinstance(a, Laurent) or isinstance(b, Laurent):
        return (Laurent.coerce(a) + b).simplify()
    return _normalize(a + b)


def _series_mul(a, b):
    order = min(a.order, b.order)
    a_nz = [(n, c) for n, c in enumerate(a.coeffs[: order + 1]) if c]
    b_nz = [(n, c) for n, c in enumerate(b.coeffs[: order + 1]) if c]
    laurent = any(isinstance(c, Laurent) for _, c in a_nz) or any(
        isinstance(c, Laurent) for _, c in b_nz
    )
    if not laurent:
        out = [0] * (order + 1)
        for i, c in a_nz:
            for j, d in b_nz:
                if i + j > order:
                    break
                out[i + j] += c * d
        return TruncSeries([_normalize(c) for c in out])
    acc = [{} for _ in range(order + 1)]
    b_terms = [(j, _terms_of(d)) for j, d in b_nz]
    for i, c in a_nz:
        ct = _terms_of(c)
        for j, dt in b_terms:
            if i + j > order:
                break
            _accumulate_product(acc[i + j], ct, dt)
    return TruncSeries([Laurent({k: _normalize(v) for k, v in d.items() if v}).simplify() for d in acc])


# ---------------------------------------------------------------------------
# Common symbols

X = Laurent.monomial(x=1)
Y = Laurent.monomial(y=1)
U = Laurent.monomial(u=1)
XBAR = Laurent.monomial(x=-1)
YBAR = Laurent.monomial(y=-1)


def geometric(ratio, order):
    """1/(1 - ratio*t) as a series."""
    return TruncSeries([ratio ** n for n in range(order + 1)])


def solve_T(order):
    """The series T with T = 2t(1+T)^2, coefficient by coefficient."""
    T = [0] * (order + 1)
    for n in range(1, order + 1):
        m = n - 1
        square = sum(T[a] * T[m - a] for a in range(1, m))
        T[n] = 2 * ((1 if m == 0 else 0) + 2 * T[m] + square)
    return TruncSeries(T)


def solve_X(order):
    """The two-walker root X = t(1+X)^2, i.e. (1-2t-sqrt(1-4t))/(2t)."""
    Xs = [0] * (order + 1)
    for n in range(1, order + 1):
        m = n - 1
        square = sum(Xs[a] * Xs[m - a] for a in range(1, m))
        Xs[n] = (1 if m == 0 else 0) + 2 * Xs[m] + square
    return TruncSeries(Xs)


def solve_Y0(order, exponent_window=None):
    """Power-series root in y of K(x, y) = xy - t(1+x)(1+y)(x+y).

    Uses Y = t(1+x)(1 + (1+x̄)Y + x̄Y²) one coefficient at a time.  The x-support
    of the t^n coefficient is checked against [-n-2, n+2].
    """
    if exponent_window is None:
        exponent_window = order
    if exponent_window < order:
        raise ValueError("exponent_window must be at least the order")
    one_x = 1 + X
    one_xbar = 1 + XBAR
    Yc = [Laurent()] * (order + 1)
    for n in range(1, order + 1):
        m = n - 1
        square = Laurent()
        for a in range(1, m):
            square = square + Yc[a] * Yc[m - a]
        inner = (1 if m == 0 else 0) + one_xbar * Yc[m] + XBAR * square
        coeff = one_x * inner
        bound = min(n, exponent_window) + 2
        rng = coeff.exponent_range("x")
        if rng is not None and (rng[0] < -bound or rng[1] > bound):
            raise WindowOverflow(f"t^{n} coefficient of Y0 has x-exponents {rng}")
        Yc[n] = coeff
    return TruncSeries([0] + Yc[1:])


def kernel(order):
    """K(x,y) = xy - t(1+x)(1+y)(x+y) as a series in t."""
    return TruncSeries([X * Y, -((1 + X) * (1 + Y) * (X + Y))], order)


# ---------------------------------------------------------------------------
# JSON


def _variables_used(series):
    used = set()
    for c in series.coeffs:
        if isinstance(c, Laurent):
            for exps, _ in c.items():
                used.update(v for v, e in zip(VARIABLES, exps) if e)
    return [v for v in VARIABLES if v in used]


def to_json(series, variables=None):
    """``{order, variables, coeffs}`` with one entry list per t-power.

    Each entry is ``[exponent..., num, den]``; num/den are decimal strings.
    """
    if variables is None:
        variables = _variables_used(series)
    idx = [VARIABLES.index(v) for v in variables]
    coeffs = []
    for c in series.coeffs:
        entries = []
        for exps, v in sorted(Laurent.coerce(c).items(), key=lambda kv: kv[0]):
            if any(e for i, e in enumerate(exps) if i not in idx):
                raise ValueError(f"monomial {exps} uses variables outside {variables}")
            v = Fraction(v)
            entries.append([exps[i] for i in idx] + [str(v.numerator), str(v.denominator)])
        coeffs.append(entries)
    return {"order": series.order, "variables": list(variables), "coeffs": coeffs}


def from_json(obj):
    variables = obj.get("variables", [])
    idx = [VARIABLES.index(v) for v in variables]
    coeffs = []
    for entries in obj["coeffs"]:
        terms = {}
        for entry in entries:
            exps = [0, 0, 0]
            for i, e in zip(idx, entry[: len(idx)]):
                exps[i] = int(e)
            num, den = entry[len(idx):]
            terms[tuple(exps)] = _normalize(Fraction(int(num), int(den)))
        coeffs.append(Laurent.from_exponents(terms).simplify())
    return TruncSeries(coeffs, obj["order"])
