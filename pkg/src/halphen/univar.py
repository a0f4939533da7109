"""Univariate polynomials over an exact field, and the field k(x) of fractions.

UPoly is dense (degrees stay small here).  RatFunc keeps fractions reduced
with monic denominators.  Factorization over QQ is delegated to sympy after
our own squarefree/content preprocessing.
"""

from .errors import ZeroPolynomial
from .numfield import Rationals
from .rationals import QQ, qq

_RATIONALS = Rationals()


class UPoly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, field, c):
        return cls(field, [c])

    @classmethod
    def x(cls, field):
        return cls(field, [field.zero, field.one])

    def degree(self):
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.one

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def _wrap(self, other):
        if isinstance(other, UPoly):
            return other
        return UPoly(self.field, [self.field(other)])

    def __add__(self, other):
        other = self._wrap(other)
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else self.field.zero
            b = other.coeffs[i] if i < len(other.coeffs) else self.field.zero
            out.append(a + b)
        return UPoly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return UPoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return (-self) + self._wrap(other)

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            c = self.field(other)
            return UPoly(self.field, [a * c for a in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UPoly(self.field, [])
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return UPoly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        r = UPoly(self.field, [self.field.one])
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def divmod(self, other):
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        inv_lb = self.field.inv(b[-1])
        q = [self.field.zero] * max(len(a) - db, 0)
        while len(a) - 1 >= db and a:
            if not a[-1]:
                a.pop()
                continue
            c = a[-1] * inv_lb
            k = len(a) - 1 - db
            q[k] = c
            for i in range(db + 1):
                a[k + i] = a[k + i] - c * b[i]
            a.pop()
        return UPoly(self.field, q), UPoly(self.field, a)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def monic(self):
        if not self.coeffs:
            return self
        inv = self.field.inv(self.coeffs[-1])
        return UPoly(self.field, [c * inv for c in self.coeffs])

    def gcd(self, other):
        a, b = self, self._wrap(other)
        while b:
            a, b = b, a % b
        return a.monic() if a else a

    def lcm(self, other):
        if not self or not other:
            return UPoly(self.field, [])
        return (self * other).exact_div(self.gcd(other)).monic()

    def derivative(self):
        return UPoly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def squarefree_part(self):
        if self.degree() <= 0:
            return self.monic()
        g = self.gcd(self.derivative())
        return self.exact_div(g).monic()

    def evaluate(self, value):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def compose_shift(self, a):
        """p(x + a) by Horner in (x + a)."""
        x_plus_a = UPoly(self.field, [self.field(a), self.field.one])
        acc = UPoly(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * x_plus_a + UPoly.const(self.field, c)
        return acc

    def taylor_coefficients(self, a, count):
        """First `count` Taylor coefficients of p at x = a."""
        sh = self.compose_shift(a).coeffs
        return [sh[i] if i < len(sh) else self.field.zero for i in range(count)]

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = self.field.to_str(c)
            mono = "x" if i == 1 else (f"x^{i}" if i else "")
            if mono:
                parts.append(mono if cs == "1" else ("-" + mono if cs == "-1" else f"{cs}*{mono}"))
            else:
                parts.append(cs)
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def upoly_from_multipoly(p, varname=None):
    """Convert a MultiPoly in one effective variable to a UPoly."""
    ring = p.ring
    used = set()
    for exps, _ in p.items():
        for i, e in enumerate(exps):
            if e:
                used.add(i)
    if len(used) > 1:
        raise ValueError("polynomial is not univariate")
    idx = used.pop() if used else (ring._index[varname] if varname else 0)
    coeffs = {}
    for exps, c in p.items():
        coeffs[exps[idx]] = c
    deg = max(coeffs) if coeffs else -1
    return UPoly(ring.field, [coeffs.get(i, ring.field.zero) for i in range(deg + 1)])


def univariate_factor(p):
    """Factor a univariate rational polynomial into monic irreducibles.

    Returns [(UPoly, multiplicity), ...] with factors monic, irreducible over
    QQ, pairwise distinct, sorted by (degree, coefficient tuple).  The product
    of factors^multiplicities equals p up to a rational scalar.
    """
    if isinstance(p, UPoly):
        coeffs = list(p.coeffs)
    else:
        coeffs = [qq(c) for c in p]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
    if not coeffs:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    if len(coeffs) == 1:
        return []
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * x**i for i, c in enumerate(coeffs))
    _, factors = sympy.Poly(expr, x, domain="QQ").factor_list()
    out = []
    for fac, mult in factors:
        fc = fac.all_coeffs()[::-1]
        up = UPoly(_RATIONALS, [QQ(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in fc]).monic()
        out.append((up, int(mult)))
    out.sort(key=lambda fm: (fm[0].degree(), tuple((int(c.numerator), int(c.denominator)) for c in fm[0].coeffs)))
    return out


class RatFuncField:
    """Field k(x) of reduced fractions of univariate polynomials over k."""

    def __init__(self, base_field, varname="x"):
        self.base = base_field
        self.varname = varname
        self.zero = RatFunc(self, UPoly(base_field, []), UPoly(base_field, [base_field.one]), True)
        self.one = RatFunc(self, UPoly(base_field, [base_field.one]), UPoly(base_field, [base_field.one]), True)

    def __eq__(self, other):
        return isinstance(other, RatFuncField) and self.base == other.base and self.varname == other.varname

    def __hash__(self):
        return hash(("ratfunc", self.base, self.varname))

    def __repr__(self):
        return f"{self.base}({self.varname})"

    @staticmethod
    def is_rationals():
        return False

    def __call__(self, value):
        if isinstance(value, RatFunc):
            if value.field == self:
                return value
            raise TypeError("fraction from a different function field")
        if isinstance(value, UPoly):
            return RatFunc(self, value, UPoly(self.base, [self.base.one]))
        return RatFunc(
            self,
            UPoly(self.base, [self.base(value)]),
            UPoly(self.base, [self.base.one]),
            True,
        )

    def coerce(self, value):
        if isinstance(value, RatFunc):
            return self(value)
        if isinstance(value, UPoly):
            return self(value)
        return self(self.base.coerce(value))

    def x(self):
        return self(UPoly.x(self.base))

    def inv(self, c):
        return c.inverse()

    def to_str(self, c):
        return str(c)

    def generator_poly(self, ring, name):
        if name == self.varname:
            return ring.const(self.x())
        inner = self.base.generator_poly(ring, name) if hasattr(self.base, "generator_poly") else None
        return inner

    def from_fraction(self, num, den):
        return RatFunc(self, num, den)


class RatFunc:
    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den, reduced=False):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not reduced:
            if not num:
                den = UPoly(field.base, [field.base.one])
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                lead = den.coeffs[-1]
                inv = field.base.inv(lead)
                num = num * inv
                den = den * inv
        self.field = field
        self.num = num
        self.den = den

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        return self == self.field(other)

    def __hash__(self):
        return hash((self.num, self.den))

    def _wrap(self, other):
        if isinstance(other, RatFunc):
            return other
        return self.field.coerce(other)

    def __add__(self, other):
        other = self._wrap(other)
        return RatFunc(self.field, self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, -self.num, self.den, True)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return (-self) + self._wrap(other)

    def __mul__(self, other):
        other = self._wrap(other)
        return RatFunc(self.field, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.field, self.den, self.num)

    def __truediv__(self, other):
        return self * self._wrap(other).inverse()

    def __rtruediv__(self, other):
        return self._wrap(other) * self.inverse()

    def is_polynomial(self):
        return self.den.degree() == 0

    def evaluate(self, value):
        dv = self.den.evaluate(value)
        if not dv:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return self.num.evaluate(value) * self.field.base.inv(dv)

    def taylor(self, a, count):
        """First `count` Taylor coefficients at x = a (denominator must not vanish)."""
        base = self.field.base
        nsh = self.num.compose_shift(a).coeffs
        dsh = self.den.compose_shift(a).coeffs
        if not dsh or not dsh[0]:
            raise ZeroDivisionError("denominator vanishes at expansion point")
        inv0 = base.inv(dsh[0])
        out = []
        for i in range(count):
            acc = nsh[i] if i < len(nsh) else base.zero
            for j in range(1, i + 1):
                dj = dsh[j] if j < len(dsh) else base.zero
                if dj:
                    acc = acc - dj * out[i - j]
            out.append(acc * inv0)
        return out

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__
