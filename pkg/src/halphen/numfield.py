"""Coefficient fields: the rationals and small extensions Q[w]/(m(w)).

Only degrees 2 and 3 are allowed for extensions.  Elements are coordinate
tuples in the power basis 1, w, ..., w^(e-1); all arithmetic is exact.
"""

from .errors import DomainError
from .rationals import QQ, qq


class Rationals:
    """Field object for QQ coefficients (plain mpq values)."""

    degree = 1

    def __init__(self):
        self.zero = QQ(0)
        self.one = QQ(1)

    def __call__(self, value):
        return qq(value)

    def coerce(self, value):
        if isinstance(value, NFElement):
            raise TypeError("cannot demote a number-field element to QQ")
        return qq(value)

    def inv(self, c):
        return 1 / c

    @staticmethod
    def is_rationals():
        return True

    @staticmethod
    def to_str(c):
        return str(c)

    @staticmethod
    def generator_poly(ring, name):
        return None

    def coordinates(self, c):
        return [qq(c)]

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


def _has_rational_root(coeffs):
    """Rational root test for a monic rational polynomial of degree <= 3."""
    from math import lcm

    den = lcm(*(int(c.denominator) for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    lead = ints[-1]
    const = ints[0]
    if const == 0:
        return True
    divs_p = _divisors(abs(const))
    divs_q = _divisors(abs(lead))
    for p in divs_p:
        for q in divs_q:
            for cand in (QQ(p, q), QQ(-p, q)):
                val = QQ(0)
                for c in reversed(coeffs):
                    val = val * cand + c
                if val == 0:
                    return True
    return False


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


class NumberField:
    """Q[w]/(m) with m monic irreducible of degree 2 or 3."""

    def __init__(self, minpoly_coeffs, name="w"):
        coeffs = [qq(c) for c in minpoly_coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if len(coeffs) - 1 not in (2, 3):
            raise DomainError("extension degree must be 2 or 3")
        lead = coeffs[-1]
        coeffs = [c / lead for c in coeffs]
        if _has_rational_root(coeffs):
            raise DomainError("minimal polynomial is reducible over QQ")
        self.minpoly = tuple(coeffs)  # monic, low-to-high
        self.degree = len(coeffs) - 1
        self.name = name
        self.zero = NFElement(self, (QQ(0),) * self.degree)
        self.one = NFElement(self, (QQ(1),) + (QQ(0),) * (self.degree - 1))
        # w^degree expressed in the power basis
        self._wred = tuple(-c for c in self.minpoly[:-1])

    def __repr__(self):
        return f"QQ[{self.name}]/({self._minpoly_str()})"

    def _minpoly_str(self):
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.minpoly[i]
            if not c:
                continue
            mono = f"{self.name}^{i}" if i > 1 else (self.name if i == 1 else "")
            cs = str(c)
            parts.append(f"{cs}*{mono}" if mono and cs not in ("1", "-1") else
                         (mono if cs == "1" and mono else ("-" + mono if cs == "-1" and mono else cs)))
        return " + ".join(parts).replace("+ -", "- ")

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.minpoly == other.minpoly
            and self.name == other.name
        )

    def __hash__(self):
        return hash((self.minpoly, self.name))

    @staticmethod
    def is_rationals():
        return False

    def gen(self):
        coords = [QQ(0)] * self.degree
        coords[1] = QQ(1)
        return NFElement(self, tuple(coords))

    def __call__(self, value):
        if isinstance(value, NFElement):
            if value.field == self:
                return value
            raise TypeError("element of a different extension")
        return NFElement(self, (qq(value),) + (QQ(0),) * (self.degree - 1))

    def coerce(self, value):
        return self(value)

    def from_coordinates(self, coords):
        coords = [qq(c) for c in coords]
        if len(coords) != self.degree:
            raise ValueError("wrong coordinate length")
        return NFElement(self, tuple(coords))

    def inv(self, c):
        return c.inverse()

    def to_str(self, c):
        return c.to_str()

    def generator_poly(self, ring, name):
        if name == self.name:
            return ring.const(self.gen())
        return None

    def coordinates(self, c):
        if isinstance(c, NFElement):
            return list(c.coords)
        return [qq(c)] + [QQ(0)] * (self.degree - 1)

    def _reduce(self, coeffs):
        """Reduce a low-to-high coefficient list modulo the minimal polynomial."""
        e = self.degree
        coeffs = list(coeffs)
        for i in range(len(coeffs) - 1, e - 1, -1):
            c = coeffs[i]
            if c:
                for j, r in enumerate(self._wred):
                    coeffs[i - e + j] += c * r
            coeffs.pop()
        while len(coeffs) < e:
            coeffs.append(QQ(0))
        return tuple(coeffs)


class NFElement:
    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, NFElement):
            return self.field == other.field and self.coords == other.coords
        if other == 0:
            return not any(self.coords)
        return self.coords[0] == qq(other) and not any(self.coords[1:])

    def __hash__(self):
        return hash((self.field.minpoly, self.coords))

    def _other(self, other):
        if isinstance(other, NFElement):
            if other.field != self.field:
                raise TypeError("mixed extensions")
            return other
        return self.field(other)

    def __add__(self, other):
        other = self._other(other)
        return NFElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return (-self) + self._other(other)

    def __mul__(self, other):
        if not isinstance(other, NFElement):
            c = qq(other)
            return NFElement(self.field, tuple(a * c for a in self.coords))
        other = self._other(other)
        e = self.field.degree
        prod = [QQ(0)] * (2 * e - 1)
        for i, a in enumerate(self.coords):
            if not a:
                continue
            for j, b in enumerate(other.coords):
                if b:
                    prod[i + j] += a * b
        return NFElement(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self):
        """Extended Euclid against the minimal polynomial."""
        if not self:
            raise ZeroDivisionError("inverse of zero in number field")
        # r0 = minpoly, r1 = self (as polynomial lists, low-to-high)
        r0 = list(self.field.minpoly)
        r1 = list(self.coords)
        while r1 and not r1[-1]:
            r1.pop()
        s0, s1 = [], [QQ(1)]
        while True:
            q, r = _polydivmod(r0, r1)
            if not r:
                break
            s = _polysub(s0, _polymul(q, s1))
            r0, r1, s0, s1 = r1, r, s1, s
        lead = r1[-1]
        inv_coords = [c / lead for c in s1]
        return NFElement(self.field, self.field._reduce(inv_coords))

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def to_str(self):
        w = self.field.name
        parts = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            mono = w if i == 1 else (f"{w}^{i}" if i else "")
            cs = str(c)
            if mono:
                parts.append(mono if cs == "1" else ("-" + mono if cs == "-1" else f"{cs}*{mono}"))
            else:
                parts.append(cs)
        if not parts:
            return "0"
        s = " + ".join(parts).replace("+ -", "- ")
        return f"({s})" if len(parts) > 1 or (len(parts) == 1 and self.coords[0] == 0 and "*" in parts[0]) else s

    def __repr__(self):
        return self.to_str()


def _polydivmod(a, b):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [QQ(0)] * max(len(a) - db, 0)
    while len(a) - 1 >= db and any(a):
        if not a[-1]:
            a.pop()
            continue
        c = a[-1] / lb
        k = len(a) - 1 - db
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] -= c * bc
        a.pop()
    while a and not a[-1]:
        a.pop()
    return q, a


def _polymul(a, b):
    if not a or not b:
        return []
    out = [QQ(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _polysub(a, b):
    n = max(len(a), len(b))
    out = [QQ(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    while out and not out[-1]:
        out.pop()
    return out


def split_conditions(row):
    """Split one linear condition with extension coefficients into e rational rows.

    A rational vector satisfies all returned rows iff it satisfies the input
    row over the extension; rows are ordered by power-basis coordinate.
    """
    field = None
    for c in row:
        if isinstance(c, NFElement):
            field = c.field
            break
    if field is None:
        return [[qq(c) for c in row]]
    e = field.degree
    rows = [[] for _ in range(e)]
    for c in row:
        coords = field.coordinates(c)
        for j in range(e):
            rows[j].append(coords[j])
    return rows
