"""Truncated power series in z and implicit-function roots.

series_root computes Y(z) with g(Y(z), z) = 0 mod z^precision by Newton
iteration with doubling precision; the iterate sequence is fixed, so results
for different target precisions agree on their common prefix.
"""

from .errors import NotVanishing, SingularAtOrigin


class TruncatedSeries:
    """Series known modulo z^precision, coefficients in an exact field."""

    __slots__ = ("field", "coeffs", "precision")

    def __init__(self, field, coeffs, precision):
        coeffs = list(coeffs)[:precision]
        while len(coeffs) < precision:
            coeffs.append(field.zero)
        self.field = field
        self.coeffs = coeffs
        self.precision = precision

    @classmethod
    def zero(cls, field, precision):
        return cls(field, [], precision)

    @classmethod
    def variable(cls, field, precision):
        return cls(field, [field.zero, field.one], precision)

    @classmethod
    def const(cls, field, c, precision):
        return cls(field, [field.coerce(c)], precision)

    def truncate(self, precision):
        return TruncatedSeries(self.field, self.coeffs[:precision], precision)

    def order(self):
        """Index of the first nonzero coefficient, or None if all known are zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def __bool__(self):
        return self.order() is not None

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and self.precision == other.precision
            and self.coeffs == other.coeffs
        )

    def _align(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.const(self.field, other, self.precision)
        p = min(self.precision, other.precision)
        return self.truncate(p), other.truncate(p)

    def __add__(self, other):
        a, b = self._align(other)
        return TruncatedSeries(a.field, [x + y for x, y in zip(a.coeffs, b.coeffs)], a.precision)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.field, [-c for c in self.coeffs], self.precision)

    def __sub__(self, other):
        a, b = self._align(other)
        return TruncatedSeries(a.field, [x - y for x, y in zip(a.coeffs, b.coeffs)], a.precision)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = self.field.coerce(other)
            return TruncatedSeries(self.field, [x * c for x in self.coeffs], self.precision)
        a, b = self._align(other)
        p = a.precision
        out = [a.field.zero] * p
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j in range(p - i):
                y = b.coeffs[j]
                if y:
                    out[i + j] = out[i + j] + x * y
        return TruncatedSeries(a.field, out, p)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by z^k."""
        return TruncatedSeries(self.field, [self.field.zero] * k + self.coeffs, self.precision)

    def inverse(self):
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("series has no constant term")
        inv0 = self.field.inv(c0)
        out = [inv0]
        for i in range(1, self.precision):
            acc = self.field.zero
            for j in range(1, i + 1):
                cj = self.coeffs[j] if j < len(self.coeffs) else self.field.zero
                if cj:
                    acc = acc + cj * out[i - j]
            out.append(-acc * inv0)
        return TruncatedSeries(self.field, out, self.precision)

    def __truediv__(self, other):
        a, b = self._align(other)
        return a * b.inverse()

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "z" if i == 1 else (f"z^{i}" if i else "")
            cs = self.field.to_str(c) if hasattr(self.field, "to_str") else str(c)
            parts.append(f"({cs})*{mono}" if mono else f"({cs})")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(z^{self.precision})"

    __repr__ = __str__


def _y_coefficients(g, yvar, zvar):
    """Split g in (y, z) into {y-degree: {z-degree: coeff}}."""
    iy = g.ring._index[yvar]
    iz = g.ring._index[zvar]
    for i in range(g.ring.n):
        if i in (iy, iz):
            continue
        for exps, _ in g.items():
            if exps[i]:
                raise ValueError("series_root input must involve only y and z")
    out = {}
    for exps, c in g.items():
        out.setdefault(exps[iy], {})[exps[iz]] = c
    return out


def _poly_at_series(ycoeffs, Y, field, precision):
    """Evaluate sum_j c_j(z) y^j at y = Y, truncated."""
    maxj = max(ycoeffs) if ycoeffs else 0
    acc = TruncatedSeries.zero(field, precision)
    for j in range(maxj, -1, -1):
        acc = acc * Y
        cj = ycoeffs.get(j)
        if cj:
            zc = [field.zero] * precision
            for ze, c in cj.items():
                if ze < precision:
                    zc[ze] = field.coerce(c)
            acc = acc + TruncatedSeries(field, zc, precision)
    return acc


def series_root(g, precision, yvar="y", zvar="z"):
    """Root Y(z) of g(y, z) = 0 with Y(0) = 0, modulo z^precision.

    Requires g(0,0) = 0 and dg/dy(0,0) != 0; the root is then unique and the
    computation deterministic.
    """
    field = g.ring.field
    yc = _y_coefficients(g, yvar, zvar)
    const = yc.get(0, {}).get(0)
    if const:
        raise NotVanishing("g(0,0) != 0: no branch through the origin")
    gy = {j - 1: {ze: c * j for ze, c in cj.items()} for j, cj in yc.items() if j >= 1}
    dy00 = gy.get(0, {}).get(0)
    if not dy00:
        raise SingularAtOrigin("dg/dy vanishes at the origin")
    if precision < 1:
        return TruncatedSeries.zero(field, max(precision, 0))

    target = 1
    while target < precision:
        target *= 2
    Y = TruncatedSeries.zero(field, 1)
    p = 1
    while p < target:
        p *= 2
        Yp = TruncatedSeries(field, Y.coeffs, p)
        gval = _poly_at_series(yc, Yp, field, p)
        gyval = _poly_at_series(gy, Yp, field, p)
        Y = Yp - gval * gyval.inverse()
    return Y.truncate(precision)
