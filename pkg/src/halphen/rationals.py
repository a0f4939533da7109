"""Exact rational coefficients.

gmpy2.mpq is used when available (it is much faster than Fraction for the
coefficient churn in Groebner bases); fractions.Fraction is a drop-in
fallback.  Everything downstream only relies on field semantics plus
`.numerator` / `.denominator`.
"""

from math import gcd, lcm

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ

QQ0 = QQ(0)
QQ1 = QQ(1)


def qq(value):
    """Coerce ints, Fractions, strings like '31/4' to the rational type."""
    if isinstance(value, str):
        if "/" in value:
            a, b = value.split("/")
            return QQ(int(a), int(b))
        return QQ(int(value))
    return QQ(value)


def content_scale(coeffs):
    """Scalar c > 0 such that dividing by c makes the list integer-primitive."""
    num = 0
    den = 1
    for c in coeffs:
        num = gcd(num, int(c.numerator))
        den = lcm(den, int(c.denominator))
    if num == 0:
        return QQ1
    return QQ(num, den)


def small_rationals():
    """0, 1, -1, 2, -2, 1/2, -1/2, 3, ...: deterministic small-height schedule."""
    yield QQ0
    h = 1
    while True:
        yield QQ(h)
        yield QQ(-h)
        for n in range(1, h):
            if gcd(n, h) == 1:
                yield QQ(n, h)
                yield QQ(-n, h)
        h += 1
