"""Bridge to sympy for polynomial factorization and multivariate gcd over QQ.

Everything else in the package is self-contained; factoring into irreducibles
is the one classical subroutine delegated to a mature library.  Conversions
are exact.
"""

from .poly import Poly
from .rationals import QQ


def _to_sympy(p, symbols, sympy):
    expr = sympy.Integer(0)
    for exps, c in p.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, e in zip(symbols, exps):
            if e:
                term *= s**e
        expr += term
    return expr


def _from_sympy(expr, ring, symbols, sympy):
    poly = sympy.Poly(expr, *symbols, domain="QQ")
    terms = {}
    for exps, c in poly.terms():
        cr = sympy.Rational(c)
        terms[ring.encode(exps)] = QQ(int(cr.p), int(cr.q))
    return Poly(ring, terms)


def factor_poly(p):
    """Irreducible factorization over QQ: [(factor, multiplicity), ...].

    Factors are primitive with positive leading coefficient, sorted
    deterministically; the rational content is dropped.
    """
    import sympy

    ring = p.ring
    symbols = sympy.symbols(ring.names)
    if ring.n == 1:
        symbols = (symbols,) if not isinstance(symbols, tuple) else symbols
    _, factors = sympy.factor_list(_to_sympy(p, symbols, sympy))
    out = []
    for expr, mult in factors:
        q = _from_sympy(expr, ring, symbols, sympy).primitive()
        out.append((q, int(mult)))
    out.sort(key=lambda fm: _poly_sort_key(fm[0]))
    return out


def gcd_polys(polys):
    """GCD of a list of polynomials over QQ (primitive, positive lead)."""
    polys = [p for p in polys if p]
    if not polys:
        return None
    ring = polys[0].ring
    if len(polys) == 1:
        return polys[0].primitive()
    if _gcd_is_trivial(polys):
        return ring.one()
    import sympy

    symbols = sympy.symbols(ring.names)
    g = _to_sympy(polys[0], symbols, sympy)
    for p in polys[1:]:
        g = sympy.gcd(g, _to_sympy(p, symbols, sympy))
        if g == 1:
            return ring.one()
    return _from_sympy(g, ring, symbols, sympy).primitive()


def _gcd_is_trivial(polys):
    """Cheap certificate that gcd = 1: restrict to a line keeping degrees.

    If the restrictions keep full degree and have univariate gcd 1, any
    common factor would survive restriction, so the gcd is constant.
    """
    from .univar import UPoly, upoly_from_multipoly
    from .poly import PolyRing
    from .rationals import small_rationals

    ring = polys[0].ring
    line_ring = PolyRing(("s",), ring.field)
    s = line_ring.gen("s")
    sched = small_rationals()
    for _ in range(8):
        point = [next(sched) for _ in range(ring.n)]
        dirv = [next(sched) for _ in range(ring.n)]
        images = {
            v: line_ring.const(point[i]) + s * dirv[i] for i, v in enumerate(ring.names)
        }
        restricted = []
        ok = True
        for p in polys:
            r = p.subs(images)
            if r.degree() != p.degree():
                ok = False
                break
            restricted.append(upoly_from_multipoly(r))
        if not ok:
            continue
        g = restricted[0]
        for u in restricted[1:]:
            g = g.gcd(u)
        if g.degree() == 0:
            return True
        return False
    return False


def _poly_sort_key(p):
    return tuple(
        (exps, (int(c.numerator), int(c.denominator))) for exps, c in p.items()
    )
