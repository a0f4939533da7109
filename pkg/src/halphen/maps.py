"""Rational self-maps of a cubic surface: Geiser and Bertini involutions.

The linear systems |2A-3P| and |5A-6Q| give the involution only up to a
linear automorphism of P^3, so both constructors interpolate the corrective
matrix against samples produced by the geometric definitions: swapped
residual points on lines through P, and negation in the group law of plane
cubic sections through the residual point of the line through Q.
"""

from math import comb, isqrt

from .errors import (
    DimensionMismatch,
    InterpolationDegenerate,
    LineOnSurface,
    NonMinimalConfiguration,
    ZeroMap,
    EliminationOverflow,
)
from .extfactor import gcd_polys
from .groebner import groebner, hilbert_dimension_degree
from .ideals import PolyIdeal, divides_poly, exact_div_poly, transport, _homogeneous_parts
from .linalg import LinearConditionSet, right_kernel, rank, rref
from .linsys import LinearSystemOnX, impose_basepoint
from .numfield import NumberField, Rationals
from .poly import GREVLEX, Poly, PolyRing, elimination_order
from .rationals import QQ, qq, small_rationals
from .surface import COORDS, ClosedPoint, is_eckardt, line_and_residual, tangent_plane

DEFAULT_MAX_SAMPLES = 200


class RationalMapP3:
    """Rational map X -> P^n given by homogeneous forms of common degree."""

    def __init__(self, source, equations, cancel_gcd=True):
        eqs = list(equations)
        if all(e.is_zero() for e in eqs):
            raise ZeroMap("all defining equations vanish")
        degs = {e.degree() for e in eqs if e}
        if len(degs) != 1:
            raise ValueError("defining equations must share a common degree")
        if cancel_gcd:
            g = gcd_polys([e for e in eqs if e])
            if g is not None and g.degree() > 0:
                eqs = [exact_div_poly(e, g) if e else e for e in eqs]
        eqs = _joint_primitive(eqs)
        self.source = source
        self.equations = tuple(eqs)
        self.degree = next(e.degree() for e in eqs if e)

    @classmethod
    def identity(cls, source):
        ring = source.ring
        return cls(source, [ring.gen(v) for v in COORDS], cancel_gcd=False)

    def __repr__(self):
        return "RationalMapP3(deg %d; %s)" % (
            self.degree,
            ", ".join(str(e) for e in self.equations),
        )

    def strings(self):
        return [str(e) for e in self.equations]

    def evaluate(self, coords):
        return [e.evaluate(coords) for e in self.equations]


def _joint_primitive(eqs):
    from .rationals import content_scale

    coeffs = [c for e in eqs for c in e.terms.values()]
    if not coeffs:
        return eqs
    c = content_scale(coeffs)
    lead = None
    for e in eqs:
        if e:
            lead = e.terms[e.leading_key()]
            break
    if lead is not None and lead < 0:
        c = -c
    return [e / c for e in eqs]


class InvolutionRecord:
    """A Geiser or Bertini involution with its centre and normalized map."""

    def __init__(self, kind, centre, map_, biregular=False):
        self.kind = kind
        self.centre = centre
        self.map = map_
        self.biregular = biregular

    def __repr__(self):
        return f"InvolutionRecord({self.kind} at {self.centre!r}, biregular={self.biregular})"


def maps_equal_on_X(f, g):
    """Projective equality on X: all cross products f_i g_j - f_j g_i in (F)."""
    if f.source != g.source:
        return False
    F = f.source.F
    n = len(f.equations)
    if n != len(g.equations):
        return False
    for i in range(n):
        for j in range(i + 1, n):
            cross = f.equations[i] * g.equations[j] - f.equations[j] * g.equations[i]
            if not divides_poly(F, cross):
                return False
    return True


def compose(f, g):
    """f o g (first apply g): substitute g's equations into f's.

    Accepts a RationalMapP3 or a pair of forms (a fibration) as f; the result
    is gcd-cancelled but not reduced modulo the surface equation.
    """
    if isinstance(f, RationalMapP3):
        outer = list(f.equations)
        wrap = lambda eqs: RationalMapP3(g.source, eqs)
    else:
        outer = list(f)
        wrap = lambda eqs: eqs
    composed = compose_forms(outer, list(g.equations))
    F = g.source.F
    if all(divides_poly(F, e) for e in composed):
        raise ZeroMap("composition vanishes identically on the surface")
    if isinstance(f, RationalMapP3):
        return wrap(composed)
    gcd = gcd_polys([e for e in composed if e])
    if gcd is not None and gcd.degree() > 0:
        composed = [exact_div_poly(e, gcd) for e in composed]
    return _joint_primitive(composed)


def compose_forms(outer, inner):
    """Substitute the 4 inner forms for x, y, z, t in each outer form."""
    ring = inner[0].ring
    memo = {(0, 0, 0, 0): ring.one()}

    def prod(exps):
        val = memo.get(exps)
        if val is not None:
            return val
        i = max(k for k in range(4) if exps[k])
        prev = list(exps)
        prev[i] -= 1
        val = prod(tuple(prev)) * inner[i]
        memo[exps] = val
        return val

    out = []
    for eq in outer:
        acc = ring.zero()
        for exps, c in eq.items():
            acc = acc + prod(exps) * c
        out.append(acc)
    return out


# -- interpolation of the corrective linear automorphism -------------------------


class _TauInterpolator:
    """Accumulates conditions tau * j(u) || v over sample pairs (u, v)."""

    def __init__(self):
        self.conds = LinearConditionSet([f"m{i}{j}" for i in range(4) for j in range(4)])

    def add_sample(self, ju, v):
        if not any(ju) or not any(v):
            return
        for a in range(4):
            for b in range(a + 1, 4):
                row = [_zero_like(ju[0])] * 16
                for c in range(4):
                    row[4 * a + c] = ju[c] * v[b]
                    row[4 * b + c] = -(ju[c] * v[a])
                self.conds.add_extension_row(row)

    def solve(self):
        kern = self.conds.solution_basis()
        if len(kern) != 1:
            return None
        tau = [[kern[0][4 * i + j] for j in range(4)] for i in range(4)]
        if rank(tau, 4) != 4:
            return None
        return tau


def _zero_like(x):
    fld = getattr(x, "field", None)
    return QQ(0) if fld is None else fld.zero


def _sqrt_rational(c):
    """Exact square root of a nonnegative rational, or None."""
    num, den = int(c.numerator), int(c.denominator)
    if num < 0:
        return None
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return QQ(rn, rd)
    return None


def _quadratic_roots(c0, c1, c2):
    """Roots of c2 s^2 + c1 s + c0 over QQ or a quadratic extension.

    Returns (field, s1, s2) or None when the roots collide.
    """
    disc = c1 * c1 - 4 * c2 * c0
    if not disc:
        return None
    r = _sqrt_rational(disc)
    if r is not None:
        field = Rationals()
        s1 = (-c1 + r) / (2 * c2)
        s2 = (-c1 - r) / (2 * c2)
        return field, s1, s2
    # monic minimal polynomial of s: s^2 + (c1/c2) s + (c0/c2)
    field = NumberField([c0 / c2, c1 / c2, QQ(1)], name="w")
    s1 = field.gen()
    s2 = field(-c1 / c2) - s1
    return field, s1, s2


def _direction_schedule(n):
    """Deterministic direction vectors in Q^n (not all zero)."""
    for h in range(1, 40):
        rng = range(-h, h + 1)

        def rec(prefix):
            if len(prefix) == n:
                if any(prefix) and max(abs(v) for v in prefix) == h:
                    yield list(prefix)
                return
            for v in rng:
                yield from rec(prefix + [v])

        yield from rec([])


def _restrict_to_line(F, p, d):
    """Coefficients c0..cdeg of F(p + s*d) as a univariate in s."""
    ring1 = PolyRing(("s",), F.ring.field)
    s = ring1.gen("s")
    images = {}
    for i, v in enumerate(F.ring.names):
        images[v] = ring1.const(p[i]) + s * d[i]
    res = F.subs(images)
    deg = F.degree()
    out = []
    for k in range(deg + 1):
        out.append(res.coefficient((k,)))
    return out


def geiser(X, P, max_samples=DEFAULT_MAX_SAMPLES):
    """Geiser involution at a rational point, normalized geometrically.

    Lines through P meet X in two residual points which the involution swaps;
    the corrective matrix is interpolated from such sample pairs.
    """
    ambient = LinearSystemOnX.full(X, 2)
    jsys = impose_basepoint(X, ambient, P, 3)
    if len(jsys) != 4:
        raise DimensionMismatch(
            f"|2A-3P| has {len(jsys)} sections, expected 4"
        )
    j_eqs = list(jsys.sections)
    p = [qq(c) for c in P.coordinates()]
    interp = _TauInterpolator()
    attempts = 0
    tau = None
    for d in _direction_schedule(4):
        if attempts >= max_samples:
            break
        # skip directions proportional to p
        if rank([p, [qq(c) for c in d]], 4) < 2:
            continue
        attempts += 1
        coeffs = _restrict_to_line(X.F, p, [qq(c) for c in d])
        c0, c1, c2, c3 = coeffs
        if c0:
            continue  # P not on X would be caught earlier; defensive
        if not c3 or not c1:
            # third point at infinity of the parameter, or line tangent at P
            continue
        quad = _quadratic_roots(c1, c2, c3)
        if quad is None:
            continue
        field, s1, s2 = quad
        for sa, sb in ((s1, s2), (s2, s1)):
            u = [field.coerce(p[i]) + sa * field.coerce(d[i]) for i in range(4)]
            v = [field.coerce(p[i]) + sb * field.coerce(d[i]) for i in range(4)]
            ju = [e.evaluate(u) for e in j_eqs]
            if not any(ju):
                continue
            interp.add_sample(ju, v)
        tau = interp.solve()
        if tau is not None:
            break
    if tau is None:
        raise InterpolationDegenerate(
            f"could not pin the corrective matrix within {max_samples} lines"
        )
    eqs = _apply_tau(tau, j_eqs)
    map_ = RationalMapP3(X, eqs)
    return InvolutionRecord("geiser", P, map_, biregular=is_eckardt(X, P))


def _apply_tau(tau, j_eqs):
    out = []
    ring = j_eqs[0].ring
    for a in range(4):
        acc = ring.zero()
        for c in range(4):
            if tau[a][c]:
                acc = acc + j_eqs[c] * tau[a][c]
        out.append(acc)
    return out


def _plane_basis(ell):
    """Parametrization P^2 -> {ell = 0} and its section for rational points."""
    from .ideals import _linear_form_vector

    hv = _linear_form_vector(ell)
    rows = [hv]
    for i in range(4):
        cand = [QQ(1) if j == i else QQ(0) for j in range(4)]
        if rank(rows + [cand], 4) == len(rows) + 1:
            rows.append(cand)
        if len(rows) == 4:
            break
    from .linalg import mat_inverse

    A = rows
    Ainv = mat_inverse(A)
    # plane points: old = Ainv * (0, a, b, c)
    cols = [[Ainv[i][j] for i in range(4)] for j in range(1, 4)]
    return A, cols


def _cubic_on_plane(F, cols):
    plane_ring = PolyRing(("u0", "u1", "u2"), F.ring.field)
    gens = plane_ring.gens()
    images = {}
    for i, v in enumerate(F.ring.names):
        acc = plane_ring.zero()
        for j in range(3):
            if cols[j][i]:
                acc = acc + gens[j] * cols[j][i]
        images[v] = acc
    return F.subs(images), plane_ring


def _plane_cubic_smooth(C, plane_ring):
    gens = [C] + [C.derivative(v) for v in plane_ring.names]
    gb = groebner(gens)
    lead = [plane_ring.decode(g.leading_key()) for g in gb]
    dim, _ = hilbert_dimension_degree(lead, 3)
    return dim == -1


def _third_intersection(C, r, tangent_row):
    """Third point of the tangent line of C at r (plane coordinates).

    tangent_row is the gradient of C at r; the tangent line is its kernel.
    """
    kern = right_kernel([tangent_row], 3)
    if len(kern) != 2:
        return None
    # parametrize the tangent line through r: r + s*d with d independent of r
    d = None
    for cand in kern:
        if rank([r, cand], 3) == 2:
            d = cand
            break
    if d is None:
        return None
    ring1 = PolyRing(("s",), C.ring.field)
    s = ring1.gen("s")
    images = {v: ring1.const(r[i]) + s * d[i] for i, v in enumerate(C.ring.names)}
    res = C.subs(images)
    cs = [res.coefficient((k,)) for k in range(4)]
    # s = 0 is a double root; the residual root solves c3 s + c2 = 0 after /s^2
    if not cs[3]:
        return None  # third point at parameter infinity: d itself on C
    if cs[0] or cs[1]:
        return None  # not tangent: defensive
    s3 = -cs[2] / cs[3]
    return [r[i] + s3 * d[i] for i in range(3)]


def bertini(X, Q, max_samples=DEFAULT_MAX_SAMPLES):
    """Bertini involution at a degree-2 point, normalized geometrically.

    Sample pairs are negatives in the group law of plane cubic sections E
    through the residual point R, realized by lines through the third
    intersection of the tangent at R (the tangent-line process).
    """
    line, R = line_and_residual(X, Q)
    ambient = LinearSystemOnX.full(X, 5)
    jsys = impose_basepoint(X, ambient, Q, 6)
    if len(jsys) == 5:
        raise NonMinimalConfiguration(
            "|5A-6Q| has 5 sections: the surface is not minimal at this configuration"
        )
    if len(jsys) != 4:
        raise DimensionMismatch(f"|5A-6Q| has {len(jsys)} sections, expected 4")
    j_eqs = list(jsys.sections)
    ell1, ell2 = line
    interp = _TauInterpolator()
    tau = None
    attempts = 0
    plane_sched = small_rationals()
    planes = []
    for _ in range(24):
        c = next(plane_sched)
        planes.append(ell1 + ell2 * c)
    planes.append(ell2)
    rcoords_proj = [qq(v) for v in R.coordinates()]
    for ell in planes:
        if tau is not None or attempts >= max_samples:
            break
        A, cols = _plane_basis(ell)
        C, plane_ring = _cubic_on_plane(X.F, cols)
        if not C or C.degree() != 3:
            continue
        if not _plane_cubic_smooth(C, plane_ring):
            continue
        # plane coordinates of R: (0, a, b, c) in the A-coordinates
        newc = [sum(A[i][j] * rcoords_proj[j] for j in range(4)) for i in range(4)]
        if newc[0]:
            continue
        r = newc[1:]
        grad = [C.derivative(v).evaluate(r) for v in plane_ring.names]
        if not any(grad):
            continue
        S = _third_intersection(C, r, grad)
        if S is None:
            continue
        taken = 0
        for d in _direction_schedule(3):
            if attempts >= max_samples or taken >= 3:
                break
            dq = [qq(c) for c in d]
            if rank([S, dq], 3) < 2:
                continue
            attempts += 1
            ring1 = PolyRing(("s",), C.ring.field)
            s = ring1.gen("s")
            images = {v: ring1.const(S[i]) + s * dq[i] for i, v in enumerate(plane_ring.names)}
            res = C.subs(images)
            cs = [res.coefficient((k,)) for k in range(4)]
            if cs[0]:
                continue
            if not cs[3] or not cs[1]:
                continue
            quad = _quadratic_roots(cs[1], cs[2], cs[3])
            if quad is None:
                continue
            field, s1, s2 = quad
            added = False
            for sa, sb in ((s1, s2), (s2, s1)):
                q1 = [field.coerce(S[i]) + sa * field.coerce(dq[i]) for i in range(3)]
                q2 = [field.coerce(S[i]) + sb * field.coerce(dq[i]) for i in range(3)]
                # lift to P^3 through the plane parametrization
                u = [None] * 4
                v = [None] * 4
                for i in range(4):
                    u[i] = sum((field.coerce(cols[j][i]) * q1[j] for j in range(3)), field.zero)
                    v[i] = sum((field.coerce(cols[j][i]) * q2[j] for j in range(3)), field.zero)
                ju = [e.evaluate(u) for e in j_eqs]
                if not any(ju):
                    continue
                interp.add_sample(ju, v)
                added = True
            if added:
                taken += 1
        tau = interp.solve()
        if tau is not None:
            break
    if tau is None:
        tau = interp.solve()
    if tau is None:
        raise InterpolationDegenerate(
            f"could not pin the corrective matrix within {max_samples} samples"
        )
    eqs = _apply_tau(tau, j_eqs)
    map_ = RationalMapP3(X, eqs)
    return InvolutionRecord("bertini", Q, map_, biregular=False)


def image_variety(f, X, extra=None, max_degree=40):
    """Ideal of the Zariski closure of f(X) (or of f on a subscheme).

    Elimination with a homogenizing scalar: from <F, extra, a_i - s*f_i>,
    eliminate the source variables and the scalar.
    """
    eqs = list(f.equations) if isinstance(f, RationalMapP3) else list(f)
    n = len(eqs)
    names = COORDS + ("s_",) + tuple(f"a{i+1}" for i in range(n))
    ring = PolyRing(names)
    gens = [transport(X.F, ring)]
    for g in extra or []:
        gens.append(transport(g, ring))
    sv = ring.gen("s_")
    for i, e in enumerate(eqs):
        if e.degree() > max_degree:
            raise EliminationOverflow("map degree exceeds the elimination cap")
        gens.append(ring.gen(f"a{i+1}") - sv * transport(e, ring))
    try:
        gb = groebner(gens, elimination_order(5))
    except OverflowError as exc:
        raise EliminationOverflow(str(exc)) from exc
    target = PolyRing(tuple(f"a{i+1}" for i in range(n)))
    out = []
    for g in gb:
        if all(all(e == 0 for e in exps[:5]) for exps, _ in g.items()):
            back = transport(g, target)
            out.extend(p.primitive() for p in _homogeneous_parts(back))
    if not out:
        raise EliminationOverflow("image ideal came out empty")
    return PolyIdeal(out)
