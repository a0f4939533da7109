"""Cubic surfaces in P^3 and their pointwise geometry.

Closed points are stored by their prime ideals over QQ; geometric coordinates
over an extension are only materialized transiently inside algorithms.
"""

from .errors import DomainError, LineOnSurface
from .groebner import groebner, normal_form
from .ideals import PolyIdeal, _AffinePointData, _Chart, _affine_ring, _choose_chart, _dehomogenize, dimension_and_degree, minimal_primes
from .linalg import mat_inverse, rank, rref
from .numfield import NumberField, Rationals
from .poly import GREVLEX, Poly, PolyRing
from .rationals import QQ, qq
from .univar import univariate_factor

COORDS = ("x", "y", "z", "t")


def standard_ring():
    return PolyRing(COORDS)


def mat_mul(a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = a[i][0] * b[0][j]
            for k in range(1, n):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _matvec(m, v):
    out = []
    for i in range(len(m)):
        acc = m[i][0] * v[0]
        for j in range(1, len(v)):
            acc = acc + m[i][j] * v[j]
        out.append(acc)
    return out


class CoordinateChange:
    """Invertible linear change; new-coordinate point p maps to M @ p in the old ones."""

    def __init__(self, matrix):
        self.matrix = [list(r) for r in matrix]
        self.inverse = mat_inverse(self.matrix)

    @classmethod
    def identity(cls, n=4, field=None):
        one = QQ(1) if field is None else field.one
        zero = QQ(0) if field is None else field.zero
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    def transform_poly(self, p, target=None):
        """Rewrite a polynomial in the new coordinates."""
        return p.apply_matrix(self.matrix, target)

    def untransform_poly(self, p, target=None):
        return p.apply_matrix(self.inverse, target)

    def point_to_old(self, coords):
        return _matvec(self.matrix, list(coords))

    def point_to_new(self, coords):
        return _matvec(self.inverse, list(coords))

    def then(self, other):
        """First self, then other (matrices compose as self.M @ other.M)."""
        return CoordinateChange(mat_mul(self.matrix, other.matrix))


class CubicSurface:
    """Nonsingular cubic surface V(F) in P^3."""

    def __init__(self, F, check=True):
        if isinstance(F, str):
            F = standard_ring().parse(F)
        if F.ring.names != COORDS:
            raise ValueError("surface must live in variables x, y, z, t")
        if not F.is_homogeneous() or F.degree() != 3:
            raise DomainError("defining form must be homogeneous of degree 3")
        self.ring = F.ring
        self.F = F.primitive()
        self._nonsingular = None
        if check and not self.is_nonsingular():
            raise DomainError("surface is singular")

    @property
    def equation(self):
        return self.F

    def __repr__(self):
        return f"CubicSurface({self.F})"

    def __eq__(self, other):
        return isinstance(other, CubicSurface) and self.F == other.F

    def gradient(self):
        return [self.F.derivative(v) for v in COORDS]

    def is_nonsingular(self):
        if self._nonsingular is None:
            gens = [self.F] + self.gradient()
            gb = groebner(gens)
            lead = [self.ring.decode(g.leading_key()) for g in gb]
            from .groebner import hilbert_dimension_degree

            dim, _ = hilbert_dimension_degree(lead, 4)
            self._nonsingular = dim == -1
        return self._nonsingular

    def contains(self, point_ideal):
        return point_ideal.contains(self.F)

    def multiple_of_F(self, p):
        """p ≡ 0 modulo F, by exact division."""
        from .ideals import divides_poly

        if not p:
            return True
        return divides_poly(self.F, p)


class ClosedPoint:
    """Reduced irreducible zero-dimensional subscheme of P^3, on X when used there."""

    def __init__(self, ideal, degree=None, check=True):
        self.ideal = ideal
        if degree is None or check:
            dim, deg = dimension_and_degree(ideal)
            if dim != 0:
                raise DomainError("point ideal is not zero-dimensional")
            if degree is not None and degree != deg:
                raise DomainError("stated degree does not match the ideal")
            degree = deg
        if degree not in (1, 2, 3):
            raise DomainError("closed points must have degree 1, 2 or 3")
        if check and degree > 1:
            comps = minimal_primes(ideal)
            if len(comps) != 1:
                raise DomainError("point ideal is not prime")
        self.degree = degree

    @classmethod
    def from_strings(cls, strings, ring=None, check=True):
        ring = ring or standard_ring()
        return cls(PolyIdeal.from_strings(ring, strings), check=check)

    @classmethod
    def rational(cls, coords, ring=None):
        """Degree-1 point from projective coordinates."""
        ring = ring or standard_ring()
        coords = [qq(c) for c in coords]
        pivot = next(i for i, c in enumerate(coords) if c)
        gens = []
        for i in range(4):
            if i == pivot:
                continue
            gens.append(ring.gen(COORDS[i]) * coords[pivot] - ring.gen(COORDS[pivot]) * coords[i])
        return cls(PolyIdeal([g.primitive() for g in gens if g]), degree=1, check=False)

    def __repr__(self):
        return f"ClosedPoint(deg {self.degree}; {', '.join(self.ideal.strings())})"

    def __eq__(self, other):
        return isinstance(other, ClosedPoint) and self.ideal.equals(other.ideal)

    def coordinates(self):
        """Projective coordinates of a degree-1 point, primitive integer vector."""
        if self.degree != 1:
            raise DomainError("coordinates need a degree-1 point")
        lin = [g for g in self.ideal.groebner() if g.degree() == 1]
        rows = [_linear_coeffs(g) for g in lin]
        from .linalg import right_kernel

        kern = right_kernel(rows, 4)
        if len(kern) != 1:
            raise DomainError("point ideal does not define a single rational point")
        v = kern[0]
        from math import gcd, lcm

        den = lcm(*(int(c.denominator) for c in v))
        ints = [int(c * den) for c in v]
        g = 0
        for c in ints:
            g = gcd(g, c)
        ints = [c // g for c in ints]
        first = next(c for c in ints if c)
        if first < 0:
            ints = [-c for c in ints]
        return [QQ(c) for c in ints]

    def geometric_point(self):
        """(field, projective coordinates) of one geometric point.

        The field is QQ for degree 1 and a degree-2/3 extension otherwise;
        conjugate points are the Galois orbit.
        """
        if self.degree == 1:
            return Rationals(), [c for c in self.coordinates()]
        chart = _choose_chart(self.ideal)
        ring = self.ideal.ring
        aff_ring = _affine_ring(ring)
        aff_gens = [_dehomogenize(chart.push(g), aff_ring) for g in self.ideal.gens]
        data = _AffinePointData(aff_gens, aff_ring)
        gens = [aff_ring.gen(v) for v in aff_ring.names]
        from .rationals import small_rationals

        candidates = [gens[-1], gens[-2], gens[-3]]
        sched = small_rationals()
        for _ in range(60):
            coeffs = [next(sched) for _ in range(len(gens) - 1)]
            ell = gens[-1]
            for g, c in zip(gens[:-1], coeffs):
                if c:
                    ell = ell + g * c
            candidates.append(ell)
        mp = None
        for ell in candidates:
            mp = data.minimal_polynomial(ell)
            if mp.degree() == self.degree:
                break
        if mp is None or mp.degree() != self.degree:
            raise DomainError("no separating coordinate found for the point")
        field = NumberField([c for c in mp.coeffs], name="w")
        w = field.gen()
        # express each affine coordinate in powers of ell modulo the ideal
        powers = [aff_ring.one()]
        for _ in range(self.degree - 1):
            powers.append(powers[-1] * ell)
        pvecs = [data.nf_vector(p) for p in powers]
        coords_aff = []
        for v in aff_ring.names:
            tv = data.nf_vector(aff_ring.gen(v))
            # solve sum c_k pvecs[k] = tv
            amat = [[pvecs[k][i] for k in range(self.degree)] for i in range(len(tv))]
            aug = [row + [tv[i]] for i, row in enumerate(amat)]
            red, piv = rref(aug, self.degree + 1)
            if self.degree in piv:
                raise DomainError("coordinate not expressible: point not separable")
            cs = [QQ(0)] * self.degree
            for r, pc in enumerate(piv):
                cs[pc] = red[r][self.degree]
            val = field.zero
            wp = field.one
            for c in cs:
                val = val + wp * c
                wp = wp * w
            coords_aff.append(val)
        new_coords = coords_aff + [field.one]
        old = [
            sum((field(chart.Ainv[i][j]) * new_coords[j] for j in range(4)), field.zero)
            for i in range(4)
        ]
        return field, old


def _linear_coeffs(g):
    v = [QQ(0)] * 4
    for exps, c in g.items():
        idx = [i for i, e in enumerate(exps) if e]
        if len(idx) != 1 or exps[idx[0]] != 1:
            raise ValueError("not a linear form")
        v[idx[0]] = c
    return v


def is_nonsingular(X):
    return X.is_nonsingular()


def tangent_plane(X, P):
    """Tangent-plane linear form at a rational point, first nonzero coeff = 1."""
    coords = P.coordinates()
    grads = [g.evaluate(coords) for g in X.gradient()]
    if not any(grads):
        raise DomainError("gradient vanishes: surface singular at the point")
    ring = X.ring
    form = ring.zero()
    for c, v in zip(grads, COORDS):
        if c:
            form = form + ring.gen(v) * c
    lead = form.terms[form.leading_key()]
    return form / lead


def move_point_to_standard(X, P, field=None, coords=None):
    """Coordinates with P = (0:0:0:1) and tangent plane {y = 0}.

    Returns (CoordinateChange, transformed surface equation).  Works over an
    extension when explicit coordinates are supplied.
    """
    fld = field or Rationals()
    if coords is None:
        coords = P.coordinates()
    coords = [fld.coerce(c) for c in coords]
    ring = X.ring if fld.is_rationals() else X.ring.change_field(fld)
    F = ring.coerce_poly(X.F) if not fld.is_rationals() else X.F

    one, zero = fld.one, fld.zero
    cols = [list(coords)]
    for i in range(4):
        cand = [one if j == i else zero for j in range(4)]
        if rank(cols + [cand], 4) == len(cols) + 1:
            cols.append(cand)
        if len(cols) == 4:
            break
    # columns ordered: the fills first, P last
    fills = cols[1:]
    M1 = [[fills[j][i] for j in range(3)] + [coords[i]] for i in range(4)]
    F1 = F.apply_matrix(M1, ring)
    grads = [F1.derivative(v).evaluate((zero, zero, zero, one)) for v in COORDS]
    if not any(grads[:3]) or grads[3]:
        if grads[3]:
            raise DomainError("point does not lie on the surface")
        raise DomainError("surface singular at the point")
    # rows for the second change: y-row is the tangent form
    ell = grads[:3] + [zero]
    rows = []
    fill_rows = []
    for i in range(3):
        cand = [one if j == i else zero for j in range(4)]
        if rank([ell] + fill_rows + [cand], 4) == len(fill_rows) + 2:
            fill_rows.append(cand)
        if len(fill_rows) == 2:
            break
    C = [fill_rows[0], ell, fill_rows[1], [zero, zero, zero, one]]
    Cinv = mat_inverse(C)
    M = mat_mul(M1, Cinv)
    change = CoordinateChange(M)
    F2 = F.apply_matrix(M, ring)
    return change, F2


def is_eckardt(X, P):
    """Tangent section has a triple point at P."""
    _, F2 = move_point_to_standard(X, P)
    ring = F2.ring
    # F2 = c*y*t^2 + t*Q(x,y,z) + C(x,y,z); Eckardt iff Q(x,0,z) == 0
    for exps, c in F2.items():
        if exps[3] == 1 and exps[1] == 0:  # t-degree 1, no y
            return False
    return True


def line_through(Q):
    """The two linear forms in the ideal of a degree-2 point."""
    lin = [g for g in Q.ideal.groebner() if g.degree() == 1]
    if len(lin) != 2:
        raise DomainError("degree-2 point ideal should contain exactly 2 linear forms")
    return lin


def line_and_residual(X, Q):
    """Unique line through a degree-2 point and the third intersection with X."""
    if Q.degree != 2:
        raise DomainError("line_and_residual needs a degree-2 point")
    ell1, ell2 = line_through(Q)
    rows = [_linear_coeffs(ell1), _linear_coeffs(ell2)]
    from .linalg import right_kernel

    span = right_kernel(rows, 4)
    if len(span) != 2:
        raise DomainError("the linear forms do not cut a line")
    u, v = span
    # restrict F to the line {s*u + r*v}
    line_ring = PolyRing(("s", "r"))
    s, r = line_ring.gens()
    images = {
        COORDS[i]: s * u[i] + r * v[i] for i in range(4)
    }
    B = X.F.subs(images)
    if not B:
        raise LineOnSurface("the line through the point lies on the surface")
    # quadratic form of Q restricted to the line
    quads = [g for g in Q.ideal.groebner() if g.degree() == 2]
    Bq = None
    for q in quads:
        Bq = q.subs(images)
        if Bq:
            break
    if not Bq:
        raise DomainError("could not restrict the quadric of the point to the line")
    from .ideals import poly_divmod_single

    quo, rem = poly_divmod_single(B, Bq)
    if rem or quo.degree() != 1:
        raise DomainError("line section does not split as the point plus a residual")
    # residual point: zero of the linear form quo on the line
    cs = quo.coefficient((1, 0))
    cr = quo.coefficient((0, 1))
    # quo = cs*s + cr*r vanishes at (s:r) = (-cr : cs)
    pt = [-cr * u[i] + cs * v[i] for i in range(4)]
    R = ClosedPoint.rational(pt)
    return (ell1, ell2), R
