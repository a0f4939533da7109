"""Linear systems on a cubic surface with imposed basepoints.

The central machinery: standardize coordinates at a point, pass to the
blowup chart (xz, yz, z), expand sections along the exceptional curve as
series over k(x), and turn vanishing orders into exact linear conditions.
Infinitely near basepoints are handled by iterating the chart.
"""

from collections import namedtuple

from .errors import (
    PointOffExceptional,
    SingularPoint,
    UnsupportedDegree,
)
from .linalg import LinearConditionSet, rref, solve_and_complement
from .numfield import Rationals
from .poly import Poly, PolyRing
from .rationals import QQ
from .series import TruncatedSeries, series_root
from .surface import COORDS, ClosedPoint, CoordinateChange, move_point_to_standard
from .univar import RatFuncField, UPoly

Multiplicity = namedtuple("Multiplicity", ["value", "lower_bound"])


class LinearSystemOnX:
    """Finite-dimensional space of degree-d forms, viewed on X."""

    def __init__(self, surface, degree, sections):
        self.surface = surface
        self.degree = degree
        self.sections = tuple(sections)
        for s in self.sections:
            if s.is_zero() or not s.is_homogeneous() or s.degree() != degree:
                raise ValueError("sections must be nonzero homogeneous of the stated degree")

    @classmethod
    def full(cls, surface, degree):
        ring = surface.ring
        return cls(surface, degree, ring.monomials_of_degree(degree))

    def __len__(self):
        return len(self.sections)

    def __repr__(self):
        body = ", ".join(str(s) for s in self.sections[:4])
        if len(self.sections) > 4:
            body += ", ..."
        return f"LinearSystemOnX(deg {self.degree}; {len(self.sections)} sections: {body})"

    def strings(self):
        return [str(s) for s in self.sections]

    def coefficient_matrix(self):
        keys = sorted({k for s in self.sections for k in s.terms})
        rows = []
        for s in self.sections:
            rows.append([s.terms.get(k, QQ(0)) for k in keys])
        return rows, keys

    def canonical_rows(self):
        """RREF of the coefficient matrix over all degree-d monomials (for equality)."""
        ring = self.surface.ring
        monos = ring.monomials_of_degree(self.degree)
        keys = [next(iter(m.terms)) for m in monos]
        rows = [[s.terms.get(k, QQ(0)) for k in keys] for s in self.sections]
        red, _ = rref(rows, len(keys))
        return red

    def same_subspace(self, other):
        return self.degree == other.degree and self.canonical_rows() == other.canonical_rows()

    def contains_form(self, p, modulo_surface=False):
        """Exact span membership, optionally modulo F * (degree-3 forms)."""
        ring = self.surface.ring
        pool = list(self.sections)
        if modulo_surface and self.degree >= 3:
            pool += [self.surface.F * m for m in ring.monomials_of_degree(self.degree - 3)]
        keys = sorted({k for s in pool for k in s.terms} | set(p.terms))
        rows = [[s.terms.get(k, QQ(0)) for k in keys] for s in pool]
        from .linalg import in_row_space

        return in_row_space([p.terms.get(k, QQ(0)) for k in keys], rows)


class BlowupChart:
    """Chart (x, y, z) -> (xz : yz : z : 1) at a standardized point of X.

    The exceptional curve of the induced blowup of X is the x-axis
    {y = z = 0}; sections expand as series in z over k(x) along it.
    """

    def __init__(self, surface, point, field, change, F_std):
        self.surface = surface
        self.point = point
        self.field = field
        self.change = change
        self.ring = F_std.ring
        self.K = RatFuncField(field, "x")
        self.local_ring = PolyRing(("y", "z"), self.K)
        self.g = self._local_equation(F_std)
        self._Y = None
        self._Y_prec = 0

    @classmethod
    def at_point(cls, X, P, field=None, coords=None, post=None):
        """Chart at a point; `post` composes an extra change (e.g. an x-z swap
        to move a direction of interest away from the chart's infinity)."""
        if P.degree == 1 and field is None:
            field = Rationals()
            coords = P.coordinates()
        elif field is None:
            field, coords = P.geometric_point()
        change, F_std = move_point_to_standard(X, P, field=field, coords=coords)
        if post is not None:
            extra = CoordinateChange([[field.coerce(c) for c in row] for row in post])
            change = change.then(extra)
            F_std = F_std.apply_matrix(extra.matrix)
        return cls(X, P, field, change, F_std)

    def _local_equation(self, F_std):
        """g = F_std(xz, yz, z, 1) / z as a polynomial in (y, z) over k(x)."""
        terms = {}
        for exps, c in F_std.items():
            a, b, cc, d = exps
            zexp = a + b + cc
            if zexp == 0:
                if c:
                    raise SingularPoint("form does not vanish at the centre")
                continue
            key = (b, zexp - 1)
            xpart = self.K(UPoly(self.field, [self.field.zero] * a + [self.field.coerce(c)]))
            terms[key] = terms.get(key, self.K.zero) + xpart
        lr = self.local_ring
        out = lr.zero()
        for (b, ze), coeff in sorted(terms.items()):
            if coeff:
                out = out + lr.monomial([b, ze], coeff)
        return out

    def root(self, precision):
        """Series Y(z) parametrizing the strict transform near the exceptional curve."""
        if self._Y is None or self._Y_prec < precision:
            self._Y = series_root(self.g, precision)
            self._Y_prec = precision
        return self._Y.truncate(precision)

    def local_form(self, p):
        """Chart pullback data of a form p: list of (a, b, shift, coeff).

        p(xz, yz, z, 1) = sum coeff * x^a * y^b * z^shift with shift = a+b+c.
        """
        p2 = self.change.transform_poly(p, self.ring)
        out = []
        for exps, c in p2.items():
            a, b, cc, _ = exps
            out.append((a, b, a + b + cc, self.field.coerce(c)))
        return out

    def expand_section(self, p, precision):
        """Series in z along the exceptional curve of the pullback of p."""
        data = self.local_form(p)
        maxb = max((b for _, b, _, _ in data), default=0)
        Y = self.root(precision)
        ypow = [TruncatedSeries.const(self.K, self.K.one, precision)]
        for _ in range(maxb):
            ypow.append(ypow[-1] * Y)
        acc = TruncatedSeries.zero(self.K, precision)
        for a, b, shift, c in data:
            if shift >= precision:
                continue
            coeff = self.K(UPoly(self.field, [self.field.zero] * a + [c]))
            acc = acc + (ypow[b] * coeff).shift(shift)
        return acc

    def iterate(self, local_point, precision):
        """Chart of the blowup at an infinitely near point on the exceptional curve.

        local_point is the chart-coordinate triple (x0, y0, z0); it must lie on
        the exceptional curve y = z = 0.
        """
        x0, y0, z0 = (self.field.coerce(c) for c in local_point)
        if y0 or z0:
            raise PointOffExceptional("the point does not lie on the exceptional curve z = 0")
        return IteratedChart(self, x0, precision)


class IteratedChart:
    """Second (or third) blowup chart; expansions become bivariate jets.

    Local coordinates (u, z) at the infinitely near point with u = x - x0;
    further blowups substitute along a direction on the new exceptional curve.
    """

    def __init__(self, base, x0, precision, parent=None, direction=None, vertical=False):
        self.base = base
        self.x0 = x0
        self.precision = precision
        self.parent = parent
        self.direction = direction
        self.vertical = vertical
        self.level = 2 if parent is None else parent.level + 1
        self.field = base.field

    def expand_section(self, p):
        """Truncated bivariate jet dict {(u_exp, z_exp): coeff} of total degree < precision."""
        N = self.precision
        if self.level == 2:
            series = self.base.expand_section(p, N)
            jet = {}
            for r, gamma in enumerate(series.coeffs):
                if not gamma:
                    continue
                tay = gamma.taylor(self.x0, N - r)
                for a, c in enumerate(tay):
                    if c:
                        jet[(a, r)] = c
            return jet
        jet = self.parent.expand_section(p)
        return self._substitute(jet)

    def _substitute(self, jet):
        """Blow up the origin of (u, z) and localize at the stored direction.

        Non-vertical: (u, z) = (u, u*(lam + v)); new coords (u, v), jet keys
        (u_exp, v_exp).  Vertical: (u, z) = (z*v, z); new coords (v, z); used
        when the curve direction is u = 0.
        """
        from math import comb

        N = self.precision
        lam = self.direction
        field = self.field
        maxb = max((b for (_, b) in jet), default=0)
        lampow = [field.one]
        if lam is not None:
            for _ in range(maxb):
                lampow.append(lampow[-1] * lam)
        out = {}
        for (a, b), c in jet.items():
            if self.vertical:
                ue, ze = a, a + b
                if ue + ze < N:
                    out[(ue, ze)] = out.get((ue, ze), field.zero) + c
            else:
                base = a + b
                if base >= N:
                    continue
                for k in range(b + 1):
                    if base + k >= N:
                        break
                    key = (base, k)
                    cc = c * comb(b, k) * lampow[b - k]
                    out[key] = out.get(key, field.zero) + cc
        return {k: v for k, v in out.items() if v}

    def iterate(self, direction, precision, vertical=False):
        d = None if vertical else self.field.coerce(direction)
        return IteratedChart(self.base, self.x0, precision, parent=self, direction=d, vertical=vertical)


def _condition_rows_from_series(conds, series_list, m):
    """Vanishing of z^0..z^{m-1} coefficients, identically in x, denominators cleared."""
    nsec = len(series_list)
    for r in range(m):
        gammas = [s.coeffs[r] for s in series_list]
        if not any(gammas):
            continue
        # common denominator
        D = None
        for g in gammas:
            if g:
                D = g.den if D is None else D.lcm(g.den)
        maxdeg = -1
        numerators = []
        for g in gammas:
            if g:
                pi = g.num * D.exact_div(g.den)
            else:
                pi = UPoly(D.field, [])
            numerators.append(pi)
            maxdeg = max(maxdeg, pi.degree())
        for j in range(maxdeg + 1):
            row = []
            for pi in numerators:
                row.append(pi.coeffs[j] if j <= pi.degree() else pi.field.zero)
            conds.add_extension_row(row)


def _condition_rows_from_jet(conds, jets, threshold):
    """Vanishing of all bivariate coefficients of total degree < threshold."""
    keys = sorted({k for jet in jets for k in jet if k[0] + k[1] < threshold})
    for key in keys:
        row = [jet.get(key, QQ(0)) for jet in jets]
        conds.add_extension_row(row)


def _surface_modulus(system):
    X = system.surface
    if system.degree < 3:
        return []
    return [X.F * mono for mono in X.ring.monomials_of_degree(system.degree - 3)]


def impose_basepoint(X, system, P, m, extra_charts=None):
    """Subsystem of members vanishing to order >= m at P (all geometric points).

    Works over a splitting field for points of degree 2 or 3 and splits the
    resulting conditions over QQ.  For degree >= 3 systems the result is taken
    modulo multiples of the surface equation.
    """
    if P.degree not in (1, 2, 3):
        raise UnsupportedDegree(f"basepoints of degree {P.degree} are not supported")
    if m < 0:
        raise ValueError("multiplicity must be nonnegative")
    if m == 0 or not system.sections:
        return system
    if not X.contains(P.ideal):
        raise SingularPoint("the point does not lie on the surface")
    chart = BlowupChart.at_point(X, P)
    conds = LinearConditionSet([f"a{i+1}" for i in range(len(system.sections))])
    series = [chart.expand_section(s, m) for s in system.sections]
    _condition_rows_from_series(conds, series, m)
    new_sections = solve_and_complement(conds, list(system.sections), _surface_modulus(system))
    return LinearSystemOnX(X, system.degree, new_sections)


def impose_conditions(X, system, condition_filler):
    """Variation-1 style imposition with caller-supplied condition rows."""
    conds = LinearConditionSet([f"a{i+1}" for i in range(len(system.sections))])
    condition_filler(conds, list(system.sections))
    new_sections = solve_and_complement(conds, list(system.sections), _surface_modulus(system))
    return LinearSystemOnX(X, system.degree, new_sections)


def default_precision(degree):
    """Working precision for multiplicity: above any multiplicity allowed by
    the intersection bound sum d_i m_i^2 = 3 mu^2."""
    return 3 * degree + 2


def multiplicity(X, system, P, precision=None):
    """Order in z of the pulled-back generic member along the exceptional curve.

    Returns Multiplicity(value, lower_bound); lower_bound is True when the
    working precision was exhausted without a nonzero coefficient.
    """
    if P.degree not in (1, 2):
        raise UnsupportedDegree("multiplicity supports points of degree 1 and 2")
    return _multiplicity_any_degree(X, system, P, precision)


def _multiplicity_any_degree(X, system, P, precision=None):
    if not X.contains(P.ideal):
        raise SingularPoint("the point does not lie on the surface")
    n = precision or default_precision(system.degree)
    chart = BlowupChart.at_point(X, P)
    best = None
    for s in system.sections:
        ser = chart.expand_section(s, n)
        o = ser.order()
        if o is not None:
            best = o if best is None else min(best, o)
            if best == 0:
                break
    if best is None:
        return Multiplicity(n, True)
    return Multiplicity(best, False)


def blowup_chart_iterate(chart, infinitely_near_point, precision=None):
    """Chart on the next blowup, centred at a point of the exceptional curve.

    For a level-1 chart the point is given in chart coordinates (x0, 0, 0);
    for deeper levels it is a direction on the new exceptional curve.
    """
    if isinstance(chart, BlowupChart):
        prec = precision or default_precision(3)
        return chart.iterate(infinitely_near_point, prec)
    if isinstance(chart, IteratedChart):
        prec = precision or chart.precision
        direction, vertical = infinitely_near_point
        return chart.iterate(direction, prec, vertical=vertical)
    raise TypeError("unknown chart type")
