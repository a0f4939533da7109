"""Halphen data, pencils, base loci, and the untwisting loop.

The untwist loop realizes the classification: find a basepoint of
multiplicity m > mu, precompose with the Geiser/Bertini involution there,
and repeat.  After each composition the pencil degree drops to 2*mu - m
(Geiser) or 5*mu - 4*m (Bertini), read off the involution action on the
Picard lattice, and the composite is replaced by an interpolated pencil of
that degree, verified exactly by cross-multiplication.
"""

from dataclasses import dataclass, field as dataclass_field

from .errors import (
    BadWeights,
    DegreeNotDecreasing,
    InterpolationDegenerate,
    NotAPencil,
    PointOnSingularLocus,
    ReducibleG,
)
from .groebner import groebner, hilbert_dimension_degree
from .ideals import (
    DEFAULT_SATURATION_BOUND,
    PolyIdeal,
    minimal_primes,
    radical,
    saturation_exponent,
)
from .linalg import LinearConditionSet, rank, right_kernel, solve_and_complement
from .linsys import (
    BlowupChart,
    LinearSystemOnX,
    Multiplicity,
    _condition_rows_from_jet,
    _condition_rows_from_series,
    _multiplicity_any_degree,
    _surface_modulus,
    default_precision,
    impose_basepoint,
    multiplicity,
)
from .maps import DEFAULT_MAX_SAMPLES, RationalMapP3, bertini, compose, geiser, maps_equal_on_X, _quadratic_roots, _direction_schedule, _restrict_to_line
from .numfield import Rationals
from .poly import Poly, PolyRing
from .rationals import QQ, qq
from .surface import COORDS, ClosedPoint, CoordinateChange, CubicSurface, mat_mul
from .univar import univariate_factor, upoly_from_multipoly

CASES = ("A1", "A2", "A3", "B", "C")


class HalphenData:
    """Plane section G = V(linear, F), weighted points D, and index mu."""

    def __init__(self, G_linear, points, index, case_tag=None):
        self.G = G_linear
        self.points = list(points)  # (ClosedPoint, weight)
        self.index = index
        self.case_tag = case_tag or self.infer_case(self.points)

    @staticmethod
    def infer_case(points):
        pattern = sorted((w, p.degree) for p, w in points)
        if pattern == [(1, 1), (1, 1), (1, 1)]:
            return "A1"
        if pattern == [(1, 1), (2, 1)]:
            return "A2"
        if pattern == [(3, 1)]:
            return "A3"
        if pattern == [(1, 1), (1, 2)]:
            return "B"
        if pattern == [(1, 3)]:
            return "C"
        raise BadWeights(f"weights/degrees {pattern} match no Halphen case")

    def __repr__(self):
        pts = "; ".join(f"w{w}:{p!r}" for p, w in self.points)
        return f"HalphenData(G={self.G}, mu={self.index}, case {self.case_tag}; {pts})"


def _g_singular_locus_gens(X, G_linear):
    """Generators cutting the singular locus of the plane cubic V(G_linear, F)."""
    ring = X.ring
    gl = [G_linear.derivative(v) for v in COORDS]  # constants
    gf = [X.F.derivative(v) for v in COORDS]
    gens = [G_linear, X.F]
    for i in range(4):
        for j in range(i + 1, 4):
            m = gf[i] * gl[j].constant_coefficient() - gf[j] * gl[i].constant_coefficient()
            if m:
                gens.append(m)
    return gens


def validate_halphen_data(X, data):
    """Checks irreducibility of G, smoothness at the points, weight pattern.

    The torsion condition itself is certified a posteriori: the imposed
    system must come out as a pencil containing mu*G.
    """
    if data.G.degree() != 1 or not data.G.is_homogeneous():
        raise ReducibleG("G must be given by a linear form")
    comps = minimal_primes(PolyIdeal([data.G, X.F]))
    if len(comps) != 1 or comps[0].height != 1 or comps[0].degree != 3:
        raise ReducibleG("the plane section G is reducible over the rationals")
    expected = HalphenData.infer_case(data.points)
    if data.case_tag != expected:
        raise BadWeights(f"case tag {data.case_tag} does not match weights ({expected})")
    total = sum(w * p.degree for p, w in data.points)
    if total != 3:
        raise BadWeights(f"weighted degree {total} != 3")
    sing = _g_singular_locus_gens(X, data.G)
    for p, _ in data.points:
        if not p.ideal.contains(data.G):
            raise PointOnSingularLocus("a point of D does not lie on G")
        if not p.ideal.contains(X.F):
            raise PointOnSingularLocus("a point of D does not lie on X")
        probe = PolyIdeal(sing + list(p.ideal.gens))
        dim, _ = probe.dimension_degree()
        if dim != -1:
            raise PointOnSingularLocus("D meets the singular locus of G")
    return data


def _transformed_linear(chart, G_linear):
    """G's linear form in chart coordinates: (a, b, c) with ax + by + cz (no t)."""
    ell = chart.change.transform_poly(G_linear, chart.ring)
    coeffs = [chart.field.zero] * 4
    for exps, c in ell.items():
        idx = [i for i, e in enumerate(exps) if e]
        if len(idx) != 1 or exps[idx[0]] != 1:
            raise ValueError("transformed section is not linear")
        coeffs[idx[0]] = chart.field.coerce(c)
    return coeffs


def chart_along_curve(X, P, G_linear):
    """Blowup chart at P in which G's strict transform meets the exceptional curve.

    Returns (chart, x0): the intersection is at (x0, 0, 0) in chart coordinates.
    """
    chart = BlowupChart.at_point(X, P)
    a, b, c, d = _transformed_linear(chart, G_linear)
    if d:
        raise PointOnSingularLocus("the point does not lie on the plane of G")
    if not a:
        swap = [[QQ(0), QQ(0), QQ(1), QQ(0)],
                [QQ(0), QQ(1), QQ(0), QQ(0)],
                [QQ(1), QQ(0), QQ(0), QQ(0)],
                [QQ(0), QQ(0), QQ(0), QQ(1)]]
        chart = BlowupChart.at_point(X, P, post=swap)
        a, b, c, d = _transformed_linear(chart, G_linear)
        if not a:
            raise PointOnSingularLocus("G is tangent to the plane y = 0 at the point")
    x0 = -c / a
    return chart, (a, b, c), x0


def curve_direction_after_blowup(chart, abc, x0):
    """Direction (chart coordinate or vertical) of G's strict transform above x0."""
    a, b, c = abc
    Y = chart.root(2)
    y1 = Y.coeffs[1]  # coefficient of z in the implicit function
    y1_at = y1.evaluate(x0) if y1 else chart.field.zero
    denom = b * y1_at
    if not denom:
        return None, True  # vertical: tangent line u = 0
    return -a / denom, False


def halphen_system(X, data):
    """The pencil of degree-mu forms with multiplicity-mu conditions along D."""
    mu = data.index
    validate_halphen_data(X, data)
    system = LinearSystemOnX.full(X, mu)
    # plain points first (weights 1), in the given order
    for p, w in data.points:
        if w == 1:
            system = impose_basepoint(X, system, p, mu)
    for p, w in data.points:
        if w == 1:
            continue
        depth = w - 1  # 1 for A2 (one infinitely near point), 2 for A3
        prec = (depth + 1) * mu
        chart, abc, x0 = chart_along_curve(X, p, data.G)
        conds = LinearConditionSet([f"a{i+1}" for i in range(len(system.sections))])
        series = [chart.expand_section(s, max(mu, prec)) for s in system.sections]
        _condition_rows_from_series(conds, [s.truncate(mu) for s in series], mu)
        chart2 = chart.iterate((x0, 0, 0), prec)
        jets2 = [chart2.expand_section(s) for s in system.sections]
        _condition_rows_from_jet(conds, jets2, 2 * mu)
        if depth == 2:
            lam, vertical = curve_direction_after_blowup(chart, abc, x0)
            chart3 = chart2.iterate(lam, prec, vertical=vertical)
            jets3 = [chart3._substitute(j) for j in jets2]
            _condition_rows_from_jet(conds, jets3, 3 * mu)
        new_sections = solve_and_complement(conds, list(system.sections), _surface_modulus(system))
        system = LinearSystemOnX(X, mu, new_sections)
    if len(system) != 2:
        raise NotAPencil(
            f"imposed system has {len(system)} sections, not 2; "
            "the data may be invalid or the index wrong (try a divisor of mu)"
        )
    gmu = data.G ** mu
    if not system.contains_form(gmu, modulo_surface=True):
        raise NotAPencil("mu*G is not a member of the imposed pencil")
    return system


class Fibration:
    """Pencil of degree-mu forms defining X -> P^1."""

    def __init__(self, surface, f1, f2):
        if isinstance(f1, str):
            f1 = surface.ring.parse(f1)
        if isinstance(f2, str):
            f2 = surface.ring.parse(f2)
        if f1.degree() != f2.degree() or not f1.is_homogeneous() or not f2.is_homogeneous():
            raise ValueError("fibration needs two homogeneous forms of common degree")
        self.surface = surface
        self.f1 = f1
        self.f2 = f2
        self.degree = f1.degree()

    @classmethod
    def from_system(cls, system):
        if len(system) != 2:
            raise NotAPencil("a fibration needs exactly 2 sections")
        return cls(system.surface, system.sections[0], system.sections[1])

    def system(self):
        return LinearSystemOnX(self.surface, self.degree, [self.f1, self.f2])

    def as_map(self):
        return RationalMapP3(self.surface, [self.f1, self.f2], cancel_gcd=False)

    def strings(self):
        return [str(self.f1), str(self.f2)]

    def __repr__(self):
        return f"Fibration(deg {self.degree}: {self.f1} : {self.f2})"


@dataclass
class BaseLocusReport:
    potential_basepoints: list
    removed_curves: list
    multiplicities: list = None

    def to_dict(self):
        out = {
            "potential_basepoints": [
                {"degree": c.degree, "height": c.height, "ideal": c.prime.strings()}
                for c in self.potential_basepoints
            ],
            "removed_curves": [
                {"degree": c.degree, "height": c.height, "ideal": c.prime.strings()}
                for c in self.removed_curves
            ],
        }
        if self.multiplicities is not None:
            out["multiplicities"] = [
                {
                    "ideal": c.prime.strings(),
                    "degree": c.degree,
                    "multiplicity": m.value,
                    "lower_bound": m.lower_bound,
                }
                for c, m in self.multiplicities
            ]
        return out


def base_locus(X, fib, saturation_bound=DEFAULT_SATURATION_BOUND):
    """Potential basepoints of the pencil: curves stripped, point part decomposed."""
    I = PolyIdeal([fib.f1, fib.f2, X.F])
    I_red = radical(I)
    comps = minimal_primes(I_red)
    curves = [c for c in comps if c.height == 1]
    if not curves:
        points = [c for c in comps if c.height == 2]
        return BaseLocusReport(points, [])
    J = I
    for c in curves:
        _, J = saturation_exponent(J, c.prime, bound=saturation_bound)
    dimj, _ = J.dimension_degree()
    points = []
    if dimj == 0:
        K = radical(J)
        points = [c for c in minimal_primes(K) if c.height == 2]
    return BaseLocusReport(points, curves)


def _pencil_multiplicity(X, fib, comp, precision=None):
    P = ClosedPoint(comp.prime, degree=comp.degree, check=False)
    return _multiplicity_any_degree(X, fib.system(), P, precision)


def has_maximal_centre(X, fib, saturation_bound=DEFAULT_SATURATION_BOUND, report=None):
    """First potential centre with multiplicity exceeding the pencil degree."""
    mu = fib.degree
    if mu == 1:
        return None
    rep = report or base_locus(X, fib, saturation_bound)
    mults = []
    found = None
    for comp in rep.potential_basepoints:
        if comp.degree > 2:
            continue
        m = _pencil_multiplicity(X, fib, comp)
        mults.append((comp, m))
        if found is None and m.value > mu:
            found = (comp, m)
    rep.multiplicities = mults
    if found is None:
        return None
    comp, m = found
    return ClosedPoint(comp.prime, degree=comp.degree, check=False)


# -- pencil simplification by interpolation -------------------------------------


def interpolate_pencil(X, forms, target_degree, anchor, max_samples=DEFAULT_MAX_SAMPLES):
    """Degree-target pencil equal to (g1 : g2) as a map on X, verified exactly.

    anchor is a rational point of X used to generate sample points on lines
    through it; the result (h1, h2) satisfies h1*g2 - h2*g1 = 0 mod F.
    """
    g1, g2 = forms
    ring = X.ring
    monos = ring.monomials_of_degree(target_degree)
    nm = len(monos)
    conds = LinearConditionSet([f"h{i}" for i in range(2 * nm)])
    p = [qq(c) for c in anchor]
    attempts = 0
    checked = 0
    for d in _direction_schedule(4):
        if attempts >= max_samples:
            break
        dq = [qq(c) for c in d]
        if rank([p, dq], 4) < 2:
            continue
        attempts += 1
        coeffs = _restrict_to_line(X.F, p, dq)
        c0, c1, c2, c3 = coeffs
        if c0:
            continue
        if not c3 or not c1:
            continue
        quad = _quadratic_roots(c1, c2, c3)
        if quad is None:
            continue
        field, s1, s2 = quad
        for sv in (s1, s2) if field.is_rationals() else (s1,):
            pt = [field.coerce(p[i]) + sv * field.coerce(dq[i]) for i in range(4)]
            g1v = g1.evaluate(pt)
            g2v = g2.evaluate(pt)
            if not g1v and not g2v:
                continue
            mv = [m.evaluate(pt) for m in monos]
            # h1(pt)*g2v - h2(pt)*g1v = 0
            row = [x * g2v for x in mv] + [-(x * g1v) for x in mv]
            conds.add_extension_row(row)
        checked += 1
        if checked % 6 == 0 and checked >= 6:
            result = _try_kernel_pencil(X, conds, monos, g1, g2)
            if result is not None:
                return result
    result = _try_kernel_pencil(X, conds, monos, g1, g2)
    if result is not None:
        return result
    raise InterpolationDegenerate("could not interpolate the reduced pencil")


def _try_kernel_pencil(X, conds, monos, g1, g2):
    kern = conds.solution_basis()
    if not kern or len(kern) > 6:
        return None
    nm = len(monos)
    ring = X.ring

    def build(vec, half):
        acc = ring.zero()
        for i in range(nm):
            c = vec[half * nm + i]
            if c:
                acc = acc + monos[i] * c
        return acc

    candidates = []
    for v in kern:
        h1 = build(v, 0)
        h2 = build(v, 1)
        if h1 or h2:
            candidates.append((h1, h2))
    # prefer a solution with independent components
    for h1, h2 in candidates:
        if not h1 or not h2:
            continue
        if rank_of_pair(h1, h2) != 2:
            continue
        if _verify_pencil(X, h1, h2, g1, g2):
            return (h1.primitive(), h2.primitive())
    # otherwise combine two kernel vectors
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            h1 = candidates[i][0] + candidates[j][0]
            h2 = candidates[i][1] + candidates[j][1]
            if h1 and h2 and rank_of_pair(h1, h2) == 2 and _verify_pencil(X, h1, h2, g1, g2):
                return (h1.primitive(), h2.primitive())
    return None


def rank_of_pair(h1, h2):
    keys = sorted(set(h1.terms) | set(h2.terms))
    rows = [[h.terms.get(k, QQ(0)) for k in keys] for h in (h1, h2)]
    return rank(rows, len(keys))


def _verify_pencil(X, h1, h2, g1, g2):
    from .ideals import divides_poly

    return divides_poly(X.F, h1 * g2 - h2 * g1)


# -- NFI bookkeeping --------------------------------------------------------------


def _chain_entries(X, fib, comp, warnings):
    """(degree, multiplicity) entries for a basepoint including infinitely near ones."""
    P = ClosedPoint(comp.prime, degree=comp.degree, check=False)
    n = default_precision(fib.degree)
    chart = BlowupChart.at_point(X, P)
    s1 = chart.expand_section(fib.f1, n)
    s2 = chart.expand_section(fib.f2, n)
    o1, o2 = s1.order(), s2.order()
    orders = [o for o in (o1, o2) if o is not None]
    if not orders:
        warnings.append("a basepoint had no visible multiplicity at working precision")
        return [(comp.degree, Multiplicity(n, True))]
    m1 = min(orders)
    entries = [(comp.degree, Multiplicity(m1, False))]
    # infinitely near points: common roots of the leading coefficients
    gam1 = s1.coeffs[m1]
    gam2 = s2.coeffs[m1]
    g = None
    for gam in (gam1, gam2):
        if gam:
            num = gam.num
            g = num if g is None else g.gcd(num)
    if g is None or g.degree() == 0:
        return entries
    roots = _field_roots(g, chart.field, warnings)
    for x0, root_degree in roots:
        chart2 = chart.iterate((x0, chart.field.zero, chart.field.zero), 3 * m1 + 2)
        j1 = chart2.expand_section(fib.f1)
        j2 = chart2.expand_section(fib.f2)
        tot = [min(a + b for (a, b) in j) for j in (j1, j2) if j]
        if not tot:
            continue
        m2 = min(tot) - m1
        if m2 > 0:
            entries.append((root_degree * comp.degree, Multiplicity(m2, False)))
            m3 = _third_level_multiplicity(chart2, j1, j2, m1, m2, chart.field, warnings)
            if m3:
                entries.append((root_degree * comp.degree, Multiplicity(m3, False)))
    return entries


def _third_level_multiplicity(chart2, j1, j2, m1, m2, field, warnings):
    """Common direction of both strict transforms, one more blowup."""
    from .univar import UPoly

    o = m1 + m2
    cones = []
    for j in (j1, j2):
        part = {k: v for k, v in j.items() if k[0] + k[1] == o}
        if part:
            # binary form in (u, z): coefficients of u^(o-k) z^k
            coeffs = [part.get((o - k, k), field.zero) for k in range(o + 1)]
            cones.append(UPoly(field, coeffs))
    if not cones:
        return None
    g = cones[0]
    for c in cones[1:]:
        g = g.gcd(c)
    if g.degree() == 0:
        # check the vertical direction u = 0: common factor u of both cones
        return None
    roots = _field_roots(g, field, warnings)
    best = None
    for lam, rdeg in roots:
        if rdeg != 1:
            warnings.append("an infinitely near direction of degree > 1 was skipped")
            continue
        chart3 = chart2.iterate(lam, chart2.precision)
        k1 = chart3._substitute(j1)
        k2 = chart3._substitute(j2)
        tot = [min(a + b for (a, b) in j) for j in (k1, k2) if j]
        if tot:
            m3 = min(tot) - (m1 + m2)
            if m3 > 0:
                best = m3 if best is None else max(best, m3)
    return best


def _field_roots(up, field, warnings):
    """Usable roots (root, residue degree) of a univariate polynomial.

    Over QQ linear factors give rational roots; an irreducible factor of
    degree d marks a degree-d infinitely near point, which is skipped with a
    warning (none arise in Halphen configurations).  Over an extension only
    plainly visible linear factors are used.
    """
    out = []
    if field.is_rationals():
        for fac, _ in univariate_factor(up):
            if fac.degree() == 1:
                out.append((-fac.coeffs[0], 1))
            else:
                warnings.append(
                    f"an infinitely near point of degree {fac.degree()} was skipped"
                )
        return out
    work = up.monic()
    while work.degree() >= 1:
        root = None
        if work.degree() == 1:
            root = -work.coeffs[0]
        if root is None:
            warnings.append(
                "an infinitely near point not visibly rational over the chart field was skipped"
            )
            break
        out.append((root, 1))
        from .univar import UPoly

        lin = UPoly(field, [-root, field.one])
        work = work.exact_div(lin)
    return out


def nfi_sums(entries, mu):
    """(sum d*m^2 - 3*mu^2, sum d*m*(1 - m/mu)) over (degree, multiplicity)."""
    s1 = QQ(0)
    s2 = QQ(0)
    for d, m in entries:
        mv = QQ(m.value)
        s1 += d * mv * mv
        s2 += d * mv * (1 - mv / QQ(mu))
    return s1 - 3 * QQ(mu) * QQ(mu), s2


# -- the untwisting loop -----------------------------------------------------------


@dataclass
class UntwistCertificate:
    involutions: list
    final: Fibration
    verdict: str
    final_base: BaseLocusReport
    nfi_check: tuple
    warnings: list = dataclass_field(default_factory=list)

    def to_dict(self):
        return {
            "involutions": [
                {
                    "kind": rec.kind,
                    "centre": rec.centre.ideal.strings(),
                    "centre_degree": rec.centre.degree,
                    "map": rec.map.strings(),
                    "biregular": rec.biregular,
                }
                for rec in self.involutions
            ],
            "final_pencil": self.final.strings(),
            "final_degree": self.final.degree,
            "verdict": self.verdict,
            "base_locus": self.final_base.to_dict(),
            "nfi": {
                "sum_d_m2_minus_3mu2": str(self.nfi_check[0]),
                "sum_d_m_1_minus_m_over_mu": str(self.nfi_check[1]),
            },
            "warnings": list(self.warnings),
        }


def untwist(
    X,
    fib,
    max_samples=DEFAULT_MAX_SAMPLES,
    saturation_bound=DEFAULT_SATURATION_BOUND,
):
    """Untwist an elliptic fibration into an Halphen (or linear) fibration."""
    involutions = []
    warnings = []
    current = fib
    mu = fib.degree
    while True:
        if mu == 1:
            verdict = "linear"
            break
        rep = base_locus(X, current, saturation_bound)
        centres = [c for c in rep.potential_basepoints if c.degree <= 2]
        if not centres:
            verdict = "halphen_caseC"
            deg3 = [c for c in rep.potential_basepoints if c.degree == 3]
            if len(deg3) != 1:
                warnings.append(
                    f"case C expected a single degree-3 basepoint, found {len(deg3)}"
                )
            break
        maximal = None
        mults = []
        for comp in centres:
            m = _pencil_multiplicity(X, current, comp)
            mults.append((comp, m))
            if maximal is None and m.value > mu:
                maximal = (comp, m)
        rep.multiplicities = mults
        if maximal is None:
            verdict = "halphen_with_centres"
            break
        comp, m = maximal
        if m.lower_bound:
            raise DegreeNotDecreasing(
                "maximal-centre multiplicity was only certified as a lower bound; "
                "cannot predict the untwisted degree"
            )
        P = ClosedPoint(comp.prime, degree=comp.degree, check=False)
        if comp.degree == 1:
            rec = geiser(X, P, max_samples=max_samples)
            mu_new = 2 * mu - m.value
            anchor = P.coordinates()
        else:
            rec = bertini(X, P, max_samples=max_samples)
            mu_new = 5 * mu - 4 * m.value
            from .surface import line_and_residual

            _, R = line_and_residual(X, P)
            anchor = R.coordinates()
        if mu_new >= mu:
            raise DegreeNotDecreasing(
                f"untwisting at multiplicity {m.value} would raise the degree "
                f"({mu} -> {mu_new}); the involution is misnormalized"
            )
        composed = compose((current.f1, current.f2), rec.map)
        h1, h2 = interpolate_pencil(
            X, composed, mu_new, anchor, max_samples=max_samples
        )
        involutions.append(rec)
        current = Fibration(X, h1, h2)
        mu = mu_new

    final_rep = base_locus(X, current, saturation_bound)
    entries = []
    mults = []
    for comp in final_rep.potential_basepoints:
        ch = _chain_entries(X, current, comp, warnings)
        entries.extend(ch)
        mults.append((comp, ch[0][1]))
    final_rep.multiplicities = mults
    sums = nfi_sums(entries, mu)
    return UntwistCertificate(
        involutions=involutions,
        final=current,
        verdict=verdict,
        final_base=final_rep,
        nfi_check=sums,
        warnings=warnings,
    )
