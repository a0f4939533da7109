"""Ideal-theoretic toolbox: quotients, saturation, radicals, decomposition.

Scope is deliberately narrow: homogeneous ideals in k[x,y,z,t] whose
vanishing locus has projective dimension <= 1 (curves and points inside a
surface).  Radicals use an affine chart plus Seidenberg's squarefree trick;
decomposition splits a separating coordinate's minimal polynomial.  Heights
are recorded surface-style: 1 for curves, 2 for points.
"""

from dataclasses import dataclass

from .errors import NoTermination, UnsupportedDimension
from .groebner import groebner_records, hilbert_dimension_degree, normal_form, reduce_terms, GBRecord, groebner
from .linalg import mat_inverse
from .poly import GREVLEX, LEX, Poly, PolyRing, elimination_order
from .rationals import QQ, qq, small_rationals
from .univar import UPoly, univariate_factor, upoly_from_multipoly

DEFAULT_SATURATION_BOUND = 64


class PolyIdeal:
    """Homogeneous ideal given by generators, with a Groebner cache."""

    def __init__(self, gens):
        gens = [g for g in gens if g]
        if not gens:
            raise ValueError("ideal needs at least one nonzero generator")
        self.ring = gens[0].ring
        self.gens = tuple(gens)
        self._gb = {}

    @classmethod
    def from_strings(cls, ring, strings):
        return cls([ring.parse(s) for s in strings])

    def __repr__(self):
        return "PolyIdeal(" + ", ".join(str(g) for g in self.gens) + ")"

    def strings(self):
        return [str(g) for g in self.gens]

    def groebner(self, order=GREVLEX):
        key = (order.kind, order.block)
        if key not in self._gb:
            self._gb[key] = groebner(list(self.gens), order)
        return self._gb[key]

    def contains(self, p):
        return normal_form(p, self.groebner()).is_zero()

    def contains_ideal(self, other):
        return all(self.contains(g) for g in other.gens)

    def equals(self, other):
        return self.contains_ideal(other) and other.contains_ideal(self)

    def dimension_degree(self):
        gb = self.groebner()
        ring = self.ring
        lead = [ring.decode(g.leading_key()) for g in gb]
        return hilbert_dimension_degree(lead, ring.n)

    def sort_key(self):
        """Deterministic key: the reduced lex Groebner basis, termwise."""
        gb = self.groebner(LEX)
        return tuple(
            tuple((exps, (int(c.numerator), int(c.denominator))) for exps, c in g.items())
            for g in gb
        )


@dataclass
class SchemeComponent:
    """Irreducible reduced component; height 1 = curve, 2 = point."""

    prime: PolyIdeal
    height: int
    degree: int

    def sort_key(self):
        return (self.height, self.degree, self.prime.sort_key())


# -- ring transport helpers ----------------------------------------------------

def transport(p, target):
    """Move a polynomial to another ring matching variables by name.

    Source variables missing from the target must not occur in p.
    """
    if p.ring is target:
        return p
    pos = [target._index.get(v) for v in p.ring.names]
    terms = {}
    conv = target.field.coerce
    for exps, c in p.items():
        new = [0] * target.n
        for i, e in enumerate(exps):
            if e:
                if pos[i] is None:
                    raise ValueError(f"variable {p.ring.names[i]} not in target ring")
                new[pos[i]] = e
        terms[target.encode(new)] = conv(c)
    return Poly(target, terms)


def _homogeneous_parts(p):
    ring = p.ring
    parts = {}
    for k, c in p.terms.items():
        d = ring.key_degree(k)
        parts.setdefault(d, {})[k] = c
    return [Poly(ring, t) for _, t in sorted(parts.items())]


def poly_divmod_single(h, p, order=GREVLEX):
    """Division of h by a single polynomial p: h = q*p + r."""
    from . import _kernel as K

    ring = h.ring
    lmp = p.leading_key(order)
    lcp = p.terms[lmp]
    work = dict(h.terms)
    q = {}
    r = {}
    okey = ring.order_key(order)
    while work:
        k = max(work, key=okey)
        c = work.pop(k)
        if not c:
            continue
        if K.divides(lmp, k, ring.guards):
            mult = k - lmp
            coef = c / lcp
            q[mult] = q.get(mult, ring.field.zero) + coef
            K.iaxpy(work, -coef, mult, p.terms)
            work.pop(k, None)
        else:
            r[k] = c
    return Poly(ring, {k: c for k, c in q.items() if c}), Poly(ring, r)


def exact_div_poly(h, p):
    q, r = poly_divmod_single(h, p)
    if r:
        raise ArithmeticError("polynomial division is not exact")
    return q


def divides_poly(p, h):
    """p | h exactly."""
    if not h:
        return True
    return not poly_divmod_single(h, p)[1]


# -- intersection / quotient / saturation --------------------------------------

def intersect_ideals(I, J):
    """I ∩ J via the elimination trick with an auxiliary variable."""
    ring = I.ring
    ext = PolyRing(("__T",) + ring.names, ring.field)
    T = ext.gen("__T")
    gens = [T * transport(g, ext) for g in I.gens]
    gens += [(ext.one() - T) * transport(g, ext) for g in J.gens]
    gb = groebner(gens, elimination_order(1))
    tidx = 0
    out = []
    for g in gb:
        if all(exps[tidx] == 0 for exps, _ in g.items()):
            back = transport(g, ring)
            out.extend(_homogeneous_parts(back))
    if not out:
        out = [ring.zero()]
    out = [g for g in out if g]
    if not out:
        raise ArithmeticError("empty intersection result")
    return PolyIdeal(out)


def quotient_by_poly(I, p):
    """(I : p) for a single nonzero polynomial."""
    inter = intersect_ideals(I, PolyIdeal([p]))
    return PolyIdeal([exact_div_poly(g, p) for g in inter.gens])


def ideal_quotient(I, P):
    """(I : P) = {f : f*P ⊆ I}."""
    result = None
    for p in P.gens:
        q = quotient_by_poly(I, p)
        result = q if result is None else intersect_ideals(result, q)
    return result


def saturation_exponent(J, P, bound=DEFAULT_SATURATION_BOUND):
    """Minimal n with (J : P^n) ⊄ P, plus that quotient."""
    current = J
    n = 0
    while P.contains_ideal(current):
        if n >= bound:
            raise NoTermination(
                f"saturation exponent exceeded the bound {bound}; "
                "set HALPHEN_MAX_SATURATION to raise it"
            )
        current = ideal_quotient(current, P)
        n += 1
    return n, current


def saturate(J, P, bound=DEFAULT_SATURATION_BOUND):
    """(J : P^inf): quotient until stable."""
    current = J
    for _ in range(bound):
        nxt = ideal_quotient(current, P)
        if current.contains_ideal(nxt):
            return current
        current = nxt
    raise NoTermination(f"saturation did not stabilize within {bound} steps")


def dimension_and_degree(I):
    """Projective dimension and degree of V(I); (-1, 0) when empty."""
    for g in I.gens:
        if not g.is_homogeneous():
            raise ValueError("dimension_and_degree requires a homogeneous ideal")
    return I.dimension_degree()


# -- affine chart machinery ------------------------------------------------------

def _chart_schedule(ring):
    """Linear forms to try as the hyperplane at infinity (deterministic)."""
    names = ring.names
    gens = {v: ring.gen(v) for v in names}
    # single coordinates, preferring the last one
    for v in reversed(names):
        yield gens[v]
    t, x = gens[names[-1]], gens[names[0]]
    for s in range(1, 8):
        yield t + x * QQ(s)
        yield t - x * QQ(s)
    sched = small_rationals()
    seen = 0
    while seen < 200:
        coeffs = []
        for _ in range(ring.n - 1):
            coeffs.append(next(sched))
        cand = t
        for i, c in enumerate(coeffs):
            if c:
                cand = cand + gens[names[i]] * c
        yield cand
        seen += 1


def _linear_form_vector(p):
    ring = p.ring
    v = [ring.field.zero] * ring.n
    for exps, c in p.items():
        idx = [i for i, e in enumerate(exps) if e]
        if len(idx) != 1 or exps[idx[0]] != 1:
            raise ValueError("not a linear form")
        v[idx[0]] = c
    return v


def _complete_to_matrix(rows, n):
    """Extend given independent rows to an invertible n x n matrix, first-fit."""
    from .linalg import rank

    mat = [list(r) for r in rows]
    for i in range(n):
        cand = [QQ(1) if j == i else QQ(0) for j in range(n)]
        trial = mat + [cand]
        if rank(trial, n) == len(trial):
            mat.append(cand)
        if len(mat) == n:
            break
    if len(mat) != n:
        raise ArithmeticError("could not complete to a basis")
    return mat


class _Chart:
    """Coordinate change making a chosen linear form the last coordinate."""

    def __init__(self, ring, h):
        hv = _linear_form_vector(h)
        rows = [[QQ(1) if j == i else QQ(0) for j in range(ring.n)] for i in range(ring.n)]
        from .linalg import rank

        base = []
        for r in rows:
            if rank(base + [r] + [hv], ring.n) == len(base) + 2:
                base.append(r)
            if len(base) == ring.n - 1:
                break
        A = base + [hv]  # new coords = A * old coords
        self.ring = ring
        self.A = A
        self.Ainv = mat_inverse(A)

    def push(self, p):
        """Express p in the new coordinates."""
        return p.apply_matrix(self.Ainv)

    def pull(self, p):
        return p.apply_matrix(self.A)


def _dehomogenize(p, affine_ring):
    """Set the last variable to 1; affine_ring has the first n-1 names."""
    ring = p.ring
    terms = {}
    conv = affine_ring.field.coerce
    for exps, c in p.items():
        new = affine_ring.encode(exps[:-1])
        terms[new] = terms.get(new, affine_ring.field.zero) + conv(c)
    return Poly(affine_ring, {k: c for k, c in terms.items() if c})


def _homogenize(p, proj_ring, degree=None):
    """Homogenize with the last variable of proj_ring."""
    ring = p.ring
    d = degree if degree is not None else p.degree()
    terms = {}
    conv = proj_ring.field.coerce
    for exps, c in p.items():
        s = sum(exps)
        new = tuple(exps) + (d - s,)
        terms[proj_ring.encode(new)] = conv(c)
    return Poly(proj_ring, terms)


class _AffinePointData:
    """Zero-dimensional affine data: Groebner basis and quotient structure."""

    def __init__(self, ideal_gens, affine_ring):
        self.ring = affine_ring
        self.gb = groebner(ideal_gens, GREVLEX)
        self.records = self._records(self.gb)
        self.std = self._standard_monomials()
        self._mult = {}

    def _records(self, gb):
        recs = []
        kd = self.ring.key_degree
        for g in gb:
            lm = g.leading_key()
            recs.append(GBRecord(g.terms, lm, g.terms[lm], kd(lm)))
        return recs

    def _standard_monomials(self):
        from . import _kernel as K

        ring = self.ring
        lms = [r.lm for r in self.records]
        if any(l == 0 for l in lms):
            return []
        std = []
        level = [0]
        seen = {0}
        while level:
            nxt = []
            for k in level:
                std.append(k)
                for i in range(ring.n):
                    k2 = k + (1 << (ring.bits * i))
                    if k2 in seen:
                        continue
                    seen.add(k2)
                    if not any(K.divides(lm, k2, ring.guards) for lm in lms):
                        nxt.append(k2)
            level = sorted(nxt)
            if len(std) > 100000:
                raise UnsupportedDimension("quotient ring is not finite-dimensional")
        return sorted(std)

    def is_zero_dimensional(self):
        return bool(self.std) or bool(self.gb and self.gb[0].terms.get(0))

    def length(self):
        return len(self.std)

    def nf_vector(self, p):
        red, _ = reduce_terms(p.terms, self.records, self.ring, GREVLEX)
        idx = {k: i for i, k in enumerate(self.std)}
        v = [QQ(0)] * len(self.std)
        for k, c in red.items():
            v[idx[k]] = c
        return v

    def mult_matrix(self, varname):
        """Matrix of multiplication by a variable on the quotient basis (columns)."""
        if varname not in self._mult:
            shift = 1 << (self.ring.bits * self.ring._index[varname])
            cols = []
            for k in self.std:
                cols.append(self.nf_vector(Poly(self.ring, {k + shift: QQ(1)})))
            self._mult[varname] = cols
        return self._mult[varname]

    def _apply_linear(self, ell, vec):
        """Multiply a quotient vector by a polynomial of degree <= 1."""
        n = len(self.std)
        out = [QQ(0)] * n
        const = ell.constant_coefficient()
        if const:
            out = [const * v for v in vec]
        for exps, c in ell.items():
            idx = [i for i, e in enumerate(exps) if e]
            if not idx:
                continue
            cols = self.mult_matrix(self.ring.names[idx[0]])
            for j, vj in enumerate(vec):
                if vj:
                    col = cols[j]
                    cvj = c * vj
                    for i in range(n):
                        if col[i]:
                            out[i] += cvj * col[i]
        return out

    def minimal_polynomial(self, ell):
        """Minimal polynomial of multiplication by ell (degree <= 1) on R/I.

        Krylov iteration with an incrementally maintained echelon form.
        """
        from .numfield import Rationals

        n = len(self.std)
        if ell.degree() > 1:
            raise ValueError("minimal_polynomial expects a linear polynomial")
        # mutually reduced echelon rows with Krylov combination bookkeeping
        echelon = []  # (pivot_index, row, combo)
        vec = self.nf_vector(self.ring.one())
        k = 0
        while True:
            row = list(vec)
            cmb = [QQ(0)] * k + [QQ(1)] + [QQ(0)] * (n - k)
            for piv, erow, ecmb in echelon:
                f = row[piv]
                if f:
                    row = [a - f * b for a, b in zip(row, erow)]
                    cmb = [a - f * b for a, b in zip(cmb, ecmb)]
            piv = next((i for i, a in enumerate(row) if a), None)
            if piv is None:
                lead = cmb[k]
                return UPoly(Rationals(), [c / lead for c in cmb[: k + 1]])
            inv = 1 / row[piv]
            row = [a * inv for a in row]
            cmb = [a * inv for a in cmb]
            for idx in range(len(echelon)):
                p2, erow2, ecmb2 = echelon[idx]
                f = erow2[piv]
                if f:
                    erow2 = [a - f * b for a, b in zip(erow2, row)]
                    ecmb2 = [a - f * b for a, b in zip(ecmb2, cmb)]
                    echelon[idx] = (p2, erow2, ecmb2)
            echelon.append((piv, row, cmb))
            if k + 1 > n:
                raise ArithmeticError("minimal polynomial search overran the quotient")
            vec = self._apply_linear(ell, vec)
            k += 1


# -- radical and decomposition ---------------------------------------------------

def _affine_ring(ring):
    return PolyRing(ring.names[:-1], ring.field)


def _choose_chart(I):
    """Chart with no points of V(I) at infinity: V(I + <h>) must be empty."""
    ring = I.ring
    for h in _chart_schedule(ring):
        J = PolyIdeal(list(I.gens) + [h])
        dim, _ = J.dimension_degree()
        if dim == -1:
            return _Chart(ring, h)
    raise ArithmeticError("no chart found avoiding all points")


def _radical_zero_dim(I):
    """Radical of a homogeneous ideal with dim V = 0, via Seidenberg."""
    ring = I.ring
    chart = _choose_chart(I)
    aff_ring = _affine_ring(ring)
    aff_gens = [_dehomogenize(chart.push(g), aff_ring) for g in I.gens]
    data = _AffinePointData(aff_gens, aff_ring)
    extra = []
    for v in aff_ring.names:
        mp = data.minimal_polynomial(aff_ring.gen(v))
        sq = mp.squarefree_part()
        extra.append(_upoly_to_multipoly(sq, aff_ring, v))
    rad_gens = aff_gens + extra
    rad_gb = groebner(rad_gens, GREVLEX)
    out = []
    for g in rad_gb:
        gh = _homogenize(g, ring)
        out.append(chart.pull(gh))
    canonical = [g.primitive() for g in groebner(out, GREVLEX)]
    return PolyIdeal(canonical), chart, rad_gb


def _upoly_to_multipoly(up, ring, varname):
    idx = ring._index[varname]
    terms = {}
    for i, c in enumerate(up.coeffs):
        if c:
            exps = [0] * ring.n
            exps[idx] = i
            terms[ring.encode(exps)] = c
    return Poly(ring, terms)


def _decompose_zero_dim(I):
    """Minimal primes of a zero-dimensional homogeneous radical ideal."""
    ring = I.ring
    rad, chart, rad_gb_aff = _radical_zero_dim(I)
    aff_ring = _affine_ring(ring)
    data = _AffinePointData(list(rad_gb_aff), aff_ring)
    npoints = data.length()
    if npoints == 0:
        return []
    # separating linear form schedule over the affine coordinates
    gens = [aff_ring.gen(v) for v in aff_ring.names]
    candidates = [gens[-1]]
    sched = small_rationals()
    for _ in range(60):
        coeffs = [next(sched) for _ in range(len(gens) - 1)]
        ell = gens[-1]
        for g, c in zip(gens[:-1], coeffs):
            if c:
                ell = ell + g * c
        candidates.append(ell)
    for ell in candidates:
        mp = data.minimal_polynomial(ell)
        if mp.degree() == npoints:
            break
    else:
        raise ArithmeticError("no separating linear form found")
    components = []
    for factor, _ in univariate_factor(mp):
        fpoly = _upoly_ell_to_multipoly(factor, ell)
        comp_gens = list(rad_gb_aff) + [fpoly]
        comp_gb = groebner(comp_gens, GREVLEX)
        out = [chart.pull(_homogenize(g, ring)) for g in comp_gb]
        prime = PolyIdeal([g.primitive() for g in groebner(out, GREVLEX)])
        components.append(SchemeComponent(prime, 2, factor.degree()))
    components.sort(key=lambda c: c.sort_key())
    return components


def _upoly_ell_to_multipoly(up, ell):
    ring = ell.ring
    acc = ring.zero()
    for i in range(len(up.coeffs) - 1, -1, -1):
        acc = acc * ell + ring.const(up.coeffs[i])
    return acc


def _curve_candidates(I):
    """Candidate curve primes from irreducible factors of the generators."""
    from .extfactor import factor_poly

    ring = I.ring
    factors = []
    seen = set()
    for g in I.gens:
        for f, _ in factor_poly(g):
            key = _poly_key(f)
            if key not in seen:
                seen.add(key)
                factors.append(f)
    candidates = []
    seen_ideals = []
    linear = [f for f in factors if f.degree() == 1]
    nonlinear = [f for f in factors if f.degree() > 1]
    # plane sections: decompose fully via the plane model
    for ell in linear:
        for q in nonlinear + linear:
            if q is ell:
                continue
            comps = _plane_curve_components(ell, q)
            for prime in comps:
                _push_unique(candidates, seen_ideals, prime)
    for i, p in enumerate(nonlinear):
        for q in nonlinear[i + 1 :]:
            if divides_poly(p, q) or divides_poly(q, p):
                continue
            cand = PolyIdeal([p, q])
            dim, deg = cand.dimension_degree()
            if dim == 1:
                _push_unique(candidates, seen_ideals, cand)
    return candidates


def _push_unique(candidates, seen_ideals, prime):
    for other in seen_ideals:
        if prime.equals(other):
            return
    seen_ideals.append(prime)
    candidates.append(prime)


def _poly_key(p):
    return tuple(sorted(p.terms.items()))


def _plane_curve_components(ell, q):
    """Components of V(ell, q) for a linear form ell: factor q on the plane."""
    from .extfactor import factor_poly
    from .linalg import rank

    ring = ell.ring
    hv = _linear_form_vector(ell)
    rows = [hv]
    for i in range(ring.n):
        cand = [QQ(1) if j == i else QQ(0) for j in range(ring.n)]
        if rank(rows + [cand], ring.n) == len(rows) + 1:
            rows.append(cand)
        if len(rows) == ring.n:
            break
    A = rows  # new coords: (ell, lambda_1, .., lambda_{n-1})
    Ainv = mat_inverse(A)
    plane_ring = PolyRing(tuple(f"u{i}" for i in range(ring.n - 1)), ring.field)
    pg = plane_ring.gens()
    images = {}
    for i, v in enumerate(ring.names):
        # substitute old coordinate v by row i of Ainv applied to (0, u1, ..)
        acc = plane_ring.zero()
        for j in range(1, ring.n):
            c = Ainv[i][j]
            if c:
                acc = acc + pg[j - 1] * c
        images[v] = acc
    restricted = q.subs(images)
    if not restricted:
        return []  # the plane lies inside V(q)
    comps = []
    lams = [Poly(ring, {ring.encode([1 if jj == j else 0 for jj in range(ring.n)]): QQ(1)}) for j in range(ring.n)]
    back = {}
    for j in range(1, ring.n):
        acc = ring.zero()
        for i in range(ring.n):
            c = A[j][i]
            if c:
                acc = acc + lams[i] * c
        back[f"u{j-1}"] = acc
    for f, _ in factor_poly(restricted):
        H = f.subs(back)
        comps.append(PolyIdeal([ell, H.primitive()]))
    return comps


def _curve_components_of(I):
    """Curve components of V(I): candidates that contain I."""
    out = []
    for cand in _curve_candidates(I):
        dim, deg = cand.dimension_degree()
        if dim != 1:
            continue
        if all(cand.contains(g) for g in I.gens):
            out.append(SchemeComponent(cand, 1, deg))
    out.sort(key=lambda c: c.sort_key())
    return out


def radical(I):
    """Radical for V(I) of projective dimension <= 1."""
    dim, _ = dimension_and_degree(I)
    if dim > 1:
        raise UnsupportedDimension(f"V(I) has dimension {dim} > 1")
    ring = I.ring
    if dim == -1:
        gb = I.groebner()
        if len(gb) == 1 and gb[0].degree() == 0:
            return PolyIdeal([ring.one()])
        return PolyIdeal([ring.gen(v) for v in ring.names])
    if dim == 0:
        return _radical_zero_dim(I)[0]
    curves = _curve_components_of(I)
    if not curves:
        raise UnsupportedDimension(
            "one-dimensional part could not be split from the generators"
        )
    curve_ideal = None
    for c in curves:
        curve_ideal = c.prime if curve_ideal is None else intersect_ideals(curve_ideal, c.prime)
    # isolated points: saturate the curve part away
    J = I
    for c in curves:
        J = saturate(J, c.prime)
    dimj, _ = J.dimension_degree()
    if dimj == 1:
        raise UnsupportedDimension(
            "a curve component escaped the generator-factor candidates"
        )
    if dimj == 0:
        points_rad = _radical_zero_dim(J)[0]
        return intersect_ideals(curve_ideal, points_rad)
    return curve_ideal


def minimal_primes(I):
    """Minimal primes with height/degree tags, deterministically ordered."""
    dim, _ = dimension_and_degree(I)
    if dim > 1:
        raise UnsupportedDimension(f"V(I) has dimension {dim} > 1")
    if dim == -1:
        return []
    if dim == 0:
        return _decompose_zero_dim(I)
    curves = _curve_components_of(I)
    if not curves:
        raise UnsupportedDimension(
            "one-dimensional part could not be split from the generators"
        )
    J = I
    for c in curves:
        J = saturate(J, c.prime)
    dimj, _ = J.dimension_degree()
    if dimj == 1:
        raise UnsupportedDimension(
            "a curve component escaped the generator-factor candidates"
        )
    comps = list(curves)
    if dimj == 0:
        comps += _decompose_zero_dim(J)
    comps.sort(key=lambda c: c.sort_key())
    return comps
