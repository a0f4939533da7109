"""Buchberger's algorithm with sugar selection and Gebauer-Moeller pruning.

Works on raw term maps (packed-key dicts) for speed; Poly wrappers at the
boundary.  Also home to the Hilbert-series dimension/degree computation on
leading-term ideals.
"""

import heapq
from functools import lru_cache

from . import _kernel as K
from .poly import GREVLEX, Poly
from .rationals import QQ, content_scale


class GBRecord:
    __slots__ = ("terms", "lm", "lc", "sugar")

    def __init__(self, terms, lm, lc, sugar):
        self.terms = terms
        self.lm = lm
        self.lc = lc
        self.sugar = sugar


def _negkey_fn(ring, order):
    okey = ring.order_key(order)

    def negkey(k):
        key = okey(k)
        return tuple(-x if isinstance(x, int) else tuple(-y for y in x) for x in key)

    return negkey


def _flatten_negkey(ring, order):
    okey = ring.order_key(order)

    def negkey(k):
        out = []
        for part in okey(k):
            if isinstance(part, tuple):
                out.extend(-y for y in part)
            else:
                out.append(-part)
        return tuple(out)

    return negkey


def _lm(terms, ring, order):
    return K.find_lm(terms, ring.n, ring.bits, ring.mask, order.kind, order.block)


def _primitive(terms, ring):
    if not terms or not ring.field.is_rationals():
        return terms
    c = content_scale(terms.values())
    return {k: v / c for k, v in terms.items()}


def reduce_terms(terms, basis, ring, order, with_sugar=None):
    """Full normal form of a term map against a list of GBRecords.

    Returns (reduced_terms, sugar) where sugar is tracked when with_sugar is
    given as the starting sugar value.
    """
    negkey = _flatten_negkey(ring, order)
    guards = ring.guards
    kd = ring.key_degree
    work = dict(terms)
    out = {}
    heap = [(negkey(k), k) for k in work]
    heapq.heapify(heap)
    sugar = with_sugar
    while heap:
        _, k = heapq.heappop(heap)
        c = work.get(k)
        if not c:
            work.pop(k, None)
            continue
        red = None
        for g in basis:
            if K.divides(g.lm, k, guards):
                red = g
                break
        if red is None:
            out[k] = c
            del work[k]
            continue
        mult = k - red.lm
        K.iaxpy(work, -c / red.lc, mult, red.terms)
        work.pop(k, None)
        if sugar is not None:
            sugar = max(sugar, red.sugar + kd(mult))
        for kg in red.terms:
            knew = kg + mult
            if knew != k and knew in work:
                heapq.heappush(heap, (negkey(knew), knew))
    return out, sugar


def _key_lcm(ring, ka, kb):
    ea = ring.decode(ka)
    eb = ring.decode(kb)
    return ring.encode([max(a, b) for a, b in zip(ea, eb)])


def groebner_records(inputs, ring, order):
    """Reduced Groebner basis as GBRecords from a list of term maps."""
    okey = ring.order_key(order)
    kd = ring.key_degree
    guards = ring.guards

    f = []
    for terms in inputs:
        if terms:
            t = _primitive(dict(terms), ring)
            lm = _lm(t, ring, order)
            f.append(GBRecord(t, lm, t[lm], kd(lm)))
    if not f:
        return []

    # interreduce the inputs
    changed = True
    while changed:
        changed = False
        f.sort(key=lambda g: okey(g.lm))
        for i in range(len(f)):
            others = f[:i] + f[i + 1 :]
            red, _ = reduce_terms(f[i].terms, others, ring, order)
            if red != f[i].terms:
                changed = True
                if red:
                    red = _primitive(red, ring)
                    lm = _lm(red, ring, order)
                    f[i] = GBRecord(red, lm, red[lm], kd(lm))
                else:
                    del f[i]
                break

    basis = list(f)
    G = set(range(len(basis)))
    CP = set()

    def update(G, CP, ih):
        # Gebauer-Moeller update, Becker-Weispfenning p. 230
        mh = basis[ih].lm
        C = sorted(G)
        D = []
        lcms = {ig: _key_lcm(ring, mh, basis[ig].lm) for ig in G}
        while C:
            ig = C.pop(0)
            lcm_hg = lcms[ig]
            if mh + basis[ig].lm == lcm_hg or (
                not any(K.divides(lcms[ipx], lcm_hg, guards) for ipx in C)
                and not any(K.divides(lcms[pr], lcm_hg, guards) for pr in D)
            ):
                D.append(ig)
        E = [(ig, ih) for ig in D if mh + basis[ig].lm != lcms[ig]]
        CP_new = set()
        for ig1, ig2 in CP:
            lcm12 = _key_lcm(ring, basis[ig1].lm, basis[ig2].lm)
            if (
                not K.divides(mh, lcm12, guards)
                or _key_lcm(ring, basis[ig1].lm, mh) == lcm12
                or _key_lcm(ring, basis[ig2].lm, mh) == lcm12
            ):
                CP_new.add((ig1, ig2))
        CP_new.update(E)
        G_new = {ig for ig in G if not K.divides(mh, basis[ig].lm, guards)}
        G_new.add(ih)
        return G_new, CP_new

    GG = set()
    CPP = set()
    for i in range(len(basis)):
        GG, CPP = update(GG, CPP, i)
    G, CP = GG, CPP

    pairkey_cache = {}

    def pair_key(pr):
        cached = pairkey_cache.get(pr)
        if cached is None:
            i, j = pr
            lcm = _key_lcm(ring, basis[i].lm, basis[j].lm)
            s = max(
                basis[i].sugar + kd(lcm) - kd(basis[i].lm),
                basis[j].sugar + kd(lcm) - kd(basis[j].lm),
            )
            cached = (s, okey(lcm), i, j)
            pairkey_cache[pr] = cached
        return cached

    while CP:
        # sugar selection with deterministic tie-break
        best = min(CP, key=pair_key)
        CP.discard(best)
        i, j = best
        gi, gj = basis[i], basis[j]
        lcm = _key_lcm(ring, gi.lm, gj.lm)
        s_sugar = max(
            gi.sugar + kd(lcm) - kd(gi.lm),
            gj.sugar + kd(lcm) - kd(gj.lm),
        )
        spoly = {}
        K.iaxpy(spoly, QQ(1) / gi.lc if ring.field.is_rationals() else ring.field.inv(gi.lc), lcm - gi.lm, gi.terms)
        K.iaxpy(spoly, -(QQ(1) / gj.lc) if ring.field.is_rationals() else -ring.field.inv(gj.lc), lcm - gj.lm, gj.terms)
        active = [basis[g] for g in sorted(G)]
        red, s_sugar = reduce_terms(spoly, active, ring, order, with_sugar=s_sugar)
        if red:
            red = _primitive(red, ring)
            lm = _lm(red, ring, order)
            basis.append(GBRecord(red, lm, red[lm], s_sugar))
            G, CP = update(G, CP, len(basis) - 1)

    # the update rule keeps G minimal (pairwise non-divisible leading terms)
    Gs = sorted(G, key=lambda ig: okey(basis[ig].lm))
    records = [basis[ig] for ig in Gs]
    reduced = []
    for idx, g in enumerate(records):
        others = records[:idx] + records[idx + 1 :]
        red, _ = reduce_terms(g.terms, others, ring, order)
        if not red:
            continue
        lm = _lm(red, ring, order)
        lc = red[lm]
        inv = QQ(1) / lc if ring.field.is_rationals() else ring.field.inv(lc)
        red = {k: c * inv for k, c in red.items()}
        reduced.append(GBRecord(red, lm, red[lm], kd(lm)))
    reduced.sort(key=lambda g: okey(g.lm), reverse=True)
    return reduced


def groebner(polys, order=GREVLEX):
    """Reduced Groebner basis (monic, sorted by descending leading monomial)."""
    polys = [p for p in polys if p]
    if not polys:
        return []
    ring = polys[0].ring
    recs = groebner_records([p.terms for p in polys], ring, order)
    return [Poly(ring, r.terms) for r in recs]


def normal_form(p, gb, order=GREVLEX):
    """Remainder of p on full division by the (Groebner) basis gb."""
    if not gb:
        return p
    ring = gb[0].ring
    kd = ring.key_degree
    recs = []
    for g in gb:
        lm = _lm(g.terms, ring, order)
        recs.append(GBRecord(g.terms, lm, g.terms[lm], kd(lm)))
    red, _ = reduce_terms(p.terms, recs, ring, order)
    return Poly(ring, red)


# -- Hilbert series ------------------------------------------------------------

def _minimalize(gens):
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for g in gens:
        if not any(all(a >= b for a, b in zip(g, h)) for h in out):
            out.append(g)
    return tuple(out)


@lru_cache(maxsize=None)
def _hilbert_numerator(gens, n):
    """Numerator of the Hilbert series of R/I for a monomial ideal.

    gens: minimal generators as exponent tuples; returns dense int list.
    """
    if not gens:
        return (1,)
    if any(sum(g) == 0 for g in gens):
        return (0,)
    # pure-power base case
    if all(sum(1 for e in g if e) == 1 for g in gens):
        num = [1]
        for g in gens:
            d = sum(g)
            new = [0] * (len(num) + d)
            for i, c in enumerate(num):
                new[i] += c
                new[i + d] -= c
            num = new
        return tuple(num)
    # pivot: most frequent variable among non-pure generators
    counts = [0] * n
    for g in gens:
        if sum(1 for e in g if e) > 1:
            for i, e in enumerate(g):
                if e:
                    counts[i] += 1
    v = counts.index(max(counts))
    pivot = tuple(1 if i == v else 0 for i in range(n))
    # I + (x_v)
    plus = _minimalize([g for g in gens if g[v] == 0] + [pivot])
    # I : x_v
    colon = _minimalize([tuple(e - 1 if i == v else e for i, e in enumerate(g)) if g[v] else g for g in gens])
    a = _hilbert_numerator(plus, n)
    b = _hilbert_numerator(colon, n)
    out = [0] * max(len(a), len(b) + 1)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + 1] += c
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def hilbert_dimension_degree(lead_exponents, n):
    """(projective dimension, degree) from leading-term exponent tuples.

    Dimension -1 with degree 0 when the vanishing locus is empty.
    """
    num = list(_hilbert_numerator(_minimalize(lead_exponents), n))
    if not num or all(c == 0 for c in num):
        return -1, 0  # unit ideal
    s = 0
    while sum(num) == 0:
        # divide by (1 - T)
        q = [0] * (len(num) - 1)
        acc = 0
        for i in range(len(num) - 1):
            acc += num[i]
            q[i] = acc
        num = q
        s += 1
        if not num:
            break
    deg = sum(num)
    krull = n - s
    projdim = krull - 1
    if projdim < 0:
        return -1, 0
    return projdim, deg
