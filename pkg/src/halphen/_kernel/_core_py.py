"""Pure-Python term-map kernel.

Polynomials are dicts mapping packed exponent keys to nonzero coefficients.
Keys are integers with one bit field per variable; monomial product is key
addition, divisibility is a masked borrow test.  The compiled backend in
_core.pyx implements the same functions.
"""

BACKEND = "python"

GREVLEX = 0
LEX = 1
ELIM = 2


def mul_terms(a, b):
    """Term-map product of two polynomials."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            cur = get(k)
            if cur is None:
                out[k] = ca * cb
            else:
                cur = cur + ca * cb
                if cur:
                    out[k] = cur
                else:
                    del out[k]
    return out


def iaxpy(f, c, mk, g):
    """In-place f += c * x^mk * g for term maps; returns f."""
    get = f.get
    for kg, cg in g.items():
        k = kg + mk
        cur = get(k)
        if cur is None:
            f[k] = c * cg
        else:
            cur = cur + c * cg
            if cur:
                f[k] = cur
            else:
                del f[k]
    return f


def _key_tuple(k, n, bits, mask):
    e = []
    for _ in range(n):
        e.append(k & mask)
        k >>= bits
    return e  # e[i] is the exponent of variable i


def cmp_keys(ka, kb, n, bits, mask, kind, block):
    """Return positive if ka > kb in the order, negative if smaller, 0 if equal."""
    if ka == kb:
        return 0
    ea = _key_tuple(ka, n, bits, mask)
    eb = _key_tuple(kb, n, bits, mask)
    if kind == LEX:
        return 1 if ea > eb else -1
    if kind == GREVLEX:
        return _grevlex(ea, eb, 0, n)
    # block elimination order: first `block` variables dominate
    da, db = sum(ea[:block]), sum(eb[:block])
    if da != db:
        return 1 if da > db else -1
    c = _grevlex(ea, eb, 0, block)
    if c:
        return c
    return _grevlex(ea, eb, block, n)


def _grevlex(ea, eb, lo, hi):
    da = sum(ea[lo:hi])
    db = sum(eb[lo:hi])
    if da != db:
        return 1 if da > db else -1
    for i in range(hi - 1, lo - 1, -1):
        if ea[i] != eb[i]:
            return -1 if ea[i] > eb[i] else 1
    return 0


def find_lm(terms, n, bits, mask, kind, block):
    """Leading (largest) key of a nonzero term map under the given order."""
    best = None
    for k in terms:
        if best is None or cmp_keys(k, best, n, bits, mask, kind, block) > 0:
            best = k
    return best


def divides(mk, k, guards):
    """Monomial x^mk divides x^k (componentwise <=)."""
    return ((k | guards) - mk) & guards == guards
