# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-map kernel: same contract as _core_py.

Keys are packed exponent integers; the fast paths assume they fit in a C
int64 (rings guarantee this for up to 5 variables at 12 bits); wider rings
fall back to Python-integer arithmetic on the same code paths.
"""

BACKEND = "cython"

GREVLEX = 0
LEX = 1
ELIM = 2

cdef extern from "Python.h":
    double PyFloat_AS_DOUBLE(object)


def mul_terms(dict a, dict b):
    cdef dict out = {}
    cdef object ka, kb, ca, cb, k, cur
    if len(a) > len(b):
        a, b = b, a
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            cur = out.get(k)
            if cur is None:
                out[k] = ca * cb
            else:
                cur = cur + ca * cb
                if cur:
                    out[k] = cur
                else:
                    del out[k]
    return out


def iaxpy(dict f, object c, object mk, dict g):
    cdef object kg, cg, k, cur
    for kg, cg in g.items():
        k = kg + mk
        cur = f.get(k)
        if cur is None:
            f[k] = c * cg
        else:
            cur = cur + c * cg
            if cur:
                f[k] = cur
            else:
                del f[k]
    return f


cdef int _cmp_small(long long ka, long long kb, int n, int bits, long long mask, int kind, int block) noexcept:
    cdef long long ea[16]
    cdef long long eb[16]
    cdef long long va = ka, vb = kb
    cdef int i
    cdef long long da = 0, db = 0
    for i in range(n):
        ea[i] = va & mask
        eb[i] = vb & mask
        va >>= bits
        vb >>= bits
    if kind == 1:  # lex
        for i in range(n):
            if ea[i] != eb[i]:
                return 1 if ea[i] > eb[i] else -1
        return 0
    if kind == 0:  # grevlex
        return _grevlex_range(ea, eb, 0, n)
    # elimination block order
    for i in range(block):
        da += ea[i]
        db += eb[i]
    if da != db:
        return 1 if da > db else -1
    cdef int c = _grevlex_range(ea, eb, 0, block)
    if c:
        return c
    return _grevlex_range(ea, eb, block, n)


cdef int _grevlex_range(long long *ea, long long *eb, int lo, int hi) noexcept:
    cdef long long da = 0, db = 0
    cdef int i
    for i in range(lo, hi):
        da += ea[i]
        db += eb[i]
    if da != db:
        return 1 if da > db else -1
    for i in range(hi - 1, lo - 1, -1):
        if ea[i] != eb[i]:
            return -1 if ea[i] > eb[i] else 1
    return 0


def cmp_keys(ka, kb, int n, int bits, mask, int kind, int block):
    if ka == kb:
        return 0
    if n <= 16 and n * bits <= 62:
        return _cmp_small(ka, kb, n, bits, mask, kind, block)
    return _cmp_big(ka, kb, n, bits, mask, kind, block)


def _cmp_big(ka, kb, int n, int bits, mask, int kind, int block):
    cdef list ea = [], eb = []
    cdef int i
    for i in range(n):
        ea.append(ka & mask)
        eb.append(kb & mask)
        ka >>= bits
        kb >>= bits
    if kind == 1:
        return 1 if ea > eb else (-1 if ea < eb else 0)
    if kind == 0:
        return _grevlex_list(ea, eb, 0, n)
    da = sum(ea[:block]); db = sum(eb[:block])
    if da != db:
        return 1 if da > db else -1
    c = _grevlex_list(ea, eb, 0, block)
    if c:
        return c
    return _grevlex_list(ea, eb, block, n)


def _grevlex_list(list ea, list eb, int lo, int hi):
    da = sum(ea[lo:hi]); db = sum(eb[lo:hi])
    if da != db:
        return 1 if da > db else -1
    cdef int i
    for i in range(hi - 1, lo - 1, -1):
        if ea[i] != eb[i]:
            return -1 if ea[i] > eb[i] else 1
    return 0


def find_lm(terms, int n, int bits, mask, int kind, int block):
    cdef long long best_s, k_s
    cdef object best = None
    cdef object k
    cdef bint small = (n <= 16 and n * bits <= 62)
    if small:
        best_s = -1
        for k in terms:
            k_s = k
            if best is None or _cmp_small(k_s, best_s, n, bits, mask, kind, block) > 0:
                best = k
                best_s = k_s
        return best
    for k in terms:
        if best is None or _cmp_big(k, best, n, bits, mask, kind, block) > 0:
            best = k
    return best


def divides(mk, k, guards):
    return ((k | guards) - mk) & guards == guards
