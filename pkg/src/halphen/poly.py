"""Sparse multivariate polynomials with exact coefficients.

Terms live in a dict keyed by packed exponent vectors (one bit field per
variable), so monomial multiplication is integer addition and divisibility a
masked borrow test.  Coefficients are rationals or number-field elements;
operations never round.
"""

from . import _kernel as K
from .errors import PolyParseError
from .rationals import QQ, qq, content_scale


class MonomialOrder:
    __slots__ = ("kind", "block", "name")

    def __init__(self, kind, block=0, name=""):
        self.kind = kind
        self.block = block
        self.name = name

    def __repr__(self):
        return f"MonomialOrder({self.name})"

    def __eq__(self, other):
        return (self.kind, self.block) == (other.kind, other.block)

    def __hash__(self):
        return hash((self.kind, self.block))


GREVLEX = MonomialOrder(K.GREVLEX, name="grevlex")
LEX = MonomialOrder(K.LEX, name="lex")


def elimination_order(block):
    """Order eliminating the first `block` variables."""
    return MonomialOrder(K.ELIM, block, f"elim({block})")


class PolyRing:
    """Polynomial ring over an exact field, with packed-exponent codec."""

    def __init__(self, names, field=None):
        from .numfield import Rationals

        self.names = tuple(names)
        self.n = len(self.names)
        self.field = field if field is not None else Rationals()
        bits = min(15, 60 // max(self.n, 1))
        if bits < 6:
            bits = 16  # keys become Python longs beyond 64 bits; still exact
        self.bits = bits
        self.mask = (1 << bits) - 1
        self.max_exp = (1 << (bits - 1)) - 1
        self.guards = 0
        for i in range(self.n):
            self.guards |= (1 << (bits - 1)) << (bits * i)
        self._index = {v: i for i, v in enumerate(self.names)}
        self._gens = None

    def __repr__(self):
        return f"PolyRing({','.join(self.names)}; {self.field})"

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.names, self.field))

    def encode(self, exps):
        k = 0
        for i, e in enumerate(exps):
            if e < 0 or e > self.max_exp:
                raise OverflowError(f"exponent {e} out of packing range")
            k |= int(e) << (self.bits * i)
        return k

    def decode(self, key):
        out = []
        for _ in range(self.n):
            out.append(key & self.mask)
            key >>= self.bits
        return tuple(out)

    def key_degree(self, key):
        d = 0
        for _ in range(self.n):
            d += key & self.mask
            key >>= self.bits
        return d

    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {0: self.field.one})

    def const(self, c):
        c = self.field(c)
        return Poly(self, {0: c} if c else {})

    def gen(self, name):
        i = self._index[name]
        return Poly(self, {self.encode([1 if j == i else 0 for j in range(self.n)]): self.field.one})

    def gens(self):
        if self._gens is None:
            self._gens = tuple(self.gen(v) for v in self.names)
        return self._gens

    def monomial(self, exps, coeff=1):
        c = self.field(coeff)
        return Poly(self, {self.encode(exps): c} if c else {})

    def monomials_of_degree(self, d):
        """All monomials of total degree d, in descending grevlex order."""
        out = []

        def rec(i, rem, exps):
            if i == self.n - 1:
                out.append(self.monomial(exps + [rem]))
                return
            for e in range(rem, -1, -1):
                rec(i + 1, rem - e, exps + [e])

        if d < 0:
            return []
        rec(0, d, [])
        out.sort(key=lambda m: self.order_key(GREVLEX)(next(iter(m.terms))), reverse=True)
        return out

    def order_key(self, order):
        n, bits, mask = self.n, self.bits, self.mask

        def key(k):
            e = []
            kk = k
            for _ in range(n):
                e.append(kk & mask)
                kk >>= bits
            if order.kind == K.LEX:
                return tuple(e)
            if order.kind == K.GREVLEX:
                return (sum(e), tuple(-x for x in reversed(e)))
            b = order.block
            return (
                sum(e[:b]),
                tuple(-x for x in reversed(e[:b])),
                sum(e[b:]),
                tuple(-x for x in reversed(e[b:])),
            )

        return key

    def parse(self, text):
        return _parse_poly(self, text)

    def change_field(self, field):
        return PolyRing(self.names, field)

    def coerce_poly(self, p):
        """Map a polynomial into this ring (matching names, embeddable field)."""
        if p.ring is self:
            return p
        if p.ring.names != self.names:
            raise ValueError("variable mismatch")
        conv = self.field.coerce
        return Poly(self, {k: conv(c) for k, c in p.terms.items()})


class Poly:
    """Immutable-by-convention sparse polynomial."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- basic structure ---------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total degree (-1 for the zero polynomial)."""
        if not self.terms:
            return -1
        kd = self.ring.key_degree
        return max(kd(k) for k in self.terms)

    def is_homogeneous(self):
        if not self.terms:
            return True
        kd = self.ring.key_degree
        it = iter(self.terms)
        d = kd(next(it))
        return all(kd(k) == d for k in it)

    def items(self):
        """(exponent tuple, coefficient) pairs in descending grevlex order."""
        okey = self.ring.order_key(GREVLEX)
        dec = self.ring.decode
        for k in sorted(self.terms, key=okey, reverse=True):
            yield dec(k), self.terms[k]

    def coefficient(self, exps):
        return self.terms.get(self.ring.encode(exps), self.ring.field.zero)

    def constant_coefficient(self):
        return self.terms.get(0, self.ring.field.zero)

    # -- arithmetic --------------------------------------------------------
    def _coerce_other(self, other):
        if isinstance(other, Poly):
            if other.ring is self.ring or other.ring == self.ring:
                return other
            raise TypeError("polynomials from different rings")
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce_other(other)
        big, small = self.terms, other.terms
        if len(big) < len(small):
            big, small = small, big
        out = dict(big)
        get = out.get
        for k, c in small.items():
            cur = get(k)
            if cur is None:
                out[k] = c
            else:
                cur = cur + c
                if cur:
                    out[k] = cur
                else:
                    del out[k]
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce_other(other))

    def __rsub__(self, other):
        return (-self) + self._coerce_other(other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.ring.field(other)
            if not c:
                return self.ring.zero()
            return Poly(self.ring, {k: c * v for k, v in self.terms.items()})
        other = self._coerce_other(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        if self.degree() + other.degree() > self.ring.max_exp:
            raise OverflowError("product degree exceeds packing range")
        return Poly(self.ring, K.mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = self.ring.field(c)
        inv = self.ring.field.inv(c)
        return Poly(self.ring, {k: v * inv for k, v in self.terms.items()})

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base2 = base if e == 1 else base * base
            base = base2
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.names, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    # -- calculus / substitution -------------------------------------------
    def derivative(self, var):
        i = self.ring._index[var]
        shift = self.ring.bits * i
        mask = self.ring.mask
        out = {}
        for k, c in self.terms.items():
            e = (k >> shift) & mask
            if e:
                out[k - (1 << shift)] = c * e
        return Poly(self.ring, out)

    def subs(self, images):
        """Substitute ring generators; images maps names to Polys of one ring.

        Unmentioned variables map to themselves when the target ring shares
        their names.
        """
        target = None
        for p in images.values():
            target = p.ring
            break
        if target is None:
            return self
        full = {}
        for v in self.ring.names:
            if v in images:
                full[v] = images[v]
            else:
                full[v] = target.gen(v)
        cache = {v: {0: target.one()} for v in self.ring.names}

        def power(v, e):
            c = cache[v]
            if e not in c:
                half = power(v, e // 2)
                p = half * half
                if e & 1:
                    p = p * full[v]
                c[e] = p
            return c[e]

        out = target.zero()
        conv = target.field.coerce
        for exps, c in self.items():
            term = target.const(conv(c))
            for i, e in enumerate(exps):
                if e:
                    term = term * power(self.ring.names[i], e)
            out = out + term
        return out

    def evaluate(self, point):
        """Evaluate at a tuple of field elements (same or extension field)."""
        fld = None
        for c in point:
            fld = getattr(c, "field", None)
            if fld is not None:
                break
        acc = None
        for exps, c in self.items():
            val = c if fld is None else fld.coerce(c)
            for i, e in enumerate(exps):
                for _ in range(e):
                    val = val * point[i]
            acc = val if acc is None else acc + val
        if acc is None:
            return self.ring.field.zero if fld is None else fld.zero
        return acc

    def apply_matrix(self, matrix, target=None):
        """Pull back along the linear change sending variable i to sum_j M[j][i]*var_j.

        M acts on coordinates: new polynomial is p(M * vars).
        """
        ring = target or self.ring
        gens = ring.gens()
        images = {}
        for i, v in enumerate(self.ring.names):
            acc = ring.zero()
            for j in range(ring.n):
                c = matrix[i][j]
                if c:
                    acc = acc + gens[j] * ring.field(c)
            images[v] = acc
        return self.subs(images)

    # -- normalization -----------------------------------------------------
    def leading_key(self, order=GREVLEX):
        r = self.ring
        return K.find_lm(self.terms, r.n, r.bits, r.mask, order.kind, order.block)

    def leading_coefficient(self, order=GREVLEX):
        return self.terms[self.leading_key(order)]

    def monic(self, order=GREVLEX):
        if not self.terms:
            return self
        return self / self.leading_coefficient(order)

    def primitive(self):
        """Integer-primitive scalar normalization with positive leading sign."""
        if not self.terms:
            return self
        if not self.ring.field.is_rationals():
            return self.monic()
        c = content_scale(self.terms.values())
        lead = self.terms[self.leading_key()]
        if lead < 0:
            c = -c
        return self / c

    def content_free(self):
        return self.primitive()

    # -- printing ----------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for exps, c in self.items():
            mono = "*".join(
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(exps)
                if e
            )
            cs = self.ring.field.to_str(c)
            if mono:
                if cs == "1":
                    s = mono
                elif cs == "-1":
                    s = "-" + mono
                else:
                    s = f"{cs}*{mono}"
            else:
                s = cs
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out

    def __repr__(self):
        return f"Poly({self})"


# -- parser ------------------------------------------------------------------

def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, ch))
            i += 1
        else:
            raise PolyParseError(f"unexpected character {ch!r} in polynomial")
    return tokens


class _Parser:
    def __init__(self, ring, tokens):
        self.ring = ring
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.pos += 1
        return t

    def parse(self):
        p = self.expr()
        if self.pos != len(self.toks):
            raise PolyParseError("trailing input in polynomial")
        return p

    def expr(self):
        sign = 1
        kind, _ = self.peek()
        if kind in ("+", "-"):
            self.take()
            sign = -1 if kind == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while True:
            kind, _ = self.peek()
            if kind == "+":
                self.take()
                p = p + self.term()
            elif kind == "-":
                self.take()
                p = p - self.term()
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            kind, _ = self.peek()
            if kind == "*":
                self.take()
                p = p * self.factor()
            elif kind == "/":
                self.take()
                q = self.factor()
                if len(q.terms) != 1 or 0 not in q.terms:
                    raise PolyParseError("division only by nonzero constants")
                p = p / q.constant_coefficient()
            elif kind in ("num", "name", "("):
                # implicit multiplication: 2x, 2(x+y)
                p = p * self.factor()
            else:
                return p

    def factor(self):
        base = self.atom()
        kind, _ = self.peek()
        if kind == "^":
            self.take()
            k2, v = self.take()
            neg = False
            if k2 == "-":
                neg = True
                k2, v = self.take()
            if k2 != "num":
                raise PolyParseError("exponent must be an integer")
            if neg:
                raise PolyParseError("negative exponents not supported")
            return base ** int(v)
        return base

    def atom(self):
        kind, v = self.take()
        if kind == "num":
            return self.ring.const(int(v))
        if kind == "name":
            if v in self.ring._index:
                return self.ring.gen(v)
            gen = self.ring.field.generator_poly(self.ring, v)
            if gen is not None:
                return gen
            raise PolyParseError(f"unknown variable {v!r}")
        if kind == "(":
            p = self.expr()
            k2, _ = self.take()
            if k2 != ")":
                raise PolyParseError("missing closing parenthesis")
            return p
        if kind == "-":
            return -self.atom()
        raise PolyParseError(f"unexpected token {v!r}")


def _parse_poly(ring, text):
    if not isinstance(text, str):
        raise PolyParseError("polynomial input must be a string")
    tokens = _tokenize(text)
    if not tokens:
        raise PolyParseError("empty polynomial")
    return _Parser(ring, tokens).parse()
