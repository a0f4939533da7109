"""Exact linear algebra over the rationals (and small extensions).

Dense row-reduction is all the pipeline needs: condition matrices are a few
hundred rows at most.  The complement rule used by solve_and_complement is
pinned for reproducible output bases.
"""

from .rationals import QQ, qq


def rref(rows, width=None):
    """Reduced row echelon form. Returns (new_rows, pivot_columns).

    Rows may have coefficients in QQ or one number field; zero rows dropped.
    """
    m = [list(r) for r in rows if any(r)]
    if width is None:
        width = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(width):
        pr = None
        for i in range(r, len(m)):
            if m[i][c]:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c] if not hasattr(m[r][c], "inverse") else m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [row for row in m[:r]], pivots


def right_kernel(rows, width):
    """Basis of the right kernel, one vector per non-pivot column.

    The vector for free column j has entry 1 at j; deterministic.
    """
    red, pivots = rref(rows, width)
    pivset = set(pivots)
    basis = []
    for j in range(width):
        if j in pivset:
            continue
        v = [QQ(0)] * width
        v[j] = QQ(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][j]
        basis.append(v)
    return basis


def rank(rows, width=None):
    return len(rref(rows, width)[1])


def mat_inverse(m):
    """Inverse of a square matrix over a field; raises on singular input."""
    n = len(m)
    aug = [list(row) + [QQ(1) if j == i else QQ(0) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ArithmeticError("matrix is singular")
    return [row[n:] for row in red[:n]]


def in_row_space(vector, rows):
    """Membership of a vector in the row space (exact)."""
    red, pivots = rref(rows, len(vector))
    v = list(vector)
    for r, pc in enumerate(pivots):
        if v[pc]:
            f = v[pc]
            v = [a - f * b for a, b in zip(v, red[r])]
    return not any(v)


def same_row_space(rows_a, rows_b, width):
    ra, _ = rref(rows_a, width)
    rb, _ = rref(rows_b, width)
    return ra == rb


class LinearConditionSet:
    """Homogeneous linear conditions over QQ on named unknowns."""

    def __init__(self, unknowns):
        self.unknowns = list(unknowns)
        self.rows = []

    def add_row(self, row):
        row = [qq(c) for c in row]
        if len(row) != len(self.unknowns):
            raise ValueError("row length mismatch")
        if any(row):
            self.rows.append(row)

    def add_extension_row(self, row):
        """Add a condition with number-field coefficients, split over QQ."""
        from .numfield import split_conditions

        for r in split_conditions(row):
            self.add_row(r)

    def solution_basis(self):
        return right_kernel(self.rows, len(self.unknowns))

    def satisfied_by(self, vector):
        for row in self.rows:
            acc = QQ(0)
            for c, v in zip(row, vector):
                acc += c * qq(v)
            if acc:
                return False
        return True


def solve_and_complement(conditions, ambient_basis, modulus_space):
    """Solve the conditions inside span(ambient_basis), complement the modulus.

    ambient_basis and modulus_space are lists of Polys; the modulus span is
    intersected with the solution space U0 and a complement U with
    U0 = (U0 ∩ modulus) ⊕ U is returned as polynomials.  Pinned rule: U keeps
    the kernel-basis vectors at non-pivot columns of the modulus matrix
    written in U0-coordinates, in ambient order.
    """
    if not ambient_basis:
        return []
    ncols = len(ambient_basis)
    u0 = right_kernel(conditions.rows, ncols) if conditions.rows else [
        [QQ(1) if j == i else QQ(0) for j in range(ncols)] for i in range(ncols)
    ]
    if not u0:
        return []

    # coordinates for polynomials: union of monomial keys across inputs
    ring = ambient_basis[0].ring
    keys = set()
    for p in ambient_basis:
        keys.update(p.terms)
    for p in modulus_space:
        keys.update(p.terms)
    keys = sorted(keys)
    kidx = {k: i for i, k in enumerate(keys)}

    def vec(p):
        v = [QQ(0)] * len(keys)
        for k, c in p.terms.items():
            v[kidx[k]] = c
        return v

    amb = [vec(p) for p in ambient_basis]

    # W = U0 ∩ modulus: solve for combinations of ambient-basis coords that are
    # both in U0 and in the modulus span.
    w_in_u0 = []
    if modulus_space:
        mod = [vec(p) for p in modulus_space]
        # unknowns: alpha (ambient coords, constrained to U0 later) and beta
        # with sum alpha_i amb_i = sum beta_j mod_j
        nm = len(mod)
        rows = []
        for t in range(len(keys)):
            rows.append([amb[i][t] for i in range(ncols)] + [-mod[j][t] for j in range(nm)])
        for cond in conditions.rows:
            rows.append(list(cond) + [QQ(0)] * nm)
        for sol in right_kernel(rows, ncols + nm):
            alpha = sol[:ncols]
            if any(alpha):
                w_in_u0.append(alpha)

    if not w_in_u0:
        picked = list(range(len(u0)))
    else:
        # express W in U0-coordinates: alpha = sum_c gamma_c u0_c
        rows = []
        for t in range(ncols):
            rows.append([u0[c][t] for c in range(len(u0))])
        # solve for each W vector; build matrix of gammas and row-reduce
        gammas = []
        for alpha in w_in_u0:
            aug = [row + [alpha[t]] for t, row in enumerate(rows)]
            red, pivots = rref(aug, len(u0) + 1)
            if len(u0) in pivots:
                raise ArithmeticError("modulus vector escaped the solution space")
            g = [QQ(0)] * len(u0)
            for r, pc in enumerate(pivots):
                g[pc] = red[r][len(u0)]
            gammas.append(g)
        _, piv = rref(gammas, len(u0))
        picked = [c for c in range(len(u0)) if c not in set(piv)]

    out = []
    for c in picked:
        p = ring.zero()
        for i, coeff in enumerate(u0[c]):
            if coeff:
                p = p + ambient_basis[i] * coeff
        if p:
            out.append(p.primitive())
    return out
