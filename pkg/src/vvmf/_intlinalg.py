"""Exact integer/rational linear algebra: Smith normal form, Hermite-style
row bases, integer kernels, and the inertia of a rational symmetric matrix.

Matrices are lists of lists of Python ints (or Fractions where stated), so
all arithmetic is arbitrary precision.  numpy is deliberately not used here.
"""

from fractions import Fraction


def xgcd(a, b):
    """Return (x, y, g) with a*x + b*y == g == gcd(a, b), g >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    oi[j] += c * bt[j]
    return out


def mat_vec(a, v):
    return [sum(ai[j] * v[j] for j in range(len(v))) for ai in a]


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def det_int(m):
    """Exact determinant of a square integer matrix (fraction-free via QQ)."""
    d = det_fraction([[Fraction(x) for x in row] for row in m])
    assert d.denominator == 1
    return int(d)


def det_fraction(m):
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            if f:
                for c in range(i, n):
                    m[r][c] -= f * m[i][c]
    return det


def invert_fraction_matrix(m):
    """Inverse of a nonsingular matrix over QQ (Gauss-Jordan)."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[i], a[piv] = a[piv], a[i]
        inv = 1 / a[i][i]
        a[i] = [x * inv for x in a[i]]
        for r in range(n):
            if r != i and a[r][i]:
                f = a[r][i]
                a[r] = [x - f * y for x, y in zip(a[r], a[i])]
    return [row[n:] for row in a]


def smith_normal_form(m):
    """Smith normal form: return (u, d, v) with u*m*v == d.

    d is diagonal with nonnegative entries and d[i] | d[i+1]; u, v are
    unimodular.  Total on integer matrices, including zero and non-square.
    """
    a = [row[:] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def addmul_row(dst, src, c):
        # row_dst += c * row_src  (u tracks the same op)
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, c):
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        # choose pivot: smallest nonzero absolute value in the remaining block
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        # clear row and column t by euclidean steps
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    addmul_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    addmul_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(j, t)
                        dirty = True
        # pivot must divide every remaining entry (gives the divisor chain)
        fix = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % a[t][t]:
                    fix = i
                    break
            if fix is not None:
                break
        if fix is not None:
            addmul_row(t, fix, 1)
            continue  # re-eliminate at the same t
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    d = [[a[i][j] if i == j else 0 for j in range(cols)] for i in range(rows)]
    return u, d, v


def snf_diagonal(m):
    """Just the elementary divisors (nonnegative, divisor chain)."""
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def kernel_basis(m):
    """Rows spanning {x in Z^cols : m @ x == 0}; saturated by construction."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if rows == 0:
        return identity_matrix(cols)
    _, d, v = smith_normal_form(m)
    ker = []
    for j in range(cols):
        if j >= rows or d[j][j] == 0:
            ker.append([v[i][j] for i in range(cols)])
    return ker


class RowBasis:
    """Incremental echelon basis of an integer row lattice.

    Rows are reduced so each basis row starts with a pivot in a distinct
    column; membership and exact coordinate solving work by elimination.
    """

    def __init__(self, ncols):
        self.ncols = ncols
        self.rows = []   # echelon rows, sorted by pivot column
        self.pivots = []

    def add(self, vec):
        vec = list(vec)
        assert len(vec) == self.ncols
        i = 0
        while True:
            j = next((c for c, x in enumerate(vec) if x), None)
            if j is None:
                return
            while i < len(self.rows) and self.pivots[i] < j:
                i += 1
            if i == len(self.rows) or self.pivots[i] > j:
                self.rows.insert(i, vec)
                self.pivots.insert(i, j)
                return
            row = self.rows[i]
            aa, bb = row[j], vec[j]
            if bb % aa == 0:
                q = bb // aa
                vec = [x - q * y for x, y in zip(vec, row)]
            else:
                x, y, g = xgcd(aa, bb)
                new_row = [x * p + y * q for p, q in zip(row, vec)]
                new_vec = [(-(bb // g)) * p + (aa // g) * q for p, q in zip(row, vec)]
                self.rows[i] = new_row
                vec = new_vec

    def solve(self, vec):
        """Integer coordinates of vec in terms of self.rows, or None."""
        vec = list(vec)
        coeffs = [0] * len(self.rows)
        for i, (row, pj) in enumerate(zip(self.rows, self.pivots)):
            if vec[pj]:
                if vec[pj] % row[pj]:
                    return None
                q = vec[pj] // row[pj]
                coeffs[i] = q
                vec = [x - q * y for x, y in zip(vec, row)]
        if any(vec):
            return None
        return coeffs


def inertia(gram):
    """(n_plus, n_minus, n_zero) of a rational symmetric matrix, exactly.

    Symmetric Gaussian reduction; a zero diagonal with a nonzero off-diagonal
    entry is repaired by the symmetric row+column addition trick (valid in
    characteristic 0).
    """
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    pos = neg = zero = 0
    live = list(range(n))
    while live:
        k = next((i for i in live if a[i][i] != 0), None)
        if k is None:
            pair = None
            for i in live:
                for j in live:
                    if i != j and a[i][j] != 0:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                zero += len(live)
                break
            i, j = pair
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            continue
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        live.remove(k)
        # Schur complement of the pivot on the remaining block
        col = {i: a[i][k] for i in live}
        for i in live:
            if col[i]:
                fi = col[i] / p
                for j in live:
                    a[i][j] -= fi * col[j]
        for i in live:
            a[i][k] = a[k][i] = Fraction(0)
    return pos, neg, zero
