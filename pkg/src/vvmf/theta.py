"""Theta series of positive-definite even lattices and their cosets.

Vector enumeration is Fincke-Pohst with an exact rational Cholesky-style
decomposition: no floating point enters the bounds (float is used only to
seed integer range guesses, which are then fixed up with exact predicates),
so the enumerated set is provably complete.  A brute-force box enumeration
over the dual-ellipsoid bounding box is provided as an independent oracle.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InputError
from .lattice import EvenLattice
from .qexp import ScalarQSeries, VVForm


def _floor_sqrt(fr):
    """floor(sqrt(p/q)) for a nonnegative rational."""
    assert fr >= 0
    p, q = fr.numerator, fr.denominator
    return math.isqrt(p * q) // q


def _max_int_le(t, r):
    """Largest x in Z with x <= t + sqrt(r); t rational, r rational >= 0."""
    def ok(x):
        d = x - t
        return d <= 0 or d * d <= r
    x = math.floor(float(t) + math.sqrt(float(r))) if r > 0 else math.floor(t)
    while ok(x + 1):
        x += 1
    while not ok(x):
        x -= 1
    return x


def _min_int_ge(t, r):
    """Smallest x in Z with x >= t - sqrt(r)."""
    def ok(x):
        d = t - x
        return d <= 0 or d * d <= r
    x = math.ceil(float(t) - math.sqrt(float(r))) if r > 0 else math.ceil(t)
    while ok(x - 1):
        x -= 1
    while not ok(x):
        x += 1
    return x


@dataclass(frozen=True)
class ShortVectorQuery:
    """All vectors of K + coset with norm at most bound (norm = (v, v))."""

    lattice: EvenLattice
    coset: tuple
    bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coset", tuple(Fraction(c) for c in self.coset))
        object.__setattr__(self, "bound", Fraction(self.bound))
        n = self.lattice.rank
        assert len(self.coset) == n
        if not self.lattice.is_positive_definite():
            raise InputError("short-vector enumeration needs a positive-definite Gram")
        if n and not self.lattice.disc.in_dual(self.coset):
            raise InputError(f"coset representative {self.coset} is not in the dual")


def _cholesky_rational(gram):
    """q[i][i] and the ratios q[i][j] (j > i) with
    Q(y) = sum_i q[i][i] (y_i + sum_{j>i} q[i][j] y_j)^2."""
    n = len(gram)
    q = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors(query):
    """All v in K + coset with (v, v) <= bound, as (coords, norm) pairs in
    lexicographic coordinate order, each vector exactly once.

    The recursion works with den-scaled integer coordinates and row-scaled
    integer Cholesky data, so the hot loop is integer dot products plus a
    handful of exact Fraction comparisons per node.
    """
    lat = query.lattice
    n = lat.rank
    bound = Fraction(query.bound)
    if n == 0:
        return [((), Fraction(0))] if bound >= 0 else []
    q = _cholesky_rational(lat.gram)
    s = query.coset
    den = 1
    for c in s:
        den = den * c.denominator // math.gcd(den, c.denominator)
    s_scaled = [int(c * den) for c in s]
    # row-scaled integer off-diagonal data: qi[i][j] = q[i][j] * rowden[i]
    rowden = []
    qi = []
    for i in range(n):
        d = 1
        for j in range(i + 1, n):
            d = d * q[i][j].denominator // math.gcd(d, q[i][j].denominator)
        rowden.append(d)
        qi.append([int(q[i][j] * d) for j in range(n)])
    diag = [q[i][i] for i in range(n)]
    found = []
    ys = [0] * n  # den-scaled coordinates

    def recurse(i, budget):
        # u_i = sum_{j>i} q[i][j] y_j, as an exact fraction of an int dot
        acc = 0
        row = qi[i]
        for j in range(i + 1, n):
            if ys[j]:
                acc += row[j] * ys[j]
        u = Fraction(acc, rowden[i] * den)
        t = -Fraction(s_scaled[i], den) - u
        r = budget / diag[i]
        lo = _min_int_ge(t, r)
        hi = _max_int_le(t, r)
        for x in range(lo, hi + 1):
            y = Fraction(x * den + s_scaled[i], den)
            ys[i] = x * den + s_scaled[i]
            used = diag[i] * (y + u) ** 2
            if used > budget:
                continue
            if i == 0:
                v = tuple(Fraction(c, den) for c in ys)
                found.append((v, bound - budget + used))
            else:
                recurse(i - 1, budget - used)
        ys[i] = 0

    recurse(n - 1, bound)
    found.sort(key=lambda p: p[0])
    return found


def short_vectors_box(lattice, coset, bound):
    """Independent brute-force oracle: enumerate the integer box given by the
    per-coordinate ellipsoid extents |y_i| <= sqrt(bound * (G^{-1})_{ii}) and
    filter by the exact norm."""
    n = lattice.rank
    if n == 0:
        return [((), Fraction(0))] if bound >= 0 else []
    if not lattice.is_positive_definite():
        raise InputError("box enumeration needs a positive-definite Gram")
    bound = Fraction(bound)
    coset = tuple(Fraction(c) for c in coset)
    den = 1
    for c in coset:
        den = den * c.denominator // math.gcd(den, c.denominator)
    s_scaled = [int(c * den) for c in coset]
    gram = [[int(x) for x in row] for row in lattice.gram]
    inv = lattice.dual_gram
    ranges = []
    for i in range(n):
        r = bound * inv[i][i]
        lo = _min_int_ge(-coset[i], r)
        hi = _max_int_le(-coset[i], r)
        ranges.append([x * den + s_scaled[i] for x in range(lo, hi + 1)])
    bound_scaled = bound * den * den
    out = []

    def rec(i, partial):
        if i == n:
            nn = sum(partial[a] * gram[a][b] * partial[b]
                     for a in range(n) for b in range(n))
            if nn <= bound_scaled:
                out.append((tuple(Fraction(c, den) for c in partial),
                            Fraction(nn, den * den)))
            return
        for y in ranges[i]:
            rec(i + 1, partial + [y])

    rec(0, [])
    out.sort(key=lambda p: p[0])
    return out


@lru_cache(maxsize=None)
def _theta_coset_cached(lattice, coset, n_max):
    vectors = short_vectors(ShortVectorQuery(lattice, coset, 2 * Fraction(n_max)))
    coeffs = {}
    for _, norm in vectors:
        e = norm / 2
        if e <= n_max:
            coeffs[e] = coeffs.get(e, Fraction(0)) + 1
    denom = 1
    for e in coeffs:
        denom = denom * e.denominator // math.gcd(denom, e.denominator)
    return ScalarQSeries(denom, coeffs, Fraction(n_max), Fraction(0))


def theta_coset(lattice, lam, n_max):
    """theta_{K + lambda} as an exact scalar q-series up to exponent n_max,
    for lam an element of A_K (coordinate tuple w.r.t. the cyclic generators).
    """
    rep = lattice.disc.lift(lam)
    return _theta_coset_cached(lattice, tuple(rep), Fraction(n_max))


def theta_coset_rep(lattice, rep, n_max):
    """Same, for an explicit rational coset representative in K^vee."""
    return _theta_coset_cached(lattice, tuple(Fraction(c) for c in rep),
                               Fraction(n_max))


def theta_vv(lattice, n_max):
    """The vector-valued theta series over A_K, weight rk(K)/2."""
    if lattice.rank and not lattice.is_positive_definite():
        raise InputError("theta series needs a positive-definite lattice")
    disc = lattice.disc
    n_max = Fraction(n_max)
    coeffs = {}
    for lam in disc.module.elements():
        series = theta_coset(lattice, lam, n_max)
        for e, c in series.coeffs.items():
            coeffs[(lam, e)] = c
    return VVForm(disc.module, Fraction(lattice.rank, 2), coeffs, n_max,
                  Fraction(0))
