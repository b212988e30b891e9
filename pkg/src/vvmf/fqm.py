"""Finite quadratic modules: finite abelian groups with a Q/Z-valued
quadratic form.

A module is presented by cyclic generators g_1, ..., g_k of orders
o_1, ..., o_k together with the values q(g_i) and the bilinear values
b(g_i, g_j) mod 1; q on arbitrary elements is recovered through the
polarization identity, so storage is O(k^2) rather than O(|A|).
Elements are coordinate tuples reduced mod the orders.
"""

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from ._intlinalg import RowBasis, invert_fraction_matrix, smith_normal_form
from .errors import DegenerateError, ModuleMismatchError, NotIsotropicError

FqElement = tuple  # coordinate tuples, reduced componentwise


def _mod1(x):
    return Fraction(x) % 1


def _lcm(a, b):
    return a * b // gcd(a, b)


def frac_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s):
    if isinstance(s, str):
        num, _, den = s.partition("/")
        return Fraction(int(num), int(den)) if den else Fraction(int(num))
    return Fraction(s)


@dataclass(frozen=True)
class FqModule:
    """Finite abelian group with Q/Z-valued quadratic form.

    orders: cyclic factor orders (all > 1; the trivial module has none).
    q_gen:  q(g_i) mod 1.
    gram:   b(g_i, g_j) mod 1; diagonal must equal 2*q(g_i) mod 1.
    source_signature: (b+, b-) of an originating even lattice, if any.
    parts:  the summands when built by direct_sum, else None.
    """

    orders: tuple
    q_gen: tuple
    gram: tuple
    source_signature: tuple = None
    parts: tuple = None

    def __post_init__(self):
        k = len(self.orders)
        assert all(o > 1 for o in self.orders)
        assert len(self.q_gen) == k and len(self.gram) == k
        for i in range(k):
            assert 0 <= self.q_gen[i] < 1
            assert len(self.gram[i]) == k
            for j in range(k):
                assert 0 <= self.gram[i][j] < 1
                assert self.gram[i][j] == self.gram[j][i]
            assert self.gram[i][i] == _mod1(2 * self.q_gen[i])

    # --- group structure ---------------------------------------------------

    def order(self):
        return math.prod(self.orders)

    def rank(self):
        return len(self.orders)

    def zero(self):
        return (0,) * len(self.orders)

    def reduce(self, coords):
        return tuple(int(c) % o for c, o in zip(coords, self.orders))

    def add(self, x, y):
        return tuple((a + b) % o for a, b, o in zip(x, y, self.orders))

    def neg(self, x):
        return tuple((-a) % o for a, o in zip(x, self.orders))

    def sub(self, x, y):
        return tuple((a - b) % o for a, b, o in zip(x, y, self.orders))

    def elements(self):
        """All elements in canonical (row-major lexicographic) order."""
        return itertools.product(*[range(o) for o in self.orders])

    def index_of(self, x):
        idx = 0
        for c, o in zip(x, self.orders):
            idx = idx * o + (c % o)
        return idx

    def element_order(self, x):
        return math.prod(o // gcd(o, c) for c, o in zip(x, self.orders)) if x else 1

    # --- quadratic and bilinear values --------------------------------------

    def q(self, x):
        """q(sum x_i g_i) by polarization; value in [0, 1)."""
        total = Fraction(0)
        k = len(self.orders)
        for i in range(k):
            xi = x[i]
            if xi:
                total += xi * xi * self.q_gen[i]
                for j in range(i + 1, k):
                    if x[j]:
                        total += xi * x[j] * self.gram[i][j]
        return _mod1(total)

    def b(self, x, y):
        """Bilinear form b(x, y) = q(x+y) - q(x) - q(y) mod 1."""
        total = Fraction(0)
        k = len(self.orders)
        for i in range(k):
            if x[i]:
                for j in range(k):
                    if y[j]:
                        total += x[i] * y[j] * self.gram[i][j]
        return _mod1(total)

    # --- invariants ----------------------------------------------------------

    def level(self):
        """Smallest d >= 1 with d*q(x) = 0 for all x."""
        d = 1
        for v in self.q_gen:
            d = _lcm(d, v.denominator)
        for row in self.gram:
            for v in row:
                d = _lcm(d, v.denominator)
        return d

    def gauss_sum(self):
        return sum(cmath.exp(2j * cmath.pi * float(self.q(x))) for x in self.elements())

    def radical(self):
        """Elements pairing trivially with everything (by enumeration)."""
        gens = [tuple(int(i == j) for j in range(len(self.orders)))
                for i in range(len(self.orders))]
        return [x for x in self.elements()
                if all(self.b(x, g) == 0 for g in gens)]

    def is_nondegenerate(self):
        return len(self.radical()) == 1

    def validate(self):
        """Expensive invariant checks: nondegeneracy and q(-x) = q(x)."""
        if not self.is_nondegenerate():
            raise DegenerateError("bilinear form has a nontrivial radical")
        for x in self.elements():
            assert self.q(x) == self.q(self.neg(x))
        return True

    # --- serialization -------------------------------------------------------

    def to_dict(self):
        return {
            "orders": list(self.orders),
            "gram_mod1": [[frac_str(v) for v in row] for row in self.gram],
            "q_gen": [frac_str(v) for v in self.q_gen],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            orders=tuple(int(o) for o in d["orders"]),
            q_gen=tuple(parse_frac(v) for v in d["q_gen"]),
            gram=tuple(tuple(parse_frac(v) for v in row) for row in d["gram_mod1"]),
        )


def trivial_module(source_signature=None):
    return FqModule((), (), (), source_signature=source_signature)


def make_module(orders, q_gen, gram, source_signature=None, parts=None):
    """Normalize inputs (drop order-1 factors, reduce mod 1) and build."""
    keep = [i for i, o in enumerate(orders) if o > 1]
    return FqModule(
        orders=tuple(orders[i] for i in keep),
        q_gen=tuple(_mod1(q_gen[i]) for i in keep),
        gram=tuple(tuple(_mod1(gram[i][j]) for j in keep) for i in keep),
        source_signature=source_signature,
        parts=parts,
    )


def negated(a):
    """Same group, q multiplied by -1 (the A_{K} <-> A_{K(-1)} switch)."""
    sig = None
    if a.source_signature is not None:
        sig = (a.source_signature[1], a.source_signature[0])
    parts = tuple(negated(p) for p in a.parts) if a.parts else None
    return FqModule(
        orders=a.orders,
        q_gen=tuple(_mod1(-v) for v in a.q_gen),
        gram=tuple(tuple(_mod1(-v) for v in row) for row in a.gram),
        source_signature=sig,
        parts=parts,
    )


# --- q/bilinear entry points (operation-style API) ---------------------------

def q_value(a, x):
    return a.q(x)


def bilinear(a, x, y):
    return a.b(x, y)


def level(a):
    return a.level()


def signature_mod8(a):
    """sigma(A) in Z/8 via the Milgram Gauss sum.

    The sum over A of e(q(x)) equals sqrt(|A|) * e(sigma/8); the magnitude
    is checked (a deviation signals a degenerate or corrupted form) and the
    argument is rounded to the nearest eighth.
    """
    s = a.gauss_sum()
    root = math.sqrt(a.order())
    if abs(abs(s) - root) > 1e-8 * max(1.0, root):
        raise DegenerateError(
            f"Gauss sum magnitude {abs(s)!r} != sqrt(|A|) = {root!r}")
    sigma = round(8 * cmath.phase(s) / (2 * cmath.pi)) % 8
    resid = abs(s - root * cmath.exp(2j * cmath.pi * sigma / 8))
    if resid > 1e-8 * max(1.0, root):
        raise DegenerateError(f"Gauss sum argument off-grid (residual {resid})")
    return sigma


# --- isotropic subgroups ------------------------------------------------------

@dataclass(frozen=True)
class IsotropicSubgroup:
    """Subgroup on which q vanishes identically."""

    parent: FqModule
    generators: tuple

    closure: tuple = field(init=False, compare=False)

    def __post_init__(self):
        a = self.parent
        gens = [a.reduce(g) for g in self.generators]
        seen = {a.zero()}
        frontier = [a.zero()]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = a.add(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        elems = tuple(sorted(seen))
        for x in elems:
            if a.q(x) != 0:
                raise NotIsotropicError(f"q{x} = {a.q(x)} != 0")
        object.__setattr__(self, "closure", elems)

    def __len__(self):
        return len(self.closure)

    def perp(self):
        """Elements of the parent pairing to zero with the subgroup."""
        a = self.parent
        gens = [g for g in self.generators if any(g)]
        return [x for x in a.elements()
                if all(a.b(x, g) == 0 for g in gens)]


def _abelian_quotient(orders, subgroup_elems, relation_elems):
    """Present (subgroup of prod Z/o_i) / (subgroup generated by relations).

    Returns (new_orders, gen_lifts, solve) where gen_lifts are ambient
    coordinate tuples generating the quotient and solve maps an ambient
    element of the subgroup to its quotient coordinates.
    """
    k = len(orders)
    basis = RowBasis(k)
    for x in subgroup_elems:
        basis.add(list(x))
    for i, o in enumerate(orders):
        basis.add([o if j == i else 0 for j in range(k)])
    hb = basis.rows  # full rank k
    assert len(hb) == k
    rel_rows = []
    for x in relation_elems:
        c = basis.solve(list(x))
        assert c is not None, "relations must lie in the subgroup"
        rel_rows.append(c)
    for i, o in enumerate(orders):
        c = basis.solve([o if j == i else 0 for j in range(k)])
        rel_rows.append(c)
    # quotient of coordinate space Z^k by the row span of rel_rows:
    # with columns ct = transpose(rel_rows), x mod colspan(ct) ~ (u @ x) mod d
    ct = [[row[i] for row in rel_rows] for i in range(k)]
    u, d, _ = smith_normal_form(ct)
    dd = [d[i][i] for i in range(k)]
    assert all(x > 0 for x in dd), "quotient must be finite"
    uinv = invert_fraction_matrix(u)
    kept = [i for i in range(k) if dd[i] > 1]
    gen_lifts = []
    for i in kept:
        col = [uinv[r][i] for r in range(k)]
        assert all(c.denominator == 1 for c in col)
        lift = [0] * k
        for r in range(k):
            c = int(col[r])
            if c:
                for j in range(k):
                    lift[j] += c * hb[r][j]
        gen_lifts.append(tuple(l % o for l, o in zip(lift, orders)))

    def solve(x):
        c = basis.solve(list(x))
        if c is None:
            return None
        full = [sum(u[i][j] * c[j] for j in range(k)) % dd[i] for i in range(k)]
        return tuple(full[i] for i in kept)

    return tuple(dd[i] for i in kept), gen_lifts, solve


def perp_quotient(a_prime, iso):
    """The finite quadratic module A = I^perp / I, with the projection map.

    Returns (a, proj) where proj maps elements of I^perp (coordinate tuples
    in a_prime) to elements of a.  |A| = |A'|/|I|^2 and sigma is preserved.
    """
    if iso.parent != a_prime:
        raise ModuleMismatchError("subgroup does not live in the given module")
    perp = iso.perp()
    new_orders, gen_lifts, solve = _abelian_quotient(
        a_prime.orders, perp, iso.closure)
    k = len(new_orders)
    q_gen = tuple(a_prime.q(g) for g in gen_lifts)
    gram = tuple(tuple(a_prime.b(gen_lifts[i], gen_lifts[j]) for j in range(k))
                 for i in range(k))
    a = make_module(new_orders, q_gen, gram,
                    source_signature=a_prime.source_signature)
    assert a.order() * len(iso) ** 2 == a_prime.order()

    def proj(x):
        c = solve(x)
        if c is None:
            raise ModuleMismatchError(f"{x} is not in I^perp")
        return c

    return a, proj


# --- direct sums and glue-graph helpers ---------------------------------------

def direct_sum(a1, a2):
    """Orthogonal direct sum; elements are concatenated coordinate tuples."""
    k1, k2 = len(a1.orders), len(a2.orders)
    gram = []
    for i in range(k1):
        gram.append(tuple(a1.gram[i]) + (Fraction(0),) * k2)
    for i in range(k2):
        gram.append((Fraction(0),) * k1 + tuple(a2.gram[i]))
    sig = None
    if a1.source_signature is not None and a2.source_signature is not None:
        sig = (a1.source_signature[0] + a2.source_signature[0],
               a1.source_signature[1] + a2.source_signature[1])
    return FqModule(
        orders=a1.orders + a2.orders,
        q_gen=a1.q_gen + a2.q_gen,
        gram=tuple(gram),
        source_signature=sig,
        parts=(a1, a2),
    )


def split_element(a_sum, x):
    """Split an element of a two-part direct sum into its components."""
    a1, a2 = a_sum.parts
    k1 = len(a1.orders)
    return tuple(x[:k1]), tuple(x[k1:])


def join_element(a_sum, x1, x2):
    return tuple(x1) + tuple(x2)


def graph_of_isotropic(iso):
    """Extract (G_1, G_2, iota) from an isotropic I in a two-part direct sum.

    I must be the graph of a bijection between its projections; a failure of
    injectivity signals invalid glue data.
    """
    a = iso.parent
    if a.parts is None or len(a.parts) != 2:
        raise ModuleMismatchError("parent is not a two-part direct sum")
    pairs = [split_element(a, x) for x in iso.closure]
    g1 = sorted({p[0] for p in pairs})
    g2 = sorted({p[1] for p in pairs})
    if len(g1) != len(pairs) or len(g2) != len(pairs):
        raise DegenerateError("projections of the glue group are not injective")
    iota = {p[0]: p[1] for p in pairs}
    return g1, g2, iota
