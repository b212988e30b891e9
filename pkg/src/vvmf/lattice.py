"""Even lattices, dual lattices, discriminant groups, sublattices,
orthogonal complements, and glued-embedding data.

Lattices are always presented by an integer Gram matrix in a fixed basis;
sublattices by integer coordinate rows.  All arithmetic is exact.
"""

import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import fqm
from ._intlinalg import (det_int, inertia, invert_fraction_matrix, kernel_basis,
                         mat_mul, smith_normal_form, snf_diagonal, transpose)
from .errors import DegenerateError, InputError, SaturationError, WittConditionError


@dataclass(frozen=True)
class EvenLattice:
    """Nondegenerate even lattice given by its Gram matrix."""

    gram: tuple

    def __post_init__(self):
        g = self.gram
        n = len(g)
        for i in range(n):
            assert len(g[i]) == n, "Gram matrix must be square"
            assert g[i][i] % 2 == 0, "diagonal must be even"
            for j in range(n):
                assert g[i][j] == g[j][i], "Gram matrix must be symmetric"
        if n and det_int([list(r) for r in g]) == 0:
            raise DegenerateError("Gram matrix is degenerate")

    @property
    def rank(self):
        return len(self.gram)

    @cached_property
    def signature(self):
        pos, neg, zero = inertia([list(r) for r in self.gram])
        assert zero == 0
        return (pos, neg)

    @cached_property
    def det(self):
        return det_int([list(r) for r in self.gram]) if self.gram else 1

    @cached_property
    def dual_gram(self):
        """Inverse Gram matrix; Gram matrix of the dual basis."""
        return invert_fraction_matrix([list(r) for r in self.gram]) if self.gram else []

    def is_positive_definite(self):
        return self.signature == (self.rank, 0)

    def is_negative_definite(self):
        return self.signature == (0, self.rank)

    def norm(self, v):
        """(v, v) for a rational coordinate vector v."""
        n = self.rank
        return sum(Fraction(v[i]) * self.gram[i][j] * Fraction(v[j])
                   for i in range(n) for j in range(n))

    def pairing(self, v, w):
        n = self.rank
        return sum(Fraction(v[i]) * self.gram[i][j] * Fraction(w[j])
                   for i in range(n) for j in range(n))

    def qform(self, v):
        """q(v) = (v, v)/2."""
        return self.norm(v) / 2

    def scaled(self, c):
        """The lattice with form multiplied by the integer c."""
        return EvenLattice(tuple(tuple(c * x for x in row) for row in self.gram))

    @cached_property
    def disc(self):
        return DiscriminantData(self)

    def __repr__(self):
        return f"EvenLattice(rank={self.rank}, signature={self.signature}, det={self.det})"


class DiscriminantData:
    """A_L = L^vee/L presented in Smith normal form cyclic coordinates,
    together with the projection L^vee -> A_L and canonical lifts back.

    Vectors are given in rational coordinates with respect to the lattice
    basis throughout.
    """

    def __init__(self, lat):
        self.lattice = lat
        g = [list(r) for r in lat.gram]
        n = lat.rank
        u, d, _ = smith_normal_form(g)
        self._u = u
        self._uinv = invert_fraction_matrix(u) if n else []
        self._orders_full = [d[i][i] for i in range(n)]
        assert all(x > 0 for x in self._orders_full)
        self._kept = [i for i in range(n) if self._orders_full[i] > 1]
        gen_lifts = [self.lift_from_full(i) for i in self._kept]
        k = len(self._kept)
        q_gen = [lat.qform(v) % 1 for v in gen_lifts]
        gram = [[lat.pairing(gen_lifts[i], gen_lifts[j]) % 1 for j in range(k)]
                for i in range(k)]
        self.module = fqm.make_module(
            [self._orders_full[i] for i in self._kept], q_gen, gram,
            source_signature=lat.signature)
        assert self.module.order() == abs(lat.det)
        self._gen_lifts = gen_lifts

    def lift_from_full(self, i):
        """Rational coordinates of the i-th SNF generator of L^vee/L."""
        n = self.lattice.rank
        x = [self._uinv[r][i] for r in range(n)]
        assert all(c.denominator == 1 for c in x)
        dg = self.lattice.dual_gram
        return tuple(sum(dg[r][j] * int(x[j]) for j in range(n)) for r in range(n))

    def to_class(self, v):
        """Class of v in A_L; v must lie in the dual lattice."""
        n = self.lattice.rank
        x = [sum(Fraction(v[i]) * self.lattice.gram[i][j] for i in range(n))
             for j in range(n)]
        if any(c.denominator != 1 for c in x):
            raise InputError(f"vector {v} is not in the dual lattice")
        x = [int(c) for c in x]
        full = [sum(self._u[i][j] * x[j] for j in range(n)) % self._orders_full[i]
                for i in range(n)]
        return tuple(full[i] for i in self._kept)

    def lift(self, elem):
        """A canonical rational representative of a class in A_L."""
        n = self.lattice.rank
        out = [Fraction(0)] * n
        for a, v in zip(elem, self._gen_lifts):
            if a:
                for r in range(n):
                    out[r] += a * v[r]
        return tuple(out)

    def in_dual(self, v):
        n = self.lattice.rank
        return all((sum(Fraction(v[i]) * self.lattice.gram[i][j]
                        for i in range(n))).denominator == 1 for j in range(n))


def discriminant_module(lat):
    """The discriminant form of an even lattice, with its projection map."""
    return lat.disc


@dataclass(frozen=True)
class Sublattice:
    """Sublattice given by integer coordinate rows in the ambient basis."""

    ambient: EvenLattice
    basis: tuple

    def __post_init__(self):
        b = [list(r) for r in self.basis]
        if b:
            assert all(len(r) == self.ambient.rank for r in b)
            nonzero = sum(1 for x in snf_diagonal(b) if x != 0)
            assert nonzero == len(b), "basis rows must be linearly independent"
        for i, row in enumerate(self.gram):
            assert row[i] % 2 == 0  # guaranteed for rows in an even lattice

    @property
    def rank(self):
        return len(self.basis)

    @cached_property
    def gram(self):
        """Induced Gram matrix basis * G * basis^T."""
        b = [list(r) for r in self.basis]
        g = [list(r) for r in self.ambient.gram]
        m = mat_mul(mat_mul(b, g), transpose(b))
        return tuple(tuple(r) for r in m)

    def as_lattice(self):
        return EvenLattice(self.gram)

    def is_primitive(self):
        """Primitive iff all elementary divisors of the basis matrix are 1."""
        divisors = snf_diagonal([list(r) for r in self.basis])
        return all(x == 1 for x in divisors)

    def saturation(self):
        """The primitive closure: rational span intersected with the lattice."""
        b = [list(r) for r in self.basis]
        w = kernel_basis(b)               # euclidean kernel of the rows
        sat = kernel_basis(w) if w else [[int(i == j) for j in range(self.ambient.rank)]
                                         for i in range(self.ambient.rank)]
        return Sublattice(self.ambient, tuple(tuple(r) for r in sat))

    def to_ambient(self, v):
        """Ambient rational coordinates of a (rational) coordinate row v."""
        n = self.ambient.rank
        return tuple(sum(Fraction(v[i]) * self.basis[i][j] for i in range(len(self.basis)))
                     for j in range(n))


def orthogonal_complement(lat, sub):
    """The saturated sublattice pairing to zero with sub."""
    b = [list(r) for r in sub.basis]
    if not b:
        eye = tuple(tuple(int(i == j) for j in range(lat.rank))
                    for i in range(lat.rank))
        return Sublattice(lat, eye)
    g = [list(r) for r in lat.gram]
    bg = mat_mul(b, g)
    if sum(1 for x in snf_diagonal(bg) if x != 0) != len(b):
        raise DegenerateError("sublattice is degenerate")
    comp = kernel_basis(bg)
    assert len(comp) == lat.rank - len(b)
    return Sublattice(lat, tuple(tuple(r) for r in comp))


@dataclass
class EmbeddingData:
    """A primitive negative-definite K(-1) in L with all derived glue data.

    L'= M + K(-1) has finite index in L; I = L/L' sits inside
    A_M + A_{K(-1)} as the graph of the anti-isometry-corrected bijection
    iota: G_M -> G_K.  up_table realizes the projection I^perp -> A_L on
    discriminant classes.
    """

    L: EvenLattice
    K_neg: Sublattice
    M: Sublattice
    L_prime: EvenLattice
    Lp_basis: tuple
    index: int
    A_L: DiscriminantData
    A_M: DiscriminantData
    A_K: DiscriminantData          # of K, the positive-definite partner
    A_Kneg_module: fqm.FqModule    # same coordinates as A_K, negated form
    A_Lp_module: fqm.FqModule      # direct sum A_M + A_{K(-1)}
    glue: fqm.IsotropicSubgroup
    G_M: list
    G_K: list
    iota: dict
    up_table: dict                 # element of I^perp -> element of A_L

    @property
    def K(self):
        """K as an abstract positive-definite lattice."""
        return EvenLattice(tuple(tuple(-x for x in row) for row in self.K_neg.gram))

    def down_fibers(self):
        """p^{-1}(lambda) for each class lambda of A_L."""
        fibers = {}
        for mu, lam in self.up_table.items():
            fibers.setdefault(lam, []).append(mu)
        return fibers

    def kneg_class(self, v):
        """Class in A_{K(-1)} (= A_K coordinates) of a rational K-coordinate row."""
        return self.A_K.to_class(v)

    def l_class_of_pair(self, mu, lam):
        """Element of A_{L'} from components mu in A_M, lam in A_{K(-1)}."""
        return fqm.join_element(self.A_Lp_module, mu, lam)


def build_embedding(lat, k_basis, assert_witt=False):
    """Assemble EmbeddingData for a primitive negative-definite K(-1) in L."""
    k_basis = tuple(tuple(int(x) for x in row) for row in k_basis)
    k_sub = Sublattice(lat, k_basis)
    pos, neg, zero = inertia([list(r) for r in k_sub.gram])
    if zero or pos:
        raise InputError("K(-1) must be negative definite")
    if not k_sub.is_primitive():
        raise SaturationError(
            "K basis does not span a primitive sublattice (saturation mismatch)")
    m_sub = orthogonal_complement(lat, k_sub)
    rk_m = m_sub.rank
    if rk_m <= 4:
        if not assert_witt:
            raise WittConditionError(
                f"rank(M) = {rk_m} <= 4: Witt-index hypothesis cannot be checked; "
                "pass assert_witt=True (CLI: --assert-witt) to proceed")
        warnings.warn("rank(M) <= 4: Witt-index condition is user-asserted",
                      stacklevel=2)

    lp_rows = [list(r) for r in m_sub.basis] + [list(r) for r in k_basis]
    index = abs(det_int(lp_rows))
    assert index > 0
    m_lat = m_sub.as_lattice()
    k_lat = EvenLattice(tuple(tuple(-x for x in row) for row in k_sub.gram))
    block = []
    rm, rk = m_sub.rank, k_sub.rank
    for i in range(rm):
        block.append(tuple(m_lat.gram[i]) + (0,) * rk)
    for i in range(rk):
        block.append((0,) * rm + tuple(k_sub.gram[i]))
    l_prime = EvenLattice(tuple(block))

    a_l = lat.disc
    a_m = m_lat.disc
    a_k = k_lat.disc
    a_kneg = fqm.negated(a_k.module)
    a_lp = fqm.direct_sum(a_m.module, a_kneg)
    assert a_lp.order() == a_l.module.order() * index * index

    # glue I = L/L': classes of the standard basis vectors of L in A_{L'}
    lp_inv = invert_fraction_matrix(lp_rows)
    gens = []
    n = lat.rank
    for i in range(n):
        y = lp_inv[i]                 # row i: L'-coordinates of e_i
        y_m, y_k = y[:rm], y[rm:]
        c_m = a_m.to_class(y_m)
        c_k = a_k.to_class(y_k)
        gens.append(fqm.join_element(a_lp, c_m, c_k))
    glue = fqm.IsotropicSubgroup(a_lp, tuple(gens))
    assert len(glue) == index
    g_m, g_k, iota = fqm.graph_of_isotropic(glue)
    for mu in g_m:
        assert (a_m.module.q(mu) + a_kneg.q(iota[mu])) % 1 == 0

    up_table = {}
    for mu in glue.perp():
        c_m, c_k = fqm.split_element(a_lp, mu)
        v_m = m_sub.to_ambient(a_m.lift(c_m))
        v_k = k_sub.to_ambient(a_k.lift(c_k))
        v = tuple(a + b for a, b in zip(v_m, v_k))
        up_table[mu] = a_l.to_class(v)

    return EmbeddingData(
        L=lat, K_neg=k_sub, M=m_sub, L_prime=l_prime,
        Lp_basis=tuple(tuple(r) for r in lp_rows), index=index,
        A_L=a_l, A_M=a_m, A_K=a_k, A_Kneg_module=a_kneg, A_Lp_module=a_lp,
        glue=glue, G_M=g_m, G_K=g_k, iota=iota, up_table=up_table)


# --- named lattices and definition files -------------------------------------

def _cartan(n, edges):
    g = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in edges:
        g[a - 1][b - 1] = g[b - 1][a - 1] = -1
    return EvenLattice(tuple(tuple(r) for r in g))


def lattice_U():
    return EvenLattice(((0, 1), (1, 0)))


def lattice_A1():
    return EvenLattice(((2,),))


def lattice_E8():
    # nodes 1-3-4-5-6-7-8 in a chain, node 2 attached to node 4
    return _cartan(8, [(1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7), (7, 8)])


def lattice_E7():
    return _cartan(7, [(1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7)])


def lattice_sum(lats):
    """Orthogonal direct sum with block-diagonal Gram."""
    rows = []
    total = sum(l.rank for l in lats)
    offset = 0
    for l in lats:
        for r in l.gram:
            rows.append((0,) * offset + tuple(r) + (0,) * (total - offset - l.rank))
        offset += l.rank
    return EvenLattice(tuple(rows))


def lattice_II_2_26():
    e8m = lattice_E8().scaled(-1)
    return lattice_sum([lattice_U(), lattice_U(), e8m, e8m, e8m])


BUILTINS = {
    "U": lattice_U,
    "A1": lattice_A1,
    "E7": lattice_E7,
    "E8": lattice_E8,
    "II_2_26": lattice_II_2_26,
}


def parse_lattice_def(spec, env=None):
    """Resolve a lattice definition: a builtin name, a previously defined
    name, {"gram": rows}, {"scale": [def, c]}, or {"sum": [defs]}."""
    env = env or {}
    if isinstance(spec, str):
        if spec in env:
            return env[spec]
        if spec in BUILTINS:
            return BUILTINS[spec]()
        raise InputError(f"unknown lattice name {spec!r}")
    if isinstance(spec, dict):
        if "gram" in spec:
            return EvenLattice(tuple(tuple(int(x) for x in row) for row in spec["gram"]))
        if "scale" in spec:
            base, c = spec["scale"]
            return parse_lattice_def(base, env).scaled(int(c))
        if "sum" in spec:
            return lattice_sum([parse_lattice_def(s, env) for s in spec["sum"]])
    raise InputError(f"cannot parse lattice definition {spec!r}")


def load_lattice_file(path):
    """Read a JSON lattice definition file.

    Returns (lattices, sublattices): named EvenLattice objects and named
    integer row-matrices.
    """
    with open(path) as f:
        data = json.load(f)
    entries = data if isinstance(data, list) else [data]
    lats, subs = {}, {}
    for entry in entries:
        name = entry.get("name")
        if name is None:
            raise InputError("lattice entry without a name")
        if "gram" in entry or "scale" in entry or "sum" in entry:
            lats[name] = parse_lattice_def(
                {k: entry[k] for k in ("gram", "scale", "sum") if k in entry}, lats)
        else:
            raise InputError(f"lattice entry {name!r} has no definition")
        for sub_name, rows in (entry.get("sublattices") or {}).items():
            subs[(name, sub_name)] = tuple(tuple(int(x) for x in r) for r in rows)
    return lats, subs
