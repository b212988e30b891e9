"""The Weil representation of Mp2(Z) on the group algebra of a finite
quadratic module, as explicit unitary complex matrices.

A group element is always handled as a word in the generators S and T
(with integer exponents); the word itself fixes the metaplectic lift, and
rho of a word is the product of the generator matrices in word order.
Rows and columns are indexed by the canonical element enumeration of the
module.  Matrices are complex double precision; everything downstream of
them is tolerance-checked at 1e-10 rather than exact.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError

S_MAT = ((0, -1), (1, 0))
T_MAT = ((1, 1), (0, 1))
ID_MAT = ((1, 0), (0, 1))


def _mat_mul2(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2))
                 for i in range(2))


def _mat_pow2(m, n):
    if n < 0:
        (a, b), (c, d) = m
        return _mat_pow2(((d, -b), (-c, a)), -n)
    out = ID_MAT
    while n:
        if n & 1:
            out = _mat_mul2(out, m)
        m = _mat_mul2(m, m)
        n >>= 1
    return out


@dataclass(frozen=True)
class GroupWord:
    """A word over {S, T^(+-1)}; the product of the letter matrices is the
    underlying SL2(Z) element, and the word is the chosen metaplectic lift."""

    letters: tuple  # pairs (gen, exponent), gen in {"S", "T"}, exponent != 0

    def __post_init__(self):
        for gen, exp in self.letters:
            assert gen in ("S", "T") and exp != 0

    @property
    def matrix(self):
        out = ID_MAT
        for gen, exp in self.letters:
            base = S_MAT if gen == "S" else T_MAT
            out = _mat_mul2(out, _mat_pow2(base, exp))
        return out

    def __mul__(self, other):
        return GroupWord(_merge_letters(self.letters + other.letters))

    def inverse(self):
        return GroupWord(_merge_letters(
            tuple((g, -e) for g, e in reversed(self.letters))))

    def __str__(self):
        if not self.letters:
            return "1"
        return "*".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)


def _merge_letters(letters):
    out = []
    for gen, exp in letters:
        if out and out[-1][0] == gen:
            s = out[-1][1] + exp
            if s:
                out[-1] = (gen, s)
            else:
                out.pop()
        elif exp:
            out.append((gen, exp))
    return tuple(out)


def identity_word():
    return GroupWord(())


def word_decompose(m):
    """A word in S, T^(+-1) evaluating to the SL2(Z) matrix m.

    Euclidean reduction of the bottom-left entry; word length is
    O(log max |entry|).
    """
    (a, b), (c, d) = m
    if a * d - b * c != 1:
        raise InputError(f"matrix {m} does not have determinant 1")
    applied = []  # letters multiplied onto the left of m, in order
    cur = ((a, b), (c, d))
    while cur[1][0] != 0:
        (a, b), (c, d) = cur
        q = a // c
        if q:
            cur = ((a - q * c, b - q * d), (c, d))
            applied.append(("T", -q))
        if cur[1][0]:
            (a, b), (c, d) = cur
            cur = ((-c, -d), (a, b))
            applied.append(("S", 1))
    (a, b), _ = cur
    rem = []
    if a == 1:
        if b:
            rem.append(("T", b))
    else:  # a == -1: cur = -T^{-b} = S^2 T^{-b}
        rem.append(("S", 2))
        if b:
            rem.append(("T", -b))
    # applied letters act on the left in order: cur = wN * ... * w1 * m,
    # hence m = w1^{-1} * ... * wN^{-1} * cur
    inv = [(g, -e) for g, e in applied]
    word = GroupWord(_merge_letters(tuple(inv + rem)))
    assert word.matrix == ((m[0][0], m[0][1]), (m[1][0], m[1][1]))
    return word


def _e(x):
    return np.exp(2j * np.pi * float(x))


@dataclass(frozen=True)
class WeilMatrix:
    """rho_A of one group element, on the canonical element basis."""

    module: object
    entries: np.ndarray

    def is_unitary(self, tol=1e-10):
        n = self.entries.shape[0]
        return np.max(np.abs(self.entries @ self.entries.conj().T - np.eye(n))) < tol

    def inv(self):
        return WeilMatrix(self.module, self.entries.conj().T)

    def __matmul__(self, other):
        assert self.module == other.module
        return WeilMatrix(self.module, self.entries @ other.entries)


def rho_T(a):
    """rho(T): diagonal with entries e(q(lambda))."""
    diag = np.array([_e(a.q(x)) for x in a.elements()])
    return WeilMatrix(a, np.diag(diag))


def rho_S(a):
    """rho(S): (e(-sigma/8)/sqrt|A|) * (e(-(lambda, mu)))_{mu, lambda}."""
    from .fqm import signature_mod8
    elems = list(a.elements())
    n = len(elems)
    sigma = signature_mod8(a)
    scale = _e(Fraction(-sigma, 8)) / np.sqrt(n)
    ent = np.empty((n, n), dtype=complex)
    for j, lam in enumerate(elems):
        for i, mu in enumerate(elems):
            ent[i, j] = _e(-a.b(lam, mu))
    return WeilMatrix(a, scale * ent)


def rho(a, word):
    """rho_A of a group word: the product of generator matrices in word order."""
    n = a.order()
    out = np.eye(n, dtype=complex)
    q_list = [a.q(x) for x in a.elements()]
    s_mat = None
    for gen, exp in word.letters:
        if gen == "T":
            diag = np.array([_e(exp * q) for q in q_list])
            out = out * diag[np.newaxis, :]  # right-multiply by the diagonal
        else:
            if s_mat is None:
                s_mat = rho_S(a).entries
            base = s_mat if exp > 0 else s_mat.conj().T
            for _ in range(abs(exp)):
                out = out @ base
    return WeilMatrix(a, out)
