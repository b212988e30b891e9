import random
from fractions import Fraction

import pytest

import vvmf.fqm as fqm
from vvmf.errors import InputError
from vvmf.lattice import EvenLattice, lattice_A1, lattice_E8, lattice_sum
from vvmf.theta import (ShortVectorQuery, short_vectors, short_vectors_box,
                        theta_coset, theta_coset_rep, theta_vv)

# theta_{E8} coefficients up to exponent 4, derived offline by brute-force
# box enumeration of the even-coordinate-sum model and cross-checked against
# 240*sigma_3(n)
E8_THETA = [1, 240, 2160, 6720, 17520]


def test_short_vectors_a1():
    q = ShortVectorQuery(lattice_A1(), (0,), 8)
    vs = short_vectors(q)
    assert [(v[0], nn) for v, nn in vs] == [
        (-2, 8), (-1, 2), (0, 0), (1, 2), (2, 8)]


def test_short_vectors_a1_coset():
    q = ShortVectorQuery(lattice_A1(), (Fraction(1, 2),), Fraction(9, 2))
    vs = short_vectors(q)
    assert [(v[0], nn) for v, nn in vs] == [
        (Fraction(-3, 2), Fraction(9, 2)), (Fraction(-1, 2), Fraction(1, 2)),
        (Fraction(1, 2), Fraction(1, 2)), (Fraction(3, 2), Fraction(9, 2))]


def test_short_vectors_e8_roots():
    q = ShortVectorQuery(lattice_E8(), (0,) * 8, 2)
    vs = short_vectors(q)
    assert len(vs) == 241  # 0 and the 240 roots


def test_rejects_indefinite():
    from vvmf.lattice import lattice_U
    with pytest.raises(InputError):
        ShortVectorQuery(lattice_U(), (0, 0), 4)
    with pytest.raises(InputError):
        ShortVectorQuery(lattice_A1(), (Fraction(1, 3),), 4)


def test_theta_a1():
    th = theta_coset(lattice_A1(), (0,), 9)
    assert th[0] == 1 and th[1] == 2 and th[4] == 2 and th[9] == 2
    assert th[2] == 0 and th[3] == 0
    odd = theta_coset(lattice_A1(), (1,), 3)
    assert odd[Fraction(1, 4)] == 2 and odd[Fraction(9, 4)] == 2
    assert odd[Fraction(5, 4)] == 0


def test_theta_e8():
    th = theta_coset(lattice_E8(), (), 4)
    assert [th[n] for n in range(5)] == E8_THETA


def test_theta_vv():
    f = theta_vv(lattice_A1(), 3)
    assert f.weight == Fraction(1, 2)
    assert f.coefficient((0,), 0) == 1
    assert f.coefficient((0,), 1) == 2
    assert f.coefficient((1,), Fraction(1, 4)) == 2
    assert f.floor == 0
    e8 = theta_vv(lattice_E8(), 3)
    assert e8.weight == 4
    assert [e8.coefficient((), n) for n in range(4)] == E8_THETA[:4]
    # rank-0 lattice: constant 1 over the trivial module
    z = theta_vv(EvenLattice(()), 5)
    assert z.weight == 0 and z.coefficient((), 0) == 1


def random_posdef_even(rng, rank, max_det=60):
    while True:
        b = [[rng.randint(-2, 2) for _ in range(rank)] for _ in range(rank)]
        g = [[2 * sum(b[i][k] * b[j][k] for k in range(rank)) for j in range(rank)]
             for i in range(rank)]
        try:
            lat = EvenLattice(tuple(tuple(r) for r in g))
        except Exception:
            continue
        if lat.is_positive_definite() and abs(lat.det) <= max_det:
            return lat


def test_fp_matches_box_rank_le_4():
    rng = random.Random(77)
    lattices = [lattice_A1(),
                lattice_sum([lattice_A1(), lattice_A1()]),
                EvenLattice(((2, 1), (1, 2,))),
                EvenLattice(((2, 0), (0, 4))),
                random_posdef_even(rng, 3),
                random_posdef_even(rng, 4)]
    for lat in lattices:
        disc = lat.disc
        for lam in disc.module.elements():
            rep = disc.lift(lam)
            a = short_vectors(ShortVectorQuery(lat, rep, 20))
            b = short_vectors_box(lat, rep, 20)
            assert a == b


def test_coset_minus_symmetry_and_parity():
    # c_lambda(n) = c_{-lambda}(n); and for 2*lambda = 0, n > 0 counts are even
    lat = EvenLattice(((2, 0), (0, 6)))
    disc = lat.disc
    for lam in disc.module.elements():
        th1 = theta_coset(lat, lam, 5)
        th2 = theta_coset(lat, disc.module.neg(lam), 5)
        assert th1.coeffs == th2.coeffs
        if disc.module.add(lam, lam) == disc.module.zero():
            for e, c in th1.coeffs.items():
                if e > 0:
                    assert c % 2 == 0


def test_gauss_milgram_vs_rank():
    # sigma(A_K) = rk(K) mod 8 for positive-definite K
    for lat in [lattice_A1(), lattice_E8(), EvenLattice(((2, 1), (1, 2)))]:
        assert fqm.signature_mod8(lat.disc.module) == lat.rank % 8


def test_theta_coset_rep_matches_theta_coset():
    lat = lattice_A1()
    assert theta_coset_rep(lat, (Fraction(1, 2),), 3).coeffs == \
        theta_coset(lat, (1,), 3).coeffs
