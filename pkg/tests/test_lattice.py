import json
import random
from fractions import Fraction

import pytest

import vvmf.fqm as fqm
from vvmf.errors import InputError, SaturationError, WittConditionError
from vvmf.lattice import (EvenLattice, Sublattice, build_embedding,
                          discriminant_module, lattice_A1, lattice_E7,
                          lattice_E8, lattice_II_2_26, lattice_sum, lattice_U,
                          load_lattice_file, orthogonal_complement,
                          parse_lattice_def)


def test_named_lattices():
    assert lattice_U().signature == (1, 1)
    assert lattice_U().det == -1
    assert lattice_E8().det == 1
    assert lattice_E8().signature == (8, 0)
    assert lattice_E7().det == 2
    assert lattice_A1().gram == ((2,),)
    big = lattice_II_2_26()
    assert big.rank == 28
    assert big.signature == (2, 26)
    assert abs(big.det) == 1


def test_even_symmetric_enforced():
    with pytest.raises(AssertionError):
        EvenLattice(((1,),))            # odd diagonal
    with pytest.raises(AssertionError):
        EvenLattice(((2, 1), (0, 2)))   # not symmetric


def test_discriminant_module_e8_trivial():
    d = discriminant_module(lattice_E8())
    assert d.module.order() == 1


def test_discriminant_module_a1():
    d = discriminant_module(lattice_A1())
    assert d.module.orders == (2,)
    assert d.module.q((1,)) == Fraction(1, 4)
    # generator lift is l/2
    assert d.lift((1,)) == (Fraction(1, 2),)
    assert d.to_class((Fraction(1, 2),)) == (1,)
    assert d.to_class((1,)) == (0,)
    with pytest.raises(InputError):
        d.to_class((Fraction(1, 3),))


def test_discriminant_module_a1_neg():
    d = discriminant_module(lattice_A1().scaled(-1))
    assert d.module.q((1,)) == Fraction(3, 4)


def test_projection_and_q_consistency_random():
    rng = random.Random(9)
    for _ in range(12):
        n = rng.randint(1, 4)
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m[i][j] = m[j][i] = (2 * rng.randint(-2, 2) if i == j
                                     else rng.randint(-2, 2))
        try:
            lat = EvenLattice(tuple(tuple(r) for r in m))
        except Exception:
            continue
        if abs(lat.det) > 50:
            continue
        d = lat.disc
        assert d.module.order() == abs(lat.det)
        for x in d.module.elements():
            v = d.lift(x)
            assert d.to_class(v) == x
            assert d.module.q(x) == lat.qform(v) % 1


def test_orthogonal_complement_split():
    lat = lattice_sum([lattice_U(), lattice_A1().scaled(-1)])
    s = Sublattice(lat, ((0, 0, 1),))
    comp = orthogonal_complement(lat, s)
    assert comp.rank == 2
    assert comp.as_lattice().det == -1  # a copy of U


def test_orthogonal_complement_e8_factor():
    lat = lattice_II_2_26()
    rows = tuple(tuple(int(j == 4 + i) for j in range(28)) for i in range(8))
    comp = orthogonal_complement(lat, Sublattice(lat, rows))
    assert comp.rank == 20
    assert abs(comp.as_lattice().det) == 1


def test_orthogonal_complement_root_in_e8():
    lat = lattice_E8().scaled(-1)
    s = Sublattice(lat, ((1, 0, 0, 0, 0, 0, 0, 0),))
    comp = orthogonal_complement(lat, s)
    assert comp.rank == 7
    assert abs(comp.as_lattice().det) == 2  # E7(-1) up to sign


def same_row_lattice(rows_a, rows_b, n):
    from vvmf._intlinalg import RowBasis
    rb_a = RowBasis(n)
    for r in rows_a:
        rb_a.add(list(r))
    rb_b = RowBasis(n)
    for r in rows_b:
        rb_b.add(list(r))
    return (all(rb_a.solve(list(r)) is not None for r in rows_b)
            and all(rb_b.solve(list(r)) is not None for r in rows_a))


def test_complement_involutive_on_saturations():
    rng = random.Random(31)
    lat = lattice_sum([lattice_U(), lattice_E8().scaled(-1)])
    checked = 0
    for _ in range(12):
        rows = [[rng.randint(-2, 2) for _ in range(10)] for _ in range(2)]
        try:
            s = Sublattice(lat, tuple(tuple(r) for r in rows))
            comp = orthogonal_complement(lat, s)
            comp2 = orthogonal_complement(lat, comp)
        except Exception:
            continue
        assert same_row_lattice(comp2.basis, s.saturation().basis, 10)
        checked += 1
    assert checked >= 4


def test_primitivity():
    lat = lattice_sum([lattice_U(), lattice_A1().scaled(-1)])
    assert Sublattice(lat, ((0, 0, 1),)).is_primitive()
    assert not Sublattice(lat, ((0, 0, 2),)).is_primitive()


def test_build_embedding_split_e8():
    lat = lattice_II_2_26()
    rows = tuple(tuple(int(j == 4 + i) for j in range(28)) for i in range(8))
    emb = build_embedding(lat, rows)
    assert emb.index == 1
    assert len(emb.glue) == 1
    assert emb.A_Lp_module.order() == 1
    assert emb.M.rank == 20
    assert emb.K.is_positive_definite()
    assert emb.K.det == 1


def test_build_embedding_glued_root():
    lat = lattice_II_2_26()
    emb = build_embedding(lat, (tuple(int(j == 4) for j in range(28)),))
    assert emb.index == 2
    assert emb.A_M.module.orders == (2,)
    assert emb.A_K.module.orders == (2,)
    assert emb.G_M == [(0,), (1,)]
    assert emb.iota[(1,)] == (1,)
    # iota is an isometry after the (-1)-scaling of the K side
    mu = (1,)
    assert (emb.A_M.module.q(mu) + emb.A_Kneg_module.q(emb.iota[mu])) % 1 == 0
    assert emb.A_Lp_module.order() == 4 == emb.A_L.module.order() * emb.index ** 2
    # projection table: I^perp = I here, both elements mapping to 0 in A_L
    assert set(emb.up_table) == set(emb.glue.closure)
    assert all(v == () for v in emb.up_table.values())


def test_build_embedding_rejects_non_primitive():
    lat = lattice_sum([lattice_U(), lattice_U(), lattice_A1().scaled(-1)])
    with pytest.raises(SaturationError):
        build_embedding(lat, ((0, 0, 0, 0, 2),))


def test_build_embedding_rejects_wrong_sign():
    lat = lattice_sum([lattice_U(), lattice_U(), lattice_A1()])
    with pytest.raises(InputError):
        build_embedding(lat, ((0, 0, 0, 0, 1),))


def test_build_embedding_witt_guard():
    lat = lattice_sum([lattice_U(), lattice_U(), lattice_A1().scaled(-1)])
    with pytest.raises(WittConditionError):
        build_embedding(lat, ((0, 0, 0, 0, 1),))
    with pytest.warns(UserWarning):
        emb = build_embedding(lat, ((0, 0, 0, 0, 1),), assert_witt=True)
    assert emb.M.rank == 4


def test_embedding_invariant_orders():
    # |A_{L'}| = |A_L| * index^2 for a glued rank-2 example
    lat = lattice_sum([lattice_U(), lattice_U(), lattice_E8().scaled(-1)])
    rows = (tuple(int(j == 4) for j in range(12)),
            tuple(int(j == 5) for j in range(12)))
    emb = build_embedding(lat, rows)
    assert emb.A_Lp_module.order() == emb.A_L.module.order() * emb.index ** 2
    for mu in emb.G_M:
        assert (emb.A_M.module.q(mu) + emb.A_Kneg_module.q(emb.iota[mu])) % 1 == 0


def test_parse_lattice_def():
    env = {}
    assert parse_lattice_def("E8", env).det == 1
    l = parse_lattice_def({"sum": ["U", {"scale": ["A1", -1]}]}, env)
    assert l.signature == (1, 2)
    with pytest.raises(InputError):
        parse_lattice_def("nope", env)


def test_load_lattice_file(tmp_path):
    path = tmp_path / "lat.json"
    path.write_text(json.dumps([
        {"name": "L", "sum": ["U", "U", {"scale": ["E8", -1]}],
         "sublattices": {"K": [[0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0]]}},
    ]))
    lats, subs = load_lattice_file(path)
    assert lats["L"].signature == (2, 10)
    assert ("L", "K") in subs
