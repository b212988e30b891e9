import random
from fractions import Fraction

import pytest

import vvmf.qexp as qexp
from vvmf.errors import ModuleMismatchError, TruncationError
from vvmf.fqm import trivial_module
from vvmf.lattice import lattice_A1
from vvmf.qexp import ScalarQSeries, VVForm, monomial, one


def series(d, trunc=None, floor=None, denom=1):
    return ScalarQSeries(denom, {Fraction(k): Fraction(v) for k, v in d.items()},
                         trunc, floor)


def triv_form(d, weight=0, trunc=None):
    return VVForm(trivial_module(), weight,
                  {((), Fraction(k)): Fraction(v) for k, v in d.items()}, trunc)


def test_scalar_mul_window():
    # (q^-1 + 24 + 324q) * (1 + 240q): constant term 24 + 240 = 264
    f = series({-1: 1, 0: 24, 1: 324}, trunc=1)
    s = series({0: 1, 1: 240}, trunc=1)
    p = f * s
    assert p[0] == 264
    # valid window: min(1 + 0, 1 + (-1)) = 0
    assert p.trunc == 0
    with pytest.raises(TruncationError):
        p[1]


def test_scalar_monomial_cancellation():
    p = monomial(-1) * monomial(1)
    assert p[0] == 1 and p.trunc is None


def test_scalar_inverse():
    f = series({0: 1, 1: -24, 2: 252}, trunc=2)
    g = f.inverse()
    assert (f * g)[0] == 1 and (f * g)[1] == 0 and (f * g)[2] == 0
    # Laurent inverse with a pole
    h = series({-1: 1, 0: 24}, trunc=3, floor=-1)
    hi = h.inverse()
    assert hi.floor == 1
    prod = h * hi
    assert prod[0] == 1


def test_scalar_power():
    f = series({0: 1, 1: 1}, trunc=4)
    p = f.power(3)
    assert [p[k] for k in range(4)] == [1, 3, 3, 1]


def test_vvform_support_condition():
    mod = lattice_A1().disc.module  # Z/2, q = 1/4
    VVForm(mod, Fraction(1, 2), {((1,), Fraction(1, 4)): 1}, 1)
    with pytest.raises(AssertionError):
        VVForm(mod, Fraction(1, 2), {((1,), Fraction(1, 2)): 1}, 1)


def test_add_and_scale():
    f = triv_form({-1: 1, 0: 24}, weight=-12, trunc=2)
    z = triv_form({}, weight=-12, trunc=5)
    s = qexp.add(f, z)
    assert s.coeffs == f.coeffs
    assert s.trunc == 2
    d = qexp.scale(2, f)
    assert d.coefficient((), -1) == 2
    g = VVForm(lattice_A1().disc.module, -12, {}, 2)
    with pytest.raises(ModuleMismatchError):
        qexp.add(f, g)
    with pytest.raises(ModuleMismatchError):
        qexp.add(f, triv_form({}, weight=0, trunc=2))


def test_mul_scalar_series():
    f = triv_form({-1: 1, 0: 24, 1: 324}, weight=-12, trunc=1)
    assert qexp.mul_scalar_series(f, one()).coeffs == f.coeffs
    s = series({0: 1, 1: 240}, trunc=2)
    p = qexp.mul_scalar_series(f, s, weight_shift=4)
    assert p.weight == -8
    assert p.coefficient((), 0) == 264
    with pytest.raises(ModuleMismatchError):
        qexp.mul_scalar_series(f, series({Fraction(1, 2): 1}, trunc=1, denom=2))


def test_tensor():
    mod = lattice_A1().disc.module
    f = triv_form({-1: 1}, weight=-12)
    g = VVForm(mod, Fraction(1, 2), {((1,), Fraction(1, 4)): 2}, None)
    t = qexp.tensor(f, g)
    assert t.weight == Fraction(-23, 2)
    assert t.coefficient((1,), Fraction(-3, 4)) == 2
    # tensor with the constant 1 over the trivial module is the identity
    e = VVForm(trivial_module(), 0, {((), 0): 1}, None)
    t2 = qexp.tensor(f, e)
    assert t2.coeffs == f.coeffs and t2.weight == f.weight


def test_principal_part():
    f = triv_form({-2: 3, -1: 1, 0: 24, 1: 99}, trunc=1)
    pp = qexp.principal_part(f)
    assert [(n, c) for _, n, c in pp] == [(-2, 3), (-1, 1), (0, 24)]
    assert qexp.is_integral_principal_part(f)
    assert qexp.constant_term_even(f)
    assert not qexp.constant_term_even(triv_form({0: 25}, trunc=0))
    assert not qexp.is_integral_principal_part(
        triv_form({-1: Fraction(1, 2)}, trunc=0))
    with pytest.raises(TruncationError):
        qexp.principal_part(triv_form({-1: 1}, trunc=-Fraction(1, 2)))


def test_minus_symmetry():
    # weight 1 - b/2 over a module with sigma = 2 - b mod 8: use A1(-1),
    # sigma = 7, so b = 3 and the weight must be -1/2
    mod = lattice_A1().scaled(-1).disc.module
    f = VVForm(mod, Fraction(-1, 2),
               {((1,), Fraction(3, 4)): 5, ((0,), 0): 2}, 1)
    assert qexp.check_minus_symmetry(f)  # -lambda = lambda here
    # artificial failure on Z/4: A_{<8>}(-1)-style module has sigma 7 too
    from vvmf.lattice import EvenLattice
    mod4 = EvenLattice(((-8,),)).disc.module
    g = VVForm(mod4, Fraction(-1, 2), {((1,), Fraction(15, 16)): 1}, 1)
    assert not qexp.check_minus_symmetry(g)
    g2 = VVForm(mod4, Fraction(-1, 2), {((1,), Fraction(15, 16)): 1,
                                        ((7,), Fraction(15, 16)): 1}, 1)
    assert qexp.check_minus_symmetry(g2)
    with pytest.raises(ModuleMismatchError):
        qexp.check_minus_symmetry(VVForm(mod4, Fraction(1, 2), {}, 1))


def test_ring_axioms_at_truncation():
    rng = random.Random(41)
    mod = lattice_A1().disc.module
    for _ in range(12):
        def rand_form():
            coeffs = {}
            for lam in ((0,), (1,)):
                base = mod.q(lam)
                for k in range(-1, 3):
                    if rng.random() < 0.7:
                        coeffs[(lam, base + k - (1 if base else 0))] = \
                            Fraction(rng.randint(-5, 5))
            return VVForm(mod, 0, coeffs, 2, floor=-2)

        def rand_scalar():
            return ScalarQSeries(
                1, {Fraction(k): Fraction(rng.randint(-4, 4)) for k in range(0, 3)},
                3, Fraction(0))

        f = rand_form()
        s, t = rand_scalar(), rand_scalar()
        left = qexp.mul_scalar_series(qexp.mul_scalar_series(f, s), t)
        right = qexp.mul_scalar_series(f, s * t)
        tr = qexp._min_trunc(left.trunc, right.trunc)
        for (lam, n), c in left.coeffs.items():
            if n <= tr:
                assert right.coefficient(lam, n) == c
        for (lam, n), c in right.coeffs.items():
            if n <= tr:
                assert left.coefficient(lam, n) == c
        # distributivity
        g = rand_form()
        a = qexp.mul_scalar_series(qexp.add(f, g), s)
        b = qexp.add(qexp.mul_scalar_series(f, s), qexp.mul_scalar_series(g, s))
        assert a.trunc == b.trunc
        assert a.coeffs == b.coeffs


def test_serialization_roundtrip():
    mod = lattice_A1().disc.module
    f = VVForm(mod, Fraction(1, 2),
               {((1,), Fraction(1, 4)): Fraction(2, 3), ((0,), -1): 7}, 4,
               floor=-1)
    d = qexp.vvform_to_dict(f)
    g = qexp.vvform_from_dict(d)
    assert g.coeffs == f.coeffs
    assert g.weight == f.weight and g.trunc == f.trunc and g.floor == f.floor
    assert qexp.dumps_vvform(g) == qexp.dumps_vvform(f)


def test_file_roundtrip(tmp_path):
    f = triv_form({-1: 1, 0: 24}, weight=-12, trunc=3)
    path = tmp_path / "f.json"
    qexp.write_vvform(f, path)
    g = qexp.read_vvform(path)
    assert g.coeffs == f.coeffs
    assert qexp.dumps_vvform(g) == qexp.dumps_vvform(f)
