import random
from fractions import Fraction

import numpy as np
import pytest

import vvmf.fqm as fqm
import vvmf.qexp as qexp
import vvmf.transfer as transfer
from vvmf.errors import ModuleMismatchError
from vvmf.lattice import EvenLattice, build_embedding, lattice_II_2_26
from vvmf.qexp import VVForm
from vvmf.theta import theta_vv
from vvmf.weil import GroupWord, rho

from test_fqm import random_even_lattice

INV_DELTA = {-1: 1, 0: 24, 1: 324, 2: 3200, 3: 25650}  # eta^-24, frozen


def inv_delta_form(module, weight, trunc=3):
    zero = module.zero()
    return VVForm(module, weight,
                  {(zero, Fraction(n)): Fraction(c) for n, c in INV_DELTA.items()
                   if n <= trunc},
                  trunc, floor=-1)


def random_pair(rng, max_order=50):
    """A random (A', I) with I a cyclic isotropic subgroup."""
    while True:
        a = random_even_lattice(rng, max_rank=4, max_det=max_order).disc.module
        iso_elems = [x for x in a.elements() if a.q(x) == 0 and any(x)]
        gens = (rng.choice(iso_elems),) if iso_elems and rng.random() < 0.8 else ()
        return a, fqm.IsotropicSubgroup(a, gens)


def test_equivariance_with_weil_representations():
    # rho_{A'}(g) Up = Up rho_A(g) and rho_A(g) Down = Down rho_{A'}(g)
    # for g in {S, T}
    rng = random.Random(101)
    from vvmf.weil import rho_S, rho_T
    for _ in range(12):
        ap, iso = random_pair(rng)
        quotient = fqm.perp_quotient(ap, iso)
        a = quotient[0]
        up = transfer.up_matrix(iso, quotient)
        down = transfer.down_matrix(iso, quotient)
        for make in (rho_T, rho_S):
            up_err = np.max(np.abs(make(ap).entries @ up - up @ make(a).entries))
            down_err = np.max(np.abs(make(a).entries @ down - down @ make(ap).entries))
            assert up_err < 1e-10
            assert down_err < 1e-10


def test_pull_up_trivial_i():
    a = EvenLattice(((2, 1), (1, 4))).disc.module
    iso = fqm.IsotropicSubgroup(a, ())
    quotient = fqm.perp_quotient(a, iso)
    f = VVForm(a, 1, {(x, a.q(x)): 1 + a.index_of(x) for x in a.elements()}, 2)
    up = transfer.pull_up(f, iso, quotient)
    assert up.coeffs == f.coeffs
    down = transfer.push_down(f, iso, quotient)
    assert down.coeffs == f.coeffs


def test_down_kills_off_perp():
    a = EvenLattice(((8,),)).disc.module
    iso = fqm.IsotropicSubgroup(a, ((4,),))
    quotient = fqm.perp_quotient(a, iso)
    g = VVForm(a, 0, {((1,), a.q((1,))): 5}, 2)  # (1,) is not in I^perp
    down = transfer.push_down(g, iso, quotient)
    assert down.is_zero()


def test_down_up_is_order_of_i():
    rng = random.Random(103)
    for _ in range(8):
        ap, iso = random_pair(rng)
        quotient = fqm.perp_quotient(ap, iso)
        a = quotient[0]
        coeffs = {}
        for x in a.elements():
            if rng.random() < 0.6:
                coeffs[(x, a.q(x) - 1)] = Fraction(rng.randint(-9, 9))
        f = VVForm(a, 0, coeffs, 1, floor=-1)
        back = transfer.push_down(transfer.pull_up(f, iso, quotient), iso, quotient)
        expect = qexp.scale(len(iso), f)
        assert back.coeffs == expect.coeffs


def test_pull_up_module_mismatch():
    a = EvenLattice(((8,),)).disc.module
    iso = fqm.IsotropicSubgroup(a, ((4,),))
    f = VVForm(a, 0, {}, 1)  # lives over A', not over I^perp/I
    with pytest.raises(ModuleMismatchError):
        transfer.pull_up(f, iso)


def test_pull_up_emb_glued_root():
    lat = lattice_II_2_26()
    emb = build_embedding(lat, (tuple(int(j == 4) for j in range(28)),))
    f = inv_delta_form(emb.A_L.module, weight=-12)
    up = transfer.pull_up_emb(f, emb)
    # p^{-1}(0) = I = {(0,0), (1,1)}: both components carry 1/Delta
    for mu in emb.glue.closure:
        for n, c in INV_DELTA.items():
            if n <= 3:
                assert up.coefficient(mu, n) == c
    # everything else vanishes
    others = [x for x in emb.A_Lp_module.elements()
              if x not in set(emb.glue.closure)]
    for x in others:
        assert all(k[0] != x for k in up.coeffs)
    # down(up(f)) = |I| f
    back = transfer.push_down_emb(up, emb)
    assert back.coeffs == qexp.scale(2, f).coeffs


def test_theta_contract_rank0():
    lat0 = EvenLattice(())
    mod = fqm.direct_sum(fqm.trivial_module((2, 26)), fqm.negated(lat0.disc.module))
    f = VVForm(mod, -12, {(() , Fraction(-1)): 1, ((), 0): 24}, 2, floor=-1)
    g = transfer.theta_contract(f, lat0)
    assert g.weight == -12
    assert g.coefficient((), -1) == 1 and g.coefficient((), 0) == 24


def test_theta_contract_weight_bookkeeping():
    from vvmf.lattice import lattice_A1
    k = lattice_A1()
    a_m = EvenLattice(((2, 1), (1, 4))).disc.module
    mod = fqm.direct_sum(a_m, fqm.negated(k.disc.module))
    coeffs = {}
    for x in mod.elements():
        coeffs[(x, mod.q(x))] = 1
    f = VVForm(mod, Fraction(1, 2), coeffs, 2)
    g = transfer.theta_contract(f, k)
    assert g.weight == Fraction(1, 2) + Fraction(1, 2)
    assert same_trunc(g.trunc, 2)


def same_trunc(a, b):
    return a == b


def test_theta_contract_shape_mismatch():
    from vvmf.lattice import lattice_A1
    f = VVForm(fqm.trivial_module(), 0, {}, 1)
    with pytest.raises(ModuleMismatchError):
        transfer.theta_contract(f, lattice_A1())
    # two-part module whose second part is not A_{K(-1)}
    mod = fqm.direct_sum(fqm.trivial_module(), lattice_A1().disc.module)
    f2 = VVForm(mod, 0, {}, 1)
    with pytest.raises(ModuleMismatchError):
        transfer.theta_contract(f2, lattice_A1())


def test_divisor_averaging_consistency():
    # descriptor-level coefficients of g-down at lambda are the fiber sums
    rng = random.Random(107)
    ap, iso = random_pair(rng)
    quotient = fqm.perp_quotient(ap, iso)
    a, proj = quotient
    coeffs = {}
    for x in ap.elements():
        coeffs[(x, ap.q(x) - 1)] = Fraction(rng.randint(0, 6))
    g = VVForm(ap, 0, coeffs, 1, floor=-1)
    down = transfer.push_down(g, iso, quotient)
    for lam in a.elements():
        fiber = [x for x in iso.perp() if proj(x) == lam]
        n = a.q(lam) - 1
        assert down.coefficient(lam, n) == sum(
            g.coefficient(x, n) for x in fiber)
