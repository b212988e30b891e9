"""Transfer operators on vector-valued expansions: pullback to a bigger
module, pushforward to a smaller one, Theta-contraction, and the
nondegenerate-glue projection shortcut.

The pullback/pushforward attached to an isotropic I in A' move between
A = I^perp/I and A'.  On expansions: component mu in I^perp of f-up carries
the coefficients of component p(mu) of f; pushing down sums each fiber.
"""

from fractions import Fraction

import numpy as np

from . import fqm
from .errors import DegenerateError, ModuleMismatchError, TruncationError
from .qexp import VVForm, same_module
from .theta import theta_coset, theta_vv


def _by_class(f):
    out = {}
    for (lam, n), c in f.coeffs.items():
        out.setdefault(lam, []).append((n, c))
    return out


def _quotient_data(iso, quotient):
    if quotient is None:
        quotient = fqm.perp_quotient(iso.parent, iso)
    return quotient


def pull_up(f, iso, quotient=None):
    """f over A = I^perp/I pulled up to A' (weight unchanged)."""
    a, proj = _quotient_data(iso, quotient)
    if not same_module(f.module, a):
        raise ModuleMismatchError(
            "form does not live over I^perp/I for the given subgroup")
    comp = _by_class(f)
    out = {}
    for mu in iso.perp():
        for n, c in comp.get(proj(mu), ()):
            out[(mu, n)] = c
    return VVForm(iso.parent, f.weight, out, f.trunc, f.floor)


def push_down(g, iso, quotient=None):
    """g over A' pushed down to A = I^perp/I; fibers are summed, components
    off I^perp are dropped."""
    a, proj = _quotient_data(iso, quotient)
    if not same_module(g.module, iso.parent):
        raise ModuleMismatchError("form does not live over the parent module")
    comp = _by_class(g)
    out = {}
    for mu in iso.perp():
        lam = proj(mu)
        for n, c in comp.get(mu, ()):
            key = (lam, n)
            out[key] = out.get(key, Fraction(0)) + c
    return VVForm(a, g.weight, out, g.trunc, g.floor)


def up_matrix(iso, quotient=None):
    """The pullback as a 0/1 matrix from CA to CA' (canonical bases)."""
    a, proj = _quotient_data(iso, quotient)
    ap = iso.parent
    m = np.zeros((ap.order(), a.order()))
    for mu in iso.perp():
        m[ap.index_of(mu), a.index_of(proj(mu))] = 1
    return m


def down_matrix(iso, quotient=None):
    """The pushforward as a 0/1 matrix from CA' to CA."""
    return up_matrix(iso, quotient).T


def pull_up_emb(f, emb):
    """f over A_L pulled up to A_{L'} = A_M + A_{K(-1)} along the glue."""
    if not same_module(f.module, emb.A_L.module):
        raise ModuleMismatchError("form does not live over A_L")
    comp = _by_class(f)
    out = {}
    for mu, lam in emb.up_table.items():
        for n, c in comp.get(lam, ()):
            out[(mu, n)] = c
    return VVForm(emb.A_Lp_module, f.weight, out, f.trunc, f.floor)


def push_down_emb(g, emb):
    if not same_module(g.module, emb.A_Lp_module):
        raise ModuleMismatchError("form does not live over A_{L'}")
    comp = _by_class(g)
    out = {}
    for mu, lam in emb.up_table.items():
        for n, c in comp.get(mu, ()):
            key = (lam, n)
            out[key] = out.get(key, Fraction(0)) + c
    return VVForm(emb.A_L.module, g.weight, out, g.trunc, g.floor)


def _check_kneg_identification(f_module, k_lattice):
    """The second summand of f's module must be A_{K(-1)}: same coordinates
    as A_K with the form negated."""
    if f_module.parts is None or len(f_module.parts) != 2:
        raise ModuleMismatchError(
            "Theta-contraction needs a two-part module A_M + A_{K(-1)}")
    a_m, a_kneg = f_module.parts
    a_k = k_lattice.disc.module
    if not same_module(fqm.negated(a_kneg), a_k):
        raise ModuleMismatchError(
            "second module summand is not A_{K(-1)} for the given K")
    return a_m, a_kneg


def theta_contract(f, k_lattice, n_max=None):
    """<f, Theta_K>: collapse the A_{K(-1)} index against theta_{K+lambda}.

    The component mu of the result is sum_lambda f_{(mu, lambda)} *
    theta_{K+lambda}; the weight grows by rk(K)/2.  n_max is the requested
    output truncation (defaults to f.trunc).
    """
    a_m, a_kneg = _check_kneg_identification(f.module, k_lattice)
    if n_max is None:
        if f.trunc is None:
            raise TruncationError("specify n_max for an exact (untruncated) input")
        n_max = f.trunc
    n_max = Fraction(n_max)
    if f.trunc is not None and n_max > f.trunc:
        raise TruncationError(f"output trunc {n_max} exceeds input trunc {f.trunc}")
    theta = theta_vv(k_lattice, n_max - f.floor)
    by_class = _by_class(theta)
    out = {}
    k1 = len(a_m.orders)
    for (pair, n), c in f.coeffs.items():
        mu, lam = pair[:k1], pair[k1:]
        for m, d in by_class.get(lam, ()):
            e = n + m
            if e <= n_max:
                key = (mu, e)
                out[key] = out.get(key, Fraction(0)) + c * d
    return VVForm(a_m, f.weight + Fraction(k_lattice.rank, 2), out, n_max,
                  f.floor)


def _orthogonal_decomposition(module, subgroup):
    """The perp of a subgroup on which b restricts nondegenerately, checking
    that subgroup x perp covers the module exactly once."""
    sub_rad = [g for g in subgroup
               if all(module.b(g, h) == 0 for h in subgroup)]
    if len(sub_rad) != 1:
        raise DegenerateError("glue image is degenerate in the discriminant form")
    perp = [x for x in module.elements()
            if all(module.b(x, g) == 0 for g in subgroup)]
    if len(subgroup) * len(perp) != module.order():
        raise DegenerateError("subgroup + perp do not decompose the module")
    seen = set()
    for g in subgroup:
        for h in perp:
            x = module.add(g, h)
            assert x not in seen
            seen.add(x)
    return perp


def contract_projection_path(f, emb, n_max=None):
    """<f-up, Theta_K> computed through the natural projections, without the
    A_{L'}-sized intermediate; valid when G_K is nondegenerate in A_K."""
    if not same_module(f.module, emb.A_L.module):
        raise ModuleMismatchError("form does not live over A_L")
    if n_max is None:
        if f.trunc is None:
            raise TruncationError("specify n_max for an exact (untruncated) input")
        n_max = f.trunc
    n_max = Fraction(n_max)
    a_m = emb.A_M.module
    a_k = emb.A_K.module
    k_lat = emb.K
    gk_perp = _orthogonal_decomposition(a_k, emb.G_K)
    gm_perp = _orthogonal_decomposition(a_m, emb.G_M)
    theta_bound = n_max - f.floor
    comp = _by_class(f)
    out = {}
    for mu_g in emb.G_M:
        lam_base = emb.iota[mu_g]
        for mu_p in gm_perp:
            mu = a_m.add(mu_g, mu_p)
            for h in gk_perp:
                lam = a_k.add(lam_base, h)
                mu_lp = fqm.join_element(emb.A_Lp_module, mu_p, h)
                # G_M^perp + G_K^perp(-1) always sits inside I^perp
                assert mu_lp in emb.up_table
                lam_l = emb.up_table[mu_lp]
                th = theta_coset(k_lat, lam, theta_bound)
                for n, c in comp.get(lam_l, ()):
                    for m, d in th.coeffs.items():
                        e = n + m
                        if e <= n_max:
                            key = (mu, e)
                            out[key] = out.get(key, Fraction(0)) + c * d
    return VVForm(a_m, f.weight + Fraction(k_lat.rank, 2), out, n_max, f.floor)
