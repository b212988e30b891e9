"""Scalar-to-vector induction: averaging a scalar form over cosets of
Gamma_0(d) against the Weil action.

Scalar inputs are products of an eta quotient and theta-coset powers.  Each
slashed factor is expanded as a Puiseux series with complex coefficients:
theta cosets transform exactly through the Weil matrix of the word, and
eta factors through the classical decompose-apply-recompose route for
eta(delta *) under SL2(Z), with the constant of the transformation resolved
numerically at a reference point and snapped to an exact root of unity over
sqrt(d').  Induced coefficients are rationalized (bounded-denominator
reconstruction) and the support condition is enforced; any residue above
tolerance is an error, never silently dropped.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import CharacterError, InputError, RationalizationError
from .qexp import ScalarQSeries, VVForm
from .theta import theta_coset
from .weil import GroupWord, rho, word_decompose

SUPPORT_TOL = 1e-7
RECON_TOL = 1e-7
DROP_TOL = 1e-9
_TAU0 = 0.1234 + 0.8765j

# eta(z) = sum_{n >= 1} chi(n) q^{n^2/24} with chi(n) = +1 for n = +-1 and
# -1 for n = +-5 mod 12 (Euler's pentagonal series in quadratic form)
_CHI12 = {1: 1, 11: 1, 5: -1, 7: -1}


def _lcm(a, b):
    return a * b // gcd(a, b)


# --- eta quotients, exact expansion ------------------------------------------

@dataclass(frozen=True)
class EtaQuotient:
    """prod_delta eta(delta tau)^{r_delta}, keyed by sorted (delta, r) pairs."""

    exponents: tuple

    def __post_init__(self):
        pairs = tuple(sorted((int(d), int(r)) for d, r in dict(self.exponents).items()
                             if r != 0))
        assert all(d >= 1 for d, _ in pairs)
        object.__setattr__(self, "exponents", pairs)

    @property
    def weight(self):
        return Fraction(sum(r for _, r in self.exponents), 2)

    @property
    def lead_exponent(self):
        return Fraction(sum(d * r for d, r in self.exponents), 24)

    def __str__(self):
        return "*".join(f"eta({d}t)^{r}" for d, r in self.exponents) or "1"


def euler_series(n_max):
    """prod_{n>=1}(1 - q^n) to order n_max, by the pentagonal number theorem."""
    c = [0] * (n_max + 1)
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            e = kk * (3 * kk - 1) // 2
            if e <= n_max:
                c[e] += 1 if kk % 2 == 0 else -1
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return c


def eta_expand(e, n_max):
    """Exact q-expansion of an eta quotient up to exponent n_max."""
    n_max = Fraction(n_max)
    lead = e.lead_exponent
    order = max(int(math.ceil(n_max - lead)) + 1, 1)
    ser = ScalarQSeries(1, {0: 1}, Fraction(order), Fraction(0))
    for d, r in e.exponents:
        base = euler_series(order // d + 1)
        ed = ScalarQSeries(1, {Fraction(d * i): Fraction(ci)
                               for i, ci in enumerate(base) if d * i <= order},
                           Fraction(order), Fraction(0))
        f = ed.power(r) if r > 0 else ed.inverse().power(-r)
        ser = ser * f
    out = ser.shifted(lead)
    if out.trunc is not None and out.trunc > n_max:
        out = out.truncated(n_max)
    return out


# --- coset representatives of Gamma_0(d) --------------------------------------

def gamma0_index(d):
    out = d
    p = 2
    dd = d
    while p * p <= dd:
        if dd % p == 0:
            out = out // p * (p + 1)
            while dd % p == 0:
                dd //= p
        p += 1
    if dd > 1:
        out = out // dd * (dd + 1)
    return out


def _p1_orbit_key(c, a, d):
    """Canonical representative of (c : a) under unit scaling mod d."""
    best = None
    for u in range(1, d + 1):
        if gcd(u, d) != 1:
            continue
        key = ((u * c) % d, (u * a) % d)
        if best is None or key < best:
            best = key
    return best


def coset_reps_gamma0(d):
    """Representatives of Gamma_0(d) \\ SL2(Z), one per bottom-row class in
    P^1(Z/d), in sorted class order."""
    if d < 1:
        raise InputError("level must be >= 1")
    classes = set()
    for c in range(d):
        for a in range(d):
            if gcd(gcd(c, a), d) == 1:
                classes.add(_p1_orbit_key(c, a, d))
    reps = []
    for c0, a0 in sorted(classes):
        c1, d1 = c0, a0
        guard = 0
        while gcd(c1, d1) != 1:
            d1 += d
            guard += 1
            assert guard < 64, "lift search failed"
        x, y, g = _xgcd(d1, -c1)
        assert g == 1
        reps.append(((x, y), (c1, d1)))
    assert len(reps) == gamma0_index(d)
    return reps


def _xgcd(a, b):
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


def same_coset_gamma0(m1, m2, d):
    """m1 * m2^{-1} in Gamma_0(d)?"""
    (a, b), (c, dd) = m2
    inv = ((dd, -b), (-c, a))
    c_entry = m1[1][0] * inv[0][0] + m1[1][1] * inv[1][0]
    return c_entry % d == 0


def random_transversal(d, rng):
    """Representatives multiplied on the left by random Gamma_0(d) elements."""
    t_low = ((1, 0), (d, 1))
    t_up = ((1, 1), (0, 1))
    out = []
    for rep in coset_reps_gamma0(d):
        g = ((1, 0), (0, 1))
        for _ in range(3):
            g = _mul2(g, _pow2(t_up, rng.randint(-2, 2)))
            g = _mul2(g, _pow2(t_low, rng.randint(-1, 1)))
        out.append(_mul2(g, rep))
    return out


def _mul2(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2))
                 for i in range(2))


def _pow2(m, n):
    if n < 0:
        (a, b), (c, d) = m
        return _pow2(((d, -b), (-c, a)), -n)
    out = ((1, 0), (0, 1))
    while n:
        if n & 1:
            out = _mul2(out, m)
        m = _mul2(m, m)
        n >>= 1
    return out


# --- slashed Puiseux slices (complex coefficients) -----------------------------

@dataclass(frozen=True)
class SlashedSlice:
    """Finite Puiseux expansion sum c_e q^e with complex coefficients,
    exponents in (1/denom) Z, window [floor, trunc]."""

    denom: int
    coeffs: dict          # scaled integer exponent e*denom -> complex
    trunc: Fraction
    floor: Fraction
    weight: Fraction

    def exponents(self):
        return sorted(Fraction(k, self.denom) for k in self.coeffs)

    def coefficient(self, e):
        k = Fraction(e) * self.denom
        if k.denominator != 1:
            return 0j
        return self.coeffs.get(int(k), 0j)

    def rescaled(self, new_denom):
        assert new_denom % self.denom == 0
        f = new_denom // self.denom
        return SlashedSlice(new_denom, {k * f: c for k, c in self.coeffs.items()},
                            self.trunc, self.floor, self.weight)

    def __mul__(self, other):
        denom = _lcm(self.denom, other.denom)
        a = self.rescaled(denom)
        b = other.rescaled(denom)
        trunc = min(self.trunc + other.floor, other.trunc + self.floor)
        floor = self.floor + other.floor
        kmax = trunc * denom
        out = {}
        for k1, c1 in a.coeffs.items():
            for k2, c2 in b.coeffs.items():
                k = k1 + k2
                if k <= kmax:
                    out[k] = out.get(k, 0j) + c1 * c2
        return SlashedSlice(denom, out, trunc, floor, self.weight + other.weight)

    def scaled(self, z):
        return SlashedSlice(self.denom, {k: z * c for k, c in self.coeffs.items()},
                            self.trunc, self.floor, self.weight)

    def __add__(self, other):
        assert self.weight == other.weight
        denom = _lcm(self.denom, other.denom)
        a = self.rescaled(denom)
        b = other.rescaled(denom)
        trunc = min(self.trunc, other.trunc)
        out = dict(a.coeffs)
        for k, c in b.coeffs.items():
            out[k] = out.get(k, 0j) + c
        out = {k: c for k, c in out.items() if k <= trunc * denom}
        return SlashedSlice(denom, out, trunc, min(self.floor, other.floor),
                            self.weight)

    def inverse(self):
        keys = sorted(k for k, c in self.coeffs.items() if abs(c) > 1e-14)
        assert keys, "cannot invert a zero slice"
        m = keys[0]
        assert Fraction(m, self.denom) == self.floor, "leading term must be pinned"
        c0 = self.coeffs[m]
        rel_t = self.trunc - self.floor
        u = {k - m: c / c0 for k, c in self.coeffs.items() if k != m}
        inv_rel = {0: 1 + 0j}
        kmax = int(rel_t * self.denom)
        for k in range(1, kmax + 1):
            s = 0j
            for ku, cu in u.items():
                if ku <= k:
                    s += cu * inv_rel.get(k - ku, 0j)
            if s:
                inv_rel[k] = -s
        out = {k - m: c / c0 for k, c in inv_rel.items()}
        return SlashedSlice(self.denom, out, rel_t - self.floor, -self.floor,
                            -self.weight)

    def power(self, n):
        if n < 0:
            return self.inverse().power(-n)
        out = slice_one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def evaluate(self, tau):
        """Numerical value sum c_e exp(2 pi i e tau)."""
        return sum(c * cmath.exp(2j * cmath.pi * (k / self.denom) * tau)
                   for k, c in self.coeffs.items())


def slice_one(weight=Fraction(0), trunc=Fraction(10 ** 6)):
    return SlashedSlice(1, {0: 1 + 0j}, Fraction(trunc), Fraction(0),
                        Fraction(weight))


def slice_from_exact(series, weight):
    denom = series.denom
    coeffs = {}
    for e, c in series.coeffs.items():
        k = e * denom
        coeffs[int(k)] = complex(c)
    trunc = series.trunc if series.trunc is not None else Fraction(10 ** 6)
    return SlashedSlice(denom, coeffs, Fraction(trunc), series.floor,
                        Fraction(weight))


# --- numeric eta and metaplectic phi -------------------------------------------

def eta_numeric(z):
    """eta(z) for Im z > 0, summed until the quadratic-exponent terms vanish."""
    assert z.imag > 0
    total = 0j
    for n in range(1, 6000):
        chi = _CHI12.get(n % 12, 0)
        if not chi:
            continue
        term = chi * cmath.exp(2j * cmath.pi * n * n * z / 24)
        total += term
        if abs(term) < 1e-18:
            break
    return total


def _mobius(m, tau):
    (a, b), (c, d) = m
    return (a * tau + b) / (c * tau + d)


def phi_word(word, tau):
    """The metaplectic phi of a word at tau: phi(w1 w2) = phi_{w1}(w2 tau) phi_{w2}(tau).

    Letters are processed right to left; T contributes phi = 1, S contributes
    sqrt(tau) (principal branch), and S^{-1} the reciprocal at the moved point.
    """
    cur = complex(tau)
    phi = 1 + 0j
    for gen, exp in reversed(word.letters):
        if gen == "T":
            cur = cur + exp
            continue
        step = 1 if exp > 0 else -1
        for _ in range(abs(exp)):
            if step == 1:
                phi = cmath.sqrt(cur) * phi
                cur = -1 / cur
            else:
                nxt = -1 / cur  # S^{-1} acts by the same Mobius map
                phi = phi / cmath.sqrt(nxt)
                cur = nxt
    return phi


def _upper_triangularize(bmat):
    """b = g1 * a1 with g1 in SL2(Z) and a1 = [[a', b'], [0, d']], a', d' > 0."""
    (p, q), (r, s) = bmat
    if r == 0:
        if p < 0:
            return ((-1, 0), (0, -1)), ((-p, -q), (0, -s))
        return ((1, 0), (0, 1)), bmat
    g = math.gcd(p, r)
    pc, rc = p // g, r // g
    x, y, gg = _xgcd(pc, rc)
    assert gg == 1
    g1 = ((pc, -y), (rc, x))
    a1 = _mul2(((x, y), (-rc, pc)), bmat)
    assert a1[1][0] == 0
    if a1[0][0] < 0:
        g1 = tuple(tuple(-v for v in row) for row in g1)
        a1 = tuple(tuple(-v for v in row) for row in a1)
    assert a1[0][0] > 0 and a1[1][1] > 0
    return g1, a1


def _snap_phase(c, dprime):
    """Snap c to e(k/48)/sqrt(d'); the transformation constant of a slashed
    eta factor is always of this shape (24th root of the multiplier system
    times e(-1/8) and a branch sign)."""
    mag = abs(c) * math.sqrt(dprime)
    if abs(mag - 1) > 1e-6:
        raise RationalizationError(
            f"eta multiplier magnitude {abs(c)} != 1/sqrt({dprime})")
    theta = cmath.phase(c) / (2 * cmath.pi) * 48
    k = round(theta)
    if abs(theta - k) > 1e-4:
        raise RationalizationError(f"eta multiplier phase {theta}/48 off-grid")
    return cmath.exp(2j * cmath.pi * k / 48) / math.sqrt(dprime)


def slash_single_eta(delta, word, n_max):
    """eta(delta tau) |_{1/2} word, expanded to exponent n_max.

    Decompose [[delta, 0], [0, 1]] * M = g1 * [[a', b'], [0, d']]; the slash
    then equals C * eta((a' tau + b')/d') with C constant.  C is evaluated at
    a reference point against a fully-converged series and snapped to its
    exact shape e(k/48)/sqrt(d')."""
    n_max = Fraction(n_max)
    m = word.matrix
    bmat = _mul2(((delta, 0), (0, 1)), m)
    _, a1 = _upper_triangularize(bmat)
    (ap, bp), (_, dp) = a1
    assert ap * dp == delta
    denom = 24 * dp
    lead = Fraction(ap, denom)
    coeffs = {}
    # term magnitude at the reference point ~ exp(-2 pi n^2 ap Im(tau0)/denom)
    eval_cut = 2 * math.pi * ap * _TAU0.imag / denom
    eval_terms = {}
    n = 1
    while True:
        e_scaled = n * n * ap
        in_window = Fraction(e_scaled, denom) <= n_max
        converged = n * n * eval_cut > 45  # exp(-45) << snap tolerance
        if not in_window and converged:
            break
        chi = _CHI12.get(n % 12, 0)
        if chi:
            phase = cmath.exp(2j * cmath.pi * n * n * bp / denom)
            if in_window:
                coeffs[e_scaled] = chi * phase
            eval_terms[e_scaled] = chi * phase
        n += 1
    raw_eval = sum(c * cmath.exp(2j * cmath.pi * (k / denom) * _TAU0)
                   for k, c in eval_terms.items())
    target = eta_numeric(_mobius(bmat, _TAU0)) / phi_word(word, _TAU0)
    c = _snap_phase(target / raw_eval, dp)
    raw = SlashedSlice(denom, coeffs, n_max, lead, Fraction(1, 2))
    return raw.scaled(c)


def slash_eta(e, word, n_max):
    """An eta quotient slashed by a word, to exponent n_max.

    Factor windows: for a factor with leading exponent l and exponent r, the
    r-th power is valid to t + (|r| - 1 + (2 if r < 0 else 0) - 1) l short of
    its own expansion bound t, so each base factor is expanded to
    n_max - total_floor + l."""
    n_max = Fraction(n_max)
    m = word.matrix
    leads = {}
    for d, r in e.exponents:
        bmat = _mul2(((d, 0), (0, 1)), m)
        _, a1 = _upper_triangularize(bmat)
        leads[d] = Fraction(a1[0][0], 24 * a1[1][1])
    total_floor = sum(r * leads[d] for d, r in e.exponents)
    out = slice_one(trunc=n_max - total_floor)
    for d, r in e.exponents:
        base_need = n_max - total_floor + leads[d]
        base = slash_single_eta(d, word, max(base_need, leads[d]))
        out = out * base.power(r)
    assert out.trunc >= n_max, "internal truncation shortfall in slash_eta"
    kmax = n_max * out.denom
    return SlashedSlice(out.denom,
                        {k: c for k, c in out.coeffs.items() if k <= kmax},
                        n_max, out.floor, out.weight)


def slash_theta_coset(lattice, lam, word, n_max):
    """theta_{K+lambda} |_{rk/2} word = sum_mu rho_K(word)[lam, mu] theta_{K+mu}."""
    a = lattice.disc.module
    r = rho(a, word).entries
    i_lam = a.index_of(a.reduce(lam))
    out = None
    kappa = Fraction(lattice.rank, 2)
    for j, mu in enumerate(a.elements()):
        z = r[i_lam, j]
        if abs(z) < 1e-14:
            continue
        piece = slice_from_exact(theta_coset(lattice, mu, n_max), kappa).scaled(z)
        out = piece if out is None else out + piece
    if out is None:
        out = SlashedSlice(1, {}, Fraction(n_max), Fraction(0), kappa)
    return out


# --- scalar form specifications -------------------------------------------------

@dataclass(frozen=True)
class ScalarFormSpec:
    """A scalar weakly holomorphic input: eta quotient times theta-coset powers."""

    eta: object = None                 # EtaQuotient or None
    theta_factors: tuple = ()          # (lattice, coset element, power)

    @property
    def weight(self):
        w = self.eta.weight if self.eta else Fraction(0)
        for lat, _, p in self.theta_factors:
            w += Fraction(lat.rank, 2) * p
        return w

    @property
    def floor_exponent(self):
        return self.eta.lead_exponent if self.eta else Fraction(0)

    def __str__(self):
        parts = []
        if self.eta:
            parts.append(str(self.eta))
        for lat, lam, p in self.theta_factors:
            parts.append(f"theta[{list(lam)}]^{p}")
        return " * ".join(parts) or "1"


def expand_spec(spec, n_max):
    """Exact expansion of the scalar form (the identity slash)."""
    n_max = Fraction(n_max)
    out = ScalarQSeries(1, {0: 1}, None, Fraction(0))
    if spec.eta:
        out = eta_expand(spec.eta, n_max)
    for lat, lam, p in spec.theta_factors:
        th = theta_coset(lat, lam, n_max - out.floor)
        for _ in range(p):
            out = out * th
    if out.trunc is None or out.trunc > n_max:
        out = out.truncated(n_max)
    return out


def slash_spec(spec, word, n_max):
    """The scalar form slashed by a word, to exponent n_max."""
    n_max = Fraction(n_max)
    floor_eta = spec.eta.lead_exponent if spec.eta else Fraction(0)
    out = None
    if spec.eta:
        out = slash_eta(spec.eta, word, n_max)
    for lat, lam, p in spec.theta_factors:
        th = slash_theta_coset(lat, lam, word, n_max - floor_eta)
        piece = th.power(p)
        out = piece if out is None else out * piece
    if out is None:
        out = slice_one(Fraction(0), trunc=n_max)
    return out


# --- induction -------------------------------------------------------------------

def _word_reps(reps):
    return [word_decompose(m) for m in reps]


def _induce_components(a, target_vec, spec, words, n_max):
    """Accumulate sum_i (phi |_k gamma_i) * rho(gamma_i)^{-1} target."""
    comps = {}
    elems = list(a.elements())
    for w in words:
        ps = slash_spec(spec, w, n_max)
        u = rho(a, w).entries.conj().T @ target_vec
        for i, lam in enumerate(elems):
            z = u[i]
            if abs(z) < 1e-14:
                continue
            cur = comps.get(lam)
            piece = ps.scaled(z)
            comps[lam] = piece if cur is None else cur + piece
    return comps


def rationalize_components(a, comps, weight, d, n_max, denom_bound=None):
    """Turn complex per-component slices into an exact VVForm.

    Exponents off the support grid must carry only sub-tolerance residue;
    on-grid coefficients are reconstructed as rationals with denominator
    at most 24 * d * |A| and verified to RECON_TOL.
    """
    if denom_bound is None:
        denom_bound = 24 * d * max(1, a.order())
    coeffs = {}
    for lam, sl in comps.items():
        qv = a.q(lam)
        for k, z in sl.coeffs.items():
            if abs(z) <= DROP_TOL:
                continue
            e = Fraction(k, sl.denom)
            if (e - qv).denominator != 1:
                if abs(z) < SUPPORT_TOL:
                    continue
                raise RationalizationError(
                    f"coefficient {z} at off-support exponent {e} (component {lam})")
            if abs(z.imag) > RECON_TOL:
                raise RationalizationError(f"non-real coefficient {z} at {e}")
            r = Fraction(z.real).limit_denominator(denom_bound)
            if abs(z.real - float(r)) > RECON_TOL:
                raise RationalizationError(
                    f"cannot reconstruct {z.real} at {e} within {RECON_TOL}")
            if r:
                coeffs[(lam, e)] = r
    return VVForm(a, weight, coeffs, Fraction(n_max))


def induce(a, iso, spec, d, n_max, reps=None, check_transversal=None,
           denom_bound=None):
    """ind_A^I(phi): average phi over MGamma_0(d) \\ Mp2(Z) against rho_A.

    iso may be None (I = {0}).  d must be divisible by the level of A.
    If check_transversal is an RNG, the sum is recomputed over a second,
    randomized transversal; coefficients differing by more than SUPPORT_TOL
    signal that phi does not transform with the character the construction
    needs, and raise CharacterError.
    """
    if d % a.level() != 0:
        raise InputError(f"level {a.level()} of A does not divide d = {d}")
    if reps is None:
        reps = coset_reps_gamma0(d)
    target = np.zeros(max(a.order(), 1), dtype=complex)
    closure = iso.closure if iso is not None else (a.zero(),)
    for lam in closure:
        target[a.index_of(lam)] = 1
    words = _word_reps(reps)
    comps = _induce_components(a, target, spec, words, n_max)
    if check_transversal is not None:
        reps2 = random_transversal(d, check_transversal)
        comps2 = _induce_components(a, target, spec, _word_reps(reps2), n_max)
        _compare_components(comps, comps2)
    return rationalize_components(a, comps, spec.weight, d, n_max, denom_bound)


def _compare_components(c1, c2):
    for lam in set(c1) | set(c2):
        s1 = c1.get(lam)
        s2 = c2.get(lam)
        keys = set()
        for s in (s1, s2):
            if s is not None:
                keys |= {Fraction(k, s.denom) for k in s.coeffs}
        for e in keys:
            z1 = s1.coefficient(e) if s1 is not None else 0j
            z2 = s2.coefficient(e) if s2 is not None else 0j
            if abs(z1 - z2) > SUPPORT_TOL:
                raise CharacterError(
                    f"induction depends on the transversal at component {lam}, "
                    f"exponent {e}: {z1} vs {z2}")


def induce_mu(a, mu, spec, d, reps, n_max):
    """ind^mu(psi) = sum_i (psi |_k gamma_i) rho(gamma_i)^{-1} e_mu, over an
    explicitly supplied representative list (the sum may depend on it).

    Returns the complex per-component slices; rationalize with
    rationalize_components once representative-independent combinations have
    been assembled."""
    target = np.zeros(max(a.order(), 1), dtype=complex)
    target[a.index_of(a.reduce(mu))] = 1
    return _induce_components(a, target, spec, _word_reps(reps), n_max)


def add_components(c1, c2):
    out = dict(c1)
    for lam, sl in c2.items():
        out[lam] = sl if lam not in out else out[lam] + sl
    return out
