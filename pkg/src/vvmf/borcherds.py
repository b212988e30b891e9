"""Borcherds-product descriptors and the quasi-pullback verifier.

A Borcherds lift is represented combinatorially: its weight c_0(0)/2 and its
Heegner-divisor multiplicity table, read off the principal part of the input
form.  Divisor equality is equality of tables; the multiplicative constant in
the lift is invisible by design.  The verifier checks that the contraction
pipeline reproduces the predicted weight and, cell by cell, the coefficient
identity relating the contracted form to vector counts in K(-1)^vee.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import qexp, transfer
from .errors import BorcherdsInputError, InputError
from .fqm import frac_str
from .qexp import VVForm
from .theta import ShortVectorQuery, short_vectors


@dataclass(frozen=True)
class BorcherdsDescriptor:
    """Weight and Heegner-divisor data of a Borcherds lift.

    divisor maps (lambda mod +-1, n < 0) to the integer multiplicity
    c_lambda(n); classes are stored once per {lambda, -lambda} pair.
    """

    signature: tuple
    weight: Fraction
    divisor: dict
    source_trunc: object

    def divisor_items(self):
        return sorted(self.divisor.items(), key=lambda kv: (kv[0][1], kv[0][0]))


def _weight_hypothesis(f):
    sig = f.module.source_signature
    if sig is None or sig[0] != 2:
        raise BorcherdsInputError(
            "module must come from a lattice of signature (2, b)")
    b = sig[1]
    if f.weight != 1 - Fraction(b, 2):
        raise BorcherdsInputError(
            f"weight {f.weight} != 1 - b/2 = {1 - Fraction(b, 2)}")
    return b


def descriptor(f):
    """Weight + divisor table of the Borcherds lift of f.

    Hypotheses checked: weight 1 - b/2, integral principal part, c_0(0) even,
    and the minus-symmetry c_lambda = c_{-lambda} used to fold the table.
    """
    _weight_hypothesis(f)
    if not qexp.is_integral_principal_part(f):
        raise BorcherdsInputError("principal part is not integral")
    if not qexp.constant_term_even(f):
        raise BorcherdsInputError("constant term c_0(0) is not even")
    if not qexp.check_minus_symmetry(f):
        raise BorcherdsInputError("c_lambda(n) != c_{-lambda}(n)")
    mod = f.module
    table = {}
    for lam, n, c in qexp.principal_part(f):
        if n >= 0:
            continue
        rep = min(lam, mod.neg(lam))
        key = (rep, n)
        if key in table:
            assert table[key] == int(c)
        else:
            table[key] = int(c)
    c00 = f.coefficient(mod.zero(), 0)
    return BorcherdsDescriptor(
        signature=mod.source_signature,
        weight=c00 / 2,
        divisor=table,
        source_trunc=f.trunc)


def _principal_floor(f):
    neg = [n for (_, n) in f.coeffs if n < 0]
    return min(neg) if neg else Fraction(0)


def _primitive_dual_generator(emb, l_coords):
    """Generator of (Q l) cap L^vee, in rational L-coordinates."""
    v = emb.K_neg.to_ambient(l_coords)
    gram = emb.L.gram
    n = emb.L.rank
    pairings = [sum(Fraction(v[i]) * gram[i][j] for i in range(n)) for j in range(n)]
    den = 1
    for p in pairings:
        den = den * p.denominator // math.gcd(den, p.denominator)
    nums = [int(p * den) for p in pairings]
    g = 0
    for x in nums:
        g = math.gcd(g, x)
    assert g > 0
    # t*v in L^vee iff t*(v, e_j) all integral iff t in (den/g) Z
    t = Fraction(den, g)
    return tuple(t * Fraction(c) for c in v)


def r_order(f, emb, l_coords):
    """Order of the Borcherds lift along l^perp for a primitive l in K(-1):
    the sum of c_{w+L}(q(w)) over w in (Q l) cap L^vee, w != 0 mod +-1."""
    l_coords = tuple(int(x) for x in l_coords)
    from ._intlinalg import snf_diagonal
    divisors = snf_diagonal([list(l_coords)])
    if divisors != [1]:
        raise InputError(f"{l_coords} is not primitive in K(-1)")
    gen = _primitive_dual_generator(emb, l_coords)
    n_min = _principal_floor(f)
    total = 0
    k = 1
    while True:
        w = tuple(k * c for c in gen)
        qw = emb.L.qform(w)
        assert qw < 0
        if qw < n_min:
            break
        lam = emb.A_L.to_class(w)
        total += int(f.coefficient(lam, qw))
        k += 1
    return total


def _dual_vectors_with_q_at_least(emb, lower):
    """All nonzero v in K(-1)^vee with q(v) >= lower, as rational coordinate
    rows w.r.t. the K basis (excluding 0).  Enumerated on the positive-
    definite partner K where the same vectors have q_K(v) <= -lower."""
    if lower >= 0:
        return []
    bound = -2 * lower  # (v,v)_K <= bound
    k_lat = emb.K
    out = []
    for lam in k_lat.disc.module.elements():
        rep = k_lat.disc.lift(lam)
        for v, norm in short_vectors(ShortVectorQuery(k_lat, rep, bound)):
            if any(v):
                out.append((v, -norm / 2))  # q in K(-1)
    return out


def _canonical_sign(v):
    for c in v:
        if c > 0:
            return v
        if c < 0:
            return tuple(-x for x in v)
    return v


def predicted_qp_weight(f, emb):
    """wt(Psi) + sum of r(l) over primitive +-l of K(-1); cross-checked
    against the ungrouped sum of c_{v+L}(q(v)) over nonzero +-v in K(-1)^vee.
    """
    desc = descriptor(f)
    n_min = _principal_floor(f)
    vectors = _dual_vectors_with_q_at_least(emb, n_min)
    # route A: group the dual vectors by primitive direction and sum r(l)
    directions = {}
    for v, _ in vectors:
        den = 1
        for c in v:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in v]
        g = 0
        for x in ints:
            g = math.gcd(g, x)
        prim = _canonical_sign(tuple(x // g for x in ints))
        directions[prim] = None
    route_a = desc.weight
    for prim in directions:
        route_a += r_order(f, emb, prim)
    # route B: direct sum over vectors mod +-1
    route_b = desc.weight
    for v, qv in vectors:
        if _canonical_sign(v) != v:
            continue
        if not emb.A_L.in_dual(emb.K_neg.to_ambient(v)):
            continue  # classes absent from A_L contribute nothing
        lam = emb.A_L.to_class(emb.K_neg.to_ambient(v))
        route_b += int(f.coefficient(lam, qv))
    if route_a != route_b:
        raise AssertionError(
            f"weight formulas disagree: {route_a} (per-direction orders) vs "
            f"{route_b} (dual-vector sum): enumeration bug")
    return route_a


def quasi_pullback_form(f, emb, n_max=None):
    """g = <f-up, Theta_K>, the input form whose Borcherds lift is the
    quasi-pullback; weight 1 - (b - rk K)/2."""
    b = _weight_hypothesis(f)
    if not qexp.is_integral_principal_part(f):
        raise BorcherdsInputError("principal part is not integral")
    if not qexp.constant_term_even(f):
        raise BorcherdsInputError("constant term c_0(0) is not even")
    if n_max is None:
        n_max = f.trunc
    up = transfer.pull_up_emb(f, emb)
    g = transfer.theta_contract(up, emb.K, n_max)
    assert g.weight == 1 - Fraction(b - emb.K_neg.rank, 2)
    assert qexp.is_integral_principal_part(g)
    assert qexp.constant_term_even(g)
    return g


@dataclass
class QPReport:
    """Outcome of the quasi-pullback verification."""

    predicted_weight: Fraction
    lifted_weight: Fraction
    weights_match: bool
    coefficient_checks: list = field(default_factory=list)
    # entries: (mu, exponent, lhs, rhs, ok)

    @property
    def verdict(self):
        return self.weights_match and all(ok for *_, ok in self.coefficient_checks)

    def mismatches(self):
        return [row for row in self.coefficient_checks if not row[-1]]

    def to_dict(self):
        return {
            "verdict": "pass" if self.verdict else "fail",
            "predicted_weight": frac_str(self.predicted_weight),
            "lifted_weight": frac_str(self.lifted_weight),
            "weights_match": self.weights_match,
            "coefficient_checks": [
                {"mu": list(mu), "n": frac_str(n), "lhs": frac_str(lhs),
                 "rhs": frac_str(rhs), "ok": ok}
                for mu, n, lhs, rhs, ok in self.coefficient_checks],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_table(self):
        lines = [
            f"predicted weight : {self.predicted_weight}",
            f"lifted weight    : {self.lifted_weight}"
            f"  [{'ok' if self.weights_match else 'MISMATCH'}]",
            f"coefficient cells: {len(self.coefficient_checks)}"
            f" ({len(self.mismatches())} mismatches)",
        ]
        lines.append(f"{'mu':>12} {'n':>8} {'lhs':>12} {'rhs':>12}  ok")
        for mu, n, lhs, rhs, ok in self.coefficient_checks:
            lines.append(f"{str(list(mu)):>12} {str(n):>8} {str(lhs):>12} "
                         f"{str(rhs):>12}  {'ok' if ok else 'MISMATCH'}")
        lines.append(f"verdict: {'pass' if self.verdict else 'fail'}")
        return "\n".join(lines) + "\n"


def verify_main_theorem(f, emb, n_max, g=None):
    """Check that the quasi-pullback pipeline reproduces both the predicted
    weight and the coefficient identity, cell by cell.

    The left side of each cell is a coefficient of g = <f-up, Theta_K>
    (computed through the series pipeline); the right side is recomputed
    independently from f-up and a fresh vector enumeration:
        c_mu(l) = sum over v in K(-1)^vee of c^{L'}_{(mu, v)}(l + q(v)).
    Failures are report content, not exceptions.
    """
    n_max = Fraction(n_max)
    if f.trunc is None or f.trunc < n_max:
        raise InputError(f"f must be known up to {n_max} (trunc = {f.trunc})")
    if g is None:
        g = quasi_pullback_form(f, emb, n_max)
    predicted = predicted_qp_weight(f, emb)
    lifted = descriptor(g).weight
    report = QPReport(predicted_weight=predicted, lifted_weight=lifted,
                      weights_match=(predicted == lifted))

    up = transfer.pull_up_emb(f, emb)
    floor_f = min(f.floor, Fraction(0))
    # all dual vectors that can contribute at any checked cell
    vectors = [((0,) * emb.K_neg.rank, Fraction(0))]
    vectors += _dual_vectors_with_q_at_least(emb, floor_f - n_max)
    by_class = {}
    for v, qv in vectors:
        lam = emb.A_K.to_class(v)  # A_{K(-1)} shares coordinates with A_K
        by_class.setdefault(lam, []).append(qv)

    a_m = emb.A_M.module
    for mu in a_m.elements():
        base = a_m.q(mu)
        n = base + math.floor(floor_f - base)
        while n <= n_max:
            lhs = g.coefficient(mu, n)
            rhs = Fraction(0)
            for lam, qvs in by_class.items():
                mu_lp = mu + lam  # join of components in A_{L'} coordinates
                for qv in qvs:
                    # e = n + q(v) <= n <= n_max <= trunc of f-up
                    rhs += up.coefficient(mu_lp, n + qv)
            ok = lhs == rhs
            report.coefficient_checks.append((mu, n, lhs, rhs, ok))
            n += 1
    return report
