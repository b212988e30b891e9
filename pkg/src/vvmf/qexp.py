"""Truncated q-expansions with exact rational coefficients.

Every series carries an explicit validity window [floor, trunc]: coefficients
are complete for exponents in the window, unknown above trunc, and guaranteed
absent below floor.  Binary operations compute the guaranteed window of the
result from the operand windows and never silently extend it; trunc = None
means the expansion is known exactly at all orders (finite q-polynomials).

Exponents live in (1/denom) * Z.  Vector-valued forms additionally enforce
the support condition n = q(lambda) mod 1 on every stored coefficient.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import fqm
from .errors import ModuleMismatchError, TruncationError
from .fqm import FqModule, frac_str, parse_frac


def _lcm(a, b):
    return a * b // gcd(a, b)


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# --- scalar series -----------------------------------------------------------

@dataclass(frozen=True)
class ScalarQSeries:
    """sum c_e q^e with rational c_e, exponents in (1/denom) Z."""

    denom: int
    coeffs: dict
    trunc: object            # Fraction, or None for an exact expansion
    floor: Fraction = None   # guaranteed lower bound on all exponents

    def __post_init__(self):
        clean = {}
        lo = None
        for e, c in self.coeffs.items():
            e = Fraction(e)
            c = Fraction(c)
            if c == 0:
                continue
            assert self.denom % e.denominator == 0, f"exponent {e} off the 1/{self.denom} grid"
            if self.trunc is not None:
                assert e <= self.trunc, f"stored exponent {e} above trunc {self.trunc}"
            clean[e] = c
            lo = e if lo is None else min(lo, e)
        object.__setattr__(self, "coeffs", clean)
        if self.floor is None:
            fl = lo if lo is not None else (self.trunc if self.trunc is not None else Fraction(0))
            object.__setattr__(self, "floor", Fraction(fl))
        else:
            object.__setattr__(self, "floor", Fraction(self.floor))
            assert lo is None or lo >= self.floor
        if self.trunc is not None:
            object.__setattr__(self, "trunc", Fraction(self.trunc))

    def __getitem__(self, e):
        e = Fraction(e)
        if self.trunc is not None and e > self.trunc:
            raise TruncationError(f"coefficient at {e} is beyond trunc {self.trunc}")
        return self.coeffs.get(e, Fraction(0))

    def support(self):
        return sorted(self.coeffs)

    def min_exponent(self):
        return min(self.coeffs) if self.coeffs else None

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        assert self.denom == other.denom or True
        denom = _lcm(self.denom, other.denom)
        trunc = _min_trunc(self.trunc, other.trunc)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        if trunc is not None:
            out = {e: c for e, c in out.items() if e <= trunc}
        return ScalarQSeries(denom, out, trunc, min(self.floor, other.floor))

    def scaled(self, c):
        c = Fraction(c)
        return ScalarQSeries(self.denom, {e: c * v for e, v in self.coeffs.items()},
                             self.trunc, self.floor)

    def shifted(self, e0):
        """Multiply by q^{e0}."""
        e0 = Fraction(e0)
        denom = _lcm(self.denom, e0.denominator)
        return ScalarQSeries(
            denom, {e + e0: c for e, c in self.coeffs.items()},
            None if self.trunc is None else self.trunc + e0, self.floor + e0)

    def __mul__(self, other):
        if self.trunc is None:
            trunc = None if other.trunc is None else other.trunc + self.floor
        elif other.trunc is None:
            trunc = self.trunc + other.floor
        else:
            trunc = min(self.trunc + other.floor, other.trunc + self.floor)
        floor = self.floor + other.floor
        if trunc is not None and trunc < floor:
            raise TruncationError(f"truncation underflow: window [{floor}, {trunc}]")
        denom = _lcm(self.denom, other.denom)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if trunc is None or e <= trunc:
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
        return ScalarQSeries(denom, out, trunc, floor)

    def power(self, n):
        assert n >= 0
        out = one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def inverse(self):
        """Multiplicative inverse; the leading coefficient must be nonzero."""
        m = self.min_exponent()
        assert m is not None and self.floor == m, "leading term must be pinned"
        c0 = self.coeffs[m]
        rel_trunc = None if self.trunc is None else self.trunc - m
        # u = self / (c0 q^m) - 1 has positive relative exponents
        u = {e - m: c / c0 for e, c in self.coeffs.items() if e != m}
        inv_rel = {Fraction(0): Fraction(1)}
        if u:
            exps = sorted(u)
            step = min(exps)
            bound = rel_trunc
            if bound is None:
                # exact polynomial: the inverse is an infinite series; demand a window
                raise TruncationError("inverse of a polynomial needs a finite trunc")
            # recurrence: (1 + u) * inv_rel = 1
            grid = []
            e = step
            denom = _lcm(self.denom, step.denominator)
            k = 1
            while Fraction(k, denom) <= bound:
                grid.append(Fraction(k, denom))
                k += 1
            for e in grid:
                s = Fraction(0)
                for eu, cu in u.items():
                    if eu <= e:
                        s += cu * inv_rel.get(e - eu, Fraction(0))
                if s:
                    inv_rel[e] = -s
        out = {e - m: c / c0 for e, c in inv_rel.items()}
        trunc = None if rel_trunc is None else rel_trunc - m
        return ScalarQSeries(self.denom, out, trunc, -m)

    def truncated(self, new_trunc):
        new_trunc = Fraction(new_trunc)
        if self.trunc is not None:
            assert new_trunc <= self.trunc
        return ScalarQSeries(self.denom,
                             {e: c for e, c in self.coeffs.items() if e <= new_trunc},
                             new_trunc, self.floor)

    def __repr__(self):
        terms = [f"{c}*q^({e})" for e, c in sorted(self.coeffs.items())[:8]]
        tail = " + ..." if len(self.coeffs) > 8 else ""
        w = "oo" if self.trunc is None else str(self.trunc)
        return f"ScalarQSeries({' + '.join(terms) or '0'}{tail}; trunc={w})"


def one():
    return ScalarQSeries(1, {Fraction(0): Fraction(1)}, None, Fraction(0))


def monomial(e, c=1, trunc=None):
    e = Fraction(e)
    return ScalarQSeries(e.denominator, {e: Fraction(c)}, trunc, e)


def zero_series(trunc=None):
    return ScalarQSeries(1, {}, trunc, Fraction(0))


# --- vector-valued forms -------------------------------------------------------

@dataclass(frozen=True)
class VVForm:
    """Vector-valued q-expansion over a finite quadratic module.

    coeffs maps (element, exponent) to a rational; every stored exponent
    satisfies the support condition n = q(element) mod 1.
    """

    module: FqModule
    weight: Fraction
    coeffs: dict
    trunc: object
    floor: Fraction = None

    def __post_init__(self):
        object.__setattr__(self, "weight", Fraction(self.weight))
        clean = {}
        lo = None
        for (lam, n), c in self.coeffs.items():
            n = Fraction(n)
            c = Fraction(c)
            if c == 0:
                continue
            lam = self.module.reduce(lam)
            assert (n - self.module.q(lam)).denominator == 1, \
                f"support violation: exponent {n} at {lam} with q = {self.module.q(lam)}"
            if self.trunc is not None:
                assert n <= self.trunc
            clean[(lam, n)] = c
            lo = n if lo is None else min(lo, n)
        object.__setattr__(self, "coeffs", clean)
        if self.floor is None:
            fl = lo if lo is not None else (self.trunc if self.trunc is not None else Fraction(0))
            object.__setattr__(self, "floor", Fraction(fl))
        else:
            object.__setattr__(self, "floor", Fraction(self.floor))
            assert lo is None or lo >= self.floor
        if self.trunc is not None:
            object.__setattr__(self, "trunc", Fraction(self.trunc))

    def coefficient(self, lam, n):
        lam = self.module.reduce(lam)
        n = Fraction(n)
        if self.trunc is not None and n > self.trunc:
            raise TruncationError(f"coefficient at {n} beyond trunc {self.trunc}")
        return self.coeffs.get((lam, n), Fraction(0))

    def component(self, lam):
        """The scalar series f_lambda."""
        lam = self.module.reduce(lam)
        denom = self.module.q(lam).denominator
        out = {n: c for (mu, n), c in self.coeffs.items() if mu == lam}
        return ScalarQSeries(denom, out, self.trunc, self.floor)

    def components(self):
        return {lam: self.component(lam) for lam in self.module.elements()}

    def is_zero(self):
        return not self.coeffs


def same_module(a, b):
    """Structural identity of finite quadratic modules."""
    return a.orders == b.orders and a.q_gen == b.q_gen and a.gram == b.gram


def add(f, g):
    if not same_module(f.module, g.module):
        raise ModuleMismatchError("cannot add forms over different modules")
    if f.weight != g.weight:
        raise ModuleMismatchError(f"weight mismatch: {f.weight} != {g.weight}")
    trunc = _min_trunc(f.trunc, g.trunc)
    out = dict(f.coeffs)
    for k, c in g.coeffs.items():
        out[k] = out.get(k, Fraction(0)) + c
    if trunc is not None:
        out = {k: c for k, c in out.items() if k[1] <= trunc}
    return VVForm(f.module, f.weight, out, trunc, min(f.floor, g.floor))


def scale(c, f):
    c = Fraction(c)
    return VVForm(f.module, f.weight,
                  {k: c * v for k, v in f.coeffs.items()}, f.trunc, f.floor)


def mul_scalar_series(f, s, weight_shift=0):
    """Componentwise Cauchy product with a scalar series on the integer
    exponent lattice (so the support condition is preserved)."""
    if s.denom != 1 or any(e.denominator != 1 for e in s.coeffs):
        raise ModuleMismatchError(
            "scalar factor must have an integer exponent lattice")
    if f.trunc is None:
        trunc = None if s.trunc is None else s.trunc + f.floor
    elif s.trunc is None:
        trunc = f.trunc + s.floor
    else:
        trunc = min(f.trunc + s.floor, s.trunc + f.floor)
    floor = f.floor + s.floor
    if trunc is not None and trunc < floor:
        raise TruncationError(f"truncation underflow: window [{floor}, {trunc}]")
    out = {}
    for (lam, n), c in f.coeffs.items():
        for e, d in s.coeffs.items():
            m = n + e
            if trunc is None or m <= trunc:
                key = (lam, m)
                out[key] = out.get(key, Fraction(0)) + c * d
    return VVForm(f.module, f.weight + Fraction(weight_shift), out, trunc, floor)


def tensor(f, g):
    """Tensor product over the direct sum of the modules; weights add."""
    mod = fqm.direct_sum(f.module, g.module)
    if f.trunc is None:
        trunc = None if g.trunc is None else g.trunc + f.floor
    elif g.trunc is None:
        trunc = f.trunc + g.floor
    else:
        trunc = min(f.trunc + g.floor, g.trunc + f.floor)
    floor = f.floor + g.floor
    if trunc is not None and trunc < floor:
        raise TruncationError(f"truncation underflow: window [{floor}, {trunc}]")
    out = {}
    for (lam, a), c in f.coeffs.items():
        for (mu, b), d in g.coeffs.items():
            n = a + b
            if trunc is None or n <= trunc:
                key = (lam + mu, n)
                out[key] = out.get(key, Fraction(0)) + c * d
    return VVForm(mod, f.weight + g.weight, out, trunc, floor)


def principal_part(f):
    """All (lambda, n <= 0, c) with c != 0, sorted deterministically."""
    if f.trunc is not None and f.trunc < 0:
        raise TruncationError("principal part needs trunc >= 0")
    return sorted(((lam, n, c) for (lam, n), c in f.coeffs.items() if n <= 0),
                  key=lambda t: (t[1], t[0]))


def is_integral_principal_part(f):
    return all(c.denominator == 1 for _, _, c in principal_part(f))


def constant_term_even(f):
    c = f.coefficient(f.module.zero(), 0)
    return c.denominator == 1 and c.numerator % 2 == 0


def check_minus_symmetry(f):
    """c_lambda(n) == c_{-lambda}(n) for all stored coefficients.

    Only meaningful in the Borcherds-compatible case weight = 1 - b/2 with
    sigma(A) = 2 - b mod 8; raises otherwise.
    """
    two_k = 2 * f.weight
    if two_k.denominator != 1:
        raise ModuleMismatchError("weight must be half-integral")
    b = 2 - int(two_k)  # weight = 1 - b/2
    sigma = fqm.signature_mod8(f.module)
    if sigma != (2 - b) % 8:
        raise ModuleMismatchError(
            f"sigma(A) = {sigma} incompatible with weight {f.weight}")
    mod = f.module
    return all(c == f.coeffs.get((mod.neg(lam), n), Fraction(0))
               for (lam, n), c in f.coeffs.items())


# --- serialization --------------------------------------------------------------

def vvform_to_dict(f):
    entries = sorted(
        ([list(lam), n.numerator, n.denominator, c.numerator, c.denominator]
         for (lam, n), c in f.coeffs.items()),
        key=lambda r: (r[0], Fraction(r[1], r[2])))
    return {
        "module": f.module.to_dict(),
        "weight": frac_str(f.weight),
        "trunc": None if f.trunc is None else frac_str(f.trunc),
        "floor": frac_str(f.floor),
        "entries": entries,
    }


def vvform_from_dict(d):
    mod = FqModule.from_dict(d["module"])
    coeffs = {}
    for lam, n_num, n_den, c_num, c_den in d["entries"]:
        coeffs[(tuple(lam), Fraction(n_num, n_den))] = Fraction(c_num, c_den)
    trunc = None if d["trunc"] is None else parse_frac(d["trunc"])
    return VVForm(mod, parse_frac(d["weight"]), coeffs, trunc,
                  parse_frac(d["floor"]))


def write_vvform(f, path):
    with open(path, "w") as fh:
        fh.write(dumps_vvform(f))


def dumps_vvform(f):
    return json.dumps(vvform_to_dict(f), sort_keys=True, separators=(",", ":")) + "\n"


def read_vvform(path):
    with open(path) as fh:
        return vvform_from_dict(json.load(fh))
