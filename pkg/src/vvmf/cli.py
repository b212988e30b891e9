"""Batch front-end: run lattice reports, theta expansions, the quasi-pullback
verifier, and inductions from self-describing JSON scenario files.

Exit codes: 0 = pass, 1 = verification failure, 2 = input error.  Outputs
are deterministic byte-for-byte for a fixed config and seed.
"""

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import borcherds, fqm, induction, qexp, transfer
from .errors import VvmfError, InputError, WittConditionError
from .fqm import frac_str
from .lattice import build_embedding, parse_lattice_def
from .theta import theta_vv

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


def _parse_rational(s):
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except ValueError as exc:
        raise InputError(f"cannot parse rational {s!r}") from exc


def load_config(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc


def resolve_lattices(config):
    env = {}
    subs = {}
    if config.get("lattice_file"):
        from .lattice import load_lattice_file
        env, subs = load_lattice_file(config["lattice_file"])
    for name, spec in (config.get("lattices") or {}).items():
        env[name] = parse_lattice_def(spec, env)
    return env, subs


def get_lattice(config, env, key="lattice"):
    spec = config.get(key)
    if spec is None:
        raise InputError(f"config needs a {key!r} entry")
    return parse_lattice_def(spec, env)


def parse_form_spec(spec, env):
    """phi given as {"eta": {"1": -8, ...}, "theta_pow": [{"lattice": ..,
    "coset": [...], "power": k}, ...]}; also accepts the compact strings
    "eta:{1:-8,2:8}" and "theta_pow:{lattice:A1,power:k}"."""
    if isinstance(spec, str):
        spec = _parse_compact_form(spec)
    eta = None
    if spec.get("eta"):
        eta = induction.EtaQuotient(
            tuple((int(d), int(r)) for d, r in spec["eta"].items()))
    factors = []
    for th in spec.get("theta_pow") or []:
        lat = parse_lattice_def(th["lattice"], env)
        coset = tuple(int(x) for x in th.get("coset", ()))
        if len(coset) != len(lat.disc.module.orders):
            coset = lat.disc.module.zero()
        factors.append((lat, coset, int(th.get("power", 1))))
    return induction.ScalarFormSpec(eta=eta, theta_factors=tuple(factors))


def _parse_compact_form(s):
    out = {}
    for frag in s.split(";"):
        frag = frag.strip()
        if frag.startswith("eta:"):
            body = frag[4:].strip().strip("{}")
            out["eta"] = {}
            for pair in body.split(","):
                d, r = pair.split(":")
                out["eta"][d.strip()] = int(r)
        elif frag.startswith("theta_pow:"):
            body = frag[len("theta_pow:"):].strip().strip("{}")
            item = {}
            for pair in body.split(","):
                k, v = pair.split(":")
                item[k.strip()] = v.strip()
            out.setdefault("theta_pow", []).append(
                {"lattice": item["lattice"], "power": int(item.get("power", 1))})
        elif frag:
            raise InputError(f"cannot parse form fragment {frag!r}")
    return out


def load_input_form(config, env, n_max):
    """The vector-valued input form f: from a file, from an eta/theta spec
    over the trivial discriminant group, or via induction."""
    fspec = config.get("form")
    if fspec is None:
        raise InputError("config needs a 'form' entry")
    if "file" in fspec:
        return qexp.read_vvform(fspec["file"])
    lat = get_lattice(config, env)
    a_l = lat.disc.module
    if "ind" in fspec:
        scalar = parse_form_spec(fspec["ind"], env)
        d = int(fspec.get("d", a_l.level()))
        rng = random.Random(int(fspec.get("seed", 0)))
        return induction.induce(a_l, None, scalar, d, n_max,
                                check_transversal=rng)
    scalar = parse_form_spec(fspec, env)
    if a_l.order() != 1:
        raise InputError(
            "a scalar form spec needs a unimodular lattice; use 'ind'")
    series = induction.expand_spec(scalar, n_max)
    coeffs = {((), e): c for e, c in series.coeffs.items()}
    return qexp.VVForm(a_l, scalar.weight, coeffs, series.trunc, series.floor)


def _apply_perturbation(f, config):
    pert = config.get("perturb")
    if not pert:
        return f
    lam = tuple(int(x) for x in pert.get("component", ()))
    n = _parse_rational(str(pert["n"]))
    delta = _parse_rational(str(pert.get("delta", 1)))
    coeffs = dict(f.coeffs)
    key = (f.module.reduce(lam), n)
    coeffs[key] = coeffs.get(key, Fraction(0)) + delta
    return qexp.VVForm(f.module, f.weight, coeffs, f.trunc, f.floor)


def _out_path(args, default_name):
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        return out_dir / default_name
    return None


def _emit(text, path):
    if path is not None:
        Path(path).write_text(text)
    sys.stdout.write(text)


def cmd_lattice_info(args, config):
    env, _ = resolve_lattices(config)
    lat = get_lattice(config, env)
    disc = lat.disc
    a = disc.module
    report = {
        "rank": lat.rank,
        "signature": list(lat.signature),
        "det": lat.det,
        "discriminant_group": a.to_dict(),
        "order": a.order(),
        "signature_mod8": fqm.signature_mod8(a),
        "level": a.level(),
    }
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n",
          _out_path(args, "lattice_info.json"))
    return EXIT_PASS


def cmd_theta(args, config):
    env, _ = resolve_lattices(config)
    lat = get_lattice(config, env)
    n_max = args.nmax if args.nmax is not None else _parse_rational(
        str(config.get("n_max", 3)))
    form = theta_vv(lat, n_max)
    _emit(qexp.dumps_vvform(form), _out_path(args, "theta.json"))
    return EXIT_PASS


def cmd_qp_verify(args, config):
    env, subs = resolve_lattices(config)
    lat = get_lattice(config, env)
    k_basis = config.get("k_basis")
    if k_basis is None and config.get("k_sublattice"):
        key = (config["lattice"], config["k_sublattice"])
        k_basis = subs.get(key)
    if k_basis is None:
        raise InputError("config needs 'k_basis' rows (or a named "
                         "'k_sublattice' from the lattice file)")
    emb = build_embedding(lat, tuple(tuple(int(x) for x in row) for row in k_basis),
                          assert_witt=args.assert_witt)
    n_max = args.nmax if args.nmax is not None else _parse_rational(
        str(config.get("n_max", 3)))
    f = load_input_form(config, env, n_max + 1)
    g = borcherds.quasi_pullback_form(f, emb, n_max)
    f_checked = _apply_perturbation(f, config)
    report = borcherds.verify_main_theorem(f_checked, emb, n_max, g=g)
    _emit(report.to_json(), _out_path(args, "qp_report.json"))
    sys.stdout.write(report.to_table())
    if args.out:
        (Path(args.out) / "qp_form.json").write_text(qexp.dumps_vvform(g))
    return EXIT_PASS if report.verdict else EXIT_FAIL


def cmd_induce(args, config):
    env, _ = resolve_lattices(config)
    lat = get_lattice(config, env)
    a = lat.disc.module
    scalar = parse_form_spec(config.get("form"), env)
    d = int(config.get("d", max(a.level(), 1)))
    n_max = args.nmax if args.nmax is not None else _parse_rational(
        str(config.get("n_max", 1)))
    iso = None
    if config.get("isotropic"):
        iso = fqm.IsotropicSubgroup(
            a, tuple(tuple(int(x) for x in g) for g in config["isotropic"]))
    rng = random.Random(args.seed)
    form = induction.induce(a, iso, scalar, d, n_max, check_transversal=rng)
    _emit(qexp.dumps_vvform(form), _out_path(args, "induced.json"))
    return EXIT_PASS


COMMANDS = {
    "lattice-info": cmd_lattice_info,
    "theta": cmd_theta,
    "qp-verify": cmd_qp_verify,
    "induce": cmd_induce,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vvmf",
        description="exact Weil-representation calculus and quasi-pullback "
                    "verification for Borcherds products")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON scenario file")
    parser.add_argument("--nmax", type=_parse_rational, default=None,
                        help="truncation exponent (rational, e.g. 3 or 7/2)")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--assert-witt", action="store_true",
                        help="assert the Witt-index hypothesis when rank(M) <= 4")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for the random transversal check")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        return COMMANDS[args.command](args, config)
    except (InputError, WittConditionError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except VvmfError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL
    except (AssertionError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
