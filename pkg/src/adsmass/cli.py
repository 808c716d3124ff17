"""Command-line front end: JSON in, JSON out.

Exit codes: 0 on success, 1 when a check fails or the input falls outside
an operation's domain (for example a charge set whose energy matrix is not
positive semi-definite), 2 for malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from . import clifford as cl
from . import geometry as geo
from . import killing_sets as ks
from . import mass as rm
from . import so32
from .errors import AdsMassError
from .verify import SUITES, run_suites


class InputError(Exception):
    pass


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path!r}: {exc}") from exc


def _killing(args):
    return so32.KillingField.from_json(_read_json(args.input))


def _charges(args):
    return so32.ConservedCharges.from_json(_read_json(args.input))


def parse_complex(text: str) -> complex:
    """'a+bi' style numbers; a bare i means 1i."""
    s = text.strip().replace(" ", "")
    s = re.sub(r"(^|[+-])i", r"\g<1>1i", s).replace("i", "j")
    try:
        return complex(s)
    except ValueError as exc:
        raise InputError(f"bad complex number {text!r}") from exc


def parse_spinor_flag(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 4:
        raise InputError("--psi needs 4 comma-separated components")
    return np.array([parse_complex(p) for p in parts])


def _spinor_from_json(obj) -> np.ndarray:
    if isinstance(obj, dict):
        obj = obj.get("psi")
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError("spinor must be 4 [re, im] pairs") from exc
    if arr.shape != (4, 2):
        raise InputError("spinor must be 4 [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def spinor_to_json(psi) -> list:
    return [[float(z.real), float(z.imag)] for z in psi]


# ---------------------------------------------------------------------------
# commands; each returns (payload, exit code)

def cmd_mass(args):
    mu = _charges(args)
    report = rm.rest_mass(mu, tol=args.tol)
    out = report.to_json()
    if args.budget:
        out["m_numeric"] = rm.rest_mass_numeric(mu, budget=args.budget, seed=args.seed, tol=args.tol)
    return out, 0


def cmd_invariants(args):
    mu = _charges(args)
    inv = so32.invariants(mu)
    t2, t4 = rm.casimir_traces(mu)
    return {"alpha": inv.alpha, "beta": inv.beta, "t2": t2, "t4": t4}, 0


def _membership(report):
    return report.to_json(), 0 if report.member else 1


def cmd_check_observer(args):
    return _membership(ks.is_observer(_killing(args), tol=args.tol))


def cmd_check_spinor(args):
    return _membership(ks.is_spinor_killing(_killing(args), tol=args.tol))


def cmd_spinor_map(args):
    if args.psi is not None:
        psi = parse_spinor_flag(args.psi)
    elif args.input is not None:
        psi = _spinor_from_json(_read_json(args.input))
    else:
        raise InputError("spinor-map needs --psi or an input file")
    return cl.spinor_to_killing(psi).to_json(), 0


def cmd_spinor_preimage(args):
    K = _killing(args)
    psi = cl.spinor_preimage(K, tol=args.tol)
    back = cl.spinor_to_killing(psi)
    return {"psi": spinor_to_json(psi),
            "round_trip_error": float(np.max(np.abs(back.vector - K.vector)))}, 0


def cmd_hull_decompose(args):
    return ks.hull_decompose(_killing(args), tol=args.tol).to_json(), 0


def cmd_hull_witness(args):
    K, cert = ks.hull_witness()
    return {"K": K.to_json(), "certificate": cert}, 0


def cmd_energy_matrix(args):
    return rm.energy_matrix(_charges(args)).to_json(), 0


def cmd_min_norm(args):
    K = _killing(args)
    value = geo.min_norm(K, starts=args.samples, seed=args.seed, rmax=args.rmax)
    return {"min_norm": value, "closed_form": geo.closed_form_min_norm(K)}, 0


def cmd_verify(args):
    results = run_suites(args.suite, seed=args.seed, samples=args.samples)
    ok = all(c.passed for rows in results.values() for c in rows)
    for name, rows in results.items():
        for c in rows:
            rel = ">=" if c.at_least else "<="
            print(f"{'PASS' if c.passed else 'FAIL'}  {name:9s} {c.name:45s} {c.residual:.3e} {rel} {c.tol:.0e}",
                  file=sys.stderr)
    payload = {"passed": ok, "seed": args.seed, "samples": args.samples,
               "suites": {n: [c.to_json() for c in rows] for n, rows in results.items()}}
    return payload, 0 if ok else 1


COMMANDS = {
    "mass": (cmd_mass, "rest mass of a charge set", True),
    "invariants": (cmd_invariants, "alpha, beta and the Casimir traces", True),
    "check-observer": (cmd_check_observer, "membership in the observer set", True),
    "check-spinor": (cmd_check_spinor, "membership in the spinor field set", True),
    "spinor-map": (cmd_spinor_map, "Killing field of a spinor", False),
    "spinor-preimage": (cmd_spinor_preimage, "a spinor mapping to the given field", True),
    "hull-decompose": (cmd_hull_decompose, "observer field as a positive sum of spinor fields", True),
    "hull-witness": (cmd_hull_witness, "spinor field outside the observer hull", None),
    "energy-matrix": (cmd_energy_matrix, "the energy matrix Q and its eigenvalues", True),
    "min-norm": (cmd_min_norm, "numerical minimum of -<K, K> on AdS", True),
    "verify": (cmd_verify, "run the seeded invariant suites", None),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="adsmass",
        description="Rest mass of AdS conserved charges and checks of the algebra behind it. "
                    "Inputs are JSON files (or - for stdin); outputs are JSON on stdout.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, helptext, needs_input) in COMMANDS.items():
        p = sub.add_parser(name, help=helptext)
        if needs_input is True:
            p.add_argument("input", help="JSON file, or - for stdin")
        elif needs_input is False:
            p.add_argument("input", nargs="?", help="JSON file with 4 [re, im] pairs, or -")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        p.add_argument("--samples", type=int, default=1000,
                       help="sample count; random starts for min-norm (default 1000)")
        p.add_argument("--budget", type=int, default=0,
                       help="mass: also run the sampled infimum with this many observers")
        p.add_argument("--tol", type=float, default=1e-9, help="tolerance (default 1e-9)")
        p.add_argument("--rmax", type=float, default=10.0, help="radial cap for static-chart starts")
        p.add_argument("--psi", help='spinor as "a+bi,c+di,..." (spinor-map)')
        p.add_argument("--suite", choices=[*SUITES, "all"], default="all", help="verify suite")
    return parser


def emit(payload):
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    handler = COMMANDS[args.command][0]
    try:
        payload, code = handler(args)
    except AdsMassError as exc:
        emit({"error": exc.code, "message": str(exc), **exc.details})
        return 1
    except (InputError, ValueError, TypeError) as exc:
        emit({"error": "InputError", "message": str(exc)})
        return 2
    emit(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
