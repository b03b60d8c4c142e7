"""Command-line front end.

Exit codes: 0 success/PASS, 1 verification FAIL, 2 usage error, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from pydantic import ValidationError

from . import pulse, transpile
from .circuit import Circuit, CouplingMap, depth, emit, gate_counts, parse, two_qubit_count, unitary_of, validate_connectivity
from .errors import EcrToffoliError
from .gates import get_gate, matrix_of
from .linalg import DEFAULT_TOL, equiv_up_to_global_phase, makhlin_invariants, overlap

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    """Bad file contents or unreadable input; maps to exit code 3."""


class UsageError(Exception):
    """Invalid option combination detected after parsing; maps to exit code 2."""


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ecrtoffoli", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("emit", help="write a catalog circuit")
    e.add_argument("--target", required=True, choices=list(transpile.CATALOG))
    e.add_argument("--out")

    t = sub.add_parser("transpile", help="rewrite a circuit into a native basis")
    t.add_argument("file")
    t.add_argument("--basis", default="ecr", choices=["ecr", "cx"])
    group = t.add_mutually_exclusive_group()
    group.add_argument("--coupling", help="built-in map, e.g. linear:3")
    group.add_argument("--coupling-file", help="JSON edge list")
    t.add_argument("--out")

    v = sub.add_parser("verify", help="compare a circuit with CCX, CCZ or another circuit")
    v.add_argument("file")
    v.add_argument("--against", required=True, help="ccx, ccz, or a .qc file")
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)

    s = sub.add_parser("stats", help="depth and gate counts")
    s.add_argument("file", nargs="?", default="-")

    pu = sub.add_parser("pulse", help="echoed cross-resonance error report")
    pu.add_argument("--coeffs", required=True, help="JSON with l_ix, l_zi, l_iz, l_zz, l_zx")
    pu.add_argument("--time", required=True, type=float)
    pu.add_argument("--calibrate", type=float, metavar="T_MAX")
    pu.add_argument("--json", action="store_true")

    i = sub.add_parser("invariants", help="Makhlin invariants of a two-qubit gate")
    src = i.add_mutually_exclusive_group(required=True)
    src.add_argument("file", nargs="?")
    src.add_argument("--gate")
    return p


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as f:
            return f.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_circuit(path: str) -> Circuit:
    return parse(_read_text(path))


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as f:
            f.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc.strerror}") from None


def parse_coupling(text: str) -> CouplingMap:
    kind, _, arg = text.partition(":")
    if kind != "linear" or not arg.isdigit() or int(arg) < 1:
        raise UsageError(f"unsupported coupling {text!r}; expected linear:N")
    return CouplingMap.linear(int(arg))


def load_coupling_file(path: str) -> CouplingMap:
    try:
        doc = json.loads(_read_text(path))
        if isinstance(doc, dict):
            edges = doc["edges"]
            n = doc.get("n_qubits")
        else:
            edges, n = doc, None
        edges = [tuple(int(x) for x in e) for e in edges]
        if n is None:
            n = 1 + max((max(e) for e in edges), default=0)
        return CouplingMap(int(n), edges)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad coupling file {path}: {exc}") from None


def cmd_emit(args) -> int:
    _write(emit(transpile.load_target(args.target)), args.out)
    return EXIT_OK


def cmd_transpile(args) -> int:
    c = _load_circuit(args.file)
    coupling = None
    if args.coupling:
        coupling = parse_coupling(args.coupling)
    elif args.coupling_file:
        coupling = load_coupling_file(args.coupling_file)
    out = transpile.rewrite_to_basis(c, transpile.BasisSpec(args.basis))
    if coupling is not None:
        if coupling.n_qubits < out.n_qubits:
            raise InputError(f"coupling map covers {coupling.n_qubits} qubits, circuit needs {out.n_qubits}")
        bad = validate_connectivity(out, coupling)
        if bad:
            for v in bad:
                print(f"violation: instruction {v.index} on qubits {v.qubits}", file=sys.stderr)
            return EXIT_FAIL
    _write(emit(out), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    c = _load_circuit(args.file)
    if args.against in ("ccx", "ccz"):
        want = matrix_of(args.against)
        label = args.against.upper()
    else:
        want = unitary_of(_load_circuit(args.against))
        label = args.against
    u = unitary_of(c)
    if u.shape != want.shape:
        raise InputError(f"{args.file} acts on {c.n_qubits} qubit(s); {label} has a different width")
    ok = equiv_up_to_global_phase(u, want, args.tol)
    print(f"{'PASS' if ok else 'FAIL'} |tr(U^dag V)|/dim = {overlap(u, want):.12g} (tol {args.tol:g}) vs {label}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_stats(args) -> int:
    c = _load_circuit(args.file)
    rows = [
        ("qubits", c.n_qubits),
        ("instructions", len(c)),
        ("depth", depth(c)),
        ("two-qubit", two_qubit_count(c)),
    ]
    rows += [(f"count {name}", n) for name, n in sorted(gate_counts(c).items())]
    width = max(len(k) for k, _ in rows)
    for k, val in rows:
        print(f"{k.ljust(width)}  {val}")
    return EXIT_OK


def cmd_pulse(args) -> int:
    if args.time < 0:
        raise UsageError("--time must be non-negative")
    if args.calibrate is not None and args.calibrate <= 0:
        raise UsageError("--calibrate needs a positive T_MAX")
    try:
        coeffs = pulse.PauliCoeffs.model_validate_json(_read_text(args.coeffs))
    except ValidationError as exc:
        raise InputError(f"bad coefficient file {args.coeffs}: {exc.errors()[0]['msg']}") from None
    report = pulse.gate_error_report(coeffs, args.time)
    calib = pulse.calibrate_time(coeffs, args.calibrate) if args.calibrate is not None else None
    if args.json:
        doc = report.to_dict()
        if calib is not None:
            doc["calibration"] = {"t_star": calib[0], "fidelity": calib[1]}
        print(json.dumps(doc, indent=2))
    else:
        text = report.format_text()
        if calib is not None:
            text += f"calibrated time       {calib[0]:.12g}\ncalibrated fidelity   {calib[1]:.12g}\n"
        sys.stdout.write(text)
    return EXIT_OK


def cmd_invariants(args) -> int:
    if args.gate:
        g = get_gate(args.gate)
        if g.arity != 2 or g.param_count:
            raise InputError(f"gate {args.gate!r} is not a fixed two-qubit gate")
        u = matrix_of(g)
    else:
        c = _load_circuit(args.file)
        if c.n_qubits != 2:
            raise InputError("invariants need a 2-qubit circuit")
        u = unitary_of(c)
    g1, g2 = makhlin_invariants(u)
    g1, g2 = complex(g1.real + 0.0, g1.imag + 0.0), g2 + 0.0
    print(f"g1  {g1.real:.12g} {'+' if g1.imag >= 0 else '-'} {abs(g1.imag):.12g}i")
    print(f"g2  {g2:.12g}")
    return EXIT_OK


COMMANDS = {
    "emit": cmd_emit,
    "transpile": cmd_transpile,
    "verify": cmd_verify,
    "stats": cmd_stats,
    "pulse": cmd_pulse,
    "invariants": cmd_invariants,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc} (see --help)", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, EcrToffoliError, ValidationError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
