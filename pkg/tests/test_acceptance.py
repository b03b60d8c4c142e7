"""Acceptance criteria 1-9.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion
is printed in the terminal summary) or directly as a script.
"""

import math
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from conftest import random_circuit
from ecrtoffoli.circuit import CouplingMap, emit, gate_counts, parse, two_qubit_count, unitary_of, validate_connectivity
from ecrtoffoli.gates import matrix_of
from ecrtoffoli.linalg import PAULI, equiv_up_to_global_phase, kron, makhlin_invariants, pauli, pauli_decompose
from ecrtoffoli.pulse import (
    PauliCoeffs,
    TransmonParams,
    build_device_hamiltonian,
    calibrate_time,
    echo_coefficients,
    echoed_unitary_analytic,
    echoed_unitary_numeric,
    static_zz,
    zx_rotation,
)
from ecrtoffoli.transpile import (
    CATALOG,
    ECR_BASIS,
    ccx_from_ccz,
    ccz_linear8,
    golden_text,
    load_target,
    rewrite_to_basis,
    synthesize_toffoli_ecr,
    toffoli_6cnot_ibm,
    toffoli_6cnot_nc,
    toffoli_ecr9,
    toffoli_linear,
)

CCX, CCZ = matrix_of("ccx"), matrix_of("ccz")
RESULTS: dict[int, tuple[bool, str]] = {}


def record(n, fn):
    try:
        detail = fn()
    except AssertionError as exc:
        RESULTS[n] = (False, str(exc) or "assertion failed")
        raise
    RESULTS[n] = (True, detail)


def check(cond, msg):
    if not cond:
        raise AssertionError(msg)


def criterion_1():
    start = time.perf_counter()
    cases = [(toffoli_linear(), CCX), (toffoli_6cnot_nc(), CCX), (toffoli_6cnot_ibm(), CCX), (ccz_linear8(), CCZ)]
    for c, target in cases:
        check(equiv_up_to_global_phase(unitary_of(c), target, 1e-10), "catalog circuit fails verification")
    elapsed = time.perf_counter() - start
    counts = [two_qubit_count(c) for c, _ in cases[1:]]
    check(counts == [6, 6, 8], f"two-qubit counts {counts}")
    check(elapsed < 1.0, f"runtime {elapsed:.3f}s")
    return f"4 circuits verified in {elapsed * 1e3:.1f} ms; CNOTs {counts}"


def criterion_2():
    s2 = math.sqrt(2)
    i2, x, y = PAULI["I"], PAULI["X"], PAULI["Y"]
    e13 = np.array([[0, 1, 0, 1j], [1, 0, -1j, 0], [0, 1j, 0, 1], [-1j, 0, 1, 0]]) / s2
    e14 = np.array([[0, 0, 1, 1j], [0, 0, 1j, 1], [1, -1j, 0, 0], [-1j, 1, 0, 0]]) / s2
    d13 = np.max(np.abs(e13 - (kron(i2, x) - kron(x, y)) / s2))
    d14 = np.max(np.abs(e14 - (kron(x, i2) - kron(y, x)) / s2))
    check(d13 <= 1e-12 and d14 <= 1e-12, f"matrix deviation {d13:.2e}, {d14:.2e}")
    check(np.max(np.abs(matrix_of("ecr") - e13)) <= 1e-12, "registry ecr differs from printed matrix")
    check(np.max(np.abs(matrix_of("ecr_rev") - e14)) <= 1e-12, "registry ecr_rev differs from printed matrix")
    g_ecr, g_cx, g_id = (makhlin_invariants(m) for m in (matrix_of("ecr"), matrix_of("cx"), np.eye(4)))
    check(abs(g_ecr[0] - g_cx[0]) <= 1e-12 and abs(g_ecr[1] - g_cx[1]) <= 1e-12, "ECR and CNOT invariants differ")
    check(abs(g_ecr[0] - g_id[0]) > 1e-6 or abs(g_ecr[1] - g_id[1]) > 1e-6, "ECR looks local")
    return f"matrix deviation {max(d13, d14):.1e}; invariants (g1, g2) = ({g_ecr[0].real:.3g}, {g_ecr[1]:.3g})"


def criterion_3():
    c = toffoli_ecr9()
    counts = gate_counts(c)
    check(counts.get("ecr") == 9, f"ecr count {counts.get('ecr')}")
    check(set(counts) - {"ecr"} <= {"rz", "sx", "x"}, f"one-qubit gates {sorted(set(counts) - {'ecr'})}")
    check(equiv_up_to_global_phase(unitary_of(c), CCX, 1e-10), "not equivalent to CCX")
    return f"9 ecr, {len(c)} instructions, equivalent to CCX"


def criterion_4():
    rng = np.random.default_rng(4)
    one_qubit = {"id", "x", "y", "z", "h", "s", "sdg", "t", "tdg", "sx", "rz"}
    circuits = [load_target(n) for n in CATALOG if n != "toffoli-ecr9"]
    circuits += [random_circuit(rng, 3, int(rng.integers(1, 30)), names=one_qubit | {"cx"}) for _ in range(100)]
    for c in circuits:
        out = rewrite_to_basis(c, ECR_BASIS)
        check(equiv_up_to_global_phase(unitary_of(out), unitary_of(c), 1e-9), "rewrite changed the unitary")
        n_ecr, n_cx = gate_counts(out).get("ecr", 0), gate_counts(c).get("cx", 0)
        check(n_ecr == n_cx, f"ecr count {n_ecr} != cx count {n_cx}")
    pipeline = rewrite_to_basis(ccx_from_ccz(ccz_linear8(), 2), ECR_BASIS)
    check(gate_counts(pipeline)["ecr"] == 8, "CCZ pipeline ecr count")
    check(equiv_up_to_global_phase(unitary_of(pipeline), CCX, 1e-9), "CCZ pipeline is not CCX")
    check(not validate_connectivity(pipeline, CouplingMap.linear(3)), "CCZ pipeline violates linear map")
    synth = synthesize_toffoli_ecr(CouplingMap.linear(3))
    check(gate_counts(synth)["ecr"] == 8, "linear synthesis ecr count")
    return f"{len(circuits)} circuits preserved; linear pipeline 8 ecr"


def _draws(rng, n):
    for _ in range(n):
        v = rng.uniform(-5, 5, 5)
        yield PauliCoeffs(l_ix=v[0], l_zi=v[1], l_iz=v[2], l_zz=v[3], l_zx=v[4]), rng.uniform(0, 2)


def criterion_5():
    rng = np.random.default_rng(5)
    start = time.perf_counter()
    worst = 0.0
    for c, t in _draws(rng, 1000):
        worst = max(worst, np.linalg.norm(echoed_unitary_analytic(c, t)[1] - echoed_unitary_numeric(c, t)))
    elapsed = time.perf_counter() - start
    check(worst <= 1e-9, f"max Frobenius distance {worst:.2e}")
    check(elapsed < 10, f"runtime {elapsed:.2f}s")
    return f"max distance {worst:.1e} over 1000 draws in {elapsed:.2f}s"


def criterion_6():
    rng = np.random.default_rng(6)
    worst_zi = worst_norm = worst_support = 0.0
    allowed = {"II", "IZ", "IY", "ZX"}
    for c, t in _draws(rng, 200):
        base = echoed_unitary_analytic(c, t)[1]
        base_num = echoed_unitary_numeric(c, t)
        for zi in rng.uniform(-10, 10, 3):
            other = c.model_copy(update={"l_zi": zi})
            worst_zi = max(worst_zi, np.max(np.abs(echoed_unitary_analytic(other, t)[1] - base)))
            worst_zi = max(worst_zi, np.max(np.abs(echoed_unitary_numeric(other, t) - base_num)))
        worst_norm = max(worst_norm, abs(echo_coefficients(c, t).norm2() - 1))
        d = pauli_decompose(base_num)
        worst_support = max(worst_support, max(abs(v) for k, v in d.coefficients.items() if k not in allowed))
    check(worst_zi <= 1e-12, f"ZI dependence {worst_zi:.2e}")
    check(worst_norm <= 1e-12, f"normalization error {worst_norm:.2e}")
    check(worst_support <= 1e-9, f"Pauli leakage {worst_support:.2e}")
    return f"ZI {worst_zi:.1e}, norm {worst_norm:.1e}, leakage {worst_support:.1e}"


def criterion_7():
    worst = 0.0
    for l_zx in (0.5, 1.0, 2.7):
        t, f = calibrate_time(PauliCoeffs(l_zx=l_zx), math.pi / l_zx)
        want = math.pi / (4 * l_zx)
        worst = max(worst, abs(t - want) / want)
        check(f >= 1 - 1e-10, f"fidelity {f!r}")
    check(worst <= 1e-6, f"t* relative error {worst:.2e}")
    xi = pauli("XI")
    echo = xi @ zx_rotation(-math.pi / 4) @ xi @ zx_rotation(math.pi / 4)
    d = np.max(np.abs(echo - zx_rotation(math.pi / 2)))
    check(d <= 1e-12, f"echo identity deviation {d:.2e}")
    return f"t* relative error {worst:.1e}; echo identity {d:.1e}"


def criterion_8():
    rng = np.random.default_rng(8)
    for _ in range(100):
        p = TransmonParams(
            eps=tuple(rng.uniform(3, 7, 2)),
            delta_res=tuple(rng.uniform(-0.5, 0, 2)),
            **{"lambda": rng.uniform(-0.1, 0.1)},
            drive_amp=rng.uniform(-1, 1),
            drive_freq=rng.uniform(0, 10),
            drive_phase=rng.uniform(-math.pi, math.pi),
            levels=int(rng.integers(2, 6)),
        )
        h = build_device_hamiltonian(p, rng.uniform(0, 50))
        check(np.max(np.abs(h - h.conj().T)) <= 1e-12, "device Hamiltonian not Hermitian")
    base = dict(eps=(5.0, 5.15), delta_res=(-0.33, -0.34))
    check(static_zz(TransmonParams(**base, **{"lambda": 0.0})) == 0.0, "static ZZ nonzero without coupling")
    z4 = static_zz(TransmonParams(**base, **{"lambda": 0.004}, levels=4))
    z5 = static_zz(TransmonParams(**base, **{"lambda": 0.004}, levels=5))
    rel = abs(z4 - z5) / abs(z5)
    check(rel <= 1e-6, f"truncation disagreement {rel:.2e}")
    return f"static ZZ {z5:.6e} (d=4 vs 5 relative {rel:.1e})"


def criterion_9():
    rng = np.random.default_rng(9)
    for _ in range(200):
        c = random_circuit(rng, int(rng.integers(1, 6)), int(rng.integers(0, 30)))
        check(parse(emit(c)).same_structure(c), "parse/emit round trip changed the circuit")
    files = sorted({f for f, _ in CATALOG.values()})
    for f in files:
        text = golden_text(f)
        check(emit(parse(text)) == text, f"{f} is not byte-stable")
    root = [sys.executable, "-m", "ecrtoffoli"]

    def code(*args, **kw):
        return subprocess.run(root + list(args), capture_output=True, text=True, **kw).returncode

    with tempfile.TemporaryDirectory() as d:
        ccz = Path(d, "ccz.qc")
        ccz.write_text(golden_text("ccz_linear8.qc"))
        nc = Path(d, "nc.qc")
        nc.write_text(golden_text("toffoli_6cnot_nc.qc"))
        bad = Path(d, "bad.qc")
        bad.write_text("qubits 2\nfoo 0\n")
        codes = (
            code("verify", str(ccz), "--against", "ccz"),
            code("verify", str(nc), "--against", "ccz"),
            code("verify", str(ccz)),
            code("verify", str(bad), "--against", "ccx"),
        )
    check(codes == (0, 1, 2, 3), f"exit codes {codes}")
    return f"200 round trips, {len(files)} golden files stable, exit codes {codes}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


def test_criterion_1_catalog():
    record(1, criterion_1)


def test_criterion_2_ecr_identities():
    record(2, criterion_2)


def test_criterion_3_nine_ecr_toffoli():
    record(3, criterion_3)


def test_criterion_4_basis_rewriting():
    record(4, criterion_4)


def test_criterion_5_echo_analytic_vs_numeric():
    record(5, criterion_5)


def test_criterion_6_echo_cancellation():
    record(6, criterion_6)


def test_criterion_7_calibration():
    record(7, criterion_7)


def test_criterion_8_device_hamiltonian():
    record(8, criterion_8)


def test_criterion_9_format_and_cli():
    record(9, criterion_9)


def summary_lines():
    return [f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}" for n, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for i, fn in enumerate(CRITERIA, start=1):
        try:
            record(i, fn)
        except AssertionError:
            pass
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
