"""Toffoli decomposition catalog and rewriting into the {ecr, rz, sx} basis."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Sequence

import numpy as np

from .circuit import (
    Circuit,
    CouplingMap,
    Instruction,
    depth,
    emit,
    gate_counts,
    parse,
    two_qubit_count,
    unitary_of,
    validate_connectivity,
)
from .errors import (
    NoFeasibleDecomposition,
    NotUnitary,
    SearchFailed,
    UnsupportedGate,
    VerificationFailed,
)
from .gates import get_gate, matrix_of, rz_matrix
from .linalg import dagger, equiv_up_to_global_phase, is_unitary

log = logging.getLogger(__name__)

CCX = matrix_of("ccx")
CCZ = matrix_of("ccz")
SX = matrix_of("sx")
VERIFY_TOL = 1e-10

# CLI target name -> (golden file, matrix it must implement)
CATALOG = {
    "toffoli-linear": ("toffoli_linear.qc", "ccx"),
    "toffoli-6cnot-nc": ("toffoli_6cnot_nc.qc", "ccx"),
    "toffoli-6cnot-ibm": ("toffoli_6cnot_ibm.qc", "ccx"),
    "ccz-linear8": ("ccz_linear8.qc", "ccz"),
    "toffoli-ecr9": ("toffoli_ecr9.qc", "ccx"),
}

# qubit pairs of the chain the nine-ECR circuit is laid out on
ECR9_COUPLING = CouplingMap.linear(3)


def golden_text(filename: str) -> str:
    return resources.files(__package__).joinpath("circuits").joinpath(filename).read_text()


@lru_cache(maxsize=None)
def _golden(filename: str) -> Circuit:
    return parse(golden_text(filename))


def verify(c: Circuit, target: str | np.ndarray, tol: float = VERIFY_TOL) -> bool:
    want = matrix_of(target) if isinstance(target, str) else target
    return equiv_up_to_global_phase(unitary_of(c), want, tol)


def load_target(name: str) -> Circuit:
    """Catalog circuit by CLI name, e.g. ``"toffoli-6cnot-nc"``."""
    try:
        filename, _ = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown target {name!r}; choose from {', '.join(CATALOG)}") from None
    return _golden(filename)


def toffoli_linear() -> Circuit:
    return _golden("toffoli_linear.qc")


def toffoli_6cnot_nc() -> Circuit:
    return _golden("toffoli_6cnot_nc.qc")


def toffoli_6cnot_ibm() -> Circuit:
    return _golden("toffoli_6cnot_ibm.qc")


def ccz_linear8() -> Circuit:
    return _golden("ccz_linear8.qc")


def toffoli_ecr9() -> Circuit:
    c = _golden("toffoli_ecr9.qc")
    if not verify(c, "ccx"):
        raise VerificationFailed("toffoli_ecr9.qc does not implement CCX")
    return c


def ccx_from_ccz(ccz_circuit: Circuit, target: int = 2) -> Circuit:
    """Conjugate the target wire with Hadamards, turning a CCZ into a CCX."""
    if not verify(ccz_circuit, "ccz"):
        raise VerificationFailed("input circuit is not a CCZ")
    h = Instruction("h", (target,))
    n = ccz_circuit.n_qubits
    out = Circuit(n, (h, *ccz_circuit.instructions, h))
    if not verify(out, _target_ccx(n, target)):
        raise VerificationFailed("conjugated circuit is not a CCX")
    return out


def _target_ccx(n: int, target: int) -> np.ndarray:
    controls = [q for q in range(3) if q != target]
    return unitary_of(Circuit(n, [Instruction("ccx", (*controls, target))]))


# ---------------------------------------------------------------------------
# one-qubit Euler form


@dataclass(frozen=True)
class EulerAngles:
    """``exp(i*phase) * Rz(alpha) @ SX @ Rz(beta) @ SX @ Rz(gamma)``."""

    alpha: float
    beta: float
    gamma: float
    phase: float = 0.0

    def matrix(self) -> np.ndarray:
        return np.exp(1j * self.phase) * (
            rz_matrix(self.alpha) @ SX @ rz_matrix(self.beta) @ SX @ rz_matrix(self.gamma)
        )


def wrap_angle(x: float) -> float:
    """Map an angle into (-pi, pi]."""
    y = math.pi - ((math.pi - x) % (2 * math.pi))
    return math.pi if y <= -math.pi else y


def _zyz(u: np.ndarray) -> tuple[float, float, float]:
    v = u / np.sqrt(np.linalg.det(u))
    theta = 2 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    plus = 2 * np.angle(v[1, 1]) if abs(v[1, 1]) > 1e-15 else 0.0
    minus = 2 * np.angle(v[1, 0]) if abs(v[1, 0]) > 1e-15 else 0.0
    return theta, (plus + minus) / 2, (plus - minus) / 2


def euler_decompose_1q(u) -> EulerAngles:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u):
        raise NotUnitary("euler_decompose_1q needs a 2x2 unitary")
    theta, phi, lam = _zyz(u)
    zyz = [(phi, lam)]
    if abs(math.cos(theta / 2)) < 1e-12:
        # at theta = pi only phi - lam is fixed; try the shifts that zero an outer angle
        d = phi - lam
        zyz += [(-math.pi, -math.pi - d), (0.0, -d)]
    # Rz(phi) Ry(theta) Rz(lam) ~ Rz(phi + pi) SX Rz(theta + pi) SX Rz(lam); the
    # second branch uses Ry(theta) ~ Rz(pi) Ry(-theta) Rz(pi).
    branches = [(p + math.pi, theta + math.pi, q) for p, q in zyz]
    branches += [(p, math.pi - theta, q + math.pi) for p, q in zyz]
    candidates = []
    for a, b, g in branches:
        a, b, g = wrap_angle(a), wrap_angle(b), wrap_angle(g)
        core = EulerAngles(a, b, g).matrix()
        phase = float(np.angle(np.trace(dagger(core) @ u)))
        candidates.append(EulerAngles(a, b, g, phase))
    best = min(candidates, key=lambda e: (abs(e.alpha) + abs(e.beta) + abs(e.gamma)))
    return best


def _is_identity(u: np.ndarray, tol: float = 1e-12) -> bool:
    return equiv_up_to_global_phase(u, np.eye(2), tol)


def _rz_angle(u: np.ndarray) -> float:
    return wrap_angle(float(np.angle(u[1, 1]) - np.angle(u[0, 0])))


def synthesize_1q(u: np.ndarray, qubit: int, allow_x: bool = False) -> list[Instruction]:
    """Shortest rz/sx sequence (in time order) for a one-qubit unitary, up to phase."""
    if _is_identity(u):
        return []
    if abs(u[0, 1]) <= 1e-12 and abs(u[1, 0]) <= 1e-12:
        return [Instruction("rz", (qubit,), (_rz_angle(u),))]
    if allow_x and abs(u[0, 0]) <= 1e-12 and abs(u[1, 1]) <= 1e-12:
        theta = wrap_angle(float(np.angle(u[1, 0]) - np.angle(u[0, 1])))
        return _drop_zero([Instruction("x", (qubit,)), Instruction("rz", (qubit,), (theta,))])
    if abs(abs(u[0, 0]) - abs(u[0, 1])) <= 1e-12:
        # Rz(a) SX Rz(b) has equal-magnitude entries
        a = wrap_angle(float(np.angle(u[1, 0]) - np.angle(u[0, 0])) + math.pi / 2)
        b = wrap_angle(float(np.angle(u[1, 1]) - np.angle(u[0, 0])) - a)
        if equiv_up_to_global_phase(rz_matrix(a) @ SX @ rz_matrix(b), u, 1e-12):
            return _drop_zero(
                [Instruction("rz", (qubit,), (b,)), Instruction("sx", (qubit,)), Instruction("rz", (qubit,), (a,))]
            )
    e = euler_decompose_1q(u)
    return _drop_zero(
        [
            Instruction("rz", (qubit,), (e.gamma,)),
            Instruction("sx", (qubit,)),
            Instruction("rz", (qubit,), (e.beta,)),
            Instruction("sx", (qubit,)),
            Instruction("rz", (qubit,), (e.alpha,)),
        ]
    )


def _drop_zero(insts: list[Instruction]) -> list[Instruction]:
    return [i for i in insts if not (i.gate == "rz" and abs(wrap_angle(i.params[0])) <= 1e-12)]


# ---------------------------------------------------------------------------
# CNOT <-> ECR


@dataclass(frozen=True)
class EcrCorrection:
    """One-qubit corrections around a single ECR that together act as CNOT(c, t).

    Gate words are in time order. With ``flipped`` the ECR is applied as
    ``ecr t c`` instead of ``ecr c t``.
    """

    pre_control: tuple[tuple[str, tuple[float, ...]], ...]
    pre_target: tuple[tuple[str, tuple[float, ...]], ...]
    post_control: tuple[tuple[str, tuple[float, ...]], ...]
    post_target: tuple[tuple[str, tuple[float, ...]], ...]
    flipped: bool = False

    def slots(self):
        return (self.pre_control, self.pre_target, self.post_control, self.post_target)

    def size(self) -> int:
        return sum(len(w) for w in self.slots())


_ALPHABET = (
    ("rz", (math.pi / 2,)),
    ("rz", (math.pi,)),
    ("rz", (3 * math.pi / 2,)),
    ("sx", ()),
    ("x", ()),
)


def _word_matrix(word) -> np.ndarray:
    m = np.eye(2, dtype=complex)
    for name, params in word:
        m = matrix_of(name, params) @ m
    return m


def _short_words(max_len: int = 3) -> list[tuple[tuple, np.ndarray]]:
    """Distinct (up to phase) one-qubit products of at most ``max_len`` alphabet gates."""
    found: list[tuple[tuple, np.ndarray]] = []
    for n in range(max_len + 1):
        for word in itertools.product(_ALPHABET, repeat=n):
            m = _word_matrix(word)
            if not any(equiv_up_to_global_phase(m, other, 1e-12) for _, other in found):
                found.append((word, m))
    return found


def _split_local(m: np.ndarray):
    """Return ``(a, b)`` with ``m ~ a x b``, or None when ``m`` is entangling."""
    r = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(r)
    if s[1] > 1e-9 * s[0]:
        return None
    a = (u[:, 0] * np.sqrt(s[0])).reshape(2, 2)
    b = (vh[0] * np.sqrt(s[0])).reshape(2, 2)
    return a, b


@lru_cache(maxsize=1)
def ecr_correction() -> EcrCorrection:
    """Search one-qubit corrections turning a single ECR into a CNOT.

    Candidates are products of at most three gates from {Rz(k pi/2), SX, X}
    on each of the four slots, with the ECR in either orientation; the
    smallest total gate count wins.
    """
    words = _short_words()
    cnot = matrix_of("cx")
    swap = unitary_of(Circuit(2, [Instruction("cx", (0, 1)), Instruction("cx", (1, 0)), Instruction("cx", (0, 1))]))
    best = None
    for flipped in (False, True):
        ecr = matrix_of("ecr")
        if flipped:
            ecr = swap @ ecr @ swap
        for (wc, mc), (wt, mt) in itertools.product(words, repeat=2):
            pre_len = len(wc) + len(wt)
            if best is not None and pre_len >= best.size():
                continue
            post = cnot @ dagger(np.kron(mc, mt)) @ dagger(ecr)
            split = _split_local(post)
            if split is None:
                continue
            a, b = split
            pc = next((w for w, m in words if equiv_up_to_global_phase(m, a, 1e-12)), None)
            pt = next((w for w, m in words if equiv_up_to_global_phase(m, b, 1e-12)), None)
            if pc is None or pt is None:
                continue
            cand = EcrCorrection(wc, wt, pc, pt, flipped)
            if best is None or cand.size() < best.size():
                best = cand
    if best is None:
        raise SearchFailed("no one-qubit correction maps ECR onto CNOT")
    check = cnot_to_ecr(0, 1, best)
    if not equiv_up_to_global_phase(unitary_of(check), cnot, 1e-12):
        raise SearchFailed("correction found by search does not verify")
    return best


def cnot_to_ecr(control: int, target: int, correction: EcrCorrection | None = None) -> Circuit:
    corr = correction or ecr_correction()
    n = max(control, target) + 1

    def word(w, q):
        return [Instruction(name, (q,), params) for name, params in w]

    ecr_qubits = (target, control) if corr.flipped else (control, target)
    insts = (
        word(corr.pre_control, control)
        + word(corr.pre_target, target)
        + [Instruction("ecr", ecr_qubits)]
        + word(corr.post_control, control)
        + word(corr.post_target, target)
    )
    return Circuit(n, insts)


# ---------------------------------------------------------------------------
# basis rewriting


@dataclass(frozen=True)
class BasisSpec:
    two_qubit_gate: str = "ecr"
    one_qubit_gates: frozenset[str] = field(default_factory=lambda: frozenset({"rz", "sx"}))

    def __post_init__(self):
        object.__setattr__(self, "one_qubit_gates", frozenset(self.one_qubit_gates))
        if self.two_qubit_gate not in ("ecr", "cx"):
            raise UnsupportedGate(f"two-qubit basis gate must be 'ecr' or 'cx', got {self.two_qubit_gate!r}")
        for name in self.one_qubit_gates:
            get_gate(name)
        if not {"rz", "sx"} <= self.one_qubit_gates:
            raise UnsupportedGate("one-qubit basis must contain rz and sx")


ECR_BASIS = BasisSpec("ecr")
CX_BASIS = BasisSpec("cx")


def _lower(c: Circuit, basis: BasisSpec):
    """Yield ``(qubit, matrix)`` for one-qubit ops and Instructions for two-qubit basis gates."""
    corr = ecr_correction()
    pre_c, pre_t, post_c, post_t = (_word_matrix(w) for w in corr.slots())

    def two(gate: str, a: int, b: int):
        if gate == basis.two_qubit_gate:
            yield Instruction(gate, (a, b))
        elif gate == "cx":  # into ecr
            yield (a, pre_c)
            yield (b, pre_t)
            yield Instruction("ecr", (b, a) if corr.flipped else (a, b))
            yield (a, post_c)
            yield (b, post_t)
        else:  # ecr(a, b) into cx, inverting the correction
            c, t = (b, a) if corr.flipped else (a, b)
            yield (c, dagger(pre_c))
            yield (t, dagger(pre_t))
            yield Instruction("cx", (c, t))
            yield (c, dagger(post_c))
            yield (t, dagger(post_t))

    h = matrix_of("h")
    for inst in c:
        qs = inst.qubits
        if len(qs) == 1:
            yield (qs[0], inst.matrix())
        elif inst.gate in ("cx", "ecr"):
            yield from two(inst.gate, *qs)
        elif inst.gate == "ecr_rev":
            yield from two("ecr", qs[1], qs[0])
        elif inst.gate == "cz":
            yield (qs[1], h)
            yield from two("cx", *qs)
            yield (qs[1], h)
        else:
            raise UnsupportedGate(f"cannot rewrite {inst.gate!r}; lower 3-qubit gates with the catalog first")


def rewrite_to_basis(c: Circuit, basis: BasisSpec = ECR_BASIS) -> Circuit:
    """Lower two-qubit gates to the basis gate and merge each one-qubit run."""
    allow_x = "x" in basis.one_qubit_gates
    pending = [np.eye(2, dtype=complex) for _ in range(c.n_qubits)]
    out: list[Instruction] = []

    def flush(q):
        out.extend(synthesize_1q(pending[q], q, allow_x))
        pending[q] = np.eye(2, dtype=complex)

    for item in _lower(c, basis):
        if isinstance(item, Instruction):
            for q in item.qubits:
                flush(q)
            out.append(item)
        else:
            q, m = item
            pending[q] = m @ pending[q]
    for q in range(c.n_qubits):
        flush(q)
    return Circuit(c.n_qubits, out)


# ---------------------------------------------------------------------------
# nine-ECR Toffoli and synthesis

# A SWAP(0, 1) followed by a six-CNOT parity network on the chain 0-1-2.
# Between them the wires pass through all seven nonzero parities of (a, b, c)
# and return to the identity, so T/T-dagger phases on those parities build CCZ.
NINE_CNOT_SEQUENCE = ((0, 1), (1, 0), (0, 1), (2, 1), (1, 0), (0, 1), (2, 1), (1, 0), (2, 1))


def nine_cnot_toffoli(sequence: Sequence[tuple[int, int]] = NINE_CNOT_SEQUENCE) -> Circuit:
    """CCX on a 3-qubit chain from a CNOT parity network.

    CCZ = omega^(4abc) with omega = e^{i pi/4}, and
    4abc = a + b + c - (a^b) - (a^c) - (b^c) + (a^b^c), so each odd-weight
    parity gets a T and each even-weight one a T-dagger the first time it
    appears on a wire.
    """
    wires = [0b100, 0b010, 0b001]
    seen: set[int] = set()
    core: list[Instruction] = []

    def mark(q):
        p = wires[q]
        if p not in seen:
            seen.add(p)
            core.append(Instruction("t" if bin(p).count("1") % 2 else "tdg", (q,)))

    for q in range(3):
        mark(q)
    for c, t in sequence:
        core.append(Instruction("cx", (c, t)))
        wires[t] ^= wires[c]
        mark(t)
    if wires != [0b100, 0b010, 0b001] or len(seen) != 7:
        raise ValueError("sequence must visit all 7 parities and restore the wires")
    h = Instruction("h", (2,))
    return Circuit(3, [h, *core, h])


def build_toffoli_ecr9() -> Circuit:
    """Regenerate the golden nine-ECR circuit from the parity network."""
    return rewrite_to_basis(nine_cnot_toffoli(), BasisSpec("ecr", {"rz", "sx", "x"}))


@dataclass(frozen=True)
class _Candidate:
    name: str
    circuit: Circuit


def _toffoli_candidates() -> list[_Candidate]:
    out = []
    ccx_perms = [(0, 1, 2), (1, 0, 2)]
    for name in ("toffoli-linear", "toffoli-6cnot-nc", "toffoli-6cnot-ibm"):
        for perm in ccx_perms:
            out.append(_Candidate(f"{name}{list(perm)}", load_target(name).relabel(perm)))
    for perm in itertools.permutations(range(3)):
        # CCZ is symmetric in its qubits, so every relabeling is still a CCZ
        ccz = ccz_linear8().relabel(perm)
        out.append(_Candidate(f"ccz-linear8{list(perm)}+h", ccx_from_ccz(ccz, 2)))
    return out


def synthesize_toffoli_ecr(coupling: CouplingMap) -> Circuit:
    """Cheapest catalog Toffoli that fits ``coupling``, rewritten to the ECR basis.

    Ties break on two-qubit count, then depth, then catalog order.
    """
    if coupling.n_qubits < 3:
        raise NoFeasibleDecomposition("coupling map must cover 3 qubits")
    sub = CouplingMap(3, [e for e in coupling.edges if max(e) < 3])
    ranked = []
    for order, cand in enumerate(_toffoli_candidates()):
        if validate_connectivity(cand.circuit, sub):
            continue
        lowered = rewrite_to_basis(cand.circuit, ECR_BASIS)
        ranked.append((two_qubit_count(lowered), depth(lowered), order, cand.name, lowered))
    if not ranked:
        raise NoFeasibleDecomposition(f"no catalog Toffoli fits {coupling!r}")
    n2, _, _, name, best = min(ranked, key=lambda r: r[:3])
    if not verify(best, "ccx"):
        raise VerificationFailed(f"synthesized circuit from {name} does not implement CCX")
    log.info("synthesized Toffoli from %s with %d ecr", name, gate_counts(best).get("ecr", 0))
    if coupling.n_qubits > 3:
        best = Circuit(coupling.n_qubits, best.instructions)
    return best


def write_golden(path, c: Circuit) -> None:
    with open(path, "w") as f:
        f.write(emit(c))
