"""Circuit IR and the ``.qc`` text format.

Format::

    # comment
    qubits 3
    h 2
    rz(pi/4) 0
    cx 0 1

Instructions are temporal: the first line acts first, so the circuit unitary
is ``U_last @ ... @ U_first``. Qubit 0 is the most significant tensor factor.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    CircuitSyntaxError,
    DuplicateQubit,
    QubitOutOfRange,
    TooManyQubits,
    UnknownGate,
    WrongParamCount,
)
from .gates import get_gate, matrix_of

MAX_QUBITS = 16
MAX_UNITARY_QUBITS = 12


@dataclass(frozen=True)
class Instruction:
    gate: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        g = get_gate(self.gate)
        if len(self.qubits) != g.arity:
            raise CircuitSyntaxError(
                f"gate {self.gate!r} acts on {g.arity} qubit(s), got {len(self.qubits)}"
            )
        if len(self.params) != g.param_count:
            raise WrongParamCount(
                f"gate {self.gate!r} takes {g.param_count} parameter(s), got {len(self.params)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise DuplicateQubit(f"repeated qubit in {self.gate} {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise QubitOutOfRange(f"negative qubit index in {self.gate} {self.qubits}")

    def matrix(self) -> np.ndarray:
        return matrix_of(self.gate, self.params)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    instructions: tuple[Instruction, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise QubitOutOfRange(f"qubit count must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        for inst in self.instructions:
            for q in inst.qubits:
                if q >= self.n_qubits:
                    raise QubitOutOfRange(
                        f"qubit {q} out of range for a {self.n_qubits}-qubit circuit"
                    )

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __add__(self, other: Circuit) -> Circuit:
        return Circuit(max(self.n_qubits, other.n_qubits), self.instructions + other.instructions)

    def append(self, gate: str, qubits: Sequence[int], params: Sequence[float] = ()) -> Circuit:
        return Circuit(self.n_qubits, self.instructions + (Instruction(gate, tuple(qubits), tuple(params)),))

    def relabel(self, mapping: Sequence[int]) -> Circuit:
        """Return the circuit with qubit ``q`` renamed to ``mapping[q]``."""
        return Circuit(
            self.n_qubits,
            [Instruction(i.gate, tuple(mapping[q] for q in i.qubits), i.params) for i in self],
        )

    def same_structure(self, other: Circuit, rel_tol: float = 1e-11) -> bool:
        """Equality of gates and qubits, with parameters compared to ``rel_tol``.

        Emission rounds decimals to 12 significant digits, so this is the
        equality that a parse/emit round trip preserves.
        """
        if self.n_qubits != other.n_qubits or len(self) != len(other):
            return False
        for a, b in zip(self, other):
            if a.gate != b.gate or a.qubits != b.qubits:
                return False
            if any(not math.isclose(x, y, rel_tol=rel_tol, abs_tol=1e-12) for x, y in zip(a.params, b.params)):
                return False
        return True


class CouplingMap:
    """Undirected set of qubit pairs that may host a two-qubit gate."""

    def __init__(self, n_qubits: int, edges: Iterable[Sequence[int]]):
        if n_qubits < 1:
            raise ValueError("coupling map needs at least one qubit")
        norm = set()
        for e in edges:
            a, b = (int(x) for x in e)
            if a == b:
                raise ValueError(f"self-loop edge ({a}, {b})")
            if not (0 <= a < n_qubits and 0 <= b < n_qubits):
                raise ValueError(f"edge ({a}, {b}) out of range for {n_qubits} qubits")
            norm.add((min(a, b), max(a, b)))
        self.n_qubits = n_qubits
        self.edges = frozenset(norm)

    @classmethod
    def linear(cls, n: int) -> CouplingMap:
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def full(cls, n: int) -> CouplingMap:
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    def connected(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def is_connected_graph(self) -> bool:
        seen, todo = {0}, [0]
        while todo:
            a = todo.pop()
            for b in range(self.n_qubits):
                if b not in seen and self.connected(a, b):
                    seen.add(b)
                    todo.append(b)
        return len(seen) == self.n_qubits

    def __eq__(self, other):
        return isinstance(other, CouplingMap) and (self.n_qubits, self.edges) == (other.n_qubits, other.edges)

    def __hash__(self):
        return hash((self.n_qubits, self.edges))

    def __repr__(self):
        return f"CouplingMap({self.n_qubits}, {sorted(self.edges)})"


class Violation(NamedTuple):
    index: int
    qubits: tuple[int, ...]


# ---------------------------------------------------------------------------
# text format

_PI_RE = re.compile(r"^([+-]?)(\d*)\s*\*?\s*pi(?:\s*/\s*(\d+))?$")
_LINE_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(\s*([^()]*?)\s*\))?(?:\s+(.*))?$")


def parse_angle(token: str) -> float:
    """Decimal literal or a pi multiple such as ``pi/4``, ``-pi/2``, ``3pi/4``."""
    tok = token.strip().lower()
    m = _PI_RE.match(tok)
    if m:
        sign, num, den = m.groups()
        k = int(num) if num else 1
        d = int(den) if den else 1
        if d == 0:
            raise ValueError(f"zero denominator in angle {token!r}")
        value = k * math.pi / d
        return -value if sign == "-" else value
    return float(tok)


def format_angle(x: float) -> str:
    """Shorter of the 12-significant-digit decimal and an exact ``k*pi/d`` form (d <= 8)."""
    if x == 0:
        return "0"
    decimal = f"{x:.12g}"
    frac = Fraction(x / math.pi).limit_denominator(8)
    if abs(float(frac) * math.pi - x) <= 1e-12 and frac != 0:
        k, d = frac.numerator, frac.denominator
        sign = "-" if k < 0 else ""
        k = abs(k)
        text = sign + ("" if k == 1 else str(k)) + "pi" + ("" if d == 1 else f"/{d}")
        if len(text) <= len(decimal):
            return text
    return decimal


def parse(text: str) -> Circuit:
    n_qubits = None
    instructions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n_qubits is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "qubits":
                raise CircuitSyntaxError("expected header 'qubits N'", lineno)
            try:
                n_qubits = int(parts[1])
            except ValueError:
                raise CircuitSyntaxError(f"bad qubit count {parts[1]!r}", lineno) from None
            if not 1 <= n_qubits <= MAX_QUBITS:
                raise QubitOutOfRange(f"qubit count must be in 1..{MAX_QUBITS}", lineno)
            continue
        instructions.append(_parse_instruction(line, lineno, n_qubits))
    if n_qubits is None:
        raise CircuitSyntaxError("missing 'qubits N' header")
    return Circuit(n_qubits, instructions)


def _parse_instruction(line: str, lineno: int, n_qubits: int) -> Instruction:
    m = _LINE_RE.match(line)
    if not m:
        raise CircuitSyntaxError(f"cannot parse instruction {line!r}", lineno)
    name, param_text, qubit_text = m.groups()
    try:
        gate = get_gate(name)
    except UnknownGate:
        raise UnknownGate(f"line {lineno}: unknown gate {name!r}") from None
    params = []
    if param_text is not None:
        for tok in param_text.split(","):
            try:
                params.append(parse_angle(tok))
            except ValueError:
                raise CircuitSyntaxError(f"bad angle {tok.strip()!r}", lineno) from None
    if len(params) != gate.param_count:
        raise CircuitSyntaxError(
            f"gate {name!r} takes {gate.param_count} parameter(s), got {len(params)}", lineno
        )
    tokens = (qubit_text or "").split()
    try:
        qubits = [int(t) for t in tokens]
    except ValueError:
        raise CircuitSyntaxError(f"bad qubit index in {line!r}", lineno) from None
    if len(qubits) != gate.arity:
        raise CircuitSyntaxError(f"gate {name!r} acts on {gate.arity} qubit(s), got {len(qubits)}", lineno)
    for q in qubits:
        if not 0 <= q < n_qubits:
            raise QubitOutOfRange(f"qubit {q} out of range for {n_qubits} qubits", lineno)
    if len(set(qubits)) != len(qubits):
        raise DuplicateQubit(f"repeated qubit in {line!r}", lineno)
    return Instruction(name, tuple(qubits), tuple(params))


def emit(c: Circuit) -> str:
    lines = [f"qubits {c.n_qubits}"]
    for inst in c:
        head = inst.gate
        if inst.params:
            head += "(" + ",".join(format_angle(p) for p in inst.params) + ")"
        lines.append(" ".join([head, *map(str, inst.qubits)]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# evaluation and metrics


def apply_gate(u: np.ndarray, gate: np.ndarray, qubits: Sequence[int], n_qubits: int) -> np.ndarray:
    """Left-multiply ``u`` (shape 2^n x m) by ``gate`` acting on ``qubits``."""
    k = len(qubits)
    cols = u.shape[1]
    t = u.reshape((2,) * n_qubits + (cols,))
    g = gate.reshape((2,) * (2 * k))
    # contract the gate's input legs with the targeted axes
    t = np.tensordot(g, t, axes=(list(range(k, 2 * k)), list(qubits)))
    # tensordot puts the gate's output legs first; move them back in place
    t = np.moveaxis(t, list(range(k)), list(qubits))
    return t.reshape(2**n_qubits, cols)


def unitary_of(c: Circuit) -> np.ndarray:
    if c.n_qubits > MAX_UNITARY_QUBITS:
        raise TooManyQubits(f"unitary_of supports at most {MAX_UNITARY_QUBITS} qubits")
    dim = 2**c.n_qubits
    u = np.eye(dim, dtype=complex)
    for inst in c:
        u = apply_gate(u, inst.matrix(), inst.qubits, c.n_qubits)
    return u


def depth(c: Circuit) -> int:
    level = [0] * c.n_qubits
    for inst in c:
        layer = 1 + max(level[q] for q in inst.qubits)
        for q in inst.qubits:
            level[q] = layer
    return max(level, default=0)


def gate_counts(c: Circuit) -> dict[str, int]:
    counts: dict[str, int] = {}
    for inst in c:
        counts[inst.gate] = counts.get(inst.gate, 0) + 1
    return counts


def two_qubit_count(c: Circuit) -> int:
    return sum(1 for inst in c if len(inst.qubits) == 2)


def validate_connectivity(c: Circuit, m: CouplingMap) -> list[Violation]:
    if m.n_qubits < c.n_qubits:
        raise ValueError(f"coupling map has {m.n_qubits} qubits, circuit needs {c.n_qubits}")
    out = []
    for idx, inst in enumerate(c):
        qs = inst.qubits
        if len(qs) < 2:
            continue
        pairs = [(a, b) for i, a in enumerate(qs) for b in qs[i + 1 :]]
        # wider gates pass only when every pair is coupled; in practice they must be lowered first
        if not all(m.connected(a, b) for a, b in pairs):
            out.append(Violation(idx, qs))
    return out
