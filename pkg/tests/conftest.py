import sys

import numpy as np
import pytest

from ecrtoffoli.circuit import Circuit, Instruction
from ecrtoffoli.gates import registry


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


def random_circuit(rng, n_qubits, n_gates, names=None, wide=True):
    """Random circuit over registry gates (or ``names``), random rz angles."""
    pool = [g for g in registry() if (names is None or g.name in names) and g.arity <= n_qubits]
    if not wide:
        pool = [g for g in pool if g.arity <= 2]
    insts = []
    for _ in range(n_gates):
        g = pool[rng.integers(len(pool))]
        qubits = tuple(int(q) for q in rng.choice(n_qubits, size=g.arity, replace=False))
        params = tuple(float(x) for x in rng.uniform(-4, 4, g.param_count))
        insts.append(Instruction(g.name, qubits, params))
    return Circuit(n_qubits, insts)


def random_hermitian(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
