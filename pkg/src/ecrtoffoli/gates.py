"""Gate registry.

Each gate name doubles as its mnemonic in the ``.qc`` circuit format.

Conventions worth knowing before comparing matrices:

* ``rz(theta) = diag(exp(-i theta/2), exp(+i theta/2))``, so ``t`` and ``s``
  (defined by their projector forms ``diag(1, e^{i pi/4})``, ``diag(1, i)``)
  equal ``rz(pi/4)`` and ``rz(pi/2)`` only up to a global phase.
* ``sx`` squares to ``x`` exactly.
* ``ecr`` is ``(IX - XY)/sqrt(2)`` and ``ecr_rev`` is ``(XI - YX)/sqrt(2)``,
  so ``ecr_rev a b`` and ``ecr b a`` are the same operation. With qubit 0 as
  the leading tensor factor, ``ecr = IX . exp(-i pi/4 XZ)``: the Z half of the
  cross-resonance interaction sits on the second operand, and
  ``ecr_rev = XI . exp(-i pi/4 ZX)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import UnknownGate, WrongParamCount
from .linalg import pauli

SQRT2 = np.sqrt(2)


@dataclass(frozen=True)
class GateDef:
    name: str
    arity: int
    param_count: int
    matrix_fn: Callable[..., np.ndarray]

    def matrix(self, params: Sequence[float] = ()) -> np.ndarray:
        return matrix_of(self, params)


def _const(m) -> Callable[[], np.ndarray]:
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return lambda: m.copy()


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def _controlled(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    k = len(u)
    out = np.eye(2 * k, dtype=complex)
    out[k:, k:] = u
    return out


_X = [[0, 1], [1, 0]]
_Z = [[1, 0], [0, -1]]
_H = np.array([[1, 1], [1, -1]]) / SQRT2
_SX = (1 + 1j) / 2 * np.array([[1, -1j], [-1j, 1]])
_CX = _controlled(_X)

_REGISTRY: tuple[GateDef, ...] = (
    GateDef("id", 1, 0, _const(np.eye(2))),
    GateDef("x", 1, 0, _const(_X)),
    GateDef("y", 1, 0, _const([[0, -1j], [1j, 0]])),
    GateDef("z", 1, 0, _const(_Z)),
    GateDef("h", 1, 0, _const(_H)),
    GateDef("s", 1, 0, _const(np.diag([1, 1j]))),
    GateDef("sdg", 1, 0, _const(np.diag([1, -1j]))),
    GateDef("t", 1, 0, _const(np.diag([1, np.exp(0.25j * np.pi)]))),
    GateDef("tdg", 1, 0, _const(np.diag([1, np.exp(-0.25j * np.pi)]))),
    GateDef("sx", 1, 0, _const(_SX)),
    GateDef("rz", 1, 1, rz_matrix),
    GateDef("cx", 2, 0, _const(_CX)),
    GateDef("cz", 2, 0, _const(np.diag([1, 1, 1, -1]))),
    GateDef("ecr", 2, 0, _const((pauli("IX") - pauli("XY")) / SQRT2)),
    GateDef("ecr_rev", 2, 0, _const((pauli("XI") - pauli("YX")) / SQRT2)),
    GateDef("ccx", 3, 0, _const(_controlled(_CX))),
    GateDef("ccz", 3, 0, _const(np.diag([1] * 7 + [-1]))),
)
_BY_NAME = {g.name: g for g in _REGISTRY}


def registry() -> tuple[GateDef, ...]:
    return _REGISTRY


def get_gate(name: str) -> GateDef:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownGate(f"unknown gate {name!r}") from None


def matrix_of(gate: GateDef | str, params: Sequence[float] = ()) -> np.ndarray:
    g = get_gate(gate) if isinstance(gate, str) else get_gate(gate.name)
    params = tuple(params)
    if len(params) != g.param_count:
        raise WrongParamCount(
            f"gate {g.name!r} takes {g.param_count} parameter(s), got {len(params)}"
        )
    return g.matrix_fn(*(float(p) for p in params))
