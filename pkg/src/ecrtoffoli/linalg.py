"""Dense complex matrix helpers.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128. Qubit 0 is
the most significant tensor factor everywhere in this package, so
``kron(a, b)`` places ``a`` on qubit 0 and ``b`` on qubit 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .errors import DimMismatch, NonHermitian, NotPowerOfTwo, NotUnitary

DEFAULT_TOL = 1e-10

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Bell-basis change used for the local invariants.
MAGIC_BASIS = np.array(
    [[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]], dtype=complex
) / np.sqrt(2)


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def kron(*factors) -> np.ndarray:
    """Tensor product; the first factor is the most significant."""
    return reduce(np.kron, (as_matrix(f) for f in factors))


def pauli(label: str) -> np.ndarray:
    """Matrix of a Pauli string such as ``"ZX"`` (Z on qubit 0, X on qubit 1)."""
    return _pauli_cached(label.upper()).copy()


@lru_cache(maxsize=None)
def _pauli_cached(label: str) -> np.ndarray:
    return kron(*(PAULI[ch] for ch in label))


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def is_hermitian(h, tol: float = DEFAULT_TOL) -> bool:
    h = as_matrix(h)
    return bool(np.max(np.abs(h - dagger(h))) <= tol)


def is_unitary(u, tol: float = DEFAULT_TOL) -> bool:
    u = as_matrix(u)
    return bool(np.max(np.abs(dagger(u) @ u - np.eye(len(u)))) <= tol)


def matrix_exp_hermitian(h, t: float) -> np.ndarray:
    """Return ``exp(-i h t)`` for Hermitian ``h`` via eigendecomposition."""
    h = as_matrix(h)
    if not is_hermitian(h):
        raise NonHermitian("matrix_exp_hermitian requires a Hermitian matrix")
    # symmetrize so eigh sees an exactly Hermitian input
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def _n_qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise NotPowerOfTwo(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True)
class PauliDecomposition:
    n_qubits: int
    coefficients: dict[str, complex]

    def reconstruct(self) -> np.ndarray:
        dim = 2**self.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for label, c in self.coefficients.items():
            out += c * _pauli_cached(label)
        return out

    def support(self, tol: float = 1e-9) -> set[str]:
        """Pauli strings whose coefficient magnitude exceeds ``tol``."""
        return {k for k, c in self.coefficients.items() if abs(c) > tol}

    def __getitem__(self, label: str) -> complex:
        return self.coefficients[label.upper()]


def pauli_decompose(u) -> PauliDecomposition:
    """Expand ``u`` in the Pauli basis: ``c_P = tr(P^dagger u) / 2^n``."""
    u = as_matrix(u)
    n = _n_qubits(len(u))
    coeffs = {}
    for letters in itertools.product("IXYZ", repeat=n):
        label = "".join(letters)
        # Paulis are Hermitian, so tr(P^dagger u) = sum(P^T * u)
        coeffs[label] = complex(np.sum(_pauli_cached(label).T * u) / 2**n)
    return PauliDecomposition(n, coeffs)


def _check_pair(u, v) -> tuple[np.ndarray, np.ndarray]:
    u, v = as_matrix(u), as_matrix(v)
    if u.shape != v.shape:
        raise DimMismatch(f"shapes differ: {u.shape} vs {v.shape}")
    return u, v


def overlap(u, v) -> float:
    """Phase-insensitive overlap ``|tr(u^dagger v)| / dim`` (1 means equivalent)."""
    u, v = _check_pair(u, v)
    return float(abs(np.trace(dagger(u) @ v)) / len(u))


def equiv_up_to_global_phase(u, v, tol: float = DEFAULT_TOL) -> bool:
    return overlap(u, v) >= 1 - tol


def avg_gate_fidelity(u, v) -> float:
    u, v = _check_pair(u, v)
    d = len(u)
    tr = abs(np.trace(dagger(u) @ v))
    return float((tr**2 + d) / (d * d + d))


def makhlin_invariants(u) -> tuple[complex, float]:
    """Local invariants ``(g1, g2)`` of a two-qubit unitary.

    With ``ub = Q^dagger u Q`` in the magic basis and ``m = ub^T ub``::

        g1 = tr(m)^2 / (16 det u)
        g2 = (tr(m)^2 - tr(m^2)) / (4 det u)

    Identity gives ``(1, 3)``; CNOT gives ``(0, 1)``.
    """
    u = as_matrix(u)
    if u.shape != (4, 4):
        raise DimMismatch("makhlin_invariants needs a 4x4 matrix")
    if not is_unitary(u):
        raise NotUnitary("makhlin_invariants needs a unitary matrix")
    ub = dagger(MAGIC_BASIS) @ u @ MAGIC_BASIS
    m = ub.T @ ub
    det = np.linalg.det(u)
    tr = np.trace(m)
    g1 = complex(tr**2 / (16 * det))
    g2 = float(((tr**2 - np.trace(m @ m)) / (4 * det)).real)
    return g1, g2


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
