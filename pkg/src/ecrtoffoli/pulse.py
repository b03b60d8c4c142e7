"""Echoed cross-resonance model.

Units are angular frequencies with hbar = 1. Two-qubit Pauli labels put the
control first: ``"ZX"`` is Z on the control, X on the target.

The effective cross-resonance Hamiltonian for drive amplitude ``+E0`` is

    H(+E0) = (l_ix IX + l_zi ZI + l_iz IZ + l_zz ZZ + l_zx ZX) / 2

and flipping the drive sign negates the terms odd in ``E0`` (IX and ZX). The
echoed pulse is ``U = XI . exp(-i H(-E0) t) . XI . exp(-i H(+E0) t)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .errors import AmbiguousDressing, DegenerateCoeffs
from .linalg import avg_gate_fidelity, kron, matrix_exp_hermitian, pauli

SINC_SERIES_BELOW = 1e-8
DRESSING_MIN_OVERLAP = 0.7


class PauliCoeffs(BaseModel):
    """Effective Hamiltonian strengths of the IX, ZI, IZ, ZZ, ZX terms."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    l_ix: float = 0.0
    l_zi: float = 0.0
    l_iz: float = 0.0
    l_zz: float = 0.0
    l_zx: float = 0.0

    def scaled(self, k: float) -> PauliCoeffs:
        return PauliCoeffs(**{name: k * v for name, v in self.model_dump().items()})

    def is_zero(self) -> bool:
        return not any(self.model_dump().values())


class TransmonParams(BaseModel):
    """Two driven, coupled Duffing oscillators; transmon 0 is the driven control."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False, populate_by_name=True)

    eps: tuple[float, float]
    delta_res: tuple[float, float]
    lambda_: float = Field(alias="lambda")
    drive_amp: float = 0.0
    drive_freq: float = 0.0
    drive_phase: float = 0.0
    levels: int = 3

    @field_validator("levels")
    @classmethod
    def _levels(cls, v: int) -> int:
        if v < 2:
            raise ValueError("levels must be at least 2")
        return v


def load_json(path, model: type[BaseModel]) -> BaseModel:
    with open(path) as f:
        return model.model_validate(json.load(f))


# ---------------------------------------------------------------------------
# device Hamiltonian


def lowering(d: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, d)), k=1).astype(complex)


def build_device_hamiltonian(p: TransmonParams, time: float = 0.0) -> np.ndarray:
    d = p.levels
    a = lowering(d)
    n = a.conj().T @ a
    eye = np.eye(d)
    a0, a1 = kron(a, eye), kron(eye, a)
    n0, n1 = kron(n, eye), kron(eye, n)
    h = np.zeros((d * d, d * d), dtype=complex)
    for eps, delta, num in zip(p.eps, p.delta_res, (n0, n1)):
        h += eps * num + 0.5 * delta * num @ (num - np.eye(d * d))
    h += p.drive_amp * math.cos(p.drive_freq * time + p.drive_phase) * (a0.conj().T + a0)
    h += p.lambda_ * (a0.conj().T @ a1 + a0 @ a1.conj().T)
    return h


def static_zz(p: TransmonParams) -> float:
    """Static ZZ shift ``E11 - E10 - E01 + E00`` of the undriven, dressed pair."""
    if p.lambda_ == 0:
        # uncoupled: eigenstates are bare products and the shift vanishes identically
        return 0.0
    d = p.levels
    h = build_device_hamiltonian(p.model_copy(update={"drive_amp": 0.0}))
    energies, vecs = np.linalg.eigh(h)
    weights = np.abs(vecs) ** 2  # weights[bare, dressed]
    e = {}
    for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)):
        row = weights[i * d + j]
        k = int(np.argmax(row))
        if row[k] < DRESSING_MIN_OVERLAP:
            raise AmbiguousDressing(
                f"bare state |{i}{j}> has at most {row[k]:.3f} overlap with any eigenstate"
            )
        e[i, j] = energies[k]
    return float(e[1, 1] - e[1, 0] - e[0, 1] + e[0, 0])


# ---------------------------------------------------------------------------
# effective two-qubit model


def effective_hamiltonian(c: PauliCoeffs, drive_sign: Literal[1, -1] = 1) -> np.ndarray:
    if drive_sign not in (1, -1):
        raise ValueError("drive_sign must be +1 or -1")
    return 0.5 * (
        drive_sign * c.l_ix * pauli("IX")
        + c.l_zi * pauli("ZI")
        + c.l_iz * pauli("IZ")
        + c.l_zz * pauli("ZZ")
        + drive_sign * c.l_zx * pauli("ZX")
    )


_XI = pauli("XI")


def echoed_unitary_numeric(c: PauliCoeffs, t: float) -> np.ndarray:
    forward = matrix_exp_hermitian(effective_hamiltonian(c, 1), t)
    backward = matrix_exp_hermitian(effective_hamiltonian(c, -1), t)
    return _XI @ backward @ _XI @ forward


def zx_rotation(angle: float) -> np.ndarray:
    return math.cos(angle / 2) * np.eye(4) - 1j * math.sin(angle / 2) * pauli("ZX")


@dataclass(frozen=True)
class EchoCoeffs:
    z_ii: complex
    z_iz: complex
    z_iy: complex
    z_zx: complex
    zeta: float
    xi: float

    def norm2(self) -> float:
        return abs(self.z_ii) ** 2 + abs(self.z_iz) ** 2 + abs(self.z_iy) ** 2 + abs(self.z_zx) ** 2

    def matrix(self) -> np.ndarray:
        return (
            self.z_ii * np.eye(4)
            + self.z_iz * pauli("IZ")
            + self.z_iy * pauli("IY")
            + self.z_zx * pauli("ZX")
        )


def _sin_over(rate: float, t: float) -> float:
    """``sin(rate t / 2) / rate`` with its small-rate series."""
    if abs(rate) < SINC_SERIES_BELOW:
        return t / 2 - rate**2 * t**3 / 48
    return math.sin(rate * t / 2) / rate


def echo_coefficients(c: PauliCoeffs, t: float) -> EchoCoeffs:
    ix, iz, zz, zx = c.l_ix, c.l_iz, c.l_zz, c.l_zx
    zeta = math.hypot(iz + zz, ix + zx)
    xi = math.hypot(iz - zz, ix - zx)
    # every printed term divides by zeta*xi; fold those into the sinc-like factors
    s_zeta, s_xi = _sin_over(zeta, t), _sin_over(xi, t)
    c_zeta, c_xi = math.cos(zeta * t / 2), math.cos(xi * t / 2)
    z_ii = (ix**2 - iz**2 - zx**2 + zz**2) * s_zeta * s_xi + c_zeta * c_xi
    z_iz = -1j * (iz - zz) * c_zeta * s_xi - 1j * (iz + zz) * s_zeta * c_xi
    z_iy = -2j * (ix * iz - zx * zz) * s_zeta * s_xi
    z_zx = 1j * (ix - zx) * c_zeta * s_xi - 1j * (ix + zx) * s_zeta * c_xi
    return EchoCoeffs(complex(z_ii), complex(z_iz), complex(z_iy), complex(z_zx), zeta, xi)


def echoed_unitary_analytic(c: PauliCoeffs, t: float) -> tuple[EchoCoeffs, np.ndarray]:
    coeffs = echo_coefficients(c, t)
    return coeffs, coeffs.matrix()


# ---------------------------------------------------------------------------
# reporting and calibration

ZX_HALF_PI = zx_rotation(math.pi / 2)


@dataclass(frozen=True)
class GateErrorReport:
    time: float
    coeffs: EchoCoeffs
    fidelity: float
    residual_iz: float
    residual_iy: float

    def to_dict(self) -> dict:
        echo = asdict(self.coeffs)
        for k in ("z_ii", "z_iz", "z_iy", "z_zx"):
            echo[k] = [echo[k].real, echo[k].imag]
        return {
            "time": self.time,
            "echo_coeffs": echo,
            "fidelity_vs_zx_half_pi": self.fidelity,
            "residual_errors": {"IZ": self.residual_iz, "IY": self.residual_iy},
        }

    def format_text(self) -> str:
        def cx(z: complex) -> str:
            return f"{_g(z.real)} {'+' if z.imag >= 0 else '-'} {_g(abs(z.imag))}i"

        rows = [
            ("time", _g(self.time)),
            ("zeta_II", cx(self.coeffs.z_ii)),
            ("zeta_IZ", cx(self.coeffs.z_iz)),
            ("zeta_IY", cx(self.coeffs.z_iy)),
            ("zeta_ZX", cx(self.coeffs.z_zx)),
            ("zeta (rad/s)", _g(self.coeffs.zeta)),
            ("xi (rad/s)", _g(self.coeffs.xi)),
            ("fidelity vs ZX(pi/2)", _g(self.fidelity)),
            ("residual |zeta_IZ|", _g(self.residual_iz)),
            ("residual |zeta_IY|", _g(self.residual_iy)),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


def _g(x: float) -> str:
    return f"{x:.12g}"


def gate_error_report(c: PauliCoeffs, t: float) -> GateErrorReport:
    coeffs, u = echoed_unitary_analytic(c, t)
    return GateErrorReport(
        time=t,
        coeffs=coeffs,
        fidelity=avg_gate_fidelity(u, ZX_HALF_PI),
        residual_iz=abs(coeffs.z_iz),
        residual_iy=abs(coeffs.z_iy),
    )


def _fidelity_at(c: PauliCoeffs, t: float) -> float:
    return avg_gate_fidelity(echoed_unitary_analytic(c, t)[1], ZX_HALF_PI)


GRID_POINTS = 512
_INV_PHI = (math.sqrt(5) - 1) / 2


def calibrate_time(c: PauliCoeffs, t_max: float) -> tuple[float, float]:
    """Pulse duration in (0, t_max] that best reproduces ZX(pi/2).

    A coarse grid picks the best sample, then golden-section search refines
    inside its neighbouring grid cells.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    if c.is_zero():
        raise DegenerateCoeffs("all coefficients are zero; the echoed unitary is the identity")
    step = t_max / GRID_POINTS
    grid = [step * i for i in range(1, GRID_POINTS + 1)]
    fids = [_fidelity_at(c, t) for t in grid]
    k = int(np.argmax(fids))
    lo, hi = max(grid[k] - step, 0.0), min(grid[k] + step, t_max)
    f = lambda t: -_fidelity_at(c, t)  # noqa: E731
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(200):
        if hi - lo <= 1e-13 * max(t_max, 1.0):
            break
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
    best_t, best_f = grid[k], fids[k]
    t_mid = (lo + hi) / 2
    f_mid = _fidelity_at(c, t_mid)
    if f_mid >= best_f and t_mid > 0:
        best_t, best_f = t_mid, f_mid
    return best_t, best_f
