"""Asymmetric Mach-Zehnder interferometer acting on basis-mode amplitudes.

Each parity class (j+k even or odd) sees its own 2x2 transfer matrix between
the input port pair (a, b) and the output pair (c, d).  The internal phase
delta is continuous; the HOM points delta = +-pi/2 are thin wrappers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InvalidParameterError
from .modes import (
    BASIS,
    BasisModeIndex,
    PoincareAngles,
    SpinOrbitAmplitudes,
    parity_sign,
    product_amplitudes,
)

Sign = Literal["+", "-"]

# Even-parity modes (E00, E11) occupy slots 0-1 of the amplitude vector.
EVEN_SLOTS = np.array([True, True, False, False])


@dataclass(frozen=True)
class TransferMatrix:
    m: np.ndarray
    parity_class: str  # "even" or "odd"

    def __matmul__(self, other):
        return self.m @ other


@dataclass(frozen=True)
class PortPair:
    """Amplitudes at two ports: (a, b) on the input side or (c, d) on the output."""

    first: SpinOrbitAmplitudes
    second: SpinOrbitAmplitudes

    def power(self) -> float:
        return self.first.power() + self.second.power()


def _check_sign(sign: str) -> int:
    if sign not in ("+", "-"):
        raise InvalidParameterError(f"sign must be '+' or '-', got {sign!r}")
    return 1 if sign == "+" else -1


def transfer_matrix(idx: BasisModeIndex, delta: float) -> TransferMatrix:
    """U_jk(delta) mapping (e_a, e_b) to (e_c, e_d) for one basis mode."""
    if not math.isfinite(delta):
        raise InvalidParameterError("delta must be finite")
    s, c = math.sin(delta / 2), math.cos(delta / 2)
    if parity_sign(idx) == 1:
        return TransferMatrix(1j * np.array([[s, c], [c, -s]], dtype=complex), "even")
    return TransferMatrix(np.array([[c, s], [s, -c]], dtype=complex), "odd")


def transfer_matrix_from_elements(idx: BasisModeIndex, delta: float) -> np.ndarray:
    """Product of beam splitter, phase shifter, mirrors and beam splitter.

    Used to cross-check the closed forms of transfer_matrix.
    """
    p = parity_sign(idx)
    bs = np.array([[1, 1j * p], [1j * p, 1]], dtype=complex) / math.sqrt(2)
    mirrors = np.diag([p**2, p**3]).astype(complex)
    shifter = np.diag([np.exp(0.5j * delta), np.exp(-0.5j * delta)])
    return bs @ mirrors @ shifter @ bs


def propagate(inputs: PortPair, delta: float) -> PortPair:
    ua = inputs.first.vector
    ub = inputs.second.vector
    out_c = np.empty(4, dtype=complex)
    out_d = np.empty(4, dtype=complex)
    for n, idx in enumerate(BASIS):
        u = transfer_matrix(idx, delta).m
        out_c[n], out_d[n] = u @ np.array([ua[n], ub[n]])
    return PortPair(
        SpinOrbitAmplitudes.from_vector(out_c, inputs.first.amplitude),
        SpinOrbitAmplitudes.from_vector(out_d, inputs.second.amplitude),
    )


def psi_coefficients(amps: SpinOrbitAmplitudes, sign: Sign) -> np.ndarray:
    """Coefficient vector of the vector mode Psi_{sign} over (E00, E11, E10, E01).

    Psi_- = (e00 E00 + e11 E11) - i (e10 E10 + e01 E01), Psi_+ with +i.
    """
    s = _check_sign(sign)
    v = amps.vector.copy()
    v[~EVEN_SLOTS] *= s * 1j
    return v


def classical_dual_output(angles: PoincareAngles, amplitude: float, delta: float) -> PortPair:
    """Outputs for equal coherent product-state inputs at a and b.

    Port c carries E(cos + sin)(delta/2) Psi_-, port d carries
    E(cos - sin)(delta/2) Psi_+.  The common factor i of the transfer
    matrices is dropped, so propagate() returns exactly i times this.
    """
    product_amplitudes(angles, amplitude)  # validates amplitude
    unit = product_amplitudes(angles, 1.0)
    s, c = math.sin(delta / 2), math.cos(delta / 2)
    c_vec = amplitude * (c + s) * psi_coefficients(unit, "-")
    d_vec = amplitude * (c - s) * psi_coefficients(unit, "+")
    return PortPair(
        SpinOrbitAmplitudes.from_vector(c_vec, amplitude),
        SpinOrbitAmplitudes.from_vector(d_vec, amplitude),
    )


def single_input_output(
    port: Literal["a", "b"], angles: PoincareAngles, amplitude: float, sign: Sign
) -> PortPair:
    """Outputs for one product-state beam entering ``port`` at delta = +-pi/2.

    sign "+" is delta = +pi/2 (outputs carry Psi_-), "-" is delta = -pi/2
    (outputs carry Psi_+).  Same dropped factor i as classical_dual_output.
    """
    s = _check_sign(sign)
    if port not in ("a", "b"):
        raise InvalidParameterError(f"port must be 'a' or 'b', got {port!r}")
    amps = product_amplitudes(angles, amplitude)
    psi = psi_coefficients(amps, "-" if s == 1 else "+") / math.sqrt(2)
    if port == "a":
        c_fac, d_fac = s, 1
    else:
        c_fac, d_fac = 1, -s
    return PortPair(
        SpinOrbitAmplitudes.from_vector(c_fac * psi, amplitude),
        SpinOrbitAmplitudes.from_vector(d_fac * psi, amplitude),
    )


def hom_delta(sign: Sign) -> float:
    return _check_sign(sign) * math.pi / 2
