"""Spin-orbit product states on the orbital and spin Poincaré spheres.

A product input is fixed by two Poincaré-sphere points: (theta, phi) for the
first-order Hermite-Gaussian spatial superposition and (alpha, beta) for the
vertical/horizontal polarization superposition.  Its field decomposes over
four vector basis modes E_jk, where j (k) is the parity of the spatial mode
(polarization vector) under x -> -x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError

TWO_PI = 2.0 * math.pi


class BasisModeIndex(NamedTuple):
    j: int  # orbital parity, 0 even / 1 odd
    k: int  # spin parity, 0 even / 1 odd

    @property
    def label(self) -> str:
        return f"{self.j}{self.k}"

    @property
    def even(self) -> bool:
        return (self.j + self.k) % 2 == 0


# Storage order used by every amplitude vector in the package.
BASIS = (
    BasisModeIndex(0, 0),
    BasisModeIndex(1, 1),
    BasisModeIndex(1, 0),
    BasisModeIndex(0, 1),
)


def parity_sign(idx: BasisModeIndex) -> int:
    """Reflection phase (-1)**(j+k) picked up by E_jk at each mirror."""
    j, k = idx
    if j not in (0, 1) or k not in (0, 1):
        raise InvalidParameterError(f"basis index must be binary, got {idx}")
    return -1 if (j + k) % 2 else 1


@dataclass(frozen=True)
class PoincareAngles:
    theta: float
    phi: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("theta", "phi", "alpha", "beta"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")

    def canonical(self) -> "PoincareAngles":
        """Equivalent angles with theta, alpha in [0, pi] and phi, beta in [-pi, pi).

        The physical state is preserved up to a global phase, which is the
        only freedom a point on the sphere has.
        """
        theta, phi = _canonical_pair(self.theta, self.phi)
        alpha, beta = _canonical_pair(self.alpha, self.beta)
        return PoincareAngles(theta, phi, alpha, beta)


def _wrap(angle: float) -> float:
    """Map to [-pi, pi)."""
    w = math.fmod(angle + math.pi, TWO_PI)
    if w < 0:
        w += TWO_PI
    return w - math.pi


def _canonical_pair(polar: float, azimuth: float) -> tuple[float, float]:
    # cos(p/2), sin(p/2) e^{ia}: polar -> polar + 2pi flips both signs (global
    # phase), polar -> -polar flips the sin term, absorbed as azimuth + pi.
    p = math.fmod(polar, 2 * TWO_PI)
    if p < 0:
        p += 2 * TWO_PI
    if p > TWO_PI:
        p -= TWO_PI
    if p > math.pi:
        p = TWO_PI - p
        azimuth += math.pi
    return p, _wrap(azimuth)


@dataclass(frozen=True)
class SpinOrbitAmplitudes:
    """Complex coefficients of a port field over (E00, E11, E10, E01)."""

    e00: complex
    e11: complex
    e10: complex
    e01: complex
    amplitude: float = 1.0

    @classmethod
    def from_vector(cls, vec, amplitude: float = 1.0) -> "SpinOrbitAmplitudes":
        v = np.asarray(vec, dtype=complex)
        if v.shape != (4,):
            raise InvalidParameterError("amplitude vector must have 4 entries")
        return cls(complex(v[0]), complex(v[1]), complex(v[2]), complex(v[3]), amplitude)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.e00, self.e11, self.e10, self.e01], dtype=complex)

    def __getitem__(self, idx: BasisModeIndex) -> complex:
        return getattr(self, "e" + BasisModeIndex(*idx).label)

    def power(self) -> float:
        return float(np.sum(np.abs(self.vector) ** 2))

    def scaled(self, factor: complex) -> "SpinOrbitAmplitudes":
        return SpinOrbitAmplitudes.from_vector(self.vector * factor, self.amplitude)


def product_amplitudes(angles: PoincareAngles, amplitude: float = 1.0) -> SpinOrbitAmplitudes:
    """Basis-mode amplitudes of a spin-orbit product state.

    >>> a = product_amplitudes(PoincareAngles(0.0, 0.0, 0.0, 0.0))
    >>> a.e00, a.e11
    ((1+0j), 0j)
    """
    if not math.isfinite(amplitude) or amplitude < 0:
        raise InvalidParameterError(f"amplitude must be finite and >= 0, got {amplitude}")
    ct, st = math.cos(angles.theta / 2), math.sin(angles.theta / 2)
    ca, sa = math.cos(angles.alpha / 2), math.sin(angles.alpha / 2)
    e_phi = complex(math.cos(angles.phi), math.sin(angles.phi))
    e_beta = complex(math.cos(angles.beta), math.sin(angles.beta))
    E = amplitude
    return SpinOrbitAmplitudes(
        e00=complex(E * ct * ca),
        e11=E * st * sa * e_phi * e_beta,
        e10=E * st * ca * e_phi,
        e01=E * ct * sa * e_beta,
        amplitude=E,
    )


def separability_witness(amps: SpinOrbitAmplitudes) -> complex:
    """e00*e11 - e10*e01; zero exactly for spin-orbit product states."""
    return amps.e00 * amps.e11 - amps.e10 * amps.e01


def same_state(a: SpinOrbitAmplitudes, b: SpinOrbitAmplitudes, atol: float = 1e-12) -> bool:
    """True if the amplitude vectors agree up to one common unit-modulus factor."""
    va, vb = a.vector, b.vector
    i = int(np.argmax(np.abs(va)))
    if abs(va[i]) <= atol:
        return bool(np.allclose(vb, 0, atol=atol))
    if abs(vb[i]) <= atol:
        return False
    ratio = vb[i] / va[i]
    if abs(abs(ratio) - 1.0) > atol:
        return False
    return bool(np.allclose(va * ratio, vb, atol=atol, rtol=0))
