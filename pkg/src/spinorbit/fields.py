"""Transverse field evaluation for basis modes and the vector modes Psi_-+.

Fields are returned as complex arrays with a trailing axis of length 2
holding (ex, ey).  All lengths are in the same units as the waist w0.  The
azimuth ``phi_az`` is measured from x toward y in the right-handed field
frame used by the mode definitions (not the source-view image frame, see
``scenarios``).

For the ``psi_*`` functions ``sign`` names the vector mode: "-" is Psi_-
(the delta = +pi/2 output), "+" is Psi_+.  For ``single_input_power`` the
sign is that of delta, matching the interferometer module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .interferometer import _check_sign, psi_coefficients
from .modes import BASIS, BasisModeIndex, PoincareAngles, SpinOrbitAmplitudes

G_NORM = math.sqrt(8.0 / math.pi)
# Below this |psi_-+| the factored phase of the closed form is ill-conditioned.
NODAL_TOL = 1e-5


@dataclass(frozen=True)
class GridSpec:
    half_extent: float = 4.0
    samples: int = 256
    waist: float = 1.0

    def __post_init__(self):
        if self.samples < 16:
            raise InvalidParameterError("samples_per_axis must be >= 16")
        if not (self.waist > 0 and math.isfinite(self.waist)):
            raise InvalidParameterError("waist must be positive")
        if not (self.half_extent > 0 and math.isfinite(self.half_extent)):
            raise InvalidParameterError("half_extent must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / (self.samples - 1)

    def axis(self) -> np.ndarray:
        return np.linspace(-self.half_extent, self.half_extent, self.samples)

    def polar(self) -> tuple[np.ndarray, np.ndarray]:
        """(r, phi_az) on the grid; array index [iy, ix] with x, y ascending."""
        u = self.axis()
        X, Y = np.meshgrid(u, u, indexing="xy")
        return np.hypot(X, Y), np.arctan2(Y, X)


@dataclass(frozen=True)
class FieldGrid:
    spec: GridSpec
    values: np.ndarray  # (samples, samples, 2) complex, [iy, ix, (ex, ey)]

    def __post_init__(self):
        n = self.spec.samples
        if self.values.shape != (n, n, 2):
            raise InvalidParameterError(f"field values must have shape {(n, n, 2)}, got {self.values.shape}")

    @property
    def ex(self) -> np.ndarray:
        return self.values[..., 0]

    @property
    def ey(self) -> np.ndarray:
        return self.values[..., 1]

    def power(self) -> np.ndarray:
        return power_density(self.values)

    def total_power(self) -> float:
        return float(self.power().sum() * self.spec.spacing**2)


def jones(ex, ey) -> np.ndarray:
    ex, ey = np.broadcast_arrays(np.asarray(ex, dtype=complex), np.asarray(ey, dtype=complex))
    return np.stack([ex, ey], axis=-1)


def gaussian_profile(r, w0: float = 1.0):
    """Common radial factor sqrt(8/pi) r/w0^2 exp(-(r/w0)^2) of the first-order modes."""
    if not w0 > 0:
        raise InvalidParameterError(f"w0 must be positive, got {w0}")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InvalidParameterError("r must be non-negative")
    return G_NORM * r / w0**2 * np.exp(-((r / w0) ** 2))


def basis_field(idx: BasisModeIndex, r, phi_az, w0: float = 1.0) -> np.ndarray:
    """E_jk: G sin(phi) (j=0) or G cos(phi) (j=1), on y (k=0) or x (k=1)."""
    j, k = idx
    if j not in (0, 1) or k not in (0, 1):
        raise InvalidParameterError(f"basis index must be binary, got {idx}")
    g = gaussian_profile(r, w0)
    spatial = g * (np.sin(phi_az) if j == 0 else np.cos(phi_az))
    zero = np.zeros_like(spatial)
    return jones(spatial, zero) if k == 1 else jones(zero, spatial)


def field_from_amplitudes(amps_vector, r, phi_az, w0: float = 1.0) -> np.ndarray:
    """sum_jk e_jk E_jk for a 4-vector in BASIS order."""
    out = 0
    for idx, e in zip(BASIS, np.asarray(amps_vector, dtype=complex)):
        if e != 0:
            out = out + e * basis_field(idx, r, phi_az, w0)
    if isinstance(out, int):
        return jones(np.zeros(np.broadcast(np.asarray(r), np.asarray(phi_az)).shape), 0)
    return out


def psi_from_basis(amps: SpinOrbitAmplitudes, sign: str, r, phi_az, w0: float = 1.0) -> np.ndarray:
    return field_from_amplitudes(psi_coefficients(amps, sign), r, phi_az, w0)


@dataclass(frozen=True)
class ABSymbols:
    a_plus: np.ndarray
    a_minus: np.ndarray
    b: np.ndarray


def ab_symbols(theta: float, phi_az) -> ABSymbols:
    st2 = math.sin(theta / 2) ** 2
    ct2 = math.cos(theta / 2) ** 2
    c2, s2 = np.cos(phi_az) ** 2, np.sin(phi_az) ** 2
    return ABSymbols(
        a_plus=st2 * c2 + ct2 * s2,
        a_minus=st2 * c2 - ct2 * s2,
        b=0.5 * math.sin(theta) * np.sin(2 * np.asarray(phi_az)),
    )


def psi_parameterized(
    angles: PoincareAngles, sign: str, r, phi_az, w0: float = 1.0, amplitude: float = 1.0
) -> np.ndarray:
    """Psi_-+ written in the input Poincaré angles through A+-, B.

    The common phase is that of the spatial factor psi_-+ (atan2, 0 at its
    zeros) and the x-component carries the relative phase
    atan2(+-B cos(phi), -A_-) between psi_+- and psi_-+.  Where psi_-+
    vanishes that split is undefined, so the x-component falls back to the
    phase of psi_+- itself.
    """
    s = -_check_sign(sign)  # +1 for Psi_-
    th, ph, al, be = angles.theta, angles.phi, angles.alpha, angles.beta
    ct, st = math.cos(th / 2), math.sin(th / 2)
    phi_az = np.asarray(phi_az, dtype=float)
    sin_p, cos_p = np.sin(phi_az), np.cos(phi_az)
    ab = ab_symbols(th, phi_az)

    # psi_-+ / (E G) = cos(th/2) sin(P) -+ i sin(th/2) cos(P) e^{i ph}
    re = ct * sin_p + s * st * cos_p * math.sin(ph)
    im = -s * st * cos_p * math.cos(ph)
    common = np.arctan2(im, re)
    rad_y = np.maximum(ab.a_plus + s * ab.b * math.sin(ph), 0.0)
    rad_x = np.maximum(ab.a_plus - s * ab.b * math.sin(ph), 0.0)
    rel = np.arctan2(s * ab.b * math.cos(ph), -ab.a_minus)
    x_phase = common + rel

    nodal = np.hypot(re, im) < NODAL_TOL
    if np.any(nodal):
        re_o = ct * sin_p - s * st * cos_p * math.sin(ph)
        im_o = s * st * cos_p * math.cos(ph)
        x_phase = np.where(nodal, np.arctan2(im_o, re_o), x_phase)

    eg = amplitude * gaussian_profile(r, w0)
    ey = eg * math.cos(al / 2) * np.sqrt(rad_y) * np.exp(1j * common)
    ex = eg * (-s * 1j) * math.sin(al / 2) * np.sqrt(rad_x) * np.exp(1j * (be + x_phase))
    return jones(ex, ey)


def power_density(field) -> np.ndarray:
    f = np.asarray(field)
    return np.abs(f[..., 0]) ** 2 + np.abs(f[..., 1]) ** 2


def single_input_power(
    angles: PoincareAngles, sign: str, r, phi_az, w0: float = 1.0, amplitude: float = 1.0
) -> np.ndarray:
    """Output power density at either port for one input beam at delta = sign*pi/2."""
    s = _check_sign(sign)
    ab = ab_symbols(angles.theta, phi_az)
    g = gaussian_profile(r, w0)
    return 0.5 * amplitude**2 * g**2 * (ab.a_plus + s * ab.b * math.sin(angles.phi) * math.cos(angles.alpha))


def evaluate_on_grid(spec: GridSpec, func) -> FieldGrid:
    """FieldGrid from ``func(r, phi_az, w0) -> (..., 2)`` sampled on ``spec``."""
    r, phi = spec.polar()
    return FieldGrid(spec, np.asarray(func(r, phi, spec.waist), dtype=complex))
