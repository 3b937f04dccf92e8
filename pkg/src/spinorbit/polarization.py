"""Jones-calculus analysis of output fields: polarizers, retarders, Stokes maps.

Gamma is the polarizer transmission axis measured from vertical,
anticlockwise as viewed from the beam source.  In the right-handed field
frame x points left in that view, so the axis is (sin G, cos G) in (x, y).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import FieldGrid, gaussian_profile
from .interferometer import _check_sign


def polarizer_matrix(gamma: float) -> np.ndarray:
    s, c = math.sin(gamma), math.cos(gamma)
    return np.array([[s * s, s * c], [s * c, c * c]])


def canonical_gamma(gamma: float) -> float:
    """Polarizer angle reduced to [0, pi); the matrix has period pi."""
    g = math.fmod(gamma, math.pi)
    if g < 0:
        g += math.pi
    return 0.0 if g >= math.pi else g


def _apply(field, fn):
    if isinstance(field, FieldGrid):
        return FieldGrid(field.spec, fn(field.values))
    return fn(np.asarray(field, dtype=complex))


def apply_polarizer(field, gamma: float):
    """Project every pixel's Jones vector onto the polarizer axis."""
    m = polarizer_matrix(gamma)
    return _apply(field, lambda v: v @ m.T)


def apply_retarder(field, beta: float):
    """Multiply ex by e^{i beta}; ey passes unchanged."""
    phase = np.array([np.exp(1j * beta), 1.0])
    return _apply(field, lambda v: v * phase)


def polarized_power(gamma, beta, sign, r, phi_az, w0: float = 1.0, amplitude: float = 1.0):
    """Analyzed power density of the balanced-scenario output at one port.

    Balanced preparation (theta=pi/2, phi=pi, alpha=pi/2), single input at
    port a, delta = sign*pi/2, polarizer at ``gamma``.  phi_az is the
    field-frame azimuth.  Equals the apply_polarizer pipeline pixelwise:
    (E^2 G^2 / 8) (1 -+ sin(2 gamma) sin(beta +- 2 phi_az)).
    """
    s = _check_sign(sign)
    g = gaussian_profile(r, w0)
    return amplitude**2 * g**2 / 8 * (1 - s * np.sin(2 * gamma) * np.sin(beta + 2 * s * np.asarray(phi_az)))


def stokes(field) -> np.ndarray:
    """(S0, S1, S2, S3) stacked on the leading axis; S3 = -2 Im(ex ey*)."""
    v = field.values if isinstance(field, FieldGrid) else np.asarray(field)
    ex, ey = v[..., 0], v[..., 1]
    cross = ex * np.conj(ey)
    return np.stack(
        [
            np.abs(ex) ** 2 + np.abs(ey) ** 2,
            np.abs(ex) ** 2 - np.abs(ey) ** 2,
            2 * cross.real,
            -2 * cross.imag,
        ]
    )


@dataclass(frozen=True)
class PolarizationEllipse:
    """Per-pixel ellipse parameters (arrays or scalars).

    orientation: major axis angle in [0, pi), measured from x toward y.
    ellipticity: signed minor/major axis ratio, tan of the ellipticity angle.
    """

    orientation: np.ndarray
    ellipticity: np.ndarray
    intensity: np.ndarray


def ellipse_map(field, floor: float = 0.0) -> PolarizationEllipse:
    """Polarization ellipse of each pixel; pixels with S0 <= floor report (0, 0)."""
    S0, S1, S2, S3 = stokes(field)
    dark = S0 <= floor
    safe = np.where(dark, 1.0, S0)
    orient = 0.5 * np.arctan2(S2, S1)
    orient = np.where(orient < 0, orient + np.pi, orient)
    orient = np.where(orient >= np.pi, orient - np.pi, orient)
    chi = 0.5 * np.arcsin(np.clip(S3 / safe, -1.0, 1.0))
    ell = np.tan(chi)
    return PolarizationEllipse(
        orientation=np.where(dark, 0.0, orient),
        ellipticity=np.where(dark, 0.0, ell),
        intensity=S0,
    )
