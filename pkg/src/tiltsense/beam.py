"""Gaussian beam geometry and field amplitudes.

The beam propagates along z, reflects off a tilting surface at z = 0 and is
observed in one transverse dimension x.  A surface tilt of ``theta`` deflects
the reflected beam by ``2*theta``.  All quantities are SI (meters, radians).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BeamParams:
    """Monochromatic Gaussian beam, waist at the reflecting surface.

    Parameters
    ----------
    k : float
        Wavenumber 2*pi/wavelength [rad/m].
    w0 : float
        Waist radius (1/e^2 intensity half-width at z = 0) [m].
    xi : float
        Transverse displacement of the beam center [m].
    """

    k: float
    w0: float
    xi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0.0):
            raise ValueError(f"wavenumber must be positive and finite, got {self.k}")
        if not (math.isfinite(self.w0) and self.w0 > 0.0):
            raise ValueError(f"waist must be positive and finite, got {self.w0}")
        if not math.isfinite(self.xi):
            raise ValueError(f"beam displacement must be finite, got {self.xi}")

    @classmethod
    def from_wavelength(cls, wavelength: float, w0: float, xi: float = 0.0) -> "BeamParams":
        return cls(k=TWO_PI / wavelength, w0=w0, xi=xi)

    @classmethod
    def from_rayleigh_range(cls, z_r: float, wavelength: float, xi: float = 0.0) -> "BeamParams":
        """Back-solve the waist from a prescribed Rayleigh range."""
        k = TWO_PI / wavelength
        return cls(k=k, w0=math.sqrt(2.0 * z_r / k), xi=xi)

    @property
    def wavelength(self) -> float:
        return TWO_PI / self.k

    @property
    def rayleigh_range(self) -> float:
        """z_R = k*w0^2/2, the near-field/far-field boundary."""
        return 0.5 * self.k * self.w0 ** 2

    def width(self, z):
        """Beam width w(z) = w0*sqrt(1 + z^2/z_R^2)."""
        zr = self.rayleigh_range
        return self.w0 * np.sqrt(1.0 + (z / zr) ** 2)

    def gouy(self, z):
        """Propagation phase arctan(z/z_R), in [0, pi/2) for z >= 0."""
        return np.arctan2(z, self.rayleigh_range)

    def curvature_radius(self, z: float) -> float:
        """Wavefront radius of curvature z*(1 + z_R^2/z^2); infinite at the waist."""
        if z == 0.0:
            return math.inf
        return z * (1.0 + (self.rayleigh_range / z) ** 2)

    def inverse_curvature(self, z):
        """1/R(z) = z/(z^2 + z_R^2), finite for every z."""
        zr = self.rayleigh_range
        return z / (z * z + zr * zr)

    def variance(self, z=0.0):
        """Transverse variance of the intensity profile, w(z)^2/4."""
        w = self.width(z)
        return w * w / 4.0


def intensity_profile(beam: BeamParams, theta: float, z: float, x):
    """Probability density of detecting the reflected photon at position x.

    The reflected beam center sits at ``xi + 2*theta*z`` in the plane z, so

        P(x) = A * exp(-2 (x - xi - 2 theta z)^2 / w(z)^2),
        A    = sqrt(2 / (pi w(z)^2)),

    which integrates to 1 over x.
    """
    w2 = beam.width(z) ** 2
    amp = math.sqrt(2.0 / (math.pi * w2))
    u = np.asarray(x, dtype=float) - beam.xi - 2.0 * theta * z
    return amp * np.exp(-2.0 * u * u / w2)


def field_amplitude(beam: BeamParams, z: float, x):
    """Complex transverse field of the undeflected beam at plane z.

    Gaussian envelope around the beam center plus the wavefront-curvature and
    Gouy phases.  The squared modulus equals ``intensity_profile`` at
    theta = 0; the curvature phase is written against the optical axis, so it
    is meaningful up to a global phase for a displaced beam.
    """
    x = np.asarray(x, dtype=float)
    w = beam.width(z)
    envelope = (2.0 / (math.pi * w * w)) ** 0.25 * np.exp(-((x - beam.xi) ** 2) / (w * w))
    phase = -0.5 * beam.k * x * x * beam.inverse_curvature(z) + beam.gouy(z)
    return envelope * np.exp(1j * phase)


def waist_momentum_amplitude(beam: BeamParams, q):
    """Momentum-space amplitude of the waist mode, centered at q = 0.

    Normalized so that the squared modulus integrates to 1 over q.  A beam
    displaced to x = xi carries the extra factor exp(-i q xi), applied by the
    caller.
    """
    q = np.asarray(q, dtype=float)
    c = (beam.w0 ** 2 / (2.0 * math.pi)) ** 0.25
    return c * np.exp(-(q * beam.w0) ** 2 / 4.0)
