"""Outcome probabilities for the four tilt-measurement schemes.

A tilt ``theta`` of the reflecting surface deflects the beam by ``2*theta``.
The schemes observe, at a detector plane z:

* the full transverse intensity profile (``PositionModel``),
* only the sign of the detected position (``QuadrantModel``),
* the diagonal polarization of the common-path interferometer output,
  integrated over position (``PolarizationModel``),
* polarization and position jointly (``PositionPolarizationModel``), with
  ``ConditionedPolarizationModel`` giving the polarization statistics of a
  point detector at fixed x.

In the interferometer the H and V components counter-propagate and pick up
opposite deflections, so the polarization coherence acquires a theta- and
position-dependent phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from .beam import BeamParams
from .polarization import PolarizationState

# cosh overflows double range just above 710; past this the cos/cosh
# interference ratio is returned as exactly 0
COSH_CUTOFF = 700.0

# beyond these the first-order (small-angle) saturation statements degrade,
# although the exact formulas remain valid
SMALL_ANGLE_LIMIT = 0.01


def small_angle_flags(beam: BeamParams, theta: float) -> tuple[str, ...]:
    """Warnings for operating points outside the first-order regime.

    Returned as plain strings so callers can attach them to their own output
    rows; nothing is raised and no global state is touched.
    """
    flags = []
    dephasing = 2.0 * (beam.k * beam.w0) ** 2 * theta * theta
    if dephasing >= SMALL_ANGLE_LIMIT:
        flags.append(f"dephasing argument 2(k w0 theta)^2 = {dephasing:.3e} >= 0.01")
    offset_phase = (4.0 * beam.k * beam.xi * theta) ** 2
    if offset_phase >= SMALL_ANGLE_LIMIT:
        flags.append(f"displacement phase (4 k xi theta)^2 = {offset_phase:.3e} >= 0.01")
    return tuple(flags)


def quadrant_probabilities(
    beam: BeamParams, theta: float, z: float, split: Optional[float] = None
):
    """Probabilities that the photon lands on either side of a split detector.

    The split line defaults to the undeflected beam center x = xi (detector
    pre-aligned to the beam), which makes the result independent of xi:

        P_pm = (1/2) [1 pm erf(2 sqrt(2) theta z / w(z))].

    Passing ``split`` moves the line elsewhere for sensitivity studies.
    """
    if split is None:
        split = beam.xi
    w = beam.width(z)
    arg = math.sqrt(2.0) * (beam.xi + 2.0 * theta * z - split) / w
    # erfc on both sides keeps the small outcome accurate in the tails
    return 0.5 * special.erfc(-arg), 0.5 * special.erfc(arg)


def sagnac_joint_density(
    beam: BeamParams, pol: PolarizationState, theta: float, z: float, x
):
    """Joint densities (p_plus, p_minus) of diagonal-basis outcome and position.

    Projecting the interferometer output onto (|H> pm |V>)/sqrt(2) and then on
    position gives, per outcome, the half-weighted displaced Gaussians of the
    two counter-propagating paths plus an interference term:

        p_pm(x) = |alpha|^2/2 |psi(x-xi+2 theta z)|^2
                + |beta|^2/2  |psi(x-xi-2 theta z)|^2
                pm A d e^{-8 theta^2 z^2/w^2} e^{-2(x-xi)^2/w^2}
                     cos(4 k theta (w0^2/w^2)(x-xi) + 4 k theta xi - phi),

    with A = sqrt(2/(pi w^2(z))) and d e^{i phi} = alpha* beta.
    """
    x = np.asarray(x, dtype=float)
    w2 = beam.width(z) ** 2
    amp = math.sqrt(2.0 / (math.pi * w2))
    u = x - beam.xi
    shift = 2.0 * theta * z

    e_h = np.exp(-2.0 * (u + shift) ** 2 / w2)
    e_v = np.exp(-2.0 * (u - shift) ** 2 / w2)
    e_c = np.exp(-2.0 * u ** 2 / w2 - 8.0 * (theta * z) ** 2 / w2)

    pa = abs(pol.alpha) ** 2
    pb = abs(pol.beta) ** 2
    d = pol.coherence_magnitude
    phi = pol.coherence_phase

    base = 0.5 * (pa * e_h + pb * e_v)
    osc = np.cos(
        4.0 * beam.k * theta * (beam.w0 ** 2 / w2) * u + 4.0 * beam.k * theta * beam.xi - phi
    )
    cross = d * e_c * osc
    # |cross| <= base holds exactly (d^2 = pa*pb); clamp rounding residue
    p_plus = amp * np.maximum(base + cross, 0.0)
    p_minus = amp * np.maximum(base - cross, 0.0)
    return p_plus, p_minus


def sagnac_polarization_probabilities(beam: BeamParams, pol: PolarizationState, theta: float):
    """Position-integrated probabilities of the diagonal polarization outcomes.

    Independent of the detection plane z:

        P_pm = (1/2) [1 pm 2 d e^{-B theta^2} cos(4 k theta xi - phi)],
        B    = 2 k^2 w0^2.
    """
    d = pol.coherence_magnitude
    phi = pol.coherence_phase
    b_coeff = 2.0 * (beam.k * beam.w0) ** 2
    contrast = (
        2.0
        * d
        * math.exp(-b_coeff * theta * theta)
        * math.cos(4.0 * beam.k * beam.xi * theta - phi)
    )
    # visibility cannot exceed 1; clip the normalization rounding of d
    contrast = max(-1.0, min(1.0, contrast))
    return 0.5 * (1.0 + contrast), 0.5 * (1.0 - contrast)


def conditioned_polarization_probabilities(beam: BeamParams, theta: float, z: float, x):
    """Polarization probabilities conditioned on detection at position x.

    For the diagonal input state alpha = beta = 1/sqrt(2),

        P(pm | x) = (1/2) [1 pm cos(4 k theta (w0^2/w^2)(x-xi) + 4 k theta xi)
                               / cosh(8 theta z (x-xi) / w^2)],

    which sums to 1 exactly.  For |cosh argument| > 700 the ratio is returned
    as 0 (both outcomes equally likely) to avoid overflow.
    """
    x = np.asarray(x, dtype=float)
    w2 = beam.width(z) ** 2
    u = x - beam.xi
    p = 4.0 * beam.k * theta * (beam.w0 ** 2 / w2) * u + 4.0 * beam.k * theta * beam.xi
    q = 8.0 * theta * z * u / w2
    qa = np.abs(q)
    ratio = np.where(
        qa > COSH_CUTOFF, 0.0, np.cos(p) / np.cosh(np.minimum(qa, COSH_CUTOFF))
    )
    return 0.5 * (1.0 + ratio), 0.5 * (1.0 - ratio)


def interference_coefficients(beam: BeamParams, z: float, x):
    """Per-radian rates (a, b) of the conditioned interference signal at x.

    ``a`` multiplies theta inside the cosine (polarization-rotation phase) and
    ``b`` inside the cosh (which-path damping):

        a = 4 k (z_R^2 x + z^2 xi) / (z^2 + z_R^2),
        b = 4 k z z_R (x - xi) / (z^2 + z_R^2),

    so that (1/2)[1 pm cos(a theta)/cosh(b theta)] reproduces
    ``conditioned_polarization_probabilities``.
    """
    x = np.asarray(x, dtype=float)
    zr = beam.rayleigh_range
    denom = z * z + zr * zr
    a = 4.0 * beam.k * (zr * zr * x + z * z * beam.xi) / denom
    b = 4.0 * beam.k * z * zr * (x - beam.xi) / denom
    return a, b


# ---------------------------------------------------------------------------
# Probability models: a scheme bound to beam (+ polarization), exposing its
# outcome distribution as a function of theta.  Discrete models implement
# probabilities(theta); continuous ones pdf/branch_pdf plus an integration
# domain.
# ---------------------------------------------------------------------------

DOMAIN_WIDTHS = 10.0  # integration window, in local beam widths around the centers


@dataclass(frozen=True)
class PositionModel:
    """Imaging detector at plane z; outcome is the continuous position x."""

    beam: BeamParams
    z: float

    def mean(self, theta: float) -> float:
        return self.beam.xi + 2.0 * theta * self.z

    def sigma(self) -> float:
        return 0.5 * self.beam.width(self.z)

    def pdf(self, theta: float, x):
        w2 = self.beam.width(self.z) ** 2
        amp = math.sqrt(2.0 / (math.pi * w2))
        u = np.asarray(x, dtype=float) - self.mean(theta)
        return amp * np.exp(-2.0 * u * u / w2)

    def gaussian_mixture(self, theta: float):
        """(weights, means, sigmas) of the exact mixture representation."""
        return (
            np.array([1.0]),
            np.array([self.mean(theta)]),
            np.array([self.sigma()]),
        )

    def domain(self, theta: float):
        w = self.beam.width(self.z)
        c = self.mean(theta)
        return c - DOMAIN_WIDTHS * w, c + DOMAIN_WIDTHS * w

    def breakpoints(self, theta: float):
        return (self.mean(theta),)


@dataclass(frozen=True)
class QuadrantModel:
    """Sign detector at plane z; outcomes are +1/-1 for x above/below the split."""

    beam: BeamParams
    z: float
    split: Optional[float] = None

    def probabilities(self, theta: float):
        return np.array(quadrant_probabilities(self.beam, theta, self.z, self.split))


@dataclass(frozen=True)
class PolarizationModel:
    """Position-integrated diagonal polarization measurement; outcomes +1/-1."""

    beam: BeamParams
    pol: PolarizationState

    def probabilities(self, theta: float):
        return np.array(sagnac_polarization_probabilities(self.beam, self.pol, theta))


@dataclass(frozen=True)
class ConditionedPolarizationModel:
    """Diagonal polarization statistics of a point detector at fixed x."""

    beam: BeamParams
    z: float
    x: float

    def probabilities(self, theta: float):
        p_plus, p_minus = conditioned_polarization_probabilities(
            self.beam, theta, self.z, self.x
        )
        return np.array([float(p_plus), float(p_minus)])


@dataclass(frozen=True)
class PositionPolarizationModel:
    """Joint measurement of diagonal polarization and position at plane z."""

    beam: BeamParams
    pol: PolarizationState
    z: float

    def branch_pdf(self, theta: float, x):
        """Stacked densities [p_plus(x), p_minus(x)]."""
        p_plus, p_minus = sagnac_joint_density(self.beam, self.pol, theta, self.z, x)
        return np.stack([np.atleast_1d(p_plus), np.atleast_1d(p_minus)])

    def total_pdf(self, theta: float, x):
        """Position marginal: the interference term cancels, leaving a mixture."""
        weights, means, sigmas = self.gaussian_mixture(theta)
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x, dtype=float)
        for wgt, mu, sg in zip(weights, means, sigmas):
            out += wgt * np.exp(-0.5 * ((x - mu) / sg) ** 2) / (sg * math.sqrt(2.0 * math.pi))
        return out

    def total_pdf_dtheta(self, theta: float, x):
        """Analytic d/dtheta of the position marginal."""
        x = np.asarray(x, dtype=float)
        w2 = self.beam.width(self.z) ** 2
        amp = math.sqrt(2.0 / (math.pi * w2))
        u = x - self.beam.xi
        shift = 2.0 * theta * self.z
        pa = abs(self.pol.alpha) ** 2
        pb = abs(self.pol.beta) ** 2
        g_h = amp * np.exp(-2.0 * (u + shift) ** 2 / w2)
        g_v = amp * np.exp(-2.0 * (u - shift) ** 2 / w2)
        # d(shift)/dtheta = 2z, d g/dtheta = -+ 8 z (u +- shift) g / w^2
        return (8.0 * self.z / w2) * (pb * (u - shift) * g_v - pa * (u + shift) * g_h)

    def conditional_plus(self, theta: float, x):
        """P(outcome=+1 | detected at x)."""
        p_plus, p_minus = sagnac_joint_density(self.beam, self.pol, theta, self.z, x)
        total = p_plus + p_minus
        return np.where(total > 0.0, p_plus / np.where(total > 0.0, total, 1.0), 0.5)

    def gaussian_mixture(self, theta: float):
        shift = 2.0 * theta * self.z
        sigma = 0.5 * self.beam.width(self.z)
        return (
            np.array([abs(self.pol.alpha) ** 2, abs(self.pol.beta) ** 2]),
            np.array([self.beam.xi - shift, self.beam.xi + shift]),
            np.array([sigma, sigma]),
        )

    def domain(self, theta: float):
        w = self.beam.width(self.z)
        shift = abs(2.0 * theta * self.z)
        return (
            self.beam.xi - shift - DOMAIN_WIDTHS * w,
            self.beam.xi + shift + DOMAIN_WIDTHS * w,
        )

    def breakpoints(self, theta: float):
        shift = 2.0 * theta * self.z
        return (self.beam.xi - shift, self.beam.xi, self.beam.xi + shift)
