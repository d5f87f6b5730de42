"""Fisher information of the measurement schemes and the matching quantum bounds.

Closed-form Fisher information for each scheme, the quantum Fisher information
(QFI) that bounds it, and the Cramer-Rao uncertainty they imply.  Every closed
form here has an independent finite-difference counterpart in
:mod:`tiltsense.oracle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy import special

from ._integrate import integrate_interval
from .beam import BeamParams
from .oracle import numeric_fisher_oracle
from .polarization import PolarizationState
from .schemes import (
    ConditionedPolarizationModel,
    PolarizationModel,
    PositionModel,
    PositionPolarizationModel,
    QuadrantModel,
    interference_coefficients,
)

# below this, the polarization Fisher denominator is treated as the degenerate
# maximal-visibility working point and the analytic theta->0 limit is returned
DEGENERATE_DEN = 1e-14

# cosh^2 appears in the conditioned Fisher; half the overflow threshold keeps
# it finite, and the value is already below double underflow there
COSH_CUTOFF = 350.0


def qfi_beam_deflection(beam: BeamParams) -> float:
    """Quantum bound for direct deflection sensing: 16 k^2 Var(x) at the object."""
    return 16.0 * beam.k ** 2 * beam.variance(0.0)


def qfi_sagnac(beam: BeamParams, pol: PolarizationState) -> float:
    """Quantum bound for the common-path (counter-propagating) interferometer.

    16 k^2 [Var(x) + (1 - <sz>^2) xi^2]: the transverse displacement adds
    information whenever the polarization populations are balanced.
    """
    sz = pol.sigma_z_mean
    return 16.0 * beam.k ** 2 * (beam.variance(0.0) + (1.0 - sz * sz) * beam.xi ** 2)


def qfi_mach_zehnder(beam: BeamParams, pol: PolarizationState) -> float:
    """Quantum bound for the single-sided (one arm probes the object) interferometer.

    8 k^2 (1 - <sz>) [Var(x) + (1 + <sz>) xi^2 / 2].
    """
    sz = pol.sigma_z_mean
    return (
        8.0
        * beam.k ** 2
        * (1.0 - sz)
        * (beam.variance(0.0) + 0.5 * (1.0 + sz) * beam.xi ** 2)
    )


def fisher_position(beam: BeamParams, z: float) -> float:
    """Fisher information of an ideal position measurement at plane z.

    16 k^2 (w0^2/4) z^2/(z^2 + z_R^2): grows with the lever arm and saturates
    the deflection QFI in the far field.  Independent of theta and xi.
    """
    zr = beam.rayleigh_range
    return qfi_beam_deflection(beam) * z * z / (z * z + zr * zr)


def fisher_quadrant(
    beam: BeamParams, theta: float, z: float, split: Optional[float] = None
) -> float:
    """Fisher information of the sign (quadrant) measurement at plane z.

        F = 32 z^2 e^{-2 g^2} / (pi w^2(z) [1 - erf^2(g)]),
        g = sqrt(2) (xi + 2 theta z - split) / w(z),

    with the split defaulting to x = xi so that g = 2 sqrt(2) theta z / w(z).
    """
    if split is None:
        split = beam.xi
    w = beam.width(z)
    g = math.sqrt(2.0) * (beam.xi + 2.0 * theta * z - split) / w
    # 1 - erf^2 = erfc(g) (2 - erfc(g)), stable in the tails
    erfc = special.erfc(g)
    complement = erfc * (2.0 - erfc)
    if complement <= 0.0:
        return 0.0
    return 32.0 * z * z * math.exp(-2.0 * g * g) / (math.pi * w * w * complement)


def fisher_sagnac_polarization(beam: BeamParams, pol: PolarizationState, theta: float) -> float:
    """Fisher information of the position-integrated polarization measurement.

        F = 16 d^2 [B theta cos(4 k xi theta - phi) + 2 k xi sin(4 k xi theta - phi)]^2
            / (e^{2 B theta^2} - 4 d^2 cos^2(4 k xi theta - phi)),

    with B = 2 k^2 w0^2.  At the degenerate maximal-visibility working point
    (d = 1/2, phi = 0 mod pi, theta -> 0) the 0/0 is resolved by its analytic
    limit 16 k^2 [w0^2/4 + xi^2].
    """
    # |alpha* beta| <= 1/2 for any physical state; normalization rounding can
    # push the stored value a few ulp above, which would flip the sign of the
    # denominator near theta = 0
    d = min(pol.coherence_magnitude, 0.5)
    if d == 0.0:
        return 0.0
    phi = pol.coherence_phase
    b_coeff = 2.0 * (beam.k * beam.w0) ** 2
    ph = 4.0 * beam.k * beam.xi * theta - phi
    c = math.cos(ph)
    s = math.sin(ph)
    num = 16.0 * d * d * (b_coeff * theta * c + 2.0 * beam.k * beam.xi * s) ** 2
    # e^{2B th^2} - 4 d^2 c^2 rewritten with only non-cancelling terms
    den = math.expm1(2.0 * b_coeff * theta * theta) + (1.0 - 4.0 * d * d) + 4.0 * d * d * s * s
    if den <= 0.0 or (abs(theta) < 1e-12 and den < DEGENERATE_DEN):
        return 16.0 * beam.k ** 2 * (beam.variance(0.0) + beam.xi ** 2)
    return num / den


def fisher_conditioned(beam: BeamParams, z: float, x, theta: float):
    """Fisher information of the polarization measurement at a point detector x.

    Exact value from the conditioned probabilities (1/2)[1 pm cos(a th)/cosh(b th)]:

        F = [a sin(p) cosh(q) + b cos(p) sinh(q)]^2
               / (cosh^2(q) [sinh^2(q) + sin^2(p)]),   p = a theta, q = b theta,

    a form with no cancelling differences.  At theta = 0 it equals the limit
    a^2 + b^2 = 16 k^2 (z_R^2 x^2 + z^2 xi^2)/(z^2 + z_R^2).
    """
    a, b = interference_coefficients(beam, z, x)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p = a * theta
    q = b * theta
    qa = np.abs(q)
    qc = np.minimum(qa, COSH_CUTOFF)
    sp = np.sin(p)
    cp = np.cos(p)
    sh = np.sinh(qc) * np.sign(q)
    ch = np.cosh(qc)
    s2 = sh * sh + sp * sp
    limit = a * a + b * b
    with np.errstate(invalid="ignore", divide="ignore"):
        val = (a * sp * ch + b * cp * sh) ** 2 / (ch * ch * s2)
    val = np.where(s2 == 0.0, limit, val)
    val = np.where(qa > COSH_CUTOFF, 0.0, val)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(val)
    return val


class FisherDecomposition(NamedTuple):
    avg_conditioned: float
    position_part: float
    total: float


def fisher_total_decomposition(
    beam: BeamParams, z: float, theta: float, rtol: float = 1e-10
) -> FisherDecomposition:
    """Split the joint measurement information into polarization and spatial parts.

    For the diagonal input state:

        total = integral dx P(x) F_cond(x)  +  integral dx (dP/dtheta)^2 / P,

    with P(x) the position marginal.  In the small-angle regime the first term
    carries everything (16 k^2 [w0^2/4 + xi^2]) and the second vanishes.
    """
    model = PositionPolarizationModel(beam, PolarizationState.diagonal(), z)
    lo, hi = model.domain(theta)
    points = model.breakpoints(theta)

    def avg_integrand(xx):
        return float(model.total_pdf(theta, xx)) * fisher_conditioned(beam, z, xx, theta)

    def pos_integrand(xx):
        p = float(model.total_pdf(theta, xx))
        if p < 1e-300:
            return 0.0
        dp = float(model.total_pdf_dtheta(theta, xx))
        return dp * dp / p

    avg = integrate_interval(avg_integrand, lo, hi, points, rtol=rtol)
    pos = integrate_interval(pos_integrand, lo, hi, points, rtol=rtol)
    return FisherDecomposition(avg_conditioned=avg, position_part=pos, total=avg + pos)


def cramer_rao_bound(fisher: float, nu: int) -> float:
    """Lower bound on the tilt uncertainty after nu repetitions: 1/sqrt(nu F)."""
    if fisher <= 0.0:
        return math.inf
    return 1.0 / math.sqrt(nu * fisher)


def analytic_fisher(model, theta: float) -> float:
    """Closed-form Fisher information of a probability model at theta."""
    if isinstance(model, PositionModel):
        return fisher_position(model.beam, model.z)
    if isinstance(model, QuadrantModel):
        return fisher_quadrant(model.beam, theta, model.z, model.split)
    if isinstance(model, PolarizationModel):
        return fisher_sagnac_polarization(model.beam, model.pol, theta)
    if isinstance(model, ConditionedPolarizationModel):
        return fisher_conditioned(model.beam, model.z, model.x, theta)
    if isinstance(model, PositionPolarizationModel):
        pol = model.pol
        diagonal = (
            abs(pol.sigma_z_mean) <= 1e-12
            and pol.coherence_magnitude >= 0.5 - 1e-12
            and abs(math.sin(pol.coherence_phase)) <= 1e-12
        )
        if not diagonal:
            raise ValueError(
                "closed-form decomposition is defined for the diagonal input state"
            )
        return fisher_total_decomposition(model.beam, model.z, theta).total
    raise TypeError(f"no closed-form Fisher information for {type(model).__name__}")


def qfi_for_model(model) -> float:
    """The quantum bound matching a probability model.

    For the point-detector (conditioned) model this is the full-state bound;
    the per-detection information at large |x| may legitimately exceed it,
    since rare detections are not a complete measurement.
    """
    if isinstance(model, (PositionModel, QuadrantModel)):
        return qfi_beam_deflection(model.beam)
    if isinstance(model, (PolarizationModel, PositionPolarizationModel)):
        return qfi_sagnac(model.beam, model.pol)
    if isinstance(model, ConditionedPolarizationModel):
        return qfi_sagnac(model.beam, PolarizationState.diagonal())
    raise TypeError(f"no QFI bound for {type(model).__name__}")


@dataclass(frozen=True)
class FisherReport:
    """Closed form, oracle value and quantum bound for one configuration."""

    analytic: float
    numeric: float
    qfi: float
    nu: int = 1

    @property
    def ratio(self) -> float:
        return self.analytic / self.qfi if self.qfi > 0.0 else math.nan

    @property
    def cr_bound(self) -> float:
        return cramer_rao_bound(self.analytic, self.nu)


def build_report(model, theta: float, nu: int = 1, step: Optional[float] = None) -> FisherReport:
    return FisherReport(
        analytic=analytic_fisher(model, theta),
        numeric=numeric_fisher_oracle(model, theta, step=step),
        qfi=qfi_for_model(model),
        nu=nu,
    )
