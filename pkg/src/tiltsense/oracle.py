"""Scheme-agnostic numerical Fisher information.

Differentiates the outcome probabilities of any model by Richardson-refined
central differences and assembles sum_j (dp_j/dtheta)^2 / p_j, by direct
summation for discrete outcomes and by adaptive quadrature for continuous
ones.  Completely independent of the closed forms in :mod:`tiltsense.fisher`,
which it is used to check.
"""

from __future__ import annotations

import numpy as np

from ._integrate import integrate_interval

# outcomes with less probability than this are dropped from the discrete sum;
# the dropped mass is tracked and must stay below MASS_TOL
PROB_FLOOR = 1e-300
MASS_TOL = 1e-6

# continuous integrand points below this density contribute (dp/dtheta)^2/p
# only through Gaussian tails; they are returned as 0
DENSITY_FLOOR = 1e-30

# the two central-difference estimates (steps h and h/2) must agree this well
DERIV_RTOL = 1e-3


class OracleError(RuntimeError):
    """The finite-difference oracle could not produce a trustworthy value."""


def default_step(theta: float) -> float:
    return max(1e-9, 1e-6 * abs(theta))


def _richardson(values_m1, values_p1, values_mh, values_ph, h):
    """Fourth-order derivative estimate plus the pair it was built from."""
    d_h = (values_p1 - values_m1) / (2.0 * h)
    d_half = (values_ph - values_mh) / h  # step h/2: spacing h between the points
    return (4.0 * d_half - d_h) / 3.0, d_h, d_half


def _check_convergence(d_best, d_half, scale):
    gap = np.max(np.abs(d_best - d_half))
    tol = DERIV_RTOL * max(scale, 1e-300)
    if gap > tol:
        raise OracleError(
            f"probability derivative not converged: step-halving gap {gap:.3e} "
            f"exceeds {tol:.3e}"
        )


def numeric_fisher_oracle(model, theta: float, step: float | None = None) -> float:
    """Finite-difference Fisher information of ``model`` at ``theta``.

    Works on any model exposing ``probabilities(theta)`` (discrete outcomes),
    ``pdf(theta, x)`` (continuous), or ``branch_pdf(theta, x)`` (joint
    discrete-and-continuous), the latter two together with
    ``domain(theta)``/``breakpoints(theta)``.
    """
    h = default_step(theta) if step is None else float(step)
    if h <= 0.0:
        raise ValueError("step must be positive")
    if hasattr(model, "probabilities"):
        return _discrete_fisher(model, theta, h)
    if hasattr(model, "branch_pdf"):
        return _continuous_fisher(
            model, theta, h, lambda th, x: np.ravel(model.branch_pdf(th, x))
        )
    if hasattr(model, "pdf"):
        return _continuous_fisher(
            model, theta, h, lambda th, x: np.ravel(model.pdf(th, x))
        )
    raise TypeError(f"{type(model).__name__} exposes no outcome probabilities")


def _discrete_fisher(model, theta, h):
    p0 = np.asarray(model.probabilities(theta), dtype=float)
    deriv, _, d_half = _richardson(
        np.asarray(model.probabilities(theta - h), dtype=float),
        np.asarray(model.probabilities(theta + h), dtype=float),
        np.asarray(model.probabilities(theta - 0.5 * h), dtype=float),
        np.asarray(model.probabilities(theta + 0.5 * h), dtype=float),
        h,
    )
    _check_convergence(deriv, d_half, np.max(np.abs(deriv)))
    keep = p0 >= PROB_FLOOR
    excluded = float(p0[~keep].sum())
    if excluded > MASS_TOL:
        raise OracleError(
            f"excluded outcome mass {excluded:.3e} exceeds {MASS_TOL:.1e}"
        )
    return float(np.sum(deriv[keep] ** 2 / p0[keep]))


def _continuous_fisher(model, theta, h, density):
    lo0, hi0 = model.domain(theta)
    lo1, hi1 = model.domain(theta + h)
    lo2, hi2 = model.domain(theta - h)
    lo, hi = min(lo0, lo1, lo2), max(hi0, hi1, hi2)
    points = tuple(model.breakpoints(theta)) if hasattr(model, "breakpoints") else ()

    n_branch = density(theta, lo).size
    eps = np.finfo(float).eps

    def integrand_for(branch):
        def f(x):
            p0 = float(density(theta, x)[branch])
            if p0 < DENSITY_FLOOR:
                return 0.0
            deriv, _, d_half = _richardson(
                float(density(theta - h, x)[branch]),
                float(density(theta + h, x)[branch]),
                float(density(theta - 0.5 * h, x)[branch]),
                float(density(theta + 0.5 * h, x)[branch]),
                h,
            )
            # rounding of p(theta +- h) alone perturbs the difference quotient
            # by ~eps*p/h; only flag gaps clearly above that noise floor
            gap = abs(deriv - d_half)
            if gap > max(DERIV_RTOL * abs(deriv), 1e4 * eps * p0 / h):
                raise OracleError(
                    f"density derivative not converged at x={x!r}: "
                    f"step-halving gap {gap:.3e}"
                )
            return deriv * deriv / p0

        return f

    total = 0.0
    for branch in range(n_branch):
        total += integrate_interval(
            integrand_for(branch), lo, hi, points, rtol=1e-9, atol=1e-12
        )
    return total
