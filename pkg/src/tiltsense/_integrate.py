"""Thin wrappers around adaptive quadrature with the tolerances used throughout."""

from __future__ import annotations

from scipy import integrate


class ConvergenceError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


def integrate_interval(f, lo, hi, breakpoints=(), rtol=1e-11, atol=0.0, limit=300):
    """Integrate f over [lo, hi], subdividing at the given interior points.

    Raises ConvergenceError with the achieved error estimate if QUADPACK
    reports trouble.
    """
    points = [p for p in breakpoints if lo < p < hi] or None
    value, err, info, *message = integrate.quad(
        f, lo, hi, points=points, epsrel=rtol, epsabs=atol, limit=limit, full_output=True
    )
    if message:
        raise ConvergenceError(
            f"quadrature did not converge: {message[0]}; achieved abs error {err:.3e}"
        )
    return value
