"""Special functions and polar-angle quadrature shared by the physics modules.

The focal-field integrals are smooth but oscillatory in the polar angle
(through exp(i k z cos(theta)) and J_n(k rho sin(theta))), so the quadrature
here is a composite Gauss-Legendre rule whose panel count doubles until two
successive refinements agree.  The minimum node count scales with the fastest
phase so that no oscillation is undersampled on the first pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadratureSpec",
    "DEFAULT_QUADRATURE",
    "bessel_j",
    "integrate_polar",
    "azimuthal_identity_residual",
]

_PANEL_ORDER = 16  # Gauss-Legendre points per panel


@dataclass(frozen=True)
class QuadratureSpec:
    """Convergence policy for the adaptive polar quadrature."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_refinements: int = 12

    def __post_init__(self):
        if not (self.rel_tol > 0.0):
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol}")
        if not (self.abs_tol > 0.0):
            raise DomainError(f"abs_tol must be > 0, got {self.abs_tol}")
        if self.max_refinements < 1:
            raise DomainError(
                f"max_refinements must be >= 1, got {self.max_refinements}"
            )


DEFAULT_QUADRATURE = QuadratureSpec()


def bessel_j(order: int, x: float) -> float:
    """Bessel function of the first kind J_n(x) for n in {0, 1, 2}.

    Accurate to better than 1e-12 absolute for |x| <= 1e3.
    """
    if order not in (0, 1, 2):
        raise DomainError(f"order must be 0, 1 or 2, got {order!r}")
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x!r}")
    if order == 0:
        return float(special.j0(x))
    if order == 1:
        return float(special.j1(x))
    return float(special.jv(2, x))


def _panel_nodes(theta_max: float, n_panels: int):
    """Nodes and weights of a composite Gauss-Legendre rule on [0, theta_max]."""
    x, w = np.polynomial.legendre.leggauss(_PANEL_ORDER)
    edges = np.linspace(0.0, theta_max, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])  # (n_panels,)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def initial_panels(phase_scale: float) -> int:
    """Panel count sized to the fastest phase of the integrand.

    `phase_scale` is the dimensionless oscillation budget of the kernel over
    the whole interval, e.g. k*(|z| + rho) for the focal-field integrals.
    """
    min_nodes = 16 + 4 * int(math.ceil(max(phase_scale, 0.0) / (2.0 * math.pi)))
    return max(1, -(-min_nodes // _PANEL_ORDER))  # ceil division


def integrate_polar(
    kernel: Callable[[np.ndarray], np.ndarray],
    theta_max: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    phase_scale: float = 0.0,
) -> complex:
    """Integrate a complex kernel over the polar angle [0, theta_max].

    The kernel must accept an ndarray of angles and return the integrand
    values elementwise.  Panels double until two successive estimates agree
    to spec.rel_tol (or spec.abs_tol near zero); the result is deterministic
    for a fixed spec.

    Raises ConvergenceError (carrying the last two estimates) if the
    refinement budget is exhausted.
    """
    if not (0.0 < theta_max <= math.pi / 2.0 + 1e-15):
        raise DomainError(f"theta_max must lie in (0, pi/2], got {theta_max}")

    n_panels = initial_panels(phase_scale)
    nodes, weights = _panel_nodes(theta_max, n_panels)
    vals = np.asarray(kernel(nodes), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise DomainError("kernel returned non-finite values on [0, theta_max]")
    prev = complex(np.sum(weights * vals))

    for _ in range(spec.max_refinements):
        n_panels *= 2
        nodes, weights = _panel_nodes(theta_max, n_panels)
        est = complex(np.sum(weights * np.asarray(kernel(nodes), dtype=complex)))
        if abs(est - prev) <= max(spec.rel_tol * abs(est), spec.abs_tol):
            return est
        prev = est

    raise ConvergenceError(
        f"polar quadrature did not converge within {spec.max_refinements} "
        f"refinements (last estimates {prev} vs previous)",
        last=est,
        previous=prev,
    )


def azimuthal_identity_residual(n: int, x: float, phi: float, nodes: int = 4096) -> float:
    """Residual of the closed-form azimuthal integral against direct quadrature.

    Compares the 4096-node trapezoidal value of
    int_0^{2pi} {cos, sin}(n phi') exp(i x cos(phi' - phi)) dphi'
    with 2 pi i^n J_n(x) {cos, sin}(n phi) and returns the larger of the two
    absolute residuals.  Diagnostic helper; the identity underpins the
    reduction of the focal-field azimuthal integrals to Bessel functions.
    """
    if n not in (0, 1, 2):
        raise DomainError(f"n must be 0, 1 or 2, got {n!r}")
    phip = np.linspace(0.0, 2.0 * math.pi, nodes, endpoint=False)
    osc = np.exp(1j * x * np.cos(phip - phi))
    dphi = 2.0 * math.pi / nodes
    closed = 2.0 * math.pi * (1j**n) * bessel_j(n, x)
    res_cos = abs(np.sum(np.cos(n * phip) * osc) * dphi - closed * math.cos(n * phi))
    res_sin = abs(np.sum(np.sin(n * phip) * osc) * dphi - closed * math.sin(n * phi))
    return float(max(res_cos, res_sin))
