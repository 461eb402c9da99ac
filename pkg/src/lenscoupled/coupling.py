"""Dipole-dipole coupling coefficients through the lens.

The dispersive (J12) and dissipative (Gamma12) coefficients come from the
real and imaginary parts of the same contraction u1 . g . u2 of the
point-spread matrix with the two dipole orientations:

    J12 / (hbar Gamma)  = (3/8) Re[u1 . g . u2]
    Gamma12 / Gamma     = (3/4) Im[u1 . g . u2]

so the complex coupling G12 = J12/hbar + i Gamma12/2 = (3/8) Gamma (u1.g.u2)
is obtained from a single tensor evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants

from .errors import DomainError
from .greens import (
    LensSpec,
    as_vec3,
    effective_coords,
    g_matrix,
    g_matrix_batch,
)
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec

__all__ = [
    "AXES",
    "DipolePair",
    "CouplingResult",
    "free_space_decay",
    "coupling_coefficients",
    "gamma_max_sweep",
    "coupling_on_axis",
    "coupling_map",
]

AXES = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}


@dataclass(frozen=True)
class DipolePair:
    """Two linear dipoles with unit orientations at focal-frame positions."""

    u1: np.ndarray
    u2: np.ndarray
    r1: np.ndarray
    r2: np.ndarray

    def __post_init__(self):
        for name in ("u1", "u2"):
            u = as_vec3(getattr(self, name))
            if abs(np.linalg.norm(u) - 1.0) > 1e-12:
                raise DomainError(f"{name} must be a unit vector, |{name}| = "
                                  f"{np.linalg.norm(u):.15g}")
            object.__setattr__(self, name, u)
        object.__setattr__(self, "r1", as_vec3(self.r1))
        object.__setattr__(self, "r2", as_vec3(self.r2))


@dataclass(frozen=True)
class CouplingResult:
    """Normalized coupling coefficients from one tensor evaluation."""

    j_over_hgamma: float
    gamma12_over_gamma: float

    @property
    def g12_over_gamma(self) -> complex:
        """Complex coupling G12/Gamma = J12/(hbar Gamma) + i Gamma12/(2 Gamma)."""
        return self.j_over_hgamma + 0.5j * self.gamma12_over_gamma


def free_space_decay(dipole_moment: float, omega: float) -> float:
    """Free-space emission rate |d|^2 w^3 / (3 pi hbar eps0 c^3) in 1/s."""
    if dipole_moment <= 0.0 or omega <= 0.0:
        raise DomainError("dipole_moment and omega must be positive")
    return (dipole_moment**2 * omega**3
            / (3.0 * math.pi * constants.hbar * constants.epsilon_0 * constants.c**3))


def _contract(g: np.ndarray, u1: np.ndarray, u2: np.ndarray) -> complex:
    return complex(u1 @ g @ u2)


def coupling_coefficients(pair: DipolePair, lens: LensSpec,
                          spec: QuadratureSpec = DEFAULT_QUADRATURE) -> CouplingResult:
    """Normalized J12 and Gamma12 for a dipole pair across the lens."""
    fc = effective_coords(pair.r1, pair.r2)
    g = g_matrix(fc, lens.k, lens.theta_max, spec)
    ugu = _contract(g, pair.u1, pair.u2)
    return CouplingResult(
        j_over_hgamma=0.375 * ugu.real,
        gamma12_over_gamma=0.75 * ugu.imag,
    )


def gamma_max_sweep(orientation: str, theta_grid,
                    spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Maximum dissipative coupling vs angular aperture.

    The maximum is attained at coincident relative coordinates, where the
    point-spread matrix is purely imaginary; returns (theta array, Gamma12max
    /Gamma array) for x- or z-oriented dipole pairs.
    """
    if orientation not in ("x", "z"):
        raise DomainError(f"orientation must be 'x' or 'z', got {orientation!r}")
    thetas = np.atleast_1d(np.asarray(theta_grid, dtype=float))
    if np.any(thetas <= 0.0) or np.any(thetas > math.pi / 2.0 + 1e-15):
        raise DomainError("theta grid values must lie in (0, pi/2]")
    u = AXES[orientation]
    out = np.empty_like(thetas)
    fc_zero = effective_coords(np.zeros(3), np.zeros(3))
    for i, th in enumerate(thetas):
        g = g_matrix(fc_zero, 2.0 * math.pi, th, spec)
        out[i] = 0.75 * _contract(g, u, u).imag
    return thetas, out


def coupling_on_axis(z_grid, orientation: str, lens: LensSpec,
                     spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """J12/(hbar Gamma) and Gamma12/Gamma along the optical axis.

    Atom 1 sits at its focus; atom 2 is scanned along z at axial separation
    z (in the lens length unit).  Returns (j_array, gamma12_array).
    """
    z = np.atleast_1d(np.asarray(z_grid, dtype=float))
    u = AXES[orientation]
    g = g_matrix_batch(np.zeros_like(z), np.zeros_like(z), z,
                       lens.k, lens.theta_max, spec)
    ugu = np.einsum("i,pij,j->p", u, g, u)
    return 0.375 * ugu.real, 0.75 * ugu.imag


def coupling_map(orientations=("x", "x"), plane: str = "xz", extent: float = 3.0,
                 resolution: int = 201, lens: LensSpec = None,
                 spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Spatial maps of the dispersive and dissipative coupling.

    Atom 1 is fixed at its focus with orientation orientations[0]; atom 2
    carries orientations[1] and scans a (resolution x resolution) grid of
    half-width `extent` (lens length units) in the requested plane ("xz" or
    "xy").  Returns (axis1, axis2, j_map, gamma_map); maps are indexed
    [i, j] = [first-coordinate index, second-coordinate index].
    """
    if lens is None:
        raise DomainError("coupling_map requires a LensSpec")
    if plane not in ("xz", "xy"):
        raise DomainError(f"plane must be 'xz' or 'xy', got {plane!r}")
    if resolution < 2:
        raise DomainError(f"resolution must be >= 2, got {resolution}")
    if extent <= 0.0 or extent > 20.0 * lens.wavelength:
        raise DomainError("extent must be positive and within the focal guard")
    u1 = AXES[orientations[0]]
    u2 = AXES[orientations[1]]

    axis1 = np.linspace(-extent, extent, resolution)
    axis2 = np.linspace(-extent, extent, resolution)
    a, b = np.meshgrid(axis1, axis2, indexing="ij")
    if plane == "xz":
        x, y, z = a.ravel(), np.zeros(a.size), b.ravel()
    else:
        x, y, z = a.ravel(), b.ravel(), np.zeros(a.size)

    rho = np.hypot(x, y)
    phi = np.where(rho > 0.0, np.arctan2(y, x), 0.0)

    j = np.empty(a.size)
    gam = np.empty(a.size)
    chunk = 4096
    for lo in range(0, a.size, chunk):
        hi = min(lo + chunk, a.size)
        g = g_matrix_batch(rho[lo:hi], phi[lo:hi], z[lo:hi],
                           lens.k, lens.theta_max, spec)
        ugu = np.einsum("i,pij,j->p", u1, g, u2)
        j[lo:hi] = 0.375 * ugu.real
        gam[lo:hi] = 0.75 * ugu.imag
    shape = (resolution, resolution)
    return axis1, axis2, j.reshape(shape), gam.reshape(shape)
