"""Electromagnetic Green's tensors: free-space dyadic and lens point-spread tensor.

The lens tensor propagates a dipole field from one focal region of an
aplanatic system to the other.  It depends on the two positions only through
relative cylindrical coordinates (rho, phi, z), measured between points
expressed in their own focal-origin frames, and is assembled from four polar
integrals I1..I4 weighted by Bessel functions of the azimuthal order that
survives the closed-form azimuthal integration.

Sign convention for the transverse-longitudinal entries: the xz/yz entries of
the tensor are taken odd in the axial separation z_ij (they vanish at
z_ij = 0).  Together with the |z_ij| appearing in the oscillatory phase this
makes the tensor exactly symmetric under exchange of the two points (source
reciprocity), and matches the parity of the free-space far-field dyadic,
whose xz entry is odd in both the transverse and the axial separation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, SingularityError
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, initial_panels, _panel_nodes

__all__ = [
    "FOCAL_GUARD_WAVELENGTHS",
    "FocalCoords",
    "PsfIntegrals",
    "LensSpec",
    "as_vec3",
    "effective_coords",
    "free_space_full",
    "free_space_parts",
    "im_g_self_limit",
    "psf_integrals",
    "psf_integrals_batch",
    "g_matrix",
    "g_matrix_batch",
    "psf_green",
]

# Focal expansion validity guard, in units of the drive wavelength.
FOCAL_GUARD_WAVELENGTHS = 20.0


def as_vec3(r) -> np.ndarray:
    """Coerce to a finite float 3-vector."""
    v = np.asarray(r, dtype=float)
    if v.shape != (3,):
        raise DomainError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"position has non-finite components: {v}")
    return v


@dataclass(frozen=True)
class FocalCoords:
    """Relative cylindrical coordinates between two focal-zone points.

    rho >= 0 and phi is the quadrant-correct azimuth of the transverse
    separation; z is signed (only |z| enters the integrals, the sign fixes
    the parity of the transverse-longitudinal tensor entries).
    """

    rho: float
    phi: float
    z: float


@dataclass(frozen=True)
class PsfIntegrals:
    """The four polar integrals entering the point-spread tensor."""

    i1: complex
    i2: complex
    i3: complex
    i4: complex


@dataclass(frozen=True)
class LensSpec:
    """Aplanatic lens described by its aperture, focal length and wavelength.

    Lengths throughout the package are in the same unit as `wavelength`;
    with the default wavelength = 1 positions are expressed in units of the
    drive wavelength.
    """

    theta_max: float
    focal_length: float = 1000.0
    wavelength: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.theta_max <= math.pi / 2.0 + 1e-15):
            raise DomainError(
                f"theta_max must lie in (0, pi/2], got {self.theta_max}"
            )
        if self.wavelength <= 0.0:
            raise DomainError(f"wavelength must be positive, got {self.wavelength}")
        # Only the far-field term is kept in the derivation, so the focal
        # length must be many wavelengths.
        if self.focal_length / self.wavelength < 100.0:
            raise DomainError(
                "focal_length must be >= 100 wavelengths "
                f"(got f/lambda = {self.focal_length / self.wavelength:.3g})"
            )

    @property
    def k(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def numerical_aperture(self) -> float:
        return math.sin(self.theta_max)


def effective_coords(r_i, r_j) -> FocalCoords:
    """Relative cylindrical coordinates (rho_ij, phi_ij, z_ij).

    Each position is measured from its own focal origin; the tensor depends
    only on these differences.  phi is 0 by convention when rho = 0 (the
    tensor is azimuth-independent there).
    """
    ri = as_vec3(r_i)
    rj = as_vec3(r_j)
    dx, dy, dz = ri - rj
    rho = math.hypot(dx, dy)
    phi = math.atan2(dy, dx) if rho > 0.0 else 0.0
    return FocalCoords(rho=rho, phi=phi, z=dz)


# ---------------------------------------------------------------------------
# Free-space dyadic
# ---------------------------------------------------------------------------

def _separation(r, r0):
    rr = as_vec3(r) - as_vec3(r0)
    dist = float(np.linalg.norm(rr))
    if dist == 0.0:
        raise SingularityError("free-space Green's tensor diverges at R = 0")
    return rr, dist


def free_space_parts(r, r0, k: float):
    """Near-, intermediate- and far-field parts of the free-space dyadic.

    Returns (NF, IF, FF), each a 3x3 complex array in units 1/length; the
    three sum to the full tensor.
    """
    rr, dist = _separation(r, r0)
    kr = k * dist
    rhat = rr / dist
    outer = np.outer(rhat, rhat)
    eye = np.eye(3)
    pref = np.exp(1j * kr) / (4.0 * math.pi * dist)
    nf = pref / kr**2 * (-eye + 3.0 * outer)
    if_ = pref * 1j / kr * (eye - 3.0 * outer)
    ff = pref * (eye - outer)
    return nf, if_, ff


def free_space_full(r, r0, k: float) -> np.ndarray:
    """Full free-space dyadic Green's tensor (3x3 complex, units 1/length)."""
    rr, dist = _separation(r, r0)
    kr = k * dist
    rhat = rr / dist
    outer = np.outer(rhat, rhat)
    pref = np.exp(1j * kr) / (4.0 * math.pi * dist)
    return pref * (
        (1.0 + (1j * kr - 1.0) / kr**2) * np.eye(3)
        + (3.0 - 3.0j * kr - kr**2) / kr**2 * outer
    )


def im_g_self_limit(k: float) -> np.ndarray:
    """Coincidence limit Im G(r, r) = (k / 6 pi) I, exact closed form."""
    return (k / (6.0 * math.pi)) * np.eye(3)


# ---------------------------------------------------------------------------
# Point-spread integrals and tensor
# ---------------------------------------------------------------------------

def psf_integrals_batch(rho, z, k: float, theta_max: float,
                        spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """I1..I4 evaluated at many (rho, z) pairs with a shared refinement ladder.

    rho and z are 1-d arrays in the same length unit as 1/k; returns four
    complex arrays of the same length.  The polar rule doubles its panel
    count until every point and every integral is converged to spec.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    zabs = np.abs(np.atleast_1d(np.asarray(z, dtype=float)))
    if rho.shape != zabs.shape:
        raise DomainError("rho and z arrays must have matching shapes")
    if not (0.0 < theta_max <= math.pi / 2.0 + 1e-15):
        raise DomainError(f"theta_max must lie in (0, pi/2], got {theta_max}")

    phase = float(k * (zabs.max(initial=0.0) + rho.max(initial=0.0)))
    n_panels = initial_panels(phase)

    def estimates(n):
        theta, w = _panel_nodes(theta_max, n)
        st, ct = np.sin(theta), np.cos(theta)
        osc = np.exp(1j * k * np.outer(zabs, ct))          # (P, M)
        arg = np.outer(rho, st) * k
        j0, j1 = special.j0(arg), special.j1(arg)
        j2 = special.jv(2, arg)
        i1 = (osc * j0 * (w * st * (1.0 + ct**2))).sum(axis=1)
        i2 = (osc * j2 * (w * st * (1.0 - ct**2))).sum(axis=1)
        i3 = (osc * j1 * (w * st**2 * ct)).sum(axis=1)
        i4 = (osc * j0 * (w * st**3)).sum(axis=1)
        return np.stack([i1, i2, i3, i4])

    prev = estimates(n_panels)
    for _ in range(spec.max_refinements):
        n_panels *= 2
        est = estimates(n_panels)
        err = np.abs(est - prev)
        if np.all(err <= np.maximum(spec.rel_tol * np.abs(est), spec.abs_tol)):
            return est[0], est[1], est[2], est[3]
        prev = est

    from .errors import ConvergenceError

    worst = int(np.argmax(np.abs(est - prev).max(axis=0)))
    raise ConvergenceError(
        "focal integrals did not converge within "
        f"{spec.max_refinements} refinements (worst point index {worst})",
        last=est, previous=prev,
    )


def psf_integrals(fc: FocalCoords, k: float, theta_max: float,
                  spec: QuadratureSpec = DEFAULT_QUADRATURE) -> PsfIntegrals:
    """The four polar integrals at a single relative coordinate."""
    i1, i2, i3, i4 = psf_integrals_batch(
        np.array([fc.rho]), np.array([fc.z]), k, theta_max, spec
    )
    return PsfIntegrals(i1=complex(i1[0]), i2=complex(i2[0]),
                        i3=complex(i3[0]), i4=complex(i4[0]))


def _assemble_g(i1, i2, i3, i4, phi, zsign):
    """Stack I1..I4 into the dimensionless point-spread matrix.

    Inputs may be scalars or arrays of matching shape; returns (..., 3, 3).
    The xz/yz entries carry sign(z) (zero at z = 0), see module docstring.
    """
    c, s = np.cos(phi), np.sin(phi)
    c2, s2 = np.cos(2.0 * phi), np.sin(2.0 * phi)
    i3s = i3 * zsign
    out = np.empty(np.broadcast(i1, phi).shape + (3, 3), dtype=complex)
    out[..., 0, 0] = i1 + i2 * c2
    out[..., 0, 1] = i2 * s2
    out[..., 0, 2] = -2.0j * i3s * c
    out[..., 1, 0] = i2 * s2
    out[..., 1, 1] = i1 - i2 * c2
    out[..., 1, 2] = -2.0j * i3s * s
    out[..., 2, 0] = -2.0j * i3s * c
    out[..., 2, 1] = -2.0j * i3s * s
    out[..., 2, 2] = 2.0 * i4
    return 1j * out


def g_matrix(fc: FocalCoords, k: float, theta_max: float,
             spec: QuadratureSpec = DEFAULT_QUADRATURE) -> np.ndarray:
    """Dimensionless 3x3 point-spread matrix at one relative coordinate.

    Symmetric by construction and invariant under exchange of the two
    points (the azimuth flips by pi and z changes sign together, which the
    sign convention of the mixed entries absorbs).
    """
    ints = psf_integrals(fc, k, theta_max, spec)
    return _assemble_g(ints.i1, ints.i2, ints.i3, ints.i4,
                       fc.phi, float(np.sign(fc.z)))


def g_matrix_batch(rho, phi, z, k: float, theta_max: float,
                   spec: QuadratureSpec = DEFAULT_QUADRATURE) -> np.ndarray:
    """Point-spread matrices for arrays of relative coordinates, shape (P, 3, 3)."""
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    i1, i2, i3, i4 = psf_integrals_batch(rho, z, k, theta_max, spec)
    return _assemble_g(i1, i2, i3, i4, phi, np.sign(z))


def psf_green(r_i, r_j, lens: LensSpec,
              spec: QuadratureSpec = DEFAULT_QUADRATURE) -> np.ndarray:
    """Point-spread Green's tensor (k / 8 pi) g between two focal-zone points.

    Positions are in the same length unit as lens.wavelength, each measured
    from its own focal origin, and must lie within the focal-zone validity
    guard of 20 wavelengths.
    """
    ri = as_vec3(r_i)
    rj = as_vec3(r_j)
    guard = FOCAL_GUARD_WAVELENGTHS * lens.wavelength
    for name, v in (("r_i", ri), ("r_j", rj)):
        if np.linalg.norm(v) > guard:
            raise DomainError(
                f"{name} lies {np.linalg.norm(v):.3g} from its focus, beyond "
                f"the {guard:.3g} focal-zone validity guard"
            )
    fc = effective_coords(ri, rj)
    return (lens.k / (8.0 * math.pi)) * g_matrix(fc, lens.k, lens.theta_max, spec)
