"""Physical-unit trap analysis for the lens-mediated dipole-dipole potential.

Everything upstream works in normalized units (lengths in wavelengths, rates
in units of the single-atom decay rate); this module attaches SI species
data and evaluates the mutual potential, recoil heating and trap lifetime
along the optical axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants

from .coupling import coupling_on_axis, free_space_decay
from .dynamics import DriveSpec, potential_energy, steady_state_analytic
from .errors import DomainError, PhysicalityError
from .greens import LensSpec
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec

__all__ = [
    "AtomSpecies",
    "TrapProfile",
    "SPECIES",
    "register_species",
    "get_species",
    "recoil_energy",
    "gamma_tot",
    "heating_rate",
    "trap_lifetime",
    "trap_profile",
]

HBAR = constants.hbar
G_STD = constants.g


@dataclass(frozen=True)
class AtomSpecies:
    """Two-level atom in SI units: dipole moment (C m), transition wavelength
    (m), decay rate (rad/s), mass (kg)."""

    dipole_moment: float
    lambda0: float
    gamma: float
    mass: float
    label: str

    def __post_init__(self):
        omega0 = 2.0 * math.pi * constants.c / self.lambda0
        predicted = free_space_decay(self.dipole_moment, omega0)
        if abs(predicted - self.gamma) > 0.05 * self.gamma:
            raise PhysicalityError(
                f"species {self.label!r}: decay rate {self.gamma:.4g} rad/s is "
                f"inconsistent with |d|^2 w^3/(3 pi hbar eps0 c^3) = "
                f"{predicted:.4g} rad/s (>5% off)"
            )


# Cs D2 line.  The mass is the full Cs-133 mass; see README on the species
# data provenance.
SPECIES: dict[str, AtomSpecies] = {}


def register_species(species: AtomSpecies) -> None:
    SPECIES[species.label] = species


def get_species(label: str) -> AtomSpecies:
    try:
        return SPECIES[label]
    except KeyError:
        raise DomainError(
            f"unknown species {label!r}; known: {sorted(SPECIES)}"
        ) from None


register_species(AtomSpecies(
    dipole_moment=2.69e-29,
    lambda0=852e-9,
    gamma=2.0 * math.pi * 5.23e6,
    mass=133 * constants.u,
    label="Cs133-D2",
))


def recoil_energy(species: AtomSpecies, lambda_d: float) -> float:
    """Single-photon recoil energy hbar^2 k^2 / (2 m) in joules."""
    if lambda_d <= 0.0:
        raise DomainError(f"lambda_d must be positive, got {lambda_d}")
    k = 2.0 * math.pi / lambda_d
    return (HBAR * k) ** 2 / (2.0 * species.mass)


def gamma_tot(gamma: float, gamma12: float, corr: complex, n2: float) -> float:
    """Total decay rate Gamma + Gamma12 Re[corr]/n2 of the undriven atom.

    The correlation ratio can be complex; its real part is taken (the
    imaginary part shifts the line rather than broadening it).
    """
    if n2 <= 0.0:
        raise DomainError(f"n2 must be positive, got {n2}")
    return gamma + gamma12 * (complex(corr).real / n2)


def heating_rate(species: AtomSpecies, lambda_d: float, gamma_tot_: float,
                 n2: float) -> float:
    """Recoil heating power E_r Gamma_tot n2 in watts."""
    if not (0.0 <= n2 <= 1.0):
        raise DomainError(f"n2 must lie in [0, 1], got {n2}")
    return recoil_energy(species, lambda_d) * gamma_tot_ * n2


def trap_lifetime(delta_j: float, species: AtomSpecies, lambda_d: float,
                  gamma: float, gamma_tot_: float, g12: complex):
    """Estimated trap lifetime and its recoil-frequency bound, in seconds.

    t_trap = (delta_j / E_r) (Gamma / Gamma_tot) |Im G12| / |G12|^2, the ratio
    of the well depth to the recoil heating rate.  In a trapping
    configuration Im G12 < 0 (subradiant) while the depth and heating rate
    are both positive, so the magnitude of Im G12 gives the positive ratio.
    The bound (1/w_r)(Gamma/Gamma_tot) follows from |Re G Im G| <= |G|^2/2
    when the well depth is of order 2 hbar Re G12.
    """
    if delta_j <= 0.0:
        raise DomainError(f"delta_j must be positive, got {delta_j}")
    g12 = complex(g12)
    if abs(g12) == 0.0:
        raise DomainError("trap lifetime undefined for G12 = 0")
    e_r = recoil_energy(species, lambda_d)
    omega_r = e_r / HBAR
    t = (delta_j / e_r) * (gamma / gamma_tot_) * abs(g12.imag) / abs(g12) ** 2
    bound = (1.0 / omega_r) * (gamma / gamma_tot_)
    return t, bound


@dataclass
class TrapProfile:
    """On-axis trap profile in SI units; z is in units of the wavelength."""

    z_over_lambda: np.ndarray
    u_dd: np.ndarray
    u_g: np.ndarray
    u_total: np.ndarray
    heating: np.ndarray
    landmarks: dict = field(default_factory=dict)


def _well_landmarks(z: np.ndarray, u: np.ndarray):
    """Global interior well of u: (index of minimum, escape depth, escape index).

    The escape barrier is the lower of the two confining maxima between the
    well and the domain edges; returns (None, 0.0, None) if u has no
    interior local minimum.
    """
    interior = [i for i in range(1, len(u) - 1) if u[i] < u[i - 1] and u[i] <= u[i + 1]]
    if not interior:
        return None, 0.0, None
    i_min = min(interior, key=lambda i: u[i])
    left = np.argmax(u[: i_min + 1])
    right = i_min + np.argmax(u[i_min:])
    if u[left] <= u[right]:
        i_esc, barrier = int(left), u[left]
    else:
        i_esc, barrier = int(right), u[right]
    return i_min, float(barrier - u[i_min]), i_esc


def trap_profile(species: AtomSpecies, lens: LensSpec, drive: DriveSpec,
                 orientation: str = "x", z_range=(0.05, 3.0), n_z: int = 601,
                 n_driven: int = 1, gravity_axis=(0.0, 0.0, -1.0),
                 lambda_d: float | None = None,
                 spec: QuadratureSpec = DEFAULT_QUADRATURE) -> TrapProfile:
    """Mutual trap potential, gravity and heating along the optical axis.

    `drive.delta_d` is in SI rad/s.  The driven ensemble of n_driven atoms
    sits at the far focus; all of them couple to the trapped atom with the
    same J12, so the interaction energy is n_driven * (-J12 xi).  Gravity is
    measured from z12 = 0 and projected on the optical axis; `gravity_axis`
    is the unit direction of the pull (default -z).
    """
    if n_driven < 1:
        raise DomainError(f"n_driven must be >= 1, got {n_driven}")
    if lambda_d is None:
        lambda_d = species.lambda0
    z0, z1 = z_range
    if not (z0 < z1):
        raise DomainError(f"empty z_range {z_range}")
    if max(abs(z0), abs(z1)) > 20.0:
        raise DomainError("z_range exceeds the focal-zone validity guard")

    gvec = np.asarray(gravity_axis, dtype=float)
    gnorm = np.linalg.norm(gvec)
    if gnorm == 0.0:
        raise DomainError("gravity_axis must be a nonzero vector")
    gvec = gvec / gnorm

    gam = species.gamma
    z = np.linspace(z0, z1, n_z)
    j_norm, g12_norm = coupling_on_axis(z, orientation, lens, spec)

    e_r = recoil_energy(species, lambda_d)
    u_dd = np.empty(n_z)
    heating = np.empty(n_z)
    gamma_tot_arr = np.empty(n_z)
    xi_arr = np.empty(n_z)
    n2_arr = np.empty(n_z)
    for i in range(n_z):
        g12 = gam * (j_norm[i] + 0.5j * g12_norm[i])
        ss = steady_state_analytic(g12, drive, gam)
        xi_arr[i] = ss.xi
        n2_arr[i] = ss.n2
        u_dd[i] = potential_energy(n_driven * j_norm[i] * HBAR * gam, ss.xi)
        if ss.n2 > 0.0:
            gt = gamma_tot(gam, g12_norm[i] * gam, ss.corr, ss.n2)
        else:
            gt = gam  # no scattering from an unexcited atom
        gamma_tot_arr[i] = gt
        heating[i] = heating_rate(species, lambda_d, gt, min(max(ss.n2, 0.0), 1.0))

    # Gravity relative to z12 = 0, projected on the optical axis.
    u_g = -species.mass * G_STD * float(gvec[2]) * z * lambda_d
    u_total = u_dd + u_g

    i_min, depth, i_esc = _well_landmarks(z, u_total)
    i_min_dd, depth_dd, i_esc_dd = _well_landmarks(z, u_dd)

    landmarks = {
        "z_min": float(z[i_min]) if i_min is not None else None,
        "z_min_dd": float(z[i_min_dd]) if i_min_dd is not None else None,
        "depth": depth,
        "depth_dd": depth_dd,
        "depth_dd_over_er": depth_dd / e_r,
        "recoil_energy": e_r,
    }
    if i_min_dd is not None:
        g12_min = gam * (j_norm[i_min_dd] + 0.5j * g12_norm[i_min_dd])
        gt_min = gamma_tot_arr[i_min_dd]
        landmarks["gamma_tot_over_gamma"] = gt_min / gam
        landmarks["j_over_hgamma_at_min"] = float(j_norm[i_min_dd])
        landmarks["gamma12_over_gamma_at_min"] = float(g12_norm[i_min_dd])
        if i_esc_dd is not None:
            # Well depth in coupling-energy units plus the starting recoil
            # energy, fed to the lifetime estimate.
            delta_j = ((j_norm[i_min_dd] - j_norm[i_esc_dd]) * HBAR * gam + e_r)
            if delta_j > 0.0 and abs(g12_min) > 0.0:
                t, bound = trap_lifetime(delta_j, species, lambda_d, gam,
                                         gt_min, g12_min)
                landmarks["t_trap_s"] = t
                landmarks["t_trap_over_gamma_inv"] = t * gam
                landmarks["t_bound_s"] = bound

    return TrapProfile(z_over_lambda=z, u_dd=u_dd, u_g=u_g, u_total=u_total,
                       heating=heating, landmarks=landmarks)
