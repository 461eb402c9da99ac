"""Lens-mediated resonant dipole-dipole interactions between two atoms.

Numerical library for the point-spread Green's tensor of an aplanatic lens,
the dispersive/dissipative coupling it mediates between atoms at the two
foci, the driven two-atom steady state, and the resulting mutual trap
potential.  All physics works in normalized units (lengths in wavelengths,
rates in units of the single-atom decay rate); SI enters only in the trap
layer.
"""

from .coupling import (
    AXES,
    CouplingResult,
    DipolePair,
    coupling_coefficients,
    coupling_map,
    coupling_on_axis,
    free_space_decay,
    gamma_max_sweep,
)
from .dynamics import (
    DriveSpec,
    SteadyState,
    cross_correlation,
    excitation_spectrum,
    lindblad_steady_state,
    omega_for_saturation,
    potential_energy,
    steady_state_analytic,
)
from .errors import (
    ConvergenceError,
    DomainError,
    LensCoupledError,
    NumericalRankError,
    PhysicalityError,
    SingularityError,
    SingularParameterError,
)
from .greens import (
    FocalCoords,
    LensSpec,
    PsfIntegrals,
    effective_coords,
    free_space_full,
    free_space_parts,
    g_matrix,
    im_g_self_limit,
    psf_green,
    psf_integrals,
)
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    azimuthal_identity_residual,
    bessel_j,
    integrate_polar,
)
from .trap import (
    SPECIES,
    AtomSpecies,
    TrapProfile,
    gamma_tot,
    get_species,
    heating_rate,
    recoil_energy,
    register_species,
    trap_lifetime,
    trap_profile,
)

__version__ = "0.1.0"
