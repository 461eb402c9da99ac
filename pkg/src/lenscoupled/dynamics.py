"""Steady state of the driven two-atom system.

Two routes to the same physics:

* closed-form low-saturation solutions of the coupled dipole equations
  (`steady_state_analytic`), in two variants.  Mode "as_printed" implements
  the equation system in which the undriven atom carries no detuning term
  and solves it verbatim; mode "full_detuning" keeps the detuning on both
  atoms as the rotating-frame Hamiltonian implies.  The two differ in the
  sign conventions of the coherences (delta -> -delta, Omega -> -Omega);
  populations and correlations agree at low saturation.

* an independent dense Liouvillian solve of the full 4-level master
  equation (`lindblad_steady_state`), used as the cross-validation oracle.
  Mode "full_detuning" is the low-saturation limit of this oracle,
  including the signs of the coherences.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    NumericalRankError,
    PhysicalityError,
    SingularParameterError,
)

__all__ = [
    "DriveSpec",
    "SteadyState",
    "omega_for_saturation",
    "steady_state_analytic",
    "cross_correlation",
    "lindblad_steady_state",
    "potential_energy",
    "excitation_spectrum",
]


def omega_for_saturation(s: float, delta_d: float, gamma: float) -> float:
    """Rabi frequency giving saturation s at detuning delta_d:
    Omega = s sqrt(delta_d^2 + Gamma^2/4)."""
    if s <= 0.0:
        raise DomainError(f"saturation must be positive, got {s}")
    return s * math.sqrt(delta_d**2 + 0.25 * gamma**2)


@dataclass(frozen=True)
class DriveSpec:
    """External drive: detuning plus exactly one of Rabi frequency or saturation.

    The saturation parameter s is the lone-atom coherence amplitude; s^2 is
    the lone-atom excited-state probability.  When s is given, the Rabi
    frequency is re-derived per detuning so spectra compare equal-saturation
    points.
    """

    delta_d: float
    rabi: float | None = None
    saturation: float | None = None

    def __post_init__(self):
        if (self.rabi is None) == (self.saturation is None):
            raise DomainError("specify exactly one of rabi or saturation")
        if self.saturation is not None and not (0.0 < self.saturation <= 0.3):
            raise DomainError(
                f"saturation must lie in (0, 0.3], got {self.saturation}"
            )
        if not math.isfinite(self.delta_d):
            raise DomainError("delta_d must be finite")

    def rabi_for(self, gamma: float) -> float:
        if self.rabi is not None:
            return self.rabi
        return omega_for_saturation(self.saturation, self.delta_d, gamma)


@dataclass(frozen=True)
class SteadyState:
    """Steady-state expectation values of the two-atom system."""

    sigma1: complex
    sigma2: complex
    n1: float
    n2: float
    corr: complex

    @property
    def xi(self) -> float:
        """Cross-correlation xi = <s+^(1) s-^(2)> + <s+^(2) s-^(1)> = 2 Re corr."""
        return 2.0 * self.corr.real


def _sigma1_printed(g12: complex, delta: float, omega: float, gamma: float) -> complex:
    den = 1j * delta - 0.5 * gamma - 2.0 * g12**2 / gamma
    if abs(den) < 1e-300:
        raise SingularParameterError(
            "steady-state denominator i*delta - Gamma/2 - 2 G12^2/Gamma vanishes"
        )
    return -1j * omega / den


def cross_correlation(g12: complex, drive: DriveSpec, gamma: float,
                      estimator: str = "factorized") -> complex:
    """Steady-state cross coherence <s+^(1) s-^(2)>.

    "factorized" is the semiclassical product <s+^(1)><s-^(2)>; "alpha_beta"
    evaluates the closed-form low-saturation expression
    (alpha beta + 2|G12|^2 beta*) / (|alpha|^2 - 4 |G12|^4), both built on
    the printed-system coherences.
    """
    omega = drive.rabi_for(gamma)
    s1 = _sigma1_printed(g12, drive.delta_d, omega, gamma)
    s2 = 2j * g12 * s1 / gamma
    if estimator == "factorized":
        return s1.conjugate() * s2
    if estimator == "alpha_beta":
        alpha = 2.0 * (g12**2).real + gamma * (gamma - 1j * drive.delta_d)
        beta = omega * g12 * (3.0 * s1 - s1.conjugate())
        den = abs(alpha) ** 2 - 4.0 * abs(g12) ** 4
        if abs(den) < 1e-12 * max(abs(alpha) ** 2, 1e-300):
            raise SingularParameterError(
                "|alpha|^2 = 4 |G12|^4: correlation formula is singular here"
            )
        return (alpha * beta + 2.0 * abs(g12) ** 2 * beta.conjugate()) / den
    raise DomainError(f"unknown estimator {estimator!r}")


def steady_state_analytic(g12: complex, drive: DriveSpec, gamma: float,
                          mode: str = "as_printed",
                          estimator: str = "factorized") -> SteadyState:
    """Closed-form low-saturation steady state for complex coupling G12.

    G12 is in the same angular-frequency units as gamma (pass gamma = 1.0 to
    work in units of the single-atom decay rate).
    """
    omega = drive.rabi_for(gamma)
    delta = drive.delta_d
    g12 = complex(g12)

    if mode == "as_printed":
        s1 = _sigma1_printed(g12, delta, omega, gamma)
        s2 = 2j * g12 * s1 / gamma
        corr = (cross_correlation(g12, drive, gamma, estimator)
                if estimator == "alpha_beta" else s1.conjugate() * s2)
        n1 = (-2.0 / gamma) * (g12 * corr).imag + (2.0 * omega / gamma) * s1.imag
        n2 = (2.0 / gamma) * (g12.conjugate() * corr).imag
    elif mode == "full_detuning":
        d = 0.5 * gamma + 1j * delta
        den = d * d + g12 * g12
        if abs(den) < 1e-300:
            raise SingularParameterError(
                "full-detuning denominator D^2 + G12^2 vanishes"
            )
        s1 = -1j * omega * d / den
        s2 = 1j * g12 * s1 / d
        corr = s1.conjugate() * s2
        # Same exact population identities, with the drive term carrying the
        # sign of this convention's coherence.
        n1 = (-2.0 / gamma) * (g12 * corr).imag - (2.0 * omega / gamma) * s1.imag
        n2 = (2.0 / gamma) * (g12.conjugate() * corr).imag
    else:
        raise DomainError(f"unknown mode {mode!r}")

    return SteadyState(sigma1=s1, sigma2=s2, n1=float(n1), n2=float(n2), corr=corr)


# ---------------------------------------------------------------------------
# Full master-equation oracle
# ---------------------------------------------------------------------------

_SM = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e| in basis (g, e)
_ID2 = np.eye(2, dtype=complex)


def _two_atom_ops():
    sm1 = np.kron(_SM, _ID2)
    sm2 = np.kron(_ID2, _SM)
    return sm1, sm1.conj().T, sm2, sm2.conj().T


def lindblad_steady_state(j12: float, gamma12: float, drive: DriveSpec,
                          gamma: float, drive_targets: str = "A1") -> SteadyState:
    """Unique steady state of the full two-atom Lindblad master equation.

    j12 is the coherent coupling J12/hbar and gamma12 the cross decay rate,
    both in the same angular-frequency units as gamma.  The 16x16
    Liouvillian is solved densely with the trace constraint appended
    (least squares on the stacked system); no time stepping.
    """
    if gamma <= 0.0:
        raise PhysicalityError(f"gamma must be positive, got {gamma}")
    if abs(gamma12) > gamma:
        raise PhysicalityError(
            f"|Gamma12| = {abs(gamma12):.6g} exceeds Gamma = {gamma:.6g}: "
            "dissipator is not positive semidefinite"
        )
    if drive_targets not in ("A1", "both"):
        raise DomainError(f"drive_targets must be 'A1' or 'both', got {drive_targets!r}")

    omega = drive.rabi_for(gamma)
    delta = drive.delta_d
    sm1, sp1, sm2, sp2 = _two_atom_ops()
    n1op, n2op = sp1 @ sm1, sp2 @ sm2

    h = delta * (n1op + n2op) + omega * (sp1 + sm1)
    if drive_targets == "both":
        h = h + omega * (sp2 + sm2)
    h = h - j12 * (sp1 @ sm2 + sp2 @ sm1)

    rates = np.array([[gamma, gamma12], [gamma12, gamma]])
    lowers = (sm1, sm2)
    raises_ = (sp1, sp2)

    def liouvillian(rho: np.ndarray) -> np.ndarray:
        out = -1j * (h @ rho - rho @ h)
        for i in range(2):
            for j in range(2):
                g_ij = rates[i, j]
                anti = raises_[i] @ lowers[j]
                out += g_ij * (lowers[j] @ rho @ raises_[i]
                               - 0.5 * (anti @ rho + rho @ anti))
        return out

    lmat = np.empty((16, 16), dtype=complex)
    for col in range(16):
        basis = np.zeros((4, 4), dtype=complex)
        basis[col // 4, col % 4] = 1.0
        lmat[:, col] = liouvillian(basis).reshape(16)

    svals = np.linalg.svd(lmat, compute_uv=False)
    if svals[-2] < 1e-10 * max(svals[0], 1.0):
        raise NumericalRankError(
            "Liouvillian null space is degenerate; steady state not unique "
            f"(two smallest singular values {svals[-1]:.3g}, {svals[-2]:.3g})"
        )

    trace_row = np.eye(4, dtype=complex).reshape(1, 16)
    stacked = np.vstack([lmat, trace_row])
    rhs = np.zeros(17, dtype=complex)
    rhs[-1] = 1.0
    sol, *_ = np.linalg.lstsq(stacked, rhs, rcond=None)
    rho = sol.reshape(4, 4)
    rho = 0.5 * (rho + rho.conj().T)
    resid = np.linalg.norm(liouvillian(rho))
    if resid > 1e-8 * max(gamma, abs(omega), 1.0):
        raise NumericalRankError(
            f"steady-state residual {resid:.3g} too large; solve ill-conditioned"
        )

    def expect(op):
        return complex(np.trace(rho @ op))

    return SteadyState(
        sigma1=expect(sm1),
        sigma2=expect(sm2),
        n1=expect(n1op).real,
        n2=expect(n2op).real,
        corr=expect(sp1 @ sm2),
    )


def potential_energy(j12: float, xi: float) -> float:
    """Steady-state interaction energy -J12 * xi (units of j12)."""
    return -j12 * xi


def excitation_spectrum(g12: complex, s: float, delta_grid, gamma: float,
                        mode: str = "as_printed"):
    """Excited-state probability and cross-correlation vs detuning at fixed s.

    The drive amplitude is re-derived at each detuning so that the lone-atom
    response would be flat; returns (delta array, n1/s^2, xi/s^2).  With
    Im[G12^2] != 0 the dip near zero detuning is asymmetric.
    """
    deltas = np.atleast_1d(np.asarray(delta_grid, dtype=float))
    n1 = np.empty_like(deltas)
    xi = np.empty_like(deltas)
    for i, d in enumerate(deltas):
        drive = DriveSpec(delta_d=float(d), saturation=s)
        ss = steady_state_analytic(g12, drive, gamma, mode=mode)
        n1[i] = ss.n1 / s**2
        xi[i] = ss.xi / s**2
    return deltas, n1, xi
