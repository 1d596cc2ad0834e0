"""Vacuum-mediated dipole-dipole couplings between two S0 <-> P1 atoms.

Units are natural throughout: hbar = 1, the single-atom decay constant
gamma = 1 (total excited-state decay rate 2 gamma), and lengths are measured
in units of the transition wavelength lambda_0, so that ``eta = 2 pi R``.

The coherent couplings ``Omega_ij`` and collective decay rates ``Gamma_ij``
are obtained by contracting the dipole moments with the real and imaginary
parts of the free-space coupling tensor.  A second, independent evaluation
from the closed trigonometric expressions is provided for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import spherical_jn, spherical_yn

__all__ = [
    "GeometryError",
    "Geometry",
    "DipoleSet",
    "CouplingSet",
    "DIPOLES",
    "chi_tensor",
    "coupling_from_tensor",
    "coupling_closed_form",
]

# k0^3 |D|^2 / (4 pi eps0 hbar) expressed in units of gamma = |D|^2 k0^3 / (6 pi eps0 hbar)
_CHI_PREFACTOR = 1.5


class GeometryError(ValueError):
    """Raised for an invalid separation vector (e.g. coincident atoms)."""


@dataclass(frozen=True)
class Geometry:
    """Relative position of atom 2 with respect to atom 1.

    Parameters
    ----------
    R : float
        Interatomic distance in units of lambda_0, strictly positive.
    theta : float
        Polar angle to the quantization (z) axis, in [0, pi].
    phi : float
        Azimuthal angle.  Any finite value is accepted and reduced to [0, 2 pi).
    """

    R: float
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        R, theta, phi = float(self.R), float(self.theta), float(self.phi)
        if not (math.isfinite(R) and math.isfinite(theta) and math.isfinite(phi)):
            raise GeometryError(f"non-finite geometry ({self.R}, {self.theta}, {self.phi})")
        if R <= 0.0:
            raise GeometryError(f"interatomic distance must be positive, got R={R}")
        if not (-1e-12 <= theta <= math.pi + 1e-12):
            raise GeometryError(f"theta must lie in [0, pi], got {theta}")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "theta", min(max(theta, 0.0), math.pi))
        object.__setattr__(self, "phi", phi % (2.0 * math.pi))

    @property
    def eta(self) -> float:
        """Dimensionless separation k0 R."""
        return 2.0 * math.pi * self.R

    @property
    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    @property
    def vector(self) -> np.ndarray:
        return self.R * self.unit_vector

    @classmethod
    def from_vector(cls, vec) -> "Geometry":
        """Build a geometry from a Cartesian separation vector (units of lambda_0)."""
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (3,):
            raise GeometryError(f"expected a 3-vector, got shape {vec.shape}")
        R = float(np.linalg.norm(vec))
        if R == 0.0:
            raise GeometryError("coincident atoms: zero separation vector")
        theta = math.atan2(math.hypot(vec[0], vec[1]), vec[2])
        phi = math.atan2(vec[1], vec[0])
        return cls(R, theta, phi)


@dataclass(frozen=True)
class DipoleSet:
    """Transition dipole moments <i|d|4> in units of the reduced matrix element."""

    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray

    def as_array(self) -> np.ndarray:
        """Rows are d_1, d_2, d_3."""
        return np.stack([self.d1, self.d2, self.d3])

    @classmethod
    def standard(cls) -> "DipoleSet":
        s = 1.0 / math.sqrt(2.0)
        eps_plus = np.array([s, 1j * s, 0.0])
        eps_minus = np.array([s, -1j * s, 0.0])
        return cls(d1=eps_plus, d2=np.array([0.0, 0.0, 1.0 + 0j]), d3=-eps_minus)


DIPOLES = DipoleSet.standard()


@dataclass(frozen=True)
class CouplingSet:
    """Coherent couplings and collective decay rates, both 3x3 Hermitian.

    ``omega[i-1, j-1]`` is Omega_ij for i >= j; the upper triangle holds the
    complex conjugates, so the arrays are Hermitian as stored.
    """

    omega: np.ndarray
    gamma: np.ndarray

    def cross_terms_zeroed(self) -> "CouplingSet":
        """Copy with every i != j coupling removed."""
        return CouplingSet(np.diag(np.diag(self.omega)), np.diag(np.diag(self.gamma)))

    def max_abs(self) -> float:
        return float(max(np.abs(self.omega).max(), np.abs(self.gamma).max()))

    def max_cross(self) -> float:
        off = ~np.eye(3, dtype=bool)
        return float(max(np.abs(self.omega[off]).max(), np.abs(self.gamma[off]).max()))

    @classmethod
    def zero(cls) -> "CouplingSet":
        return cls(np.zeros((3, 3), complex), np.zeros((3, 3), complex))


def _as_geometry(geom) -> Geometry:
    if isinstance(geom, Geometry):
        return geom
    return Geometry(*geom)


def chi_tensor(geom: Geometry) -> np.ndarray:
    """Free-space coupling tensor chi_kl(R) in units of gamma.

    Returns the full complex 3x3 tensor; ``.real`` feeds the coherent
    couplings and ``.imag`` the collective decay rates.
    """
    geom = _as_geometry(geom)
    eta = geom.eta
    # (1/eta + i/eta^2 - 1/eta^3) e^{i eta} and (1/eta + 3i/eta^2 - 3/eta^3) e^{i eta}
    # written with spherical Bessel functions: the imaginary parts tend to
    # finite limits through large cancelling terms, which the explicit
    # form loses to rounding once eta drops below ~1e-3.
    j0, j1, j2 = (spherical_jn(k, eta) for k in range(3))
    y0, y1, y2 = (spherical_yn(k, eta) for k in range(3))
    g1 = (y1 / eta - y0) + 1j * (j0 - j1 / eta)
    g2 = y2 - 1j * j2
    n = geom.unit_vector
    return _CHI_PREFACTOR * (g1 * np.eye(3) - g2 * np.outer(n, n))


def coupling_from_tensor(geom: Geometry, dipoles: DipoleSet = DIPOLES) -> CouplingSet:
    """Omega_ij = d_i^T chi_re d_j^*, Gamma_ij = d_i^T chi_im d_j^*."""
    chi = chi_tensor(geom)
    d = dipoles.as_array()
    omega = d @ chi.real @ d.conj().T
    gamma = d @ chi.imag @ d.conj().T
    # Hermitian by construction; remove rounding asymmetry so diagonals are exactly real
    return CouplingSet(0.5 * (omega + omega.conj().T), 0.5 * (gamma + gamma.conj().T))


def coupling_closed_form(geom: Geometry) -> CouplingSet:
    """Explicit trigonometric forms of Omega_ij and Gamma_ij.

    Used only as an independent check on :func:`coupling_from_tensor`.
    """
    geom = _as_geometry(geom)
    eta, theta, phi = geom.eta, geom.theta, geom.phi
    ce, se = math.cos(eta), math.sin(eta)
    c2t = math.cos(2.0 * theta)
    sin2 = math.sin(theta) ** 2
    e2 = np.exp(-2j * phi)

    o31_bare = 3.0 / (4.0 * eta**3) * ((eta**2 - 3.0) * ce - 3.0 * eta * se) * e2
    g31_bare = 3.0 / (4.0 * eta**3) * ((eta**2 - 3.0) * se + 3.0 * eta * ce) * e2
    o31, g31 = o31_bare * sin2, g31_bare * sin2
    o11 = 3.0 / (8.0 * eta**3) * ((3.0 * eta**2 - 1.0 + (eta**2 - 3.0) * c2t) * ce
                                   - eta * (1.0 + 3.0 * c2t) * se)
    g11 = 3.0 / (8.0 * eta**3) * ((3.0 * eta**2 - 1.0 + (eta**2 - 3.0) * c2t) * se
                                   + eta * (1.0 + 3.0 * c2t) * ce)

    # sin^2 cot and sin^2 (2 cot^2 - 1) rewritten without cot, so the
    # expressions stay finite on the z axis
    st, ct = math.sin(theta), math.cos(theta)
    o21 = -math.sqrt(2.0) * st * ct * o31_bare * np.exp(1j * phi)
    g21 = -math.sqrt(2.0) * st * ct * g31_bare * np.exp(1j * phi)
    o22 = o11 - (2.0 * ct**2 - st**2) * o31_bare * np.exp(2j * phi)
    g22 = g11 - (2.0 * ct**2 - st**2) * g31_bare * np.exp(2j * phi)

    def assemble(x11, x21, x22, x31):
        x32, x33 = -x21, x11
        lower = np.array([[x11, 0, 0], [x21, x22, 0], [x31, x32, x33]], dtype=complex)
        return np.tril(lower) + np.tril(lower, -1).conj().T

    return CouplingSet(assemble(o11, o21, o22, o31), assemble(g11, g21, g22, g31))
