"""Truncated (few-level) models and how far they drift from the full multiplet.

A truncation keeps a subset of the excited Zeeman sublevels in both atoms
and deletes every operator that references a dropped level, including the
cross couplings into it.  The reduced state space is ordered like the full
product basis restricted to the kept levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coupling import CouplingSet, Geometry, coupling_from_tensor
from .dynamics import Generator, evolve, evolve_generator, ground_state
from .operators import (
    DIM,
    EXCITED,
    GROUND,
    Dissipator,
    SystemParams,
    hamiltonian_atomic,
    hamiltonian_dipole,
    hamiltonian_laser,
    index,
)
from .spectra import spectrum_dipole

__all__ = [
    "TruncationScheme",
    "FULL",
    "f1",
    "f2",
    "two_level_splitting",
    "SplittingCurve",
    "splitting_curve",
    "TruncatedModel",
    "truncated_generator",
    "BreakdownReport",
    "breakdown_report",
    "compare_truncated_dynamics",
    "DecouplingReport",
    "large_delta_decoupling_check",
]


@dataclass(frozen=True)
class TruncationScheme:
    """Excited levels kept in each atom; the ground level 4 is always kept."""

    kept_levels: tuple
    name: str = ""

    def __post_init__(self):
        kept = tuple(sorted(set(int(i) for i in self.kept_levels)))
        if not kept:
            raise ValueError("a truncation must keep at least one excited level")
        if any(i not in EXCITED for i in kept):
            raise ValueError(f"kept levels must be drawn from {EXCITED}, got {self.kept_levels}")
        object.__setattr__(self, "kept_levels", kept)
        if not self.name:
            object.__setattr__(self, "name", "{" + ",".join(map(str, kept)) + "}")

    @property
    def is_full(self) -> bool:
        return self.kept_levels == EXCITED

    @property
    def levels(self) -> tuple:
        """All single-atom levels in the reduced model, ground last."""
        return self.kept_levels + (GROUND,)

    @property
    def indices(self) -> list:
        """Flat indices (full 16-dim ordering) of the kept product states."""
        return [index(i, j) for i in self.levels for j in self.levels]

    @property
    def dim(self) -> int:
        return len(self.levels) ** 2


FULL = TruncationScheme(EXCITED, "full")


def f1(eta):
    return (1.0 / eta - 1.0 / eta**3) * np.cos(eta) - np.sin(eta) / eta**2


def f2(eta):
    return (1.0 / eta - 3.0 / eta**3) * np.cos(eta) - 3.0 * np.sin(eta) / eta**2


def two_level_splitting(R, theta):
    """s2/a2 splitting 2|Omega_22| of the pi-transition two-level model, units of gamma."""
    R = np.asarray(R, dtype=float)
    if np.any(R <= 0):
        raise ValueError("interatomic distance must be positive")
    eta = 2.0 * math.pi * R
    omega22 = 1.5 * (f1(eta) - np.cos(theta) ** 2 * f2(eta))
    out = 2.0 * np.abs(omega22)
    return float(out) if out.ndim == 0 else out


@dataclass
class SplittingCurve:
    R: float
    theta: np.ndarray
    splitting: np.ndarray

    @property
    def relative_variation(self) -> float:
        """(max - min) / max over the theta grid."""
        top = float(self.splitting.max())
        return (top - float(self.splitting.min())) / top if top > 0 else 0.0


def splitting_curve(R: float, thetas) -> SplittingCurve:
    thetas = np.asarray(thetas, dtype=float)
    return SplittingCurve(R, thetas, np.asarray(two_level_splitting(R, thetas)))


class TruncatedModel:
    """Master-equation pieces of a truncated model at one geometry.

    Hamiltonians are compressions of the full ones onto the kept product
    states, which is the same as dropping every transition operator that
    touches a removed level.  The dissipator is rebuilt from the kept decay
    channels only.
    """

    def __init__(self, scheme: TruncationScheme, couplings: CouplingSet, params: SystemParams = SystemParams()):
        self.scheme = scheme
        self.couplings = couplings
        self.params = params
        if scheme.is_full:
            self.basis = None
            self._compress = lambda op: op
        else:
            basis = np.zeros((DIM, scheme.dim), dtype=complex)
            basis[scheme.indices, np.arange(scheme.dim)] = 1.0
            self.basis = basis
            self._compress = lambda op: basis.conj().T @ op @ basis
        self.h_atomic = self._compress(hamiltonian_atomic(params))
        self.h_dipole = self._compress(hamiltonian_dipole(couplings))
        self.h_laser = self._compress(hamiltonian_laser(params))
        self.dissipator = Dissipator(couplings, levels=scheme.kept_levels, basis=self.basis)

    @property
    def dim(self) -> int:
        return self.scheme.dim

    def hamiltonian(self) -> np.ndarray:
        return self.h_atomic + self.h_dipole + self.h_laser

    def generator(self) -> Generator:
        return Generator(self.hamiltonian(), self.dissipator)

    def restrict(self, rho_full: np.ndarray) -> np.ndarray:
        """Block of a full density matrix on the kept product states."""
        if self.basis is None:
            return np.asarray(rho_full)
        idx = self.scheme.indices
        return np.asarray(rho_full)[..., idx, :][..., :, idx]

    def embed(self, rho: np.ndarray) -> np.ndarray:
        if self.basis is None:
            return np.asarray(rho)
        return self.basis @ rho @ self.basis.conj().T

    def dipole_spectrum(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.h_dipole)


def truncated_generator(scheme: TruncationScheme, geom: Geometry, params: SystemParams = SystemParams()) -> Generator:
    """Generator of the truncated model on its (k+1)^2-dimensional space."""
    return TruncatedModel(scheme, coupling_from_tensor(geom), params).generator()


@dataclass
class BreakdownReport:
    """Full vs truncated H_Omega spectra across a theta sweep at fixed R and phi."""

    scheme: TruncationScheme
    R: float
    phi: float
    theta: np.ndarray
    full_spectra: np.ndarray
    truncated_spectra: np.ndarray
    splitting: np.ndarray
    full_variation: float = field(init=False)
    truncated_variation: float = field(init=False)

    def __post_init__(self):
        self.full_variation = _variation(self.full_spectra)
        self.truncated_variation = _variation(self.truncated_spectra)

    @property
    def breaks(self) -> bool:
        return self.truncated_variation > 1e-10

    def rows(self):
        for k, th in enumerate(self.theta):
            yield th, self.full_spectra[k], self.truncated_spectra[k], self.splitting[k]


def _variation(spectra: np.ndarray) -> float:
    """Max over eigenvalue slots of (max - min) across the sweep."""
    if len(spectra) == 0:
        return 0.0
    return float(np.max(spectra.max(axis=0) - spectra.min(axis=0)))


def breakdown_report(scheme: TruncationScheme, R: float, thetas, phi: float = 0.0) -> BreakdownReport:
    """Sorted H_Omega spectra of the full and truncated models for each theta (delta = 0)."""
    thetas = np.asarray(thetas, dtype=float)
    full, trunc = [], []
    for th in thetas:
        geom = Geometry(R, th, phi)
        full.append(np.sort(spectrum_dipole(geom).eigenvalues))
        model = TruncatedModel(scheme, coupling_from_tensor(geom))
        trunc.append(np.sort(model.dipole_spectrum()))
    return BreakdownReport(
        scheme=scheme,
        R=float(R),
        phi=float(phi),
        theta=thetas,
        full_spectra=np.array(full),
        truncated_spectra=np.array(trunc),
        splitting=np.asarray(two_level_splitting(R, thetas)),
    )


def compare_truncated_dynamics(
    scheme: TruncationScheme,
    geom: Geometry,
    params: SystemParams,
    t_end: float,
    rho0: np.ndarray | None = None,
    output_dt: float = 0.05,
    dt: float = 1e-3,
):
    """Evolve full and truncated models from the same state.

    ``rho0`` is given in the reduced space (default |4,4><4,4|).  Returns
    ``(deviation, leakage, full_traj, trunc_traj)``: the max entrywise
    difference between the truncated state and the kept block of the full
    state, and the max population the full model places outside the kept
    product states.
    """
    couplings = coupling_from_tensor(geom)
    model = TruncatedModel(scheme, couplings, params)
    if rho0 is None:
        rho0 = ground_state(model.dim)
    trunc = evolve_generator(model.generator(), rho0, t_end, output_dt, dt)
    full = evolve_generator(Generator.full(params, couplings), model.embed(rho0), t_end, output_dt, dt)
    kept = model.restrict(full.states)
    deviation = float(np.abs(kept - trunc.states).max())
    total = np.real(np.trace(full.states, axis1=1, axis2=2))
    inside = np.real(np.trace(kept, axis1=-2, axis2=-1))
    leakage = float(np.max(total - inside))
    return deviation, leakage, full, trunc


@dataclass
class DecouplingReport:
    """Deviation between full and cross-term-free dynamics for each Zeeman splitting."""

    geometry: Geometry
    max_cross: float
    deltas: np.ndarray
    deviations: np.ndarray

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.deviations) < 0))


def large_delta_decoupling_check(
    geom: Geometry,
    params: SystemParams,
    multiples=(10.0, 100.0, 1000.0),
    t_end: float = 3.0,
    output_dt: float = 0.05,
    observable: str = "P_S",
    track_laser: bool = True,
    include_zero: bool = False,
) -> DecouplingReport:
    """Compare the full model with the model whose i != j couplings are removed.

    Zeeman splittings are ``multiple * max|Omega_ij|`` at ``geom``.  With
    ``track_laser`` the detuning is shifted by delta so the drive stays on the
    same offset from the shifted m = +1 level.  Reports max |difference| of
    ``observable`` over the run.
    """
    couplings = coupling_from_tensor(geom)
    bare = couplings.cross_terms_zeroed()
    scale = float(np.abs(couplings.omega).max())
    deltas = [m * scale for m in multiples]
    if include_zero:
        deltas = [0.0] + deltas
    deviations = []
    for delta in deltas:
        detuning = params.detuning + (delta if track_laser and params.laser_on else 0.0)
        p = SystemParams(delta=delta, omega_L=params.omega_L, detuning=detuning, laser_on=params.laser_on)
        dt = min(1e-3, 0.2 / max(abs(delta) + abs(detuning) + 1.0, 1.0))
        full = evolve(ground_state(), p, geom, t_end, output_dt, dt=dt, couplings=couplings)
        cut = evolve(ground_state(), p, geom, t_end, output_dt, dt=dt, couplings=bare)
        deviations.append(float(np.abs(full.observables[observable] - cut.observables[observable]).max()))
    return DecouplingReport(geom, couplings.max_cross(), np.array(deltas), np.array(deviations))
