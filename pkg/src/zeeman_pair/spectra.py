"""Collective states, block structure and spectra of the dipole-dipole Hamiltonian."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coupling import CouplingSet, Geometry, coupling_from_tensor
from .operators import (
    EXCITED,
    GROUND,
    Dissipator,
    SystemParams,
    hamiltonian_atomic,
    hamiltonian_dipole,
    ket,
    rotation_operator,
    spatial_rotation,
)

__all__ = [
    "CollectiveBasis",
    "collective_basis",
    "symmetric_state",
    "antisymmetric_state",
    "SpectrumReport",
    "block_matrix_symmetric",
    "spectrum_dipole",
    "spectrum_full",
    "spectrum_distance",
    "eigenstates_rotated",
    "rotated_geometry",
    "hamiltonian_rotation_residual",
    "dissipator_rotation_residual",
]


def symmetric_state(i: int) -> np.ndarray:
    return (ket(i, GROUND) + ket(GROUND, i)) / math.sqrt(2.0)


def antisymmetric_state(i: int) -> np.ndarray:
    return (ket(i, GROUND) - ket(GROUND, i)) / math.sqrt(2.0)


@dataclass(frozen=True)
class CollectiveBasis:
    """Symmetric/antisymmetric single-excitation states plus the remaining product states."""

    s_states: np.ndarray
    a_states: np.ndarray
    ground: np.ndarray
    double: np.ndarray

    def matrix(self) -> np.ndarray:
        """Columns ordered s1..s3, a1..a3, ground, then the nine doubly excited states."""
        return np.column_stack([*self.s_states, *self.a_states, self.ground, *self.double])


def collective_basis() -> CollectiveBasis:
    return CollectiveBasis(
        s_states=np.array([symmetric_state(i) for i in EXCITED]),
        a_states=np.array([antisymmetric_state(i) for i in EXCITED]),
        ground=ket(GROUND, GROUND),
        double=np.array([ket(i, j) for i in EXCITED for j in EXCITED]),
    )


@dataclass
class SpectrumReport:
    """Sorted real eigenvalues with sector tags.

    Tags: ``S``/``A`` for symmetric/antisymmetric single-excitation states,
    ``G`` for the collective ground state, ``D`` for doubly excited states and
    ``mixed`` when a degenerate eigenvector straddles several sectors.
    """

    eigenvalues: np.ndarray
    geometry: Geometry
    block_labels: list = field(default_factory=list)


def block_matrix_symmetric(couplings: CouplingSet) -> np.ndarray:
    """Matrix of H_Omega on {|s1>, |s2>, |s3>}; the antisymmetric block is its negative."""
    # Hermitian storage means entry (i, j) with i < j already holds Omega_ji^*.
    return -np.array(couplings.omega, dtype=complex)


def _sector_projectors():
    b = collective_basis()
    sym = b.s_states.T @ b.s_states.conj()
    anti = b.a_states.T @ b.a_states.conj()
    ground = np.outer(b.ground, b.ground.conj())
    double = b.double.T @ b.double.conj()
    return {"S": sym, "A": anti, "G": ground, "D": double}


_SECTORS = _sector_projectors()


def _labelled_eigh(h: np.ndarray):
    w, v = np.linalg.eigh(h)
    labels = []
    for k in range(v.shape[1]):
        vec = v[:, k]
        weights = {name: float(np.real(vec.conj() @ p @ vec)) for name, p in _SECTORS.items()}
        name, best = max(weights.items(), key=lambda kv: kv[1])
        labels.append(name if best > 1.0 - 1e-8 else "mixed")
    return w, labels


def spectrum_dipole(geom: Geometry) -> SpectrumReport:
    """Eigenvalues of H_Omega at ``geom``: three symmetric, three antisymmetric, ten zeros."""
    h = hamiltonian_dipole(coupling_from_tensor(geom))
    w, labels = _labelled_eigh(h)
    return SpectrumReport(w, geom, labels)


def spectrum_full(geom: Geometry, delta: float) -> SpectrumReport:
    """Eigenvalues of H_A + H_Omega for the undriven pair (rotating frame at omega_0)."""
    h = hamiltonian_atomic(SystemParams(delta=delta)) + hamiltonian_dipole(coupling_from_tensor(geom))
    w, labels = _labelled_eigh(h)
    return SpectrumReport(w, geom, labels)


def spectrum_distance(a, b) -> float:
    """Max absolute difference of two sorted spectra."""
    ea = np.sort(np.asarray(getattr(a, "eigenvalues", a), dtype=float))
    eb = np.sort(np.asarray(getattr(b, "eigenvalues", b), dtype=float))
    if ea.shape != eb.shape:
        raise ValueError("spectra have different lengths")
    return float(np.max(np.abs(ea - eb))) if ea.size else 0.0


def rotated_geometry(geom: Geometry, axis, angle: float) -> Geometry:
    """Geometry of the separation vector D_u(alpha) R."""
    return Geometry.from_vector(spatial_rotation(axis, angle) @ geom.vector)


def eigenstates_rotated(geom_z: Geometry, axis, angle: float):
    """Eigenstates of H_Omega at the rotated geometry, generated from the on-axis ones.

    Returns ``(vectors, eigenvalues, geometry)`` where ``vectors`` has shape
    (6, 16): W|s_1..3> followed by W|a_1..3>, with eigenvalues
    -Omega_ii(R_z) and +Omega_ii(R_z) respectively.
    """
    if geom_z.theta != 0.0:
        raise ValueError(f"reference geometry must lie on the z axis, got theta={geom_z.theta}")
    w = rotation_operator(axis, angle)
    c = coupling_from_tensor(geom_z)
    diag = np.real(np.diag(c.omega))
    b = collective_basis()
    vecs = np.array([w @ v for v in (*b.s_states, *b.a_states)])
    vals = np.concatenate([-diag, diag])
    return vecs, vals, rotated_geometry(geom_z, axis, angle)


def hamiltonian_rotation_residual(geom: Geometry, axis, angle: float) -> float:
    """max |H_Omega(D R) - W H_Omega(R) W^+|."""
    w = rotation_operator(axis, angle)
    h_r = hamiltonian_dipole(coupling_from_tensor(geom))
    h_p = hamiltonian_dipole(coupling_from_tensor(rotated_geometry(geom, axis, angle)))
    return float(np.abs(h_p - w @ h_r @ w.conj().T).max())


def dissipator_rotation_residual(geom: Geometry, axis, angle: float, states) -> float:
    """max over ``states`` of |L(D R) rho - W [L(R) (W^+ rho W)] W^+|."""
    w = rotation_operator(axis, angle)
    wd = w.conj().T
    l_r = Dissipator(coupling_from_tensor(geom))
    l_p = Dissipator(coupling_from_tensor(rotated_geometry(geom, axis, angle)))
    worst = 0.0
    for rho in states:
        diff = l_p(rho) - w @ l_r(wd @ rho @ w) @ wd
        worst = max(worst, float(np.abs(diff).max()))
    return worst

