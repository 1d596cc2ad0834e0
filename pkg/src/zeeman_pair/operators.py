"""Dense operators on the 16-dimensional two-atom state space.

Basis convention (used by every module in the package): single-atom levels
are labelled 1, 2, 3 for the P1 sublevels m = -1, 0, +1 and 4 for the S0
ground state.  The product state |i, j> = |i>_1 (x) |j>_2 sits at flat index
``4 * (i - 1) + (j - 1)``.

All Hamiltonians are written in the frame rotating at the laser frequency
(or at the mean transition frequency when no laser is present), so they are
time independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coupling import DIPOLES, CouplingSet

__all__ = [
    "N_LEVELS",
    "DIM",
    "EXCITED",
    "GROUND",
    "MAGNETIC_NUMBER",
    "index",
    "ket",
    "projector",
    "SystemParams",
    "transition_operator",
    "hamiltonian_atomic",
    "hamiltonian_dipole",
    "hamiltonian_laser",
    "Dissipator",
    "dissipator",
    "angular_momentum",
    "single_atom_angular_momentum",
    "rotation_operator",
    "spatial_rotation",
    "dipole_operator",
]

N_LEVELS = 4
DIM = N_LEVELS * N_LEVELS
EXCITED = (1, 2, 3)
GROUND = 4
MAGNETIC_NUMBER = {1: -1, 2: 0, 3: 1, 4: 0}


def index(i: int, j: int) -> int:
    """Flat index of the product state |i, j>."""
    if i not in (1, 2, 3, 4) or j not in (1, 2, 3, 4):
        raise IndexError(f"levels must be in 1..4, got ({i}, {j})")
    return N_LEVELS * (i - 1) + (j - 1)


def ket(i: int, j: int) -> np.ndarray:
    v = np.zeros(DIM, dtype=complex)
    v[index(i, j)] = 1.0
    return v


def projector(indices) -> np.ndarray:
    """Diagonal projector onto the span of the given flat basis indices."""
    p = np.zeros((DIM, DIM), dtype=complex)
    idx = list(indices)
    p[idx, idx] = 1.0
    return p


@dataclass(frozen=True)
class SystemParams:
    """Zeeman splitting, laser Rabi frequency and detuning, all in units of gamma.

    ``detuning`` is omega_L - omega_0.  When ``laser_on`` is false the frame
    rotates at omega_0 and the detuning is ignored.
    """

    delta: float = 0.0
    omega_L: float = 0.0
    detuning: float = 0.0
    laser_on: bool = False

    def __post_init__(self):
        for name in ("delta", "omega_L", "detuning"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.omega_L < 0:
            raise ValueError(f"omega_L must be non-negative, got {self.omega_L}")


def _single(level_out: int, level_in: int) -> np.ndarray:
    m = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    m[level_out - 1, level_in - 1] = 1.0
    return m


def _on_atom(op: np.ndarray, atom: int) -> np.ndarray:
    if atom == 1:
        return np.kron(op, np.eye(N_LEVELS))
    if atom == 2:
        return np.kron(np.eye(N_LEVELS), op)
    raise IndexError(f"atom must be 1 or 2, got {atom}")


def transition_operator(atom: int, level: int, direction: str = "raise") -> np.ndarray:
    """Sigma^+_i(mu) = |i_mu><4_mu| (``raise``) or its adjoint (``lower``)."""
    if level not in EXCITED:
        raise IndexError(f"excited level must be 1, 2 or 3, got {level}")
    if direction == "raise":
        op = _single(level, GROUND)
    elif direction == "lower":
        op = _single(GROUND, level)
    else:
        raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")
    return _on_atom(op, atom)


def hamiltonian_atomic(params: SystemParams) -> np.ndarray:
    """Free atomic Hamiltonian in the rotating frame.

    Level i carries energy ``m_i * delta - detuning`` (detuning only counts
    with the laser on), summed over both atoms.
    """
    detuning = params.detuning if params.laser_on else 0.0
    single = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    for i in EXCITED:
        single[i - 1, i - 1] = MAGNETIC_NUMBER[i] * params.delta - detuning
    return _on_atom(single, 1) + _on_atom(single, 2)


def hamiltonian_dipole(couplings: CouplingSet) -> np.ndarray:
    """Coherent dipole-dipole Hamiltonian -sum_ij (Omega_ij S+_i(2) S-_j(1) + h.c.)."""
    h = np.zeros((DIM, DIM), dtype=complex)
    for i in EXCITED:
        for j in EXCITED:
            # S+_i(2) S-_j(1) = |4, i><j, 4|
            h[index(GROUND, i), index(j, GROUND)] -= couplings.omega[i - 1, j - 1]
    return h + h.conj().T


def hamiltonian_laser(params: SystemParams) -> np.ndarray:
    """sigma+ drive of the 3 <-> 4 transition of both atoms (zero if the laser is off)."""
    if not params.laser_on or params.omega_L == 0.0:
        return np.zeros((DIM, DIM), dtype=complex)
    h = np.zeros((DIM, DIM), dtype=complex)
    for atom in (1, 2):
        s = transition_operator(atom, 3, "raise")
        h += params.omega_L * (s + s.conj().T)
    return h


class Dissipator:
    """Spontaneous emission term of the master equation, with collective rates.

    Written as ``sum_ab C_ab (2 L_a rho L_b^+ - {L_b^+ L_a, rho})`` over the
    lowering operators ``L_a = S-_i(mu)``, where C has gamma on its diagonal
    and Gamma_ij coupling the two atoms.

    Parameters
    ----------
    couplings : CouplingSet
    levels : tuple of int
        Excited levels kept in the model.  Dropping a level removes every
        decay channel and cross term that references it.
    basis : ndarray, optional
        Isometry (16 x n) onto a reduced state space; the lowering operators
        are compressed onto it.
    decay : float
        Single-atom constant gamma (1 in natural units).
    """

    def __init__(self, couplings: CouplingSet, levels=EXCITED, basis=None, decay: float = 1.0):
        levels = tuple(levels)
        lowering = [transition_operator(mu, i, "lower") for mu in (1, 2) for i in levels]
        if basis is not None:
            lowering = [basis.conj().T @ op @ basis for op in lowering]
        self.lowering = np.stack(lowering)

        k = len(levels)
        sel = [i - 1 for i in levels]
        gamma_t = couplings.gamma[np.ix_(sel, sel)].T
        c = np.zeros((2 * k, 2 * k), dtype=complex)
        c[:k, :k] = decay * np.eye(k)
        c[k:, k:] = decay * np.eye(k)
        c[:k, k:] = gamma_t
        c[k:, :k] = gamma_t
        self.rates = c

        # weighted adjoints: sum_b C_ab L_b^+
        adj = self.lowering.conj().transpose(0, 2, 1)
        weighted_adj = np.einsum("ab,bij->aij", c, adj)
        self.anticommutator = np.einsum("aij,ajk->ik", weighted_adj, self.lowering)

        # Each L_a is a short sum of matrix units val * |tgt><src|, so
        # sum_ab C_ab L_a rho L_b^+ only needs the entries of rho between
        # source states: gather them, weight, and scatter onto the targets.
        chan, tgt, src, val = [], [], [], []
        for a, op in enumerate(self.lowering):
            for p, q in zip(*np.nonzero(op)):
                chan.append(a)
                tgt.append(p)
                src.append(q)
                val.append(op[p, q])
        n, nnz = self.lowering.shape[1], len(src)
        src = np.array(src, dtype=int)
        self._gather = (src[:, None] * n + src[None, :]).ravel()
        self._weights = 2.0 * c[np.ix_(chan, chan)] * np.outer(val, np.conj(val))
        scatter = np.zeros((n, nnz), dtype=complex)
        scatter[tgt, np.arange(nnz)] = 1.0
        self._scatter, self._scatter_t = scatter, scatter.T.copy()
        self._nnz = nnz

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        n = self.lowering.shape[1]
        if rho.shape != (n, n):
            raise ValueError(f"density matrix shape {rho.shape} does not match ({n}, {n})")
        k = self.anticommutator
        return self.jump(rho) - k @ rho - rho @ k

    def jump(self, rho: np.ndarray) -> np.ndarray:
        """The recycling part ``2 sum_ab C_ab L_a rho L_b^+`` alone."""
        block = rho.ravel().take(self._gather).reshape(self._nnz, self._nnz)
        return self._scatter @ (self._weights * block) @ self._scatter_t


def dissipator(rho: np.ndarray, couplings: CouplingSet) -> np.ndarray:
    """Apply the spontaneous-emission superoperator to ``rho``."""
    return Dissipator(couplings)(np.asarray(rho, dtype=complex))


def single_atom_angular_momentum(component: str) -> np.ndarray:
    """4x4 spin-1 matrix on levels 1-3 (m = -1, 0, +1); level 4 is J = 0."""
    m = np.array([-1.0, 0.0, 1.0])
    # J+ |m> = sqrt(2 - m(m+1)) |m+1>
    jp = np.zeros((3, 3), dtype=complex)
    for k in range(2):
        jp[k + 1, k] = math.sqrt(2.0 - m[k] * (m[k] + 1.0))
    jm = jp.conj().T
    mats = {
        "x": 0.5 * (jp + jm),
        "y": -0.5j * (jp - jm),
        "z": np.diag(m).astype(complex),
    }
    if component not in mats:
        raise ValueError(f"component must be x, y or z, got {component!r}")
    out = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    out[:3, :3] = mats[component]
    return out


def angular_momentum(component: str, atom: int) -> np.ndarray:
    """J_component of one atom embedded in the two-atom space."""
    return _on_atom(single_atom_angular_momentum(component), atom)


def _unit_axis(axis) -> np.ndarray:
    u = np.asarray(axis, dtype=float)
    if u.shape != (3,) or abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise ValueError(f"rotation axis must be a unit 3-vector, got {axis!r}")
    return u


def _single_atom_rotation(u: np.ndarray, angle: float) -> np.ndarray:
    gen = sum(c * single_atom_angular_momentum(a) for c, a in zip(u, "xyz"))
    w, v = np.linalg.eigh(gen)
    return (v * np.exp(-1j * angle * w)) @ v.conj().T


def rotation_operator(axis, angle: float) -> np.ndarray:
    """W_u(alpha) = exp(-i alpha J1.u) exp(-i alpha J2.u) on the two-atom space."""
    u = _unit_axis(axis)
    w1 = _single_atom_rotation(u, angle)
    return np.kron(w1, w1)


def spatial_rotation(axis, angle: float) -> np.ndarray:
    """Orthogonal 3x3 matrix rotating real vectors by ``angle`` about ``axis``."""
    u = _unit_axis(axis)
    k = np.array([[0.0, -u[2], u[1]], [u[2], 0.0, -u[0]], [-u[1], u[0], 0.0]])
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


def dipole_operator(atom: int, dipoles=DIPOLES) -> np.ndarray:
    """Cartesian components of the dipole operator of one atom, shape (3, 16, 16)."""
    d = dipoles.as_array()
    out = np.zeros((3, DIM, DIM), dtype=complex)
    for i in EXCITED:
        s = transition_operator(atom, i, "raise")
        for k in range(3):
            out[k] += d[i - 1, k] * s + np.conj(d[i - 1, k]) * s.conj().T
    return out
