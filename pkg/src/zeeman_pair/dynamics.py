"""Master-equation integration for the two-atom system.

The generator ``-i[H_A + H_Omega + H_L, rho] + L_gamma rho`` is applied as a
function on dense 16x16 density matrices and integrated with a classic
fixed-step fourth-order Runge-Kutta scheme.  The step is halved until two
successive resolutions agree on every sampled population to within the
requested tolerance.  Trace drift is reported, never corrected.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .coupling import CouplingSet, Geometry, coupling_from_tensor
from .operators import (
    DIM,
    Dissipator,
    SystemParams,
    hamiltonian_atomic,
    hamiltonian_dipole,
    hamiltonian_laser,
    index,
    rotation_operator,
)
from .spectra import rotated_geometry

__all__ = [
    "ConvergenceError",
    "Subspace",
    "SUBSPACE_S",
    "SUBSPACE_V",
    "Generator",
    "generator",
    "Trajectory",
    "ground_state",
    "pure_state",
    "subspace_population",
    "integrate_rk4",
    "evolve_generator",
    "evolve",
    "verify_evolution_equivalence",
]

log = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    """Step halving did not reach the requested tolerance."""

    def __init__(self, message: str, time: float, deviation: float):
        super().__init__(message)
        self.time = time
        self.deviation = deviation


@dataclass(frozen=True)
class Subspace:
    """Span of a set of product basis states, given by flat indices."""

    name: str
    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise ValueError(f"subspace {self.name!r} has repeated indices")
        if any(not 0 <= i < DIM for i in idx):
            raise ValueError(f"subspace {self.name!r} has indices outside 0..{DIM - 1}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def from_states(cls, name: str, states) -> "Subspace":
        return cls(name, tuple(index(i, j) for i, j in states))


SUBSPACE_S = Subspace.from_states("S", [(4, 4), (3, 3), (3, 4), (4, 3)])
SUBSPACE_V = Subspace.from_states("V", [(1, 1), (1, 3), (3, 1), (1, 4), (4, 1)])


def ground_state(dim: int = DIM) -> np.ndarray:
    """|4,4><4,4| (the last basis state for every level ordering used here)."""
    rho = np.zeros((dim, dim), dtype=complex)
    rho[-1, -1] = 1.0
    return rho


def pure_state(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def subspace_population(rho: np.ndarray, sub: Subspace) -> float:
    """Tr[rho P_sub]."""
    idx = list(sub.indices)
    return float(np.real(np.trace(rho[np.ix_(idx, idx)])))


class Generator:
    """Right-hand side of the master equation for fixed parameters.

    ``hamiltonian`` and ``dissipator`` may live on any reduced space; the
    full-model constructor is :meth:`full`.
    """

    def __init__(self, hamiltonian: np.ndarray, dissipator: Callable[[np.ndarray], np.ndarray]):
        self.hamiltonian = np.asarray(hamiltonian, dtype=complex)
        self.dissipator = dissipator
        self._mih = -1j * self.hamiltonian
        self._jump = None
        if isinstance(dissipator, Dissipator):
            # fold the anticommutator into an effective non-Hermitian generator:
            # -i[H, rho] - {K, rho} = A rho + rho A^+ with A = -iH - K
            a = self._mih - dissipator.anticommutator
            self._a, self._a_dag = a, a.conj().T
            self._jump = dissipator.jump

    @classmethod
    def full(cls, params: SystemParams, couplings: CouplingSet) -> "Generator":
        h = hamiltonian_atomic(params) + hamiltonian_dipole(couplings) + hamiltonian_laser(params)
        return cls(h, Dissipator(couplings))

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        if self._jump is not None:
            return self._a @ rho + rho @ self._a_dag + self._jump(rho)
        return self._mih @ rho - rho @ self._mih + self.dissipator(rho)

    def rate_bound(self) -> float:
        """Crude bound on the fastest rate in the generator, used to size steps."""
        lindblad = getattr(self.dissipator, "rates", None)
        lb = 0.0 if lindblad is None else 4.0 * float(np.abs(lindblad).sum(axis=1).max())
        return float(np.abs(self.hamiltonian).sum(axis=1).max()) * 2.0 + lb


def generator(rho: np.ndarray, params: SystemParams, couplings: CouplingSet) -> np.ndarray:
    """d rho / dt for the full model (Hermitian, traceless for Hermitian rho)."""
    return Generator.full(params, couplings)(np.asarray(rho, dtype=complex))


@dataclass
class Trajectory:
    """Density matrices and population time series on a uniform output grid."""

    times: np.ndarray
    states: np.ndarray
    observables: dict = field(default_factory=dict)
    dt: float = float("nan")
    step_error: float = float("nan")

    @property
    def trace_error(self) -> float:
        return float(np.max(self.observables["trace_err"]))

    @property
    def min_eigenvalue(self) -> float:
        return float(np.min(self.observables["min_eig"]))

    def hermiticity_error(self) -> float:
        return float(np.abs(self.states - self.states.conj().transpose(0, 2, 1)).max())


def _output_grid(t_end: float, output_dt: float) -> np.ndarray:
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if not 0 < output_dt <= t_end:
        raise ValueError(f"output_dt must lie in (0, t_end], got {output_dt}")
    n = int(round(t_end / output_dt))
    if abs(n * output_dt - t_end) > 1e-9 * t_end:
        raise ValueError("t_end must be an integer multiple of output_dt")
    return np.linspace(0.0, t_end, n + 1)


def integrate_rk4(gen: Callable, rho0: np.ndarray, times: np.ndarray, dt: float) -> np.ndarray:
    """Fixed-step RK4 sampled at ``times`` (uniform grid starting at 0).

    ``dt`` is shrunk so that an integer number of steps fits each output interval.
    """
    out = np.empty((len(times),) + rho0.shape, dtype=complex)
    rho = np.array(rho0, dtype=complex)
    out[0] = rho
    if len(times) == 1:
        return out
    interval = times[1] - times[0]
    nsub = max(1, int(math.ceil(interval / dt - 1e-9)))
    h = interval / nsub
    for k in range(1, len(times)):
        for _ in range(nsub):
            k1 = gen(rho)
            k2 = gen(rho + 0.5 * h * k1)
            k3 = gen(rho + 0.5 * h * k2)
            k4 = gen(rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k] = rho
    return out


def _populations(states: np.ndarray) -> np.ndarray:
    return np.real(np.diagonal(states, axis1=1, axis2=2))


def evolve_generator(
    gen: Callable,
    rho0: np.ndarray,
    t_end: float,
    output_dt: float = 0.05,
    dt: float = 1e-3,
    tol: float = 1e-6,
    max_halvings: int = 8,
    check_convergence: bool = True,
) -> Trajectory:
    """Integrate ``gen`` from ``rho0``, halving the step until populations converge.

    Raises
    ------
    ConvergenceError
        If ``max_halvings`` halvings still change some sampled population by
        more than ``tol``; the exception carries the time of the worst sample.
    """
    times = _output_grid(t_end, output_dt)
    rho0 = np.asarray(rho0, dtype=complex)
    states = integrate_rk4(gen, rho0, times, dt)
    step_error = float("nan")
    if check_convergence:
        for _ in range(max_halvings):
            finer = integrate_rk4(gen, rho0, times, dt / 2.0)
            dev = np.abs(_populations(finer) - _populations(states)).max(axis=1)
            step_error = float(dev.max())
            states, dt = finer, dt / 2.0
            if step_error < tol:
                break
            log.debug("step halving: dt=%g deviation=%g", dt, step_error)
        else:
            worst = int(np.argmax(dev))
            raise ConvergenceError(
                f"populations not converged to {tol:g} after {max_halvings} halvings "
                f"(dt={dt:g}); worst deviation {step_error:g} at t={times[worst]:g}",
                time=float(times[worst]),
                deviation=step_error,
            )
    traj = Trajectory(times=times, states=states, dt=dt, step_error=step_error)
    traj.observables["trace_err"] = np.abs(np.real(np.trace(states, axis1=1, axis2=2)) - 1.0)
    herm = 0.5 * (states + states.conj().transpose(0, 2, 1))
    traj.observables["min_eig"] = np.linalg.eigvalsh(herm)[:, 0]
    return traj


def evolve(
    rho0: np.ndarray,
    params: SystemParams,
    geom: Geometry,
    t_end: float,
    output_dt: float = 0.05,
    dt: float = 1e-3,
    tol: float = 1e-6,
    subspaces: Sequence[Subspace] = (SUBSPACE_S, SUBSPACE_V),
    couplings: CouplingSet | None = None,
    **kwargs,
) -> Trajectory:
    """Full-model trajectory with populations ``P_<name>`` of each subspace and ``P_rest``.

    ``couplings`` overrides the geometry-derived couplings (e.g. with cross
    terms removed).
    """
    if couplings is None:
        couplings = coupling_from_tensor(geom)
    gen = Generator.full(params, couplings)
    traj = evolve_generator(gen, rho0, t_end, output_dt, dt, tol, **kwargs)
    total = np.real(np.trace(traj.states, axis1=1, axis2=2))
    rest = total.copy()
    for sub in subspaces:
        pop = np.array([subspace_population(r, sub) for r in traj.states])
        traj.observables[f"P_{sub.name}"] = pop
        rest -= pop
    traj.observables["P_rest"] = rest
    return traj


def verify_evolution_equivalence(
    geom: Geometry,
    axis,
    angle: float,
    params: SystemParams,
    rho0: np.ndarray,
    t_end: float,
    output_dt: float = 0.25,
    dt: float = 1e-3,
) -> float:
    """Max entrywise deviation between rho(P, t) and W rho(R, t) W^+.

    The pair at ``R`` starts in ``rho0`` and the rotated pair at
    ``P = D_u(alpha) R`` in ``W rho0 W^+``.  Only valid when H_A commutes
    with W: a degenerate multiplet (delta = 0) or a rotation about z.
    """
    u = np.asarray(axis, dtype=float)
    if params.laser_on:
        raise ValueError("equivalence requires the laser to be off: W does not commute with H_L")
    about_z = np.allclose(u, [0.0, 0.0, 1.0], atol=1e-12) or np.allclose(u, [0.0, 0.0, -1.0], atol=1e-12)
    if params.delta != 0.0 and not about_z:
        raise ValueError(
            "delta != 0 breaks [H_A, W] = 0 unless the rotation axis is z; "
            "trajectories at rotated geometries are then not unitarily related"
        )
    w = rotation_operator(u, angle)
    wd = w.conj().T
    geom_p = rotated_geometry(geom, u, angle)
    gen_r = Generator.full(params, coupling_from_tensor(geom))
    gen_p = Generator.full(params, coupling_from_tensor(geom_p))
    times = _output_grid(t_end, output_dt)
    rho0 = np.asarray(rho0, dtype=complex)
    states_r = integrate_rk4(gen_r, rho0, times, dt)
    states_p = integrate_rk4(gen_p, w @ rho0 @ wd, times, dt)
    mapped = w @ states_r @ wd
    return float(np.abs(states_p - mapped).max())

