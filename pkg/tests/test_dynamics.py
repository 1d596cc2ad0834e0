import math

import numpy as np
import pytest

from zeeman_pair.coupling import CouplingSet, Geometry, coupling_from_tensor
from zeeman_pair.dynamics import (
    SUBSPACE_S,
    SUBSPACE_V,
    ConvergenceError,
    Generator,
    Subspace,
    evolve,
    evolve_generator,
    generator,
    ground_state,
    integrate_rk4,
    pure_state,
    subspace_population,
    verify_evolution_equivalence,
)
from zeeman_pair.operators import DIM, SystemParams, index, ket
from zeeman_pair.spectra import antisymmetric_state, symmetric_state

from .helpers import random_hermitian

WEAK_DRIVE = SystemParams(delta=0.0, omega_L=2.0, detuning=0.58, laser_on=True)


class TestSubspace:
    def test_validation(self):
        with pytest.raises(ValueError):
            Subspace("x", [0, 0])
        with pytest.raises(ValueError):
            Subspace("x", [16])

    def test_populations(self):
        assert subspace_population(ground_state(), SUBSPACE_S) == 1.0
        rho = pure_state(ket(1, 4))
        assert subspace_population(rho, SUBSPACE_S) == 0.0
        assert subspace_population(rho, SUBSPACE_V) == 1.0
        mixed = np.eye(DIM) / DIM
        assert subspace_population(mixed, SUBSPACE_S) == pytest.approx(4 / 16)

    def test_named_indices(self):
        assert sorted(SUBSPACE_S.indices) == sorted([index(4, 4), index(3, 3), index(3, 4), index(4, 3)])
        assert len(SUBSPACE_V.indices) == 5


class TestGenerator:
    def test_ground_stationary_without_laser(self, generic_couplings):
        out = generator(ground_state(), SystemParams(), generic_couplings)
        assert not np.any(out)

    def test_first_order_drive(self, generic_couplings):
        out = generator(ground_state(), WEAK_DRIVE, generic_couplings)
        g = index(4, 4)
        nonzero = {(i, j) for i, j in zip(*np.nonzero(np.abs(out) > 1e-15))}
        expected = {(g, index(3, 4)), (index(3, 4), g), (g, index(4, 3)), (index(4, 3), g)}
        assert nonzero == expected
        for i, j in expected:
            assert abs(out[i, j]) == pytest.approx(2.0)

    def test_trace_free_and_hermitian(self, generic_couplings, rng):
        gen = Generator.full(WEAK_DRIVE, generic_couplings)
        for _ in range(100):
            out = gen(random_hermitian(rng))
            assert abs(np.trace(out)) < 1e-12
            assert np.abs(out - out.conj().T).max() < 1e-12


class TestIntegrator:
    def test_fourth_order(self):
        # scalar test problem with a known solution; halving dt cuts the error ~16x
        times = np.linspace(0.0, 1.0, 11)
        errs = []
        for dt in (0.02, 0.01):
            out = integrate_rk4(lambda x: -2.0 * x, np.array([[1.0]]), times, dt)
            errs.append(np.abs(out[:, 0, 0].real - np.exp(-2 * times)).max())
        assert errs[1] < 1e-8
        assert 14.0 < errs[0] / errs[1] < 18.0

    def test_constant_trajectory(self, generic_geometry):
        traj = evolve(ground_state(), SystemParams(), generic_geometry, 1.0, 0.1)
        assert np.abs(traj.states - ground_state()).max() == 0.0
        assert traj.observables["P_S"].min() == 1.0

    def test_grid_validation(self, generic_geometry):
        with pytest.raises(ValueError):
            evolve(ground_state(), SystemParams(), generic_geometry, 1.0, 0.3)
        with pytest.raises(ValueError):
            evolve(ground_state(), SystemParams(), generic_geometry, -1.0, 0.1)
        with pytest.raises(ValueError):
            evolve(ground_state(), SystemParams(), generic_geometry, 1.0, 2.0)

    def test_convergence_failure_reports_time(self, generic_couplings):
        gen = Generator.full(SystemParams(omega_L=50.0, laser_on=True), generic_couplings)
        with pytest.raises(ConvergenceError) as info:
            evolve_generator(gen, ground_state(), 1.0, 0.5, dt=0.5, tol=1e-12, max_halvings=1)
        assert info.value.time > 0
        assert info.value.deviation > 1e-12

    def test_halving_records_diagnostics(self, generic_geometry):
        traj = evolve(ground_state(), WEAK_DRIVE, generic_geometry, 1.0, 0.1)
        assert traj.step_error < 1e-6
        assert traj.trace_error < 1e-10
        assert traj.min_eigenvalue > -1e-10
        assert traj.hermiticity_error() < 1e-12


def test_symmetric_state_decay_rate():
    g = Geometry(0.1, 0.0, 0.0)
    gamma22 = coupling_from_tensor(g).gamma[1, 1].real
    s2 = symmetric_state(2)
    traj = evolve(pure_state(s2), SystemParams(), g, 1.0, 0.05)
    pop = np.real(np.einsum("i,tij,j->t", s2.conj(), traj.states, s2))
    slope = np.polyfit(traj.times, np.log(pop), 1)[0]
    assert -slope == pytest.approx(2.0 * (1.0 + gamma22), rel=1e-6)


def test_antisymmetric_state_decay_rate():
    g = Geometry(0.1, 0.0, 0.0)
    gamma22 = coupling_from_tensor(g).gamma[1, 1].real
    a2 = antisymmetric_state(2)
    traj = evolve(pure_state(a2), SystemParams(), g, 2.0, 0.1)
    pop = np.real(np.einsum("i,tij,j->t", a2.conj(), traj.states, a2))
    slope = np.polyfit(traj.times, np.log(pop), 1)[0]
    assert -slope == pytest.approx(2.0 * (1.0 - gamma22), rel=1e-5)


def test_independent_atoms_without_couplings():
    # with no dipole-dipole coupling, |3,4> decays at the single-atom rate 2
    traj = evolve(pure_state(ket(3, 4)), SystemParams(), Geometry(1.0, 0.0, 0.0), 1.0, 0.1,
                  couplings=CouplingSet.zero())
    pop = traj.states[:, index(3, 4), index(3, 4)].real
    np.testing.assert_allclose(pop, np.exp(-2.0 * traj.times), rtol=1e-9)


class TestEquivalence:
    def test_zero_angle(self):
        dev = verify_evolution_equivalence(Geometry(0.2, 0.4, 0.1), [1, 0, 0], 0.0, SystemParams(),
                                           pure_state(symmetric_state(3)), 1.0)
        assert dev < 1e-14

    def test_z_axis_with_splitting(self):
        dev = verify_evolution_equivalence(Geometry(0.2, 0.4, 0.1), [0, 0, 1], 1.2, SystemParams(delta=2.0),
                                           pure_state(symmetric_state(3)), 1.0)
        assert dev < 1e-8

    def test_rejects_splitting_off_axis(self):
        with pytest.raises(ValueError, match="H_A, W"):
            verify_evolution_equivalence(Geometry(0.2, 0.4, 0.1), [1, 0, 0], 1.2, SystemParams(delta=2.0),
                                         ground_state(), 1.0)

    def test_rejects_laser(self):
        with pytest.raises(ValueError):
            verify_evolution_equivalence(Geometry(0.2, 0.4, 0.1), [0, 0, 1], 1.2, WEAK_DRIVE, ground_state(), 1.0)

    def test_random_rotation_short(self, rng):
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        dev = verify_evolution_equivalence(Geometry(0.2, 1.1, 2.0), u, 2.3, SystemParams(),
                                           pure_state(symmetric_state(1)), 1.0)
        assert dev < 1e-8


def test_generic_geometry_leaks_out_of_s_and_v():
    traj = evolve(ground_state(), WEAK_DRIVE, Geometry(0.3, 1.0, 0.3), 5.0, 0.1)
    assert traj.observables["P_rest"].max() > 1e-3


def test_equatorial_closure_short_run():
    traj = evolve(ground_state(), WEAK_DRIVE, Geometry(0.3, math.pi / 2, math.pi / 2), 5.0, 0.1)
    closure = np.abs(traj.observables["P_S"] + traj.observables["P_V"] - 1.0).max()
    assert closure < 1e-8
    assert traj.observables["P_S"].min() < 0.999
